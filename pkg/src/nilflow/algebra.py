"""Nilpotent Lie algebras: structure constants, metrics, derived data.

A descriptor stores the bracket table relative to a fixed basis e1..en
(1-based in files and the CLI) together with an optional inner product.
The Jacobi identity is checked at construction; nilpotency is checked by
``analyze``, which also produces the descending central series, the
center, and the metric complement used by the 2- and 3-step splittings.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .linalg import frac


class JacobiViolation(ValueError):
    """The bracket table fails the Jacobi identity on some basis triple."""

    def __init__(self, triple, defect):
        self.triple = triple
        self.defect = defect
        super().__init__(
            "Jacobi identity fails on basis triple (e%d, e%d, e%d): defect %s"
            % (triple[0], triple[1], triple[2], defect))


class NotNilpotent(ValueError):
    """The descending central series does not terminate."""


class StepMismatch(ValueError):
    """An operation needs a different nilpotency step than the algebra has."""


class NotCentral(ValueError):
    """A vector expected to lie in the center does not."""


@dataclass
class AlgebraAnalysis:
    """Derived structural data; bases are lists of coefficient vectors."""

    step: int
    center_basis: list
    commutator_chain: list  # [basis(C^2), basis(C^3), ...], last one nonzero
    v_complement: list      # metric complement of the splitting subspace


class LieAlgebraDescriptor:
    """A finite-dimensional Lie algebra given by structure constants.

    ``structure`` maps (i, j) with 1 <= i < j <= dim to {k: coefficient};
    storing both (i, j) and (j, i) is rejected.  ``metric`` defaults to
    the identity and must be symmetric with positive leading principal
    minors.
    """

    def __init__(self, dim, structure, metric=None, name="", params=None):
        self.dim = int(dim)
        if self.dim <= 0:
            raise ValueError("dim must be positive")
        self.name = name
        self.params = dict(params) if params else {}
        self.structure = self._validate_structure(structure)
        self.metric = self._validate_metric(metric)
        self._check_jacobi()
        self._analysis = None
        self._gram_inv = None

    # -- validation -----------------------------------------------------

    def _validate_structure(self, structure):
        n = self.dim
        seen = set()
        clean = {}
        for key, val in structure.items():
            i, j = int(key[0]), int(key[1])
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError("bracket index out of range: (%d, %d)" % (i, j))
            if i >= j:
                raise ValueError(
                    "store brackets with i < j only, got (%d, %d)" % (i, j))
            if (j, i) in seen:
                raise ValueError(
                    "both orders (%d, %d) and (%d, %d) present" % (i, j, j, i))
            seen.add((i, j))
            entry = {}
            for k, c in val.items():
                k = int(k)
                if not (1 <= k <= n):
                    raise ValueError("bracket target out of range: %d" % k)
                c = frac(c)
                if c != 0:
                    entry[k] = c
            if entry:
                clean[(i, j)] = entry
        return clean

    def _validate_metric(self, metric):
        if metric is None:
            return None
        n = self.dim
        g = [[frac(x) for x in row] for row in metric]
        if len(g) != n or any(len(row) != n for row in g):
            raise ValueError("metric must be %d x %d" % (n, n))
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError("metric must be symmetric")
        for k in range(1, n + 1):
            minor = [row[:k] for row in g[:k]]
            if linalg.det(minor) <= 0:
                raise ValueError(
                    "metric is not positive definite (leading minor %d)" % k)
        return g

    def _check_jacobi(self):
        n = self.dim
        basis = linalg.identity(n)
        for i in range(n):
            for j in range(i + 1, n):
                bij = self.bracket(basis[i], basis[j])
                for k in range(j + 1, n):
                    term1 = self.bracket(bij, basis[k])
                    term2 = self.bracket(self.bracket(basis[j], basis[k]), basis[i])
                    term3 = self.bracket(self.bracket(basis[k], basis[i]), basis[j])
                    defect = linalg.vec_add(term1, linalg.vec_add(term2, term3))
                    if not linalg.is_zero_vec(defect):
                        raise JacobiViolation((i + 1, j + 1, k + 1), defect)

    # -- basic operations ----------------------------------------------

    def bracket(self, u, v):
        """[u, v] for coefficient vectors (exact if inputs are exact)."""
        out = [0] * self.dim
        for (i, j), targets in self.structure.items():
            c = u[i - 1] * v[j - 1] - u[j - 1] * v[i - 1]
            if c:
                for k, coeff in targets.items():
                    out[k - 1] = out[k - 1] + coeff * c
        return [x if x else Fraction(0) for x in out]

    def ad(self, x):
        """Matrix of ad(x) = [x, .] in the fixed basis."""
        n = self.dim
        cols = [self.bracket(x, col) for col in linalg.identity(n)]
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def gram(self):
        return self.metric if self.metric is not None else linalg.identity(self.dim)

    def gram_inverse(self):
        if self._gram_inv is None:
            if self.metric is None:
                self._gram_inv = linalg.identity(self.dim)
            else:
                self._gram_inv = linalg.inverse(self.metric)
        return self._gram_inv

    def inner(self, u, v):
        return linalg.inner(u, v, self.metric)

    def ad_transpose(self, x):
        """Matrix M with <M a, b> = <a, [x, b]> for all a, b."""
        at = linalg.transpose(self.ad(x))
        if self.metric is None:
            return at
        return linalg.mat_mul(self.gram_inverse(), linalg.mat_mul(at, self.metric))

    # -- structural analysis -------------------------------------------

    def analyze(self):
        """Step, center, descending central series, and the splitting."""
        if self._analysis is not None:
            return self._analysis
        n = self.dim
        basis = linalg.identity(n)

        # center: z with [z, e_i] = 0 for all i
        rows = []
        for i in range(n):
            for k in range(n):
                rows.append([self.bracket(basis[j], basis[i])[k] for j in range(n)])
        center = linalg.nullspace(rows, ncols=n)

        # descending central series C^1 = g, C^{m+1} = [g, C^m]
        chain = []
        current = basis
        for _ in range(n + 1):
            produced = []
            for b in basis:
                for c in current:
                    v = self.bracket(b, c)
                    if not linalg.is_zero_vec(v):
                        produced.append(v)
            nxt = linalg.row_space_basis(produced)
            if not nxt:
                break
            if chain and nxt == chain[-1]:
                raise NotNilpotent(
                    "descending central series stabilizes at dimension %d" % len(nxt))
            chain.append(nxt)
            current = nxt
        else:
            raise NotNilpotent("descending central series does not terminate")
        step = len(chain) + 1

        if step == 1:
            split = center
        elif step == 2:
            split = center
        elif step == 3:
            split = chain[0]
        else:
            split = None

        if split is not None:
            gram = self.gram()
            rows = [linalg.mat_vec(gram, s) for s in split]
            comp = linalg.nullspace(rows, ncols=n) if rows else basis
            comp = linalg.gram_schmidt(comp, self.metric)
        else:
            comp = None

        self._analysis = AlgebraAnalysis(
            step=step, center_basis=center, commutator_chain=chain,
            v_complement=comp)
        return self._analysis

    def is_central(self, z):
        for col in linalg.identity(self.dim):
            if not linalg.is_zero_vec(self.bracket(z, col)):
                return False
        return True

    def j_map(self, z):
        """Matrix of j(z) on the complement basis of a 2-step algebra.

        j(z) is defined by <j(z) v, w> = <z, [v, w]>; returns (J, v_basis).
        """
        analysis = self.analyze()
        if analysis.step != 2:
            raise StepMismatch("j-map needs a 2-step algebra, this one has step %d"
                               % analysis.step)
        if not self.is_central(z):
            raise NotCentral("vector %s is not central" % (z,))
        vb = analysis.v_complement
        m = len(vb)
        gv = [[self.inner(a, b) for b in vb] for a in vb]
        kmat = [[self.inner(z, self.bracket(vb[b], vb[a])) for b in range(m)]
                for a in range(m)]
        return linalg.mat_mul(linalg.inverse(gv), kmat), vb

    def __repr__(self):
        tag = self.name or "algebra"
        return "<LieAlgebraDescriptor %s dim=%d>" % (tag, self.dim)


# -- definition files ---------------------------------------------------

def from_definition(data):
    """Build a descriptor from a definition dict (see to_definition)."""
    if not isinstance(data, dict):
        raise ValueError("definition must be a mapping")
    for key in ("dim", "brackets"):
        if key not in data:
            raise ValueError("definition is missing %r" % key)
    structure = {}
    for item in data["brackets"]:
        if len(item) != 4:
            raise ValueError("bracket entries are [i, j, k, coeff], got %r" % (item,))
        i, j, k, c = item
        structure.setdefault((int(i), int(j)), {})
        key = int(k)
        entry = structure[(int(i), int(j))]
        entry[key] = entry.get(key, Fraction(0)) + frac(c)
    params = {key: frac(val) for key, val in data.get("params", {}).items()}
    return LieAlgebraDescriptor(
        dim=data["dim"], structure=structure, metric=data.get("metric"),
        name=data.get("name", ""), params=params)


def to_definition(alg):
    """Serializable dict; rationals become 'p/q' strings."""
    brackets = []
    for (i, j) in sorted(alg.structure):
        for k in sorted(alg.structure[(i, j)]):
            brackets.append([i, j, k, str(alg.structure[(i, j)][k])])
    out = {"name": alg.name, "dim": alg.dim, "brackets": brackets}
    if alg.metric is not None:
        out["metric"] = [[str(x) for x in row] for row in alg.metric]
    if alg.params:
        out["params"] = {k: str(v) for k, v in alg.params.items()}
    return out


def load_algebra(path):
    with open(path) as fh:
        return from_definition(json.load(fh))


def dump_algebra(alg, path):
    with open(path, "w") as fh:
        json.dump(to_definition(alg), fh, indent=2, sort_keys=True)
        fh.write("\n")

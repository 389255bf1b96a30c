"""Exact verification toolkit for first integrals of geodesic flows on
nilpotent Lie groups with left-invariant metrics."""

from .algebra import (LieAlgebraDescriptor, NotNilpotent, StepMismatch,
                      dump_algebra, from_definition, load_algebra,
                      to_definition)
from .integrals import (Butler, DerivationIntegral, Energy, FirstIntegral,
                        Linear, NotADerivation, Quadratic, QuotientInduced,
                        RightInvariant, parse_integral)
from .poisson import PoissonEngine, verify_iso_homomorphism
from .solvers import (independence_scan, killing2_structured,
                      killing2_tensors, skew_derivations)
from .geodesic import GeodesicField, conservation_report, integrate
from .quotients import Lattice, invariance_check, left_translate
from . import catalog

__version__ = "0.1.0"

__all__ = [
    "LieAlgebraDescriptor", "NotNilpotent", "StepMismatch",
    "from_definition", "to_definition", "load_algebra", "dump_algebra",
    "FirstIntegral", "Energy", "Linear", "Quadratic", "RightInvariant",
    "DerivationIntegral", "Butler", "QuotientInduced", "NotADerivation",
    "parse_integral", "PoissonEngine", "verify_iso_homomorphism",
    "skew_derivations", "killing2_tensors", "killing2_structured",
    "independence_scan", "GeodesicField", "integrate",
    "conservation_report", "Lattice", "left_translate", "invariance_check",
    "catalog",
]

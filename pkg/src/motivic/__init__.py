"""Symbolic calculator for classes in the Grothendieck ring of varieties."""

from .dsl import parse_expr, parse_script
from .equivalence import (
    EquivalenceReport, birational_difference, l_equivalent, rationality_witness,
    stable_birational_class,
)
from .normalize import NormalizeOutcome, class_of, normalize
from .oracle import (
    CountingProblem, CountSample, PrimeField, count_expression, count_points,
    enumerate_projective, fit_polynomial,
)
from .ring import L, AtomMonomial, LPolynomial, MotivicClass, parse_class
from .varieties import PointConfiguration, blowup_p3_points, to_source, validate

__version__ = "0.1.0"

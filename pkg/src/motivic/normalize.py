"""Compute the class of a construction in Z[L][atoms].

Each node is rewritten bottom-up by one rule:

    R1  empty               -> 0
    R2  point               -> 1
    R3  A(n)                -> L^n
    R4  P(n)                -> 1 + L + ... + L^n
    R5  X * Y               -> [X][Y]
    R6  X1 + ... + Xk       -> [X1] + ... + [Xk]
    R7  X - Z               -> [X] - [Z]
    R8  fib(S; F)           -> [S][F]
    R9  blowup(Y; Z, c)     -> [Y] - [Z] + [Z][P^(c-1)]
    R10 k*X                 -> k[X]
    R11 atom(name)          -> the formal generator ``name``

R9 is the blow-up relation [X] + [Z] = [Y] + [E] with the exceptional
divisor a P^(c-1)-bundle over the center.  The target ring is commutative
and every rule is compositional, so there is no rewriting strategy to
choose.
"""

from dataclasses import dataclass
from typing import Optional

from .errors import NormalizationError
from .ring import LPolynomial, MotivicClass
from .varieties import (
    Affine, Atom, BlowUp, Complement, Diagnostic, Disjoint, Empty, Fibration,
    Point, Product, Projective, Scale, VarietyExpr, validate,
)


@dataclass(frozen=True)
class NormalizeOutcome:
    """Exactly one of ``cls`` and ``failure`` is set."""

    cls: Optional[MotivicClass] = None
    failure: Optional[Diagnostic] = None

    def __post_init__(self):
        if (self.cls is None) == (self.failure is None):
            raise ValueError("NormalizeOutcome needs exactly one of cls and failure")

    @property
    def ok(self) -> bool:
        return self.failure is None


def normalize(e: VarietyExpr) -> NormalizeOutcome:
    try:
        return NormalizeOutcome(cls=class_of(e))
    except NormalizationError as exc:
        return NormalizeOutcome(failure=exc.diagnostic)


def class_of(e: VarietyExpr) -> MotivicClass:
    """Like :func:`normalize` but raises :class:`NormalizationError` on failure."""
    problems = validate(e)
    if problems:
        raise NormalizationError(problems[0])
    return _rewrite(e, "")


def _rewrite(e, path) -> MotivicClass:
    def sub(step, child):
        return _rewrite(child, f"{path}.{step}" if path else step)

    if isinstance(e, Empty):
        return MotivicClass.zero()
    if isinstance(e, Point):
        return MotivicClass.one()
    if isinstance(e, Affine):
        return MotivicClass.lefschetz(e.n)
    if isinstance(e, Projective):
        return MotivicClass.projective(e.n)
    if isinstance(e, Product):
        return sub("left", e.left) * sub("right", e.right)
    if isinstance(e, Disjoint):
        total = MotivicClass.zero()
        for i, part in enumerate(e.parts):
            total = total + sub(f"parts[{i}]", part)
        return total
    if isinstance(e, Complement):
        return sub("total", e.total) - sub("closed", e.closed)
    if isinstance(e, Fibration):
        return sub("base", e.base) * sub("fiber", e.fiber)
    if isinstance(e, BlowUp):
        ambient = sub("ambient", e.ambient)
        center = sub("center", e.center)
        return ambient - center + center * LPolynomial.projective(e.codim - 1)
    if isinstance(e, Scale):
        return sub("inner", e.inner) * e.k
    if isinstance(e, Atom):
        return MotivicClass.atom(e.name)
    raise NormalizationError(Diagnostic(f"no rule for {type(e).__name__}", path or "<root>"))

"""L-equivalence, stable-birational invariants and rationality witnesses.

Everything here is decided inside Z[L][atoms].  That ring is a domain, so
``(a - b) * L^n == 0`` holds exactly when ``a == b``; L-torsion that exists
in the full Grothendieck ring cannot be seen by these checks.
"""

from dataclasses import dataclass
from typing import List, Optional

from .ring import MotivicClass

MODEL_NOTE = (
    "decided in Z[L][atoms], where multiplication by L is injective: "
    "vanishing after multiplying by L^n is the same as vanishing; "
    "L-torsion of the full Grothendieck ring is not representable"
)


@dataclass(frozen=True)
class EquivalenceReport:
    verdict: bool
    difference: MotivicClass
    note: Optional[str] = None
    witness: Optional[MotivicClass] = None

    def __post_init__(self):
        if self.verdict != self.difference.is_zero():
            raise ValueError("verdict must be true exactly when the difference is zero")

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "difference": self.difference.to_text(), "note": self.note}
        if self.witness is not None:
            out["witness"] = self.witness.to_text()
        return out


def _sign_normalized(c: MotivicClass) -> MotivicClass:
    # Leading term in canonical print order made positive.
    if c.terms and c.terms[0][1].terms[0][1] < 0:
        return -c
    return c


def l_equivalent(a: MotivicClass, b: MotivicClass) -> EquivalenceReport:
    """Compare two classes.

    The reported difference is ``a - b`` up to sign, normalized so that its
    leading term is positive; it is therefore symmetric in ``a`` and ``b``.
    """
    diff = _sign_normalized(a - b)
    return EquivalenceReport(verdict=diff.is_zero(), difference=diff, note=MODEL_NOTE)


def stable_birational_class(a: MotivicClass) -> MotivicClass:
    return a.mod_L()


def rationality_witness(a: MotivicClass, d: int) -> Optional[MotivicClass]:
    """M with ``a == [P^d] + L*M``, or None if no such M exists.

    Existence is only a necessary condition for rationality in dimension d.
    """
    if d < 0:
        raise ValueError("dimension must be non-negative")
    return (a - MotivicClass.projective(d)).div_L()


def birational_difference(a: MotivicClass, b: MotivicClass) -> Optional[MotivicClass]:
    """M with ``a - b == L*M``; None certifies a and b are not classes of
    smooth birational varieties."""
    return (a - b).div_L()


def projective_decomposition(m: MotivicClass, max_dim: int) -> Optional[List[int]]:
    """Non-negative counts c_i with m = sum c_i [P^i], i <= max_dim, if any.

    The P^i have leading coefficient 1, so the decomposition is unique when
    it exists: c_j = a_j - a_(j+1) for the coefficients a_j of m.
    """
    if not m.is_atom_free() or max_dim < 0:
        return None
    poly = m.to_lpolynomial()
    if poly.degree > max_dim:
        return None
    counts = [poly.coeff(j) - poly.coeff(j + 1) for j in range(max_dim + 1)]
    return counts if all(c >= 0 for c in counts) else None


def describe_witness(m: MotivicClass, d: int) -> str:
    counts = projective_decomposition(m, d - 2)
    if counts is None:
        return f"no presentation as a non-negative combination of [P^i], i <= {d - 2}, found"
    if not any(counts):
        return "witness is zero"
    pieces = [f"{c}*[P^{i}]" if c != 1 else f"[P^{i}]" for i, c in enumerate(counts) if c]
    return f"witness = {' + '.join(pieces)}, a combination of classes of dimension <= {d - 2}"

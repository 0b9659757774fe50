"""Brute-force point counting over small prime fields.

This module is the independent check on the normalizer and never calls
it.  Every count is produced by listing points: projective spaces by
normalized representatives, products by tuples, complements by removing
the image of the closed part, and point blow-ups by replacing each center
with a copy of P^(n-1).

Counts at enough primes pin the counting polynomial down by exact
Lagrange interpolation (:func:`fit_polynomial`).
"""

import itertools
import json
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .dsl import is_small_prime, parse_polynomial
from .errors import BudgetExceededError, NonHomogeneousError, NonIntegralFitError, NotCountableError, TooFewPointsError
from .ring import LPolynomial
from .varieties import (
    Affine, Atom, BlowUp, Complement, Disjoint, Empty, Fibration, Point,
    Product, Projective, Scale, VarietyExpr, is_finite, to_source,
)

DEFAULT_BUDGET = 10 ** 8
BLOCK_LETTERS = "xyzwuv"


def budget_from_env(default: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get("MOTIVIC_BUDGET")
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"MOTIVIC_BUDGET must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"MOTIVIC_BUDGET must be a positive integer, got {raw!r}")
    return value


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_small_prime(self.p):
            raise ValueError(f"field size must be a prime between 2 and 97, got {self.p!r}")

    @property
    def q(self) -> int:
        return self.p


@dataclass(frozen=True)
class CountSample:
    q: int
    count: int

    def to_json(self):
        return {"q": self.q, "count": self.count}


def _field(f) -> PrimeField:
    return f if isinstance(f, PrimeField) else PrimeField(f)


def enumerate_affine(n: int, field, budget: int = DEFAULT_BUDGET) -> List[Tuple[int, ...]]:
    p = _field(field).p
    if p ** n > budget:
        raise BudgetExceededError(f"A^{n}(F_{p}) has {p ** n} points, over the budget of {budget}")
    return list(itertools.product(range(p), repeat=n))


def enumerate_projective(n: int, field, budget: int = DEFAULT_BUDGET) -> List[Tuple[int, ...]]:
    """One representative per point of P^n(F_p), first nonzero coordinate 1.

    Representatives come out in lexicographic order.
    """
    p = _field(field).p
    if n < 0:
        raise ValueError("projective dimension must be non-negative")
    if p ** (n + 1) > budget:
        raise BudgetExceededError(
            f"P^{n}(F_{p}) needs {p ** (n + 1)} candidate tuples, over the budget of {budget}")
    points = []
    for lead in range(n, -1, -1):
        head = (0,) * lead + (1,)
        for tail in itertools.product(range(p), repeat=n - lead):
            points.append(head + tail)
    return points


# Counting problems given by equations.

@dataclass(frozen=True)
class Ambient:
    """Affine n-space, projective n-space, or a product of projective spaces.

    Coordinates are named by block: ``x0..xn`` for the first block, then
    ``y``, ``z``, ``w``, ``u``, ``v``.  An affine or projective ambient is a
    single ``x`` block.
    """

    kind: str
    dims: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        if self.kind not in ("affine", "projective", "multiprojective"):
            raise ValueError(f"unknown ambient kind {self.kind!r}")
        if not self.dims or any(not isinstance(d, int) or d < 0 for d in self.dims):
            raise ValueError(f"ambient dimensions must be non-negative integers, got {self.dims!r}")
        if self.kind != "multiprojective" and len(self.dims) != 1:
            raise ValueError(f"{self.kind} ambient takes a single dimension")
        if len(self.dims) > len(BLOCK_LETTERS):
            raise ValueError(f"at most {len(BLOCK_LETTERS)} projective factors are supported")

    @classmethod
    def affine(cls, n):
        return cls("affine", (n,))

    @classmethod
    def projective(cls, n):
        return cls("projective", (n,))

    @classmethod
    def multiprojective(cls, dims):
        return cls("multiprojective", tuple(dims))

    @property
    def projective_blocks(self) -> bool:
        return self.kind != "affine"

    def blocks(self) -> List[List[str]]:
        if self.kind == "affine":
            return [[f"x{i}" for i in range(self.dims[0])]]
        return [[f"{BLOCK_LETTERS[b]}{i}" for i in range(n + 1)] for b, n in enumerate(self.dims)]

    @property
    def variables(self) -> List[str]:
        return [v for block in self.blocks() for v in block]

    def to_json(self):
        if self.kind == "multiprojective":
            return {"kind": self.kind, "dims": list(self.dims)}
        return {"kind": self.kind, "n": self.dims[0]}

    @classmethod
    def from_json(cls, data):
        kind = data.get("kind")
        if kind == "multiprojective":
            return cls.multiprojective(data["dims"])
        return cls(kind, (data["n"],))


@dataclass(frozen=True)
class CountingProblem:
    """A polynomial system over F_p in an affine or (multi)projective space.

    Equations are text in the DSL polynomial syntax; they are parsed and
    checked for homogeneity in every projective block on construction.
    """

    ambient: Ambient
    equations: Tuple[str, ...]
    field: PrimeField
    _compiled: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))
        object.__setattr__(self, "field", _field(self.field))
        variables = self.ambient.variables
        compiled = []
        for text in self.equations:
            poly = parse_polynomial(text, variables)
            if self.ambient.projective_blocks:
                _check_homogeneous(text, poly, self.ambient)
            compiled.append(tuple((c, mono) for mono, c in sorted(poly.items())))
        object.__setattr__(self, "_compiled", tuple(compiled))

    def with_equations(self, extra: Iterable[str]) -> "CountingProblem":
        return CountingProblem(self.ambient, self.equations + tuple(extra), self.field)

    def to_json(self):
        return {"ambient": self.ambient.to_json(), "equations": list(self.equations), "p": self.field.p}

    @classmethod
    def from_json(cls, data) -> "CountingProblem":
        return cls(Ambient.from_json(data["ambient"]), tuple(data.get("equations", ())), PrimeField(data["p"]))

    @classmethod
    def load(cls, path) -> "CountingProblem":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _check_homogeneous(text, poly, ambient):
    start = 0
    for b, block in enumerate(ambient.blocks()):
        stop = start + len(block)
        degrees = {sum(mono[start:stop]) for mono in poly}
        if len(degrees) > 1:
            raise NonHomogeneousError(
                f"equation {text!r} is not homogeneous in the variables {', '.join(block)} "
                f"(degrees {sorted(degrees)})")
        start = stop


def one_point_blowup_problem(p) -> CountingProblem:
    """Blow-up of P^3 at [1:0:0:0] as a closed subvariety of P^3 x P^2.

    The graph closure of the projection away from the point is cut out by
    the 2x2 minors of the matrix with rows (x1, x2, x3) and (y0, y1, y2).
    """
    return CountingProblem(
        Ambient.multiprojective((3, 2)),
        ("x1*y1 - x2*y0", "x1*y2 - x3*y0", "x2*y2 - x3*y1"),
        PrimeField(p),
    )


def count_points(problem: CountingProblem, budget: int = DEFAULT_BUDGET) -> CountSample:
    p = problem.field.p
    ambient = problem.ambient
    if ambient.kind == "affine":
        factors = [enumerate_affine(ambient.dims[0], p, budget)]
    else:
        factors = [enumerate_projective(n, p, budget) for n in ambient.dims]
    total = 1
    for f in factors:
        total *= len(f)
    if total > budget:
        raise BudgetExceededError(f"ambient space has {total} points over F_{p}, over the budget of {budget}")

    equations = problem._compiled
    count = 0
    for blocks in itertools.product(*factors):
        coords = [c for block in blocks for c in block]
        for eq in equations:
            value = 0
            for c, mono in eq:
                term = c
                for x, e in zip(coords, mono):
                    if e:
                        term *= x ** e
                value += term
            if value % p:
                break
        else:
            count += 1
    return CountSample(p, count)


# Counting constructions directly.

class _ExpressionCounter:
    def __init__(self, field: PrimeField, budget: int, configuration: Optional[int]):
        self.p = field.p
        self.budget = budget
        self.used = 0
        self.rng = None if configuration is None else random.Random(configuration)
        self.memo: Dict[VarietyExpr, list] = {}

    def charge(self, n):
        self.used += n
        if self.used > self.budget:
            raise BudgetExceededError(f"enumeration exceeded the budget of {self.budget} points")

    def choose(self, candidates: Sequence, k: int, what: str) -> list:
        if k > len(candidates):
            raise TooFewPointsError(
                f"{what} needs {k} distinct rational points but only {len(candidates)} exist over F_{self.p}")
        if self.rng is None:
            return list(candidates[:k])
        return self.rng.sample(list(candidates), k)

    def points(self, e: VarietyExpr) -> list:
        if e not in self.memo:
            pts = self._points(e)
            self.charge(len(pts))
            self.memo[e] = pts
        return self.memo[e]

    def _points(self, e):
        if isinstance(e, Empty):
            return []
        if isinstance(e, Point):
            return [()]
        if isinstance(e, Affine):
            return enumerate_affine(e.n, self.p, self.budget - self.used)
        if isinstance(e, Projective):
            return enumerate_projective(e.n, self.p, self.budget - self.used)
        if isinstance(e, Product):
            left, right = self.points(e.left), self.points(e.right)
            if len(left) * len(right) > self.budget - self.used:
                raise BudgetExceededError(f"enumeration exceeded the budget of {self.budget} points")
            return [(a, b) for a in left for b in right]
        if isinstance(e, Disjoint):
            return [(i, x) for i, part in enumerate(e.parts) for x in self.points(part)]
        if isinstance(e, Scale):
            inner = self.points(e.inner)
            return [(i, x) for i in range(e.k) for x in inner]
        if isinstance(e, Complement):
            removed = set(self.embed(e.closed, e.total))
            return [x for x in self.points(e.total) if x not in removed]
        if isinstance(e, BlowUp):
            return self._blowup_points(e)
        if isinstance(e, Atom):
            raise NotCountableError(f"atom {e.name!r} has no points to count")
        if isinstance(e, Fibration):
            raise NotCountableError(f"abstract fibration {to_source(e)} cannot be enumerated")
        raise NotCountableError(f"cannot count {e!r}")

    def _blowup_points(self, e: BlowUp):
        if not isinstance(e.ambient, Projective) or e.ambient.n < 1:
            raise NotCountableError("only blow-ups of P(n), n >= 1, can be counted")
        if not is_finite(e.center):
            raise NotCountableError("only blow-ups along finitely many points can be counted")
        n = e.ambient.n
        if e.codim != n:
            raise NotCountableError(f"a point in P({n}) has codimension {n}, not {e.codim}")
        ambient = self.points(e.ambient)
        k = len(self.points(e.center))
        centers = self.choose(ambient, k, f"blowing up P({n}) at {k} points")
        fiber = enumerate_projective(n - 1, self.p, self.budget - self.used)
        chosen = set(centers)
        return ([("o", x) for x in ambient if x not in chosen]
                + [("e", c, f) for c in centers for f in fiber])

    def embed(self, z: VarietyExpr, x: VarietyExpr, avoid=frozenset()) -> list:
        """Labels of ``x`` forming a closed copy of ``z`` that misses ``avoid``."""
        if isinstance(z, Empty):
            return []
        if z == x and not avoid:
            return self.points(x)
        if is_finite(z):
            k = len(self.points(z))
            free = [pt for pt in self.points(x) if pt not in avoid]
            return self.choose(free, k, f"placing {to_source(z)} inside {to_source(x)}")
        for rule in (self._embed_structural, self._embed_pieces):
            try:
                image = rule(z, x, avoid)
            except NotCountableError:
                continue
            if image is not None and len(set(image)) == len(image) and not (set(image) & avoid):
                return image
        raise NotCountableError(
            f"cannot realize {to_source(z)} as a closed subvariety of {to_source(x)}")

    def _embed_structural(self, z, x, avoid):
        if isinstance(x, Projective) and isinstance(z, Projective) and z.n <= x.n:
            pad = (0,) * (x.n - z.n)
            return [pt + pad for pt in self.points(z)]
        if isinstance(x, Affine) and isinstance(z, Affine) and z.n <= x.n:
            pad = (0,) * (x.n - z.n)
            return [pt + pad for pt in self.points(z)]
        if isinstance(x, Product) and isinstance(z, Product):
            left = self.embed(z.left, x.left)
            right = self.embed(z.right, x.right)
            return [(a, b) for a in left for b in right]
        if isinstance(x, Disjoint) and isinstance(z, Disjoint) and len(z.parts) <= len(x.parts):
            return [(i, y) for i, (zp, xp) in enumerate(zip(z.parts, x.parts)) for y in self.embed(zp, xp)]
        if isinstance(x, Scale) and isinstance(z, Scale) and z.k <= x.k:
            inner = self.embed(z.inner, x.inner)
            return [(i, y) for i in range(z.k) for y in inner]
        if isinstance(x, Complement):
            image = self.embed(z, x.total, avoid)
            if set(image) & set(self.embed(x.closed, x.total)):
                raise NotCountableError("subvariety meets the removed closed set")
            return image
        if isinstance(x, Disjoint):
            for i, part in enumerate(x.parts):
                try:
                    return [(i, y) for y in self.embed(z, part)]
                except NotCountableError:
                    continue
        if isinstance(x, Scale):
            return [(0, y) for y in self.embed(z, x.inner)]
        return None

    def _embed_pieces(self, z, x, avoid):
        if isinstance(z, Disjoint):
            pieces = z.parts
        elif isinstance(z, Scale):
            pieces = (z.inner,) * z.k
        else:
            return None
        used = set(avoid)
        image = []
        for piece in pieces:
            part = self.embed(piece, x, frozenset(used))
            if used & set(part):
                raise NotCountableError("pieces of the subvariety overlap")
            used.update(part)
            image.extend(part)
        return image


def expression_points(e: VarietyExpr, field, budget: int = DEFAULT_BUDGET,
                      configuration: Optional[int] = None) -> list:
    """The enumerated point labels behind :func:`count_expression`."""
    return _ExpressionCounter(_field(field), budget, configuration).points(e)


def count_expression(e: VarietyExpr, field, budget: int = DEFAULT_BUDGET,
                     configuration: Optional[int] = None) -> CountSample:
    """Count the F_p-points of a construction by enumeration.

    Finite centers and finite closed parts are placed at the first points
    of the ambient in enumeration order; pass an integer ``configuration``
    to place them at a seeded random choice of distinct points instead.
    """
    f = _field(field)
    return CountSample(f.p, len(expression_points(e, f, budget, configuration)))


def fit_polynomial(samples: Sequence[CountSample]) -> LPolynomial:
    """Exact Lagrange interpolation through the samples.

    The interpolant has degree below ``len(samples)``.  It must have integer
    coefficients and reproduce every sample, or NonIntegralFitError is raised.
    """
    pts = [(s.q, s.count) for s in samples]
    if len(pts) < 2:
        raise ValueError("fit_polynomial needs at least two samples")
    qs = [q for q, _ in pts]
    if len(set(qs)) != len(qs):
        raise ValueError(f"sample field sizes must be distinct, got {qs}")

    n = len(pts)
    coeffs = [Fraction(0)] * n
    for i, (qi, yi) in enumerate(pts):
        # basis polynomial prod_{j != i} (L - qj) / (qi - qj), low degree first
        basis = [Fraction(1)]
        denom = 1
        for j, (qj, _) in enumerate(pts):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for d in range(len(basis) - 1):
                basis[d] -= qj * basis[d + 1]
            denom *= qi - qj
        for d, b in enumerate(basis):
            coeffs[d] += b * yi / denom

    if any(c.denominator != 1 for c in coeffs):
        raise NonIntegralFitError(
            "interpolated counts have non-integral coefficients "
            f"({', '.join(str(c) for c in coeffs)}): too few samples or not a polynomial count")
    poly = LPolynomial({d: int(c) for d, c in enumerate(coeffs)})
    for q, y in pts:
        if poly.evaluate(q) != y:
            raise NonIntegralFitError(f"fitted polynomial {poly} misses the sample ({q}, {y})")
    return poly

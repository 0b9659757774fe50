"""Expression trees for geometric constructions.

Nodes are frozen dataclasses, so structural equality and hashing come for
free and trees can be shared between threads.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from .ring import ATOM_NAME


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Point:
    pass


@dataclass(frozen=True)
class Affine:
    n: int


@dataclass(frozen=True)
class Projective:
    n: int


@dataclass(frozen=True)
class Product:
    left: "VarietyExpr"
    right: "VarietyExpr"


@dataclass(frozen=True)
class Disjoint:
    parts: Tuple["VarietyExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Complement:
    """The open complement ``total \\ closed``; closedness is taken on trust."""

    total: "VarietyExpr"
    closed: "VarietyExpr"


@dataclass(frozen=True)
class Fibration:
    """A Zariski locally trivial fibration over ``base`` with fiber ``fiber``."""

    base: "VarietyExpr"
    fiber: "VarietyExpr"


@dataclass(frozen=True)
class BlowUp:
    ambient: "VarietyExpr"
    center: "VarietyExpr"
    codim: int


@dataclass(frozen=True)
class Scale:
    """``k`` disjoint copies of ``inner`` (never a k-fold product)."""

    k: int
    inner: "VarietyExpr"


@dataclass(frozen=True)
class Atom:
    name: str
    dim: Optional[int] = None


VarietyExpr = Union[
    Empty, Point, Affine, Projective, Product, Disjoint, Complement, Fibration, BlowUp, Scale, Atom
]

NODE_TYPES = (Empty, Point, Affine, Projective, Product, Disjoint, Complement, Fibration, BlowUp, Scale, Atom)


@dataclass(frozen=True)
class PointConfiguration:
    """An ordered tuple of distinct points; only ``count`` reaches the class."""

    count: int
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))


@dataclass(frozen=True)
class Diagnostic:
    message: str
    path: str = ""
    rule: Optional[str] = None
    severity: str = "error"

    def __str__(self):
        where = f" at {self.path}" if self.path else ""
        rule = f" [{self.rule}]" if self.rule else ""
        return f"{self.severity}{where}{rule}: {self.message}"

    def to_json(self):
        return {"severity": self.severity, "message": self.message, "path": self.path, "rule": self.rule}


def children(e: VarietyExpr) -> List[Tuple[str, VarietyExpr]]:
    """Immediate subexpressions, each tagged with a path step."""
    if isinstance(e, (Product,)):
        return [("left", e.left), ("right", e.right)]
    if isinstance(e, Disjoint):
        return [(f"parts[{i}]", p) for i, p in enumerate(e.parts)]
    if isinstance(e, Complement):
        return [("total", e.total), ("closed", e.closed)]
    if isinstance(e, Fibration):
        return [("base", e.base), ("fiber", e.fiber)]
    if isinstance(e, BlowUp):
        return [("ambient", e.ambient), ("center", e.center)]
    if isinstance(e, Scale):
        return [("inner", e.inner)]
    return []


def _is_nonneg_int(n) -> bool:
    return isinstance(n, int) and not isinstance(n, bool) and n >= 0


def validate(e: Union[VarietyExpr, PointConfiguration, List[VarietyExpr]]) -> List[Diagnostic]:
    """Structural problems in an expression, a list of expressions, or a configuration.

    Never raises.  A list is validated jointly, so an atom declared with
    two different dimensions in two expressions is reported.
    """
    if isinstance(e, PointConfiguration):
        return _validate_configuration(e)
    exprs = list(e) if isinstance(e, (list, tuple)) else [e]
    diags: List[Diagnostic] = []
    atom_dims: dict = {}
    for i, expr in enumerate(exprs):
        root = f"[{i}]" if len(exprs) > 1 else ""
        _validate_node(expr, root, diags, atom_dims)
    return diags


def _validate_configuration(cfg: PointConfiguration) -> List[Diagnostic]:
    diags = []
    if not isinstance(cfg.count, int) or cfg.count < 1:
        diags.append(Diagnostic(f"point count must be >= 1, got {cfg.count!r}", "count"))
    if cfg.labels is not None:
        if len(cfg.labels) != cfg.count:
            diags.append(Diagnostic(f"{len(cfg.labels)} labels for {cfg.count} points", "labels"))
        seen = set()
        for i, label in enumerate(cfg.labels):
            if label in seen:
                diags.append(Diagnostic(f"duplicate label {label!r}", f"labels[{i}]"))
            seen.add(label)
    return diags


def _validate_node(e, path, diags, atom_dims):
    if not isinstance(e, NODE_TYPES):
        diags.append(Diagnostic(f"not a variety expression: {e!r}", path))
        return
    here = path or "<root>"
    if isinstance(e, (Affine, Projective)) and not _is_nonneg_int(e.n):
        diags.append(Diagnostic(f"dimension must be a non-negative integer, got {e.n!r}", here))
    elif isinstance(e, Disjoint) and not e.parts:
        diags.append(Diagnostic("disjoint union needs at least one part", here))
    elif isinstance(e, BlowUp) and not (isinstance(e.codim, int) and e.codim >= 1):
        diags.append(Diagnostic(f"codim must be >= 1, got {e.codim!r}", here))
    elif isinstance(e, Scale) and not (isinstance(e.k, int) and e.k >= 1):
        diags.append(Diagnostic(f"scale factor must be >= 1, got {e.k!r}", here))
    elif isinstance(e, Atom):
        if not isinstance(e.name, str) or not ATOM_NAME.match(e.name) or e.name == "L":
            diags.append(Diagnostic(f"atom name must be an identifier other than 'L', got {e.name!r}", here))
        elif e.dim is not None and not _is_nonneg_int(e.dim):
            diags.append(Diagnostic(f"atom dimension must be a non-negative integer, got {e.dim!r}", here))
        else:
            known = atom_dims.setdefault(e.name, e.dim)
            if known != e.dim:
                diags.append(Diagnostic(
                    f"atom {e.name!r} redeclared with dim {e.dim!r} (previously {known!r})", here))
    for step, child in children(e):
        _validate_node(child, f"{path}.{step}" if path else step, diags, atom_dims)


def blowup_p3_points(cfg: PointConfiguration) -> BlowUp:
    """Blow-up of projective 3-space at ``cfg.count`` distinct points.

    Labels are dropped: two configurations with the same count give
    structurally equal expressions.
    """
    problems = validate(cfg)
    if problems:
        raise ValueError("; ".join(str(d) for d in problems))
    center = Point() if cfg.count == 1 else Scale(cfg.count, Point())
    return BlowUp(Projective(3), center, 3)


def is_finite(e: VarietyExpr) -> bool:
    """True when the expression is zero-dimensional (a finite set of points)."""
    if isinstance(e, (Empty, Point)):
        return True
    if isinstance(e, (Affine, Projective)):
        return e.n == 0
    if isinstance(e, Scale):
        return is_finite(e.inner)
    if isinstance(e, Disjoint):
        return all(is_finite(p) for p in e.parts)
    if isinstance(e, Product):
        return is_finite(e.left) and is_finite(e.right)
    if isinstance(e, Complement):
        return is_finite(e.total)
    return False


# Pretty printing.  Binding levels follow the grammar: sums < products < factors.

_SUM, _TERM, _FACTOR = 0, 1, 2


def to_source(e: VarietyExpr) -> str:
    """Render an expression in DSL syntax; parsing the result gives ``e`` back."""
    return _src(e, _SUM)


def _wrap(text, needs):
    return f"({text})" if needs else text


def _src(e, ctx) -> str:
    if isinstance(e, Empty):
        return "empty"
    if isinstance(e, Point):
        return "pt"
    if isinstance(e, Affine):
        return f"A({e.n})"
    if isinstance(e, Projective):
        return f"P({e.n})"
    if isinstance(e, Atom):
        dim = "" if e.dim is None else f", dim={e.dim}"
        return f'atom("{e.name}"{dim})'
    if isinstance(e, Fibration):
        return f"fib({_src(e.base, _SUM)}; {_src(e.fiber, _SUM)})"
    if isinstance(e, BlowUp):
        return f"blowup({_src(e.ambient, _SUM)}; {_src(e.center, _SUM)}, codim={e.codim})"
    if isinstance(e, Scale):
        return f"{e.k}*{_src(e.inner, _FACTOR)}"
    if isinstance(e, Product):
        text = f"{_src(e.left, _TERM)} * {_src(e.right, _FACTOR)}"
        return _wrap(text, ctx > _TERM)
    if isinstance(e, Disjoint):
        # Sum-level parts are parenthesized so they stay separate nodes.
        # A one-part union has no syntax of its own and prints as its part.
        if len(e.parts) == 1:
            return _src(e.parts[0], ctx)
        text = " + ".join(_src(p, _TERM) for p in e.parts)
        return _wrap(text, ctx > _SUM)
    if isinstance(e, Complement):
        text = f"{_src(e.total, _SUM)} - {_src(e.closed, _TERM)}"
        return _wrap(text, ctx > _SUM)
    raise TypeError(f"not a variety expression: {e!r}")

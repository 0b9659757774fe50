"""Exact arithmetic in Z[L][atoms].

``L`` is the Lefschetz class (the class of the affine line).  Atoms are
formal generators standing for classes the calculus cannot reduce.  The
ring is a polynomial ring, hence a domain: multiplication by ``L`` is
injective, and zero divisors of the full Grothendieck ring are simply not
representable here.

Integers are Python ints, so there is no overflow to detect.

Canonical text form, used for CLI output and golden tests::

    L^3 + 9*L^2 + 9*L + 1
    8*L + L*C

Atom-free terms come first, then atom monomials in lexicographic order;
within one monomial powers of ``L`` descend.
"""

import re
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

ATOM_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def check_atom_name(name: str) -> None:
    if not isinstance(name, str) or not ATOM_NAME.match(name) or name == "L":
        raise ValueError(f"invalid atom name {name!r}: need an identifier other than 'L'")


class _Frozen:
    __slots__ = ()

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __delattr__(self, name):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def _init(self, items):
        object.__setattr__(self, "_terms", items)
        object.__setattr__(self, "_hash", hash(items))


def _power(base: str, exp: int) -> str:
    return base if exp == 1 else f"{base}^{exp}"


def _term_text(coeff: int, body: str, first: bool) -> str:
    mag = abs(coeff)
    if not body:
        text = str(mag)
    elif mag == 1:
        text = body
    else:
        text = f"{mag}*{body}"
    if first:
        return f"-{text}" if coeff < 0 else text
    return f" - {text}" if coeff < 0 else f" + {text}"


class LPolynomial(_Frozen):
    """A univariate integer polynomial in L, stored sparsely.

    Instances are immutable.  ``terms`` holds ``(degree, coefficient)``
    pairs in descending degree with no zero coefficients; the zero
    polynomial has no terms.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, coefficients: Union[Mapping[int, int], Iterable[Tuple[int, int]], None] = None):
        acc: Dict[int, int] = {}
        if coefficients is not None:
            items = coefficients.items() if isinstance(coefficients, Mapping) else coefficients
            for deg, c in items:
                if not isinstance(deg, int) or deg < 0:
                    raise ValueError(f"degree must be a non-negative integer, got {deg!r}")
                if not isinstance(c, int):
                    raise TypeError(f"coefficient must be an integer, got {c!r}")
                acc[deg] = acc.get(deg, 0) + c
        self._init(tuple(sorted(((d, c) for d, c in acc.items() if c), reverse=True)))

    @classmethod
    def constant(cls, c: int) -> "LPolynomial":
        return cls({0: c})

    @classmethod
    def monomial(cls, deg: int, c: int = 1) -> "LPolynomial":
        return cls({deg: c})

    @classmethod
    def projective(cls, n: int) -> "LPolynomial":
        """The class of projective n-space, 1 + L + ... + L^n."""
        if n < 0:
            raise ValueError("projective dimension must be non-negative")
        return cls({d: 1 for d in range(n + 1)})

    @property
    def terms(self) -> Tuple[Tuple[int, int], ...]:
        return self._terms

    @property
    def coefficients(self) -> Dict[int, int]:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        """Largest stored degree; -1 for the zero polynomial."""
        return self._terms[0][0] if self._terms else -1

    def coeff(self, deg: int) -> int:
        return dict(self._terms).get(deg, 0)

    @property
    def constant_term(self) -> int:
        if self._terms and self._terms[-1][0] == 0:
            return self._terms[-1][1]
        return 0

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LPolynomial.constant(other)
        if not isinstance(other, LPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return self._hash

    def __neg__(self):
        return LPolynomial((d, -c) for d, c in self._terms)

    def __add__(self, other):
        if isinstance(other, int):
            other = LPolynomial.constant(other)
        if not isinstance(other, LPolynomial):
            return NotImplemented
        return LPolynomial(self._terms + other._terms)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = LPolynomial.constant(other)
        if not isinstance(other, LPolynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return LPolynomial((d, c * other) for d, c in self._terms)
        if not isinstance(other, LPolynomial):
            return NotImplemented
        return LPolynomial(
            (d1 + d2, c1 * c2) for d1, c1 in self._terms for d2, c2 in other._terms
        )

    __rmul__ = __mul__

    def shift(self, k: int) -> "LPolynomial":
        """Multiply by L^k (k may be negative if every degree stays >= 0)."""
        return LPolynomial((d + k, c) for d, c in self._terms)

    def evaluate(self, q: int) -> int:
        """Value at L = q, by Horner's rule over the dense coefficients."""
        if not isinstance(q, int) or q < 2:
            raise ValueError(f"evaluation point must be an integer >= 2, got {q!r}")
        coeffs = dict(self._terms)
        value = 0
        for d in range(self.degree, -1, -1):
            value = value * q + coeffs.get(d, 0)
        return value

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        return "".join(
            _term_text(c, _power("L", d) if d else "", i == 0)
            for i, (d, c) in enumerate(self._terms)
        )

    def to_json(self) -> list:
        return [{"deg": d, "c": c} for d, c in self._terms]

    @classmethod
    def from_json(cls, data) -> "LPolynomial":
        return cls((entry["deg"], entry["c"]) for entry in data)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"LPolynomial({self.to_text()!r})"


class AtomMonomial(_Frozen):
    """A product of atoms with positive exponents, sorted by atom name."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, factors: Union[Mapping[str, int], Iterable[Tuple[str, int]], None] = None):
        acc: Dict[str, int] = {}
        if factors is not None:
            items = factors.items() if isinstance(factors, Mapping) else factors
            for name, exp in items:
                check_atom_name(name)
                if not isinstance(exp, int) or exp < 1:
                    raise ValueError(f"atom exponent must be a positive integer, got {exp!r}")
                acc[name] = acc.get(name, 0) + exp
        self._init(tuple(sorted(acc.items())))

    @property
    def factors(self) -> Tuple[Tuple[str, int], ...]:
        return self._terms

    def is_unit(self) -> bool:
        return not self._terms

    def __mul__(self, other: "AtomMonomial") -> "AtomMonomial":
        return AtomMonomial(self._terms + other._terms)

    def __eq__(self, other):
        if not isinstance(other, AtomMonomial):
            return NotImplemented
        return self._terms == other._terms

    def __lt__(self, other):
        return self._terms < other._terms

    def __hash__(self):
        return self._hash

    def to_text(self) -> str:
        return "*".join(_power(name, exp) for name, exp in self._terms)

    def __repr__(self):
        return f"AtomMonomial({self.to_text() or '1'!r})"


UNIT_MONOMIAL = AtomMonomial()

ClassLike = Union["MotivicClass", LPolynomial, int]


class MotivicClass(_Frozen):
    """An element of Z[L][atoms]: a map from atom monomials to L-polynomials.

    >>> one_point = MotivicClass.from_text("L^3 + 2*L^2 + 2*L + 1")
    >>> (one_point - MotivicClass.projective(3)).div_L()
    MotivicClass('2*L + 2')
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping[AtomMonomial, LPolynomial], Iterable[Tuple[AtomMonomial, LPolynomial]], None] = None):
        acc: Dict[AtomMonomial, LPolynomial] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for mono, poly in items:
                acc[mono] = acc[mono] + poly if mono in acc else poly
        self._init(tuple(sorted(((m, p) for m, p in acc.items() if p), key=lambda t: t[0].factors)))

    @classmethod
    def coerce(cls, value: ClassLike) -> "MotivicClass":
        if isinstance(value, MotivicClass):
            return value
        if isinstance(value, int):
            value = LPolynomial.constant(value)
        if isinstance(value, LPolynomial):
            return cls({UNIT_MONOMIAL: value})
        raise TypeError(f"cannot interpret {value!r} as a motivic class")

    @classmethod
    def zero(cls) -> "MotivicClass":
        return cls()

    @classmethod
    def one(cls) -> "MotivicClass":
        return cls.coerce(1)

    @classmethod
    def lefschetz(cls, power: int = 1) -> "MotivicClass":
        return cls.coerce(LPolynomial.monomial(power))

    @classmethod
    def projective(cls, n: int) -> "MotivicClass":
        return cls.coerce(LPolynomial.projective(n))

    @classmethod
    def atom(cls, name: str) -> "MotivicClass":
        return cls({AtomMonomial({name: 1}): LPolynomial.constant(1)})

    @property
    def terms(self) -> Tuple[Tuple[AtomMonomial, LPolynomial], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_atom_free(self) -> bool:
        return all(m.is_unit() for m, _ in self._terms)

    def atoms(self):
        return sorted({name for m, _ in self._terms for name, _ in m.factors})

    def to_lpolynomial(self) -> LPolynomial:
        if not self.is_atom_free():
            raise ValueError(f"class {self} involves atoms and has no counting polynomial")
        return self._terms[0][1] if self._terms else LPolynomial()

    def evaluate(self, q: int) -> int:
        return self.to_lpolynomial().evaluate(q)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, LPolynomial)):
            other = MotivicClass.coerce(other)
        if not isinstance(other, MotivicClass):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return self._hash

    def __neg__(self):
        return MotivicClass((m, -p) for m, p in self._terms)

    def __add__(self, other):
        try:
            other = MotivicClass.coerce(other)
        except TypeError:
            return NotImplemented
        return MotivicClass(self._terms + other._terms)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = MotivicClass.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = MotivicClass.coerce(other)
        except TypeError:
            return NotImplemented
        return MotivicClass(
            (m1 * m2, p1 * p2) for m1, p1 in self._terms for m2, p2 in other._terms
        )

    __rmul__ = __mul__

    def mod_L(self) -> "MotivicClass":
        """Image in the quotient by L: keep only constant terms."""
        return MotivicClass((m, LPolynomial.constant(p.constant_term)) for m, p in self._terms)

    def div_L(self) -> Optional["MotivicClass"]:
        """Return M with self = L*M, or None when some constant term is nonzero."""
        if any(p.constant_term for _, p in self._terms):
            return None
        return MotivicClass((m, p.shift(-1)) for m, p in self._terms)

    def to_text(self) -> str:
        pieces = []
        for mono, poly in self._terms:
            atoms = mono.to_text()
            for d, c in poly.terms:
                body = "*".join(part for part in (_power("L", d) if d else "", atoms) if part)
                pieces.append(_term_text(c, body, not pieces))
        return "".join(pieces) if pieces else "0"

    def to_json(self) -> dict:
        return {
            "terms": [
                {
                    "atoms": [{"name": n, "exp": e} for n, e in mono.factors],
                    "coeffs": poly.to_json(),
                }
                for mono, poly in self._terms
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "MotivicClass":
        return cls(
            (
                AtomMonomial((a["name"], a["exp"]) for a in term["atoms"]),
                LPolynomial.from_json(term["coeffs"]),
            )
            for term in data["terms"]
        )

    @classmethod
    def from_text(cls, text: str) -> "MotivicClass":
        return parse_class(text)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MotivicClass({self.to_text()!r})"


_CLASS_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([\^*+-]))")


def parse_class(text: str) -> MotivicClass:
    """Read the canonical text form back into a class.

    Accepts any sum of signed products of integers, ``L^k`` and atom
    powers, not only canonical output.
    """
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _CLASS_TOKEN.match(stripped, pos)
        if not m:
            raise ValueError(f"unexpected character at offset {pos} in {text!r}")
        tokens.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    if not tokens:
        raise ValueError("empty class text")

    result = MotivicClass()
    i = 0

    def expect_int():
        nonlocal i
        if i >= len(tokens) or not tokens[i].isdigit():
            raise ValueError(f"expected an integer in {text!r}")
        i += 1
        return int(tokens[i - 1])

    sign = 1
    if tokens[0] == "-":
        sign, i = -1, 1
    while True:
        coeff, deg, atoms = 1, 0, {}
        while True:
            if i >= len(tokens):
                raise ValueError(f"truncated class text {text!r}")
            tok = tokens[i]
            i += 1
            if tok.isdigit():
                coeff *= int(tok)
            elif tok[0].isalpha() or tok[0] == "_":
                exp = 1
                if i < len(tokens) and tokens[i] == "^":
                    i += 1
                    exp = expect_int()
                if tok == "L":
                    deg += exp
                elif exp:
                    atoms[tok] = atoms.get(tok, 0) + exp
            else:
                raise ValueError(f"unexpected {tok!r} in {text!r}")
            if i < len(tokens) and tokens[i] == "*":
                i += 1
                continue
            break
        result = result + MotivicClass({AtomMonomial(atoms): LPolynomial({deg: sign * coeff})})
        if i == len(tokens):
            return result
        if tokens[i] not in "+-":
            raise ValueError(f"unexpected {tokens[i]!r} in {text!r}")
        sign = 1 if tokens[i] == "+" else -1
        i += 1


# Functional spellings of the ring operations.

def lpoly_add(a: LPolynomial, b: LPolynomial) -> LPolynomial:
    return a + b


def lpoly_mul(a: LPolynomial, b: LPolynomial) -> LPolynomial:
    return a * b


def lpoly_eval(p: LPolynomial, q: int) -> int:
    return p.evaluate(q)


def class_add(a: MotivicClass, b: MotivicClass) -> MotivicClass:
    return a + b


def class_sub(a: MotivicClass, b: MotivicClass) -> MotivicClass:
    return a - b


def class_mul(a: MotivicClass, b: MotivicClass) -> MotivicClass:
    return a * b


def class_mod_L(a: MotivicClass) -> MotivicClass:
    return a.mod_L()


def class_div_L(a: MotivicClass) -> Optional[MotivicClass]:
    return a.div_L()


L = MotivicClass.lefschetz()

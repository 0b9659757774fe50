"""Strategies, generators and hand-rolled oracles shared by the tests."""

import itertools
import random

from hypothesis import strategies as st

from motivic.oracle import count_expression
from motivic.ring import AtomMonomial, LPolynomial, MotivicClass
from motivic.varieties import (
    Affine, Atom, BlowUp, Complement, Disjoint, Empty, Fibration, Point,
    Product, Projective, Scale, children,
)

# Independent counting oracles.  They count nonzero vectors of the affine
# cone and divide by the number of scalars, so they share no code with the
# representative-based enumeration in the package.


def cone_count_projective(n, q):
    nonzero = sum(1 for v in itertools.product(range(q), repeat=n + 1) if any(v))
    assert nonzero % (q - 1) == 0
    return nonzero // (q - 1)


def cone_count_one_point_blowup(q):
    """Points of the blow-up of P^3 at [1:0:0:0] inside P^3 x P^2."""
    hits = 0
    for x in itertools.product(range(q), repeat=4):
        if not any(x):
            continue
        for y in itertools.product(range(q), repeat=3):
            if not any(y):
                continue
            minors = (x[1] * y[1] - x[2] * y[0], x[1] * y[2] - x[3] * y[0], x[2] * y[2] - x[3] * y[1])
            if all(m % q == 0 for m in minors):
                hits += 1
    assert hits % (q - 1) ** 2 == 0
    return hits // (q - 1) ** 2


# Hypothesis strategies for ring elements.

ATOM_NAMES = ("C", "D", "M")

lpolys = st.dictionaries(st.integers(0, 4), st.integers(-6, 6), max_size=4).map(LPolynomial)

monomials = st.dictionaries(st.sampled_from(ATOM_NAMES), st.integers(1, 2), max_size=2).map(AtomMonomial)

classes = st.dictionaries(monomials, lpolys, max_size=3).map(MotivicClass)

atom_free_classes = lpolys.map(MotivicClass.coerce)


# Hypothesis strategy for arbitrary well-formed expressions (atoms included).

_leaves = st.one_of(
    st.just(Empty()),
    st.just(Point()),
    st.integers(0, 3).map(Affine),
    st.integers(0, 3).map(Projective),
    st.sampled_from(ATOM_NAMES).map(Atom),
)


def _extend(children):
    return st.one_of(
        st.builds(Product, children, children),
        st.lists(children, min_size=1, max_size=3).map(lambda ps: Disjoint(tuple(ps))),
        st.builds(Complement, children, children),
        st.builds(Fibration, children, children),
        st.builds(BlowUp, children, children, st.integers(1, 4)),
        st.builds(Scale, st.integers(1, 5), children),
    )


expressions = st.recursive(_leaves, _extend, max_leaves=8)


# Seeded generator of expressions the oracle can count.

PRIMES = (2, 3, 5)


def _min_count(e):
    return min(count_expression(e, q).count for q in PRIMES)


def random_countable(rng: random.Random, depth: int = 4, maxdim: int = 3):
    """A random expression in the countable fragment.

    Depth at most ``depth``, every dimension at most ``maxdim`` (products
    split the dimension budget), scale factors at most 5.
    """
    leaf_kinds = ["empty"] + ["pt", "A", "P"] * 2 + (["blowup"] * 3 if maxdim >= 1 else [])
    kinds = leaf_kinds if depth == 0 else leaf_kinds + ["product", "disjoint", "scale", "complement"] * 3
    kind = rng.choice(kinds)
    if kind == "empty":
        return Empty()
    if kind == "pt":
        return Point()
    if kind == "A":
        return Affine(rng.randint(0, maxdim))
    if kind == "P":
        return Projective(rng.randint(0, maxdim))
    if kind == "blowup":
        n = rng.randint(1, maxdim)
        k = rng.randint(1, min(5, 2 ** (n + 1) - 1))
        return BlowUp(Projective(n), Point() if k == 1 else Scale(k, Point()), n)
    if kind == "product":
        d = rng.randint(0, maxdim)
        return Product(random_countable(rng, depth - 1, d), random_countable(rng, depth - 1, maxdim - d))
    if kind == "disjoint":
        return Disjoint(tuple(random_countable(rng, depth - 1, maxdim) for _ in range(rng.randint(2, 3))))
    if kind == "scale":
        return Scale(rng.randint(1, 5), random_countable(rng, depth - 1, maxdim))
    total = random_countable(rng, depth - 1, maxdim)
    return Complement(total, random_closed_subvariety(rng, total))


def random_closed_subvariety(rng: random.Random, x):
    """A subexpression the oracle can place as a closed subset of ``x``."""
    options = ["empty", "self"] + ["points"] * 3
    if isinstance(x, (Projective, Affine)):
        options += ["linear"] * 3
    if isinstance(x, (Product, Disjoint, Scale)):
        options += ["structural"] * 3
    choice = rng.choice(options)
    if choice == "empty":
        return Empty()
    if choice == "self":
        return x
    if choice == "points":
        available = _min_count(x)
        if available == 0:
            return Empty()
        k = rng.randint(1, min(5, available))
        return Point() if k == 1 else Scale(k, Point())
    if choice == "linear":
        return type(x)(rng.randint(0, x.n))
    if isinstance(x, Product):
        return Product(random_closed_subvariety(rng, x.left), random_closed_subvariety(rng, x.right))
    if isinstance(x, Disjoint):
        j = rng.randint(1, len(x.parts))
        if j == 1 and rng.random() < 0.5:
            return random_closed_subvariety(rng, rng.choice(x.parts))
        return Disjoint(tuple(random_closed_subvariety(rng, p) for p in x.parts[:j]))
    return Scale(rng.randint(1, x.k), random_closed_subvariety(rng, x.inner))


def countable_corpus(n, seed=20231016, max_points=20000):
    """``n`` distinct compound countable expressions of depth <= 4.

    Each has at most ``max_points`` points over F_5.
    """
    rng = random.Random(seed)
    corpus = {}
    while len(corpus) < n:
        e = random_countable(rng)
        if 1 <= depth(e) <= 4 and e not in corpus and count_expression(e, 5).count <= max_points:
            corpus[e] = None
    return list(corpus)


def depth(e):
    """Nesting depth of an expression; leaves have depth 0."""
    kids = [c for _, c in children(e)]
    return 1 + max(depth(c) for c in kids) if kids else 0

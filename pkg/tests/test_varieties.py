import pytest

from motivic.varieties import (
    Affine, Atom, BlowUp, Complement, Disjoint, Empty, Point, PointConfiguration,
    Product, Projective, Scale, blowup_p3_points, is_finite, validate,
)


def test_well_formed_expression_has_no_diagnostics():
    assert validate(Projective(3)) == []
    assert validate(BlowUp(Projective(3), Scale(8, Point()), 3)) == []


def test_codim_zero_is_reported():
    (diag,) = validate(BlowUp(Projective(3), Point(), 0))
    assert "codim must be >= 1" in diag.message
    assert diag.path == "<root>"


def test_scale_zero_is_reported_with_path():
    (diag,) = validate(Product(Projective(1), Scale(0, Point())))
    assert "scale factor" in diag.message
    assert diag.path == "right"


def test_duplicate_label_is_reported():
    labels = [f"p{i}" for i in range(1, 8)] + ["p1"]
    diags = validate(PointConfiguration(8, labels))
    assert len(diags) == 1
    assert "duplicate label 'p1'" in diags[0].message


def test_label_count_must_match():
    assert validate(PointConfiguration(3, ["a", "b"]))
    assert validate(PointConfiguration(0))


def test_atom_redeclared_with_other_dim():
    e = Disjoint((Atom("C", 1), Atom("C", 2)))
    (diag,) = validate(e)
    assert "redeclared" in diag.message
    # jointly across several expressions
    assert validate([Atom("C", 1), Atom("C", 2)])
    assert validate([Atom("C", 1), Atom("C", 1)]) == []


@pytest.mark.parametrize(
    "bad",
    [Affine(-1), Projective(-2), Disjoint(()), Atom(""), Atom("L"), Atom("C", -1), "P(3)", None],
)
def test_validate_is_total(bad):
    diags = validate(bad)
    assert diags and all(d.severity == "error" for d in diags)


def test_blowup_p3_points():
    assert blowup_p3_points(PointConfiguration(8)) == BlowUp(Projective(3), Scale(8, Point()), 3)
    assert blowup_p3_points(PointConfiguration(1)) == BlowUp(Projective(3), Point(), 3)


def test_labels_do_not_reach_the_expression():
    a = PointConfiguration(8, [f"p{i}" for i in range(8)])
    b = PointConfiguration(8, [f"q{i}" for i in range(8)])
    assert a != b
    assert blowup_p3_points(a) == blowup_p3_points(b)


def test_blowup_p3_points_rejects_invalid_configuration():
    with pytest.raises(ValueError, match="duplicate"):
        blowup_p3_points(PointConfiguration(2, ["x", "x"]))


def test_expressions_are_hashable_values():
    e = Complement(Projective(2), Disjoint([Point(), Point()]))
    assert e == Complement(Projective(2), Disjoint((Point(), Point())))
    assert len({e, Complement(Projective(2), Disjoint((Point(), Point())))}) == 1


def test_is_finite():
    assert is_finite(Scale(3, Point()))
    assert is_finite(Disjoint((Point(), Projective(0))))
    assert not is_finite(Projective(1))
    assert not is_finite(Atom("C"))
    assert is_finite(Empty())

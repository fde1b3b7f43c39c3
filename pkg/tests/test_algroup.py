"""Group data tests: built-ins, law validation, point enumeration."""

import pytest

from invarcm.algroup import (
    BUILTIN_GROUP_NAMES,
    builtin_group,
    enumerate_points,
    validate_group,
)


def group_primes(name):
    if name == "SO2_p2":
        return [2]
    return [2, 3, 5]


def test_builtin_names_and_errors():
    with pytest.raises(ValueError):
        builtin_group("SL3", 2)
    with pytest.raises(ValueError):
        builtin_group("SO2_p2", 3)
    for name in BUILTIN_GROUP_NAMES:
        for p in group_primes(name):
            g = builtin_group(name, p)
            assert g.name == name
            assert g.p == p
            assert len(g.mul) == g.r == len(g.inv) == len(g.identity)


def test_identity_on_variety():
    g = builtin_group("SL2", 2)
    assert g.identity == (1, 0, 0, 1)
    assert g.on_variety(g.identity)
    gl = builtin_group("GL2", 3)
    assert gl.identity == (1, 0, 0, 1, 1)
    assert gl.on_variety(gl.identity)


def test_gl2_inverse_formula():
    g = builtin_group("GL2", 3)
    assert [str(f) for f in g.inv] == [
        "d*e",
        "2*b*e",
        "2*c*e",
        "a*e",
        "a*d + 2*b*c",
    ]


@pytest.mark.parametrize("name", BUILTIN_GROUP_NAMES)
def test_validate_all_builtins(name):
    for p in group_primes(name):
        report = validate_group(builtin_group(name, p))
        assert report.passed, report.failures


def test_validate_catches_corruption():
    g = builtin_group("SL2", 3)
    g.inv = tuple(g.ring.var(c) for c in g.coords)  # identity map is not inversion
    report = validate_group(g)
    assert not report.inverse_law
    assert not report.passed
    assert report.failures


def test_point_counts():
    assert len(enumerate_points(builtin_group("SL2", 2))) == 6
    assert len(enumerate_points(builtin_group("GL2", 2))) == 6
    assert len(enumerate_points(builtin_group("AdditiveFp", 3))) == 3
    # |SL2(F_p)| = p^3 - p
    assert len(enumerate_points(builtin_group("SL2", 3))) == 24
    assert len(enumerate_points(builtin_group("Torus", 5))) == 4
    assert len(enumerate_points(builtin_group("SO2_p2", 2))) == 2


def test_gl2_f2_points_force_unit_determinant():
    for pt in enumerate_points(builtin_group("GL2", 2)):
        assert pt[4] == 1


@pytest.mark.parametrize("name", BUILTIN_GROUP_NAMES)
def test_points_closed_under_mul_and_inv(name):
    for p in group_primes(name):
        g = builtin_group(name, p)
        pts = set(enumerate_points(g))
        assert pts
        ident = g.identity
        for s in pts:
            si = g.invert_point(s)
            assert si in pts
            assert g.multiply_points(s, si) == ident
            for t in pts:
                assert g.multiply_points(s, t) in pts


def test_enumeration_limit():
    g = builtin_group("SL2", 2)
    g_wide = builtin_group("GL2", 2)
    g_wide.coords = tuple(f"z{i}" for i in range(7))
    with pytest.raises(ValueError):
        enumerate_points(g_wide)
    with pytest.raises(ValueError):
        enumerate_points(g, p=3)


def test_additive_group_law():
    g = builtin_group("AdditiveFp", 5)
    pts = enumerate_points(g)
    assert pts == [(i,) for i in range(5)]
    assert g.multiply_points((2,), (4,)) == (1,)
    assert g.invert_point((2,)) == (3,)

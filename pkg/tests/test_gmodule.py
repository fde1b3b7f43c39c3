"""Tests for the module construction algebra.

Golden matrices are written as row lists of polynomial strings. Literal
assertions compare stored (unreduced) entries; mod-ideal assertions reduce
both sides by the group's defining ideal first.
"""

import random

import pytest

from invarcm.algroup import builtin_group, enumerate_points
from invarcm.gmodule import (
    ChangeBasis,
    Det,
    Dual,
    Frobenius,
    Glue,
    Natural,
    Quotient,
    Representation,
    Submodule,
    Sum,
    Sym,
    Tensor,
    construct,
    evaluate_at,
    extract_weights,
    parse_expr,
    reduced_matrix,
    validate_representation,
)
from invarcm.polyalg import FieldElement


def rows_of(group, rows):
    return tuple(tuple(group.ring.parse(t) for t in row) for row in rows)


def assert_literal(rep, rows):
    assert rep.matrix == rows_of(rep.group, rows)


def assert_mod_ideal(rep, rows):
    want = tuple(
        tuple(rep.group.nf(e) for e in row) for row in rows_of(rep.group, rows)
    )
    assert reduced_matrix(rep) == want


def matmul(p, a, b):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = FieldElement(p, 0)
            for k in range(n):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


P132 = "1,0,0;0,0,1;0,1,0"
SYM3_PAPER = "1,0,0,0;0,0,1,0;0,0,0,1;0,1,0,0"
P_US3 = "0,1,0,0,0;1,0,0,0,0;0,0,0,0,1;0,0,0,1,0;0,0,1,0,0"
T9 = "0,0,2,0,0,0;0,0,0,0,1,0;0,2,0,0,0,0;0,0,0,1,0,0;1,0,0,0,0,0;0,0,0,0,2,1"
S_TENS_MIX = "1,0,0,0;0,0,1,0;0,0,-1,1;0,1,0,0"
S_TENS_INV = "1,0,0,0;0,0,0,1;0,0,1,1;0,1,0,0"
S_TENS_SO = "1,0,0,0;0,0,1,0;0,0,1,1;0,1,0,0"


# -- parser -------------------------------------------------------------------


def test_parse_round_trip_structure():
    node = parse_expr(
        "sum(frobenius 1, dual(basis(sym(2, natural); 1,0,0;0,0,1;0,1,0)),"
        " tensor(natural, det))"
    )
    assert isinstance(node, Sum) and len(node.parts) == 3
    assert node.parts[0] == Frobenius(1)
    dual = node.parts[1]
    assert isinstance(dual, Dual) and isinstance(dual.inner, ChangeBasis)
    assert dual.inner.rows == ((1, 0, 0), (0, 0, 1), (0, 1, 0))
    assert dual.inner.inner == Sym(2, Natural())
    assert node.parts[2] == Tensor(Natural(), Det())


def test_parse_sub_quot_glue():
    assert parse_expr("sub(natural, 2)") == Submodule(Natural(), 2)
    assert parse_expr("quot(natural, 1)") == Quotient(Natural(), 1)
    assert parse_expr("glue(natural, natural, 1)") == Glue(Natural(), Natural(), 1)


def test_parse_negative_matrix_entries():
    node = parse_expr("basis(tensor(natural, natural); " + S_TENS_MIX + ")")
    assert node.rows[2] == (0, 0, -1, 1)


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_expr("spin(natural)")
    with pytest.raises(ValueError):
        parse_expr("natural natural")
    with pytest.raises(ValueError):
        parse_expr("sym(2 natural)")
    with pytest.raises(ValueError):
        parse_expr("sum()")
    with pytest.raises(ValueError):
        parse_expr("basis(natural; 1,0;)")


# -- basic constructions ------------------------------------------------------


def test_natural_sl2():
    g = builtin_group("SL2", 2)
    rep = construct(g, "natural")
    assert_literal(rep, [["a", "b"], ["c", "d"]])
    assert rep.basis_labels == ("X", "Y")
    assert rep.weights == (1, -1)


def test_sum_of_two_naturals_demo_shape():
    g = builtin_group("SL2", 2)
    rep = construct(g, "sum(natural, natural)")
    assert rep.n == 4
    assert_literal(
        rep,
        [
            ["a", "b", "0", "0"],
            ["c", "d", "0", "0"],
            ["0", "0", "a", "b"],
            ["0", "0", "c", "d"],
        ],
    )
    assert rep.basis_labels == ("X1", "Y1", "X2", "Y2")
    assert rep.weights == (1, -1, 1, -1)


def test_frobenius_twist():
    g = builtin_group("SL2", 3)
    rep = construct(g, "frobenius 1")
    assert_literal(rep, [["a^3", "b^3"], ["c^3", "d^3"]])
    assert rep.basis_labels == ("XXX", "YYY")
    assert rep.weights == (3, -3)
    with pytest.raises(ValueError):
        construct(g, "frobenius 0")


def test_tensor_of_naturals_is_entrywise_product_table():
    for p in (2, 3):
        g = builtin_group("SL2", p)
        rep = construct(g, "tensor(natural, natural)")
        assert_literal(
            rep,
            [
                ["a^2", "a*b", "a*b", "b^2"],
                ["a*c", "a*d", "b*c", "b*d"],
                ["a*c", "b*c", "a*d", "b*d"],
                ["c^2", "c*d", "c*d", "d^2"],
            ],
        )
        assert rep.basis_labels == ("XX", "XY", "YX", "YY")
        assert rep.weights == (2, 0, 0, -2)


def test_sym_square_canonical_order():
    g = builtin_group("SL2", 2)
    rep = construct(g, "sym(2, natural)")
    assert_literal(rep, [["a^2", "a*b", "b^2"], ["0", "a*d + b*c", "0"], ["c^2", "c*d", "d^2"]])
    assert_mod_ideal(rep, [["a^2", "a*b", "b^2"], ["0", "1", "0"], ["c^2", "c*d", "d^2"]])
    assert rep.basis_labels == ("XX", "XY", "YY")
    assert rep.weights == (2, 0, -2)
    with pytest.raises(ValueError):
        construct(g, "sym(0, natural)")


def test_sym_square_unipotent():
    g = builtin_group("AdditiveFp", 3)
    rep = construct(g, "sym(2, natural)")
    assert_literal(rep, [["1", "s", "s^2"], ["0", "1", "2*s"], ["0", "0", "1"]])
    assert rep.weights is None


def test_sym_square_in_two_variable_order():
    # the same module with the mixed monomial moved last
    g = builtin_group("SL2", 2)
    rep = construct(g, "basis(sym(2, natural); " + P132 + ")")
    assert_mod_ideal(rep, [["a^2", "b^2", "a*b"], ["c^2", "d^2", "c*d"], ["0", "0", "1"]])
    assert rep.basis_labels == ("XX", "YY", "XY")
    assert rep.weights == (2, -2, 0)


def test_sym_square_reordered_mod3():
    g = builtin_group("SL2", 3)
    rep = construct(g, "basis(sym(2, natural); " + P132 + ")")
    assert_literal(
        rep,
        [
            ["a^2", "b^2", "a*b"],
            ["c^2", "d^2", "c*d"],
            ["-a*c", "-b*d", "a*d + b*c"],
        ],
    )
    assert rep.weights == (2, -2, 0)


def test_dual_of_reordered_sym_square():
    g = builtin_group("SL2", 2)
    rep = construct(g, "dual(basis(sym(2, natural); " + P132 + "))")
    assert_mod_ideal(rep, [["d^2", "c^2", "0"], ["b^2", "a^2", "0"], ["b*d", "a*c", "1"]])
    assert rep.basis_labels == ("XXs", "YYs", "XYs")
    assert rep.weights == (-2, 2, 0)


def test_dual_of_reordered_sym_square_mod3():
    g = builtin_group("SL2", 3)
    rep = construct(g, "dual(basis(sym(2, natural); " + P132 + "))")
    assert_literal(
        rep,
        [
            ["d^2", "c^2", "c*d"],
            ["b^2", "a^2", "a*b"],
            ["-b*d", "-a*c", "a*d + b*c"],
        ],
    )


def test_dual_of_natural_is_selfdual_after_symplectic_move():
    g = builtin_group("SL2", 3)
    rep = construct(g, "basis(dual(natural); 0,1;-1,0)")
    assert rep.matrix == g.natural_matrix


def test_bidual_is_identity_mod_ideal():
    g = builtin_group("SL2", 3)
    base = construct(g, "basis(sym(2, natural); " + P132 + ")")
    twice = construct(g, "dual(dual(basis(sym(2, natural); " + P132 + ")))")
    assert reduced_matrix(twice) == reduced_matrix(base)
    assert twice.weights == base.weights


# -- tensor square in mixed bases ---------------------------------------------


def test_tensor_square_mixed_basis_literal_mod3():
    g = builtin_group("SL2", 3)
    rep = construct(g, "basis(tensor(natural, natural); " + S_TENS_MIX + ")")
    assert_literal(
        rep,
        [
            ["a^2", "b^2", "0", "a*b"],
            ["c^2", "d^2", "0", "c*d"],
            ["a*c", "b*d", "a*d - b*c", "b*c"],
            ["2*a*c", "2*b*d", "0", "a*d + b*c"],
        ],
    )
    assert rep.basis_labels == ("ua", "ub", "uc", "ud")
    assert rep.weights == (2, -2, 0, 0)


def test_tensor_square_mixed_basis_mod2():
    g = builtin_group("SL2", 2)
    rep = construct(g, "basis(tensor(natural, natural); " + S_TENS_MIX + ")")
    assert_mod_ideal(
        rep,
        [
            ["a^2", "b^2", "0", "a*b"],
            ["c^2", "d^2", "0", "c*d"],
            ["a*c", "b*d", "1", "b*c"],
            ["0", "0", "0", "1"],
        ],
    )


def test_tensor_square_invariant_line_basis():
    g = builtin_group("SL2", 2)
    rep = construct(g, "basis(tensor(natural, natural); " + S_TENS_INV + ")")
    assert_mod_ideal(
        rep,
        [
            ["a^2", "b^2", "a*b", "0"],
            ["c^2", "d^2", "c*d", "0"],
            ["0", "0", "1", "0"],
            ["a*c", "b*d", "b*c", "1"],
        ],
    )
    assert rep.weights == (2, -2, 0, 0)


def test_dual_of_invariant_line_basis():
    g = builtin_group("SL2", 2)
    rep = construct(g, "dual(basis(tensor(natural, natural); " + S_TENS_INV + "))")
    assert_mod_ideal(
        rep,
        [
            ["d^2", "c^2", "0", "c*d"],
            ["b^2", "a^2", "0", "a*b"],
            ["b*d", "a*c", "1", "b*c"],
            ["0", "0", "0", "1"],
        ],
    )


# -- cubic and quartic powers over GF(3) ---------------------------------------


def test_sym_cube_frobenius_decomposition_mod3():
    g = builtin_group("SL2", 3)
    rep = construct(g, "basis(sym(3, natural); " + SYM3_PAPER + ")")
    assert_mod_ideal(
        rep,
        [
            ["a^3", "b^3", "a^2*b", "a*b^2"],
            ["c^3", "d^3", "c^2*d", "c*d^2"],
            ["0", "0", "a", "-b"],
            ["0", "0", "-c", "d"],
        ],
    )


def test_hom_realization_matches_twisted_tensor():
    # Hom(bottom, top) of the cube, as sub tensor dual-quotient
    g = builtin_group("SL2", 3)
    inner = "basis(sym(3, natural); " + SYM3_PAPER + ")"
    hom = construct(g, "tensor(sub(" + inner + ", 2), dual(quot(" + inner + ", 2)))")
    twisted = construct(g, "tensor(frobenius 1, basis(natural; 0,1;1,0))")
    assert reduced_matrix(hom) == reduced_matrix(twisted)


def test_twisted_tensor_golden_mod3():
    g = builtin_group("SL2", 3)
    rep = construct(g, "tensor(frobenius 1, basis(natural; 0,1;1,0))")
    assert_literal(
        rep,
        [
            ["a^3*d", "a^3*c", "b^3*d", "b^3*c"],
            ["a^3*b", "a^4", "b^4", "a*b^3"],
            ["c^3*d", "c^4", "d^4", "c*d^3"],
            ["b*c^3", "a*c^3", "b*d^3", "a*d^3"],
        ],
    )
    assert rep.basis_labels == ("XXXY", "XXXX", "YYYY", "YYYX")
    assert rep.weights == (2, 4, -4, -2)


def test_quartic_extension_basis_mod3():
    g = builtin_group("SL2", 3)
    rep = construct(g, "basis(sym(4, natural); " + P_US3 + ")")
    assert_mod_ideal(
        rep,
        [
            ["a^3*d", "a^3*c", "b^3*d", "b^3*c", "-a^2*b*d - a*b^2*c"],
            ["a^3*b", "a^4", "b^4", "a*b^3", "a^2*b^2"],
            ["c^3*d", "c^4", "d^4", "c*d^3", "c^2*d^2"],
            ["b*c^3", "a*c^3", "b*d^3", "a*d^3", "-a*c*d^2 - b*c^2*d"],
            ["0", "0", "0", "0", "1"],
        ],
    )
    assert rep.basis_labels == ("XXXY", "XXXX", "YYYY", "XYYY", "XXYY")
    assert rep.weights == (2, 4, -4, -2, 0)


def test_quartic_extension_dual_mod3():
    g = builtin_group("SL2", 3)
    rep = construct(g, "dual(basis(sym(4, natural); " + P_US3 + "))")
    assert_mod_ideal(
        rep,
        [
            ["a*d^3", "-b*d^3", "-a*c^3", "b*c^3", "0"],
            ["-c*d^3", "d^4", "c^4", "-c^3*d", "0"],
            ["-a*b^3", "b^4", "a^4", "-a^3*b", "0"],
            ["b^3*c", "-b^3*d", "-a^3*c", "a^3*d", "0"],
            ["a*b*d^2 + b^2*c*d", "b^2*d^2", "a^2*c^2", "a^2*c*d + a*b*c^2", "1"],
        ],
    )
    assert rep.weights == (-2, -4, 4, 2, 0)


def test_sym_square_of_quadric_mod3():
    g = builtin_group("SL2", 3)
    rep = construct(g, "basis(sym(2, basis(sym(2, natural); " + P132 + ")); " + T9 + ")")
    assert_mod_ideal(
        rep,
        [
            ["a*d^3", "-b*d^3", "-a*c^3", "b*c^3", "0", "-a*c*d^2 - b*c^2*d"],
            ["-c*d^3", "d^4", "c^4", "-c^3*d", "0", "-c^2*d^2"],
            ["-a*b^3", "b^4", "a^4", "-a^3*b", "0", "-a^2*b^2"],
            ["b^3*c", "-b^3*d", "-a^3*c", "a^3*d", "0", "-a^2*b*d - a*b^2*c"],
            ["a*b*d^2 + b^2*c*d", "b^2*d^2", "a^2*c^2", "a^2*c*d + a*b*c^2", "1", "-a*b*c*d"],
            ["0", "0", "0", "0", "0", "1"],
        ],
    )
    assert rep.weights == (-2, -4, 4, 2, 0, 0)


# -- submodules, quotients, glueing --------------------------------------------


def test_sub_and_quot_of_cube():
    g = builtin_group("SL2", 3)
    inner = "basis(sym(3, natural); " + SYM3_PAPER + ")"
    sub = construct(g, "sub(" + inner + ", 2)")
    assert_literal(sub, [["a^3", "b^3"], ["c^3", "d^3"]])
    quo = construct(g, "quot(" + inner + ", 2)")
    assert_mod_ideal(quo, [["a", "-b"], ["-c", "d"]])
    assert quo.weights == (1, -1)


def test_sub_rejects_non_invariant_subspace():
    g = builtin_group("SL2", 2)
    with pytest.raises(ValueError, match="invariant subspace"):
        construct(g, "sub(tensor(natural, natural), 1)")
    with pytest.raises(ValueError, match="invariant subspace"):
        construct(g, "quot(natural, 1)")


def test_sub_quot_bounds():
    g = builtin_group("SL2", 2)
    with pytest.raises(ValueError):
        construct(g, "sub(natural, 0)")
    with pytest.raises(ValueError):
        construct(g, "sub(natural, 3)")
    with pytest.raises(ValueError):
        construct(g, "quot(natural, 2)")


def test_glue_unipotent_lines():
    g = builtin_group("AdditiveFp", 3)
    rep = construct(g, "glue(natural, natural, 1)")
    assert_literal(rep, [["1", "s", "s"], ["0", "1", "0"], ["0", "0", "1"]])
    assert rep.basis_labels == ("X", "Y1", "Y2")


def test_glue_rejects_mismatched_blocks():
    g = builtin_group("Torus", 5)
    with pytest.raises(ValueError, match="identical leading blocks"):
        construct(g, "glue(natural, dual(natural), 1)")
    with pytest.raises(ValueError):
        construct(g, "glue(natural, natural, 3)")


def test_glue_chain_amalgamated_module():
    # two four-dimensional pieces sharing a common invariant line,
    # reordered so the shared line comes last
    g = builtin_group("SL2", 2)
    da = "basis(dual(basis(sym(2, natural); " + P132 + ")); 0,1,0;0,0,1;1,0,0)"
    tib = (
        "basis(basis(tensor(natural, natural); " + S_TENS_INV + ");"
        " 0,1,0,0;0,0,1,0;0,0,0,1;1,0,0,0)"
    )
    final = (
        "0,0,0,0,0,1;1,0,0,0,0,0;0,1,0,0,0,0;"
        "0,0,1,0,0,0;0,0,0,1,0,0;0,0,0,0,1,0"
    )
    rep = construct(g, "basis(glue(" + da + ", " + tib + ", 1); " + final + ")")
    assert rep.n == 6
    assert_mod_ideal(
        rep,
        [
            ["d^2", "c^2", "0", "0", "0", "0"],
            ["b^2", "a^2", "0", "0", "0", "0"],
            ["0", "0", "a^2", "b^2", "a*b", "0"],
            ["0", "0", "c^2", "d^2", "c*d", "0"],
            ["0", "0", "0", "0", "1", "0"],
            ["b*d", "a*c", "a*c", "b*d", "b*c", "1"],
        ],
    )
    assert rep.basis_labels == ("XXs", "YYs", "ua", "ub", "uc", "XYs")
    assert rep.weights == (-2, 2, 2, -2, 0, 0)


def test_quadric_square_leading_submodule():
    g = builtin_group("SL2", 2)
    p6 = "1,0,0,0,0,0;0,0,0,0,0,1;0,1,0,0,0,0;0,0,1,0,0,0;0,0,0,1,0,0;0,0,0,0,1,0"
    expr = (
        "sub(basis(sym(2, dual(basis(sym(2, natural); " + P132 + "))); " + p6 + "), 5)"
    )
    rep = construct(g, expr)
    assert rep.n == 5
    assert validate_representation(rep).passed


# -- GL2 ----------------------------------------------------------------------


def test_det_module_and_twists():
    g = builtin_group("GL2", 2)
    det = construct(g, "det")
    assert_literal(det, [["e"]])
    assert det.basis_labels == ("E",)
    assert det.weights == (0,)
    twisted = construct(g, "tensor(natural, det)")
    assert_literal(twisted, [["a*e", "b*e"], ["c*e", "d*e"]])
    with pytest.raises(ValueError, match="GL2"):
        construct(builtin_group("SL2", 2), "det")


def test_gl2_dual_natural():
    g = builtin_group("GL2", 3)
    rep = construct(g, "dual(natural)")
    assert_literal(rep, [["d*e", "-c*e"], ["-b*e", "a*e"]])
    assert rep.weights == (-1, 1)


def test_gl2_twisted_quadric():
    g = builtin_group("GL2", 2)
    rep = construct(g, "tensor(basis(sym(2, natural); " + P132 + "), det)")
    assert_mod_ideal(
        rep,
        [
            ["a^2*e", "b^2*e", "a*b*e"],
            ["c^2*e", "d^2*e", "c*d*e"],
            ["0", "0", "1"],
        ],
    )
    assert rep.weights == (2, -2, 0)
    dual = construct(g, "dual(tensor(basis(sym(2, natural); " + P132 + "), det))")
    assert_mod_ideal(
        dual,
        [
            ["d^2*e", "c^2*e", "0"],
            ["b^2*e", "a^2*e", "0"],
            ["b*d*e", "a*c*e", "1"],
        ],
    )


# -- SO2 in characteristic 2 ---------------------------------------------------


def test_so2_tensor_square_basis():
    g = builtin_group("SO2_p2", 2)
    rep = construct(g, "basis(tensor(natural, natural); " + S_TENS_SO + ")")
    assert_mod_ideal(
        rep,
        [
            ["a^2", "b^2", "0", "0"],
            ["c^2", "d^2", "0", "0"],
            ["0", "0", "1", "b*c"],
            ["0", "0", "0", "1"],
        ],
    )


def test_so2_unipotent_quotient():
    g = builtin_group("SO2_p2", 2)
    expr = "quot(basis(tensor(natural, natural); " + S_TENS_SO + "), 2)"
    rep = construct(g, expr)
    assert_mod_ideal(rep, [["1", "b*c"], ["0", "1"]])
    dual = construct(g, "dual(" + expr + ")")
    assert_mod_ideal(dual, [["1", "0"], ["b*c", "1"]])
    triv = construct(g, "sub(" + expr + ", 1)")
    assert_mod_ideal(triv, [["1"]])


# -- symmetric square of a direct sum ------------------------------------------


def test_sym_square_of_sum_splits_into_blocks():
    g = builtin_group("SL2", 3)
    inner = Sym(2, Sum((Natural(), Frobenius(1))))
    rep0 = construct(g, inner)
    assert rep0.n == 10
    # classify canonical basis monomials by which summand they touch
    perm = (0, 1, 2, 3, 4, 6, 7, 5, 8, 9)
    rows = tuple(tuple(1 if i == perm[j] else 0 for j in range(10)) for i in range(10))
    rep = construct(g, ChangeBasis(inner, rows))
    blocks = {
        (0, 3): construct(g, "sym(2, natural)"),
        (3, 7): construct(g, "tensor(frobenius 1, natural)"),
        (7, 10): construct(g, "sym(2, frobenius 1)"),
    }
    red = reduced_matrix(rep)
    for (lo, hi), part in blocks.items():
        got = tuple(tuple(red[i][j] for j in range(lo, hi)) for i in range(lo, hi))
        assert got == reduced_matrix(part)
    zero = g.ring.zero
    for i in range(10):
        for j in range(10):
            inside = any(lo <= i < hi and lo <= j < hi for (lo, hi) in blocks)
            if not inside:
                assert rep.matrix[i][j] == zero


# -- validation ----------------------------------------------------------------


@pytest.mark.parametrize(
    "group,p,expr",
    [
        ("SL2", 3, "natural"),
        ("SL2", 2, "basis(sym(2, natural); " + P132 + ")"),
        ("SL2", 2, "basis(tensor(natural, natural); " + S_TENS_INV + ")"),
        ("SL2", 3, "tensor(frobenius 1, basis(natural; 0,1;1,0))"),
        ("SL2", 3, "basis(sym(4, natural); " + P_US3 + ")"),
        ("GL2", 2, "tensor(basis(sym(2, natural); " + P132 + "), det)"),
        ("SO2_p2", 2, "quot(basis(tensor(natural, natural); " + S_TENS_SO + "), 2)"),
        ("Torus", 5, "sym(2, natural)"),
        ("AdditiveFp", 3, "natural"),
    ],
)
def test_validate_accepts_constructions(group, p, expr):
    g = builtin_group(group, p)
    report = validate_representation(construct(g, expr))
    assert report.passed, report.failures


def test_validate_glued_module():
    g = builtin_group("SL2", 2)
    da = "basis(dual(basis(sym(2, natural); " + P132 + ")); 0,1,0;0,0,1;1,0,0)"
    tib = (
        "basis(basis(tensor(natural, natural); " + S_TENS_INV + ");"
        " 0,1,0,0;0,0,1,0;0,0,0,1;1,0,0,0)"
    )
    rep = construct(g, "glue(" + da + ", " + tib + ", 1)")
    report = validate_representation(rep)
    assert report.passed, report.failures


def test_validate_catches_broken_homomorphism():
    g = builtin_group("SL2", 3)
    ring = g.ring
    mat = ((ring.var("a"), ring.var("b")), (ring.var("c"), ring.var("a")))
    rep = Representation(g, 2, mat, ("X", "Y"), None)
    report = validate_representation(rep)
    assert report.identity_ok
    assert not report.homomorphism_ok
    assert not report.passed


def test_validate_catches_broken_identity():
    g = builtin_group("SL2", 3)
    ring = g.ring
    mat = ((ring.var("a"), ring.var("b")), (ring.var("c"), ring.parse("d + 1")))
    rep = Representation(g, 2, mat, ("X", "Y"), None)
    report = validate_representation(rep)
    assert not report.identity_ok
    assert not report.passed


def test_validate_catches_wrong_weight_claim():
    g = builtin_group("SL2", 3)
    rep = Representation(g, 2, g.natural_matrix, ("X", "Y"), (0, 0))
    report = validate_representation(rep)
    assert report.identity_ok and report.homomorphism_ok
    assert report.weights_ok is False
    assert not report.passed


def test_homomorphism_pointwise_over_small_fields():
    cases = [
        ("SL2", 2, "basis(tensor(natural, natural); " + S_TENS_INV + ")"),
        ("SL2", 3, "basis(sym(2, natural); " + P132 + ")"),
        ("SO2_p2", 2, "tensor(natural, natural)"),
        ("GL2", 2, "tensor(natural, det)"),
        ("Torus", 5, "natural"),
        ("AdditiveFp", 3, "sym(2, natural)"),
    ]
    for name, p, expr in cases:
        g = builtin_group(name, p)
        rep = construct(g, expr)
        points = enumerate_points(g)
        assert points
        for s in points:
            for t in points:
                st = g.multiply_points(s, t)
                left = matmul(p, evaluate_at(rep, s), evaluate_at(rep, t))
                assert left == evaluate_at(rep, st)


def test_tensor_evaluation_factors_pointwise():
    g = builtin_group("SL2", 5)
    rep = construct(g, "tensor(natural, dual(natural))")
    nat = construct(g, "natural")
    dual = construct(g, "dual(natural)")
    rng = random.Random(11)
    points = enumerate_points(g)
    for s in rng.sample(points, 20):
        big = evaluate_at(rep, s)
        fa = evaluate_at(nat, s)
        fb = evaluate_at(dual, s)
        for i1 in range(2):
            for i2 in range(2):
                for j1 in range(2):
                    for j2 in range(2):
                        assert big[2 * i1 + i2][2 * j1 + j2] == fa[i1][j1] * fb[i2][j2]


# -- weights -------------------------------------------------------------------


def test_extract_weights_matches_construction():
    g = builtin_group("SL2", 3)
    for expr in (
        "natural",
        "tensor(natural, natural)",
        "basis(sym(4, natural); " + P_US3 + ")",
        "dual(basis(sym(2, natural); " + P132 + "))",
    ):
        rep = construct(g, expr)
        assert extract_weights(rep) == rep.weights


def test_weights_fail_soft_on_mixing_basis():
    g = builtin_group("SL2", 3)
    rep = construct(g, "basis(natural; 1,1;0,1)")
    assert rep.weights is None
    with pytest.raises(ValueError, match="not diagonal"):
        extract_weights(rep)


def test_weights_absent_without_torus():
    g = builtin_group("AdditiveFp", 3)
    rep = construct(g, "natural")
    assert rep.weights is None
    with pytest.raises(ValueError, match="torus"):
        extract_weights(rep)


def test_torus_weights():
    g = builtin_group("Torus", 5)
    rep = construct(g, "sym(2, natural)")
    assert rep.weights == (2, 0, -2)
    assert extract_weights(rep) == (2, 0, -2)


# -- evaluation ----------------------------------------------------------------


def test_evaluate_at_group_element():
    g = builtin_group("SL2", 5)
    rep = construct(g, "natural")
    mat = evaluate_at(rep, (1, 2, 0, 1))
    assert mat == ((1, 2), (0, 1))
    with pytest.raises(ValueError, match="relations"):
        evaluate_at(rep, (1, 1, 1, 1))
    with pytest.raises(ValueError, match="coordinates"):
        evaluate_at(rep, (1, 0, 0))


def test_basis_change_requires_invertible_square_matrix():
    g = builtin_group("SL2", 2)
    with pytest.raises(ValueError, match="singular"):
        construct(g, "basis(natural; 1,1;1,1)")
    with pytest.raises(ValueError, match="2x2"):
        construct(g, "basis(natural; 1,0;0,1;0,0)")


def test_identity_basis_change_is_noop():
    g = builtin_group("SL2", 2)
    rep = construct(g, "basis(natural; 1,0;0,1)")
    assert rep.matrix == g.natural_matrix
    assert rep.basis_labels == ("X", "Y")

"""Operator algebra on q-polynomials: commutators, exponentials, the
factorization identity, and the string-type constraints on the shipped
free-energy fixture."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from branchflow import (
    FAIL,
    PASS,
    SKIPPED,
    LinearOp,
    QPoly,
    check_grading,
    check_heisenberg_commutator,
    check_virasoro_commutator,
    commutator,
    corpus_monomials,
    exp_op_apply,
    kw_residual,
    load_fk_fixture,
    make_L,
    make_alpha,
    make_d,
    verify_factorization,
    verify_kw_constraints,
)
from branchflow.exact import rational
from branchflow.virasoro import factorization_sides

R = rational

ONE = QPoly.one()
Q1 = QPoly.variable(1)
Q3 = QPoly.variable(3)


# --- QPoly basics ---------------------------------------------------------


def test_qpoly_drops_zero_terms_and_sorts_keys():
    p = QPoly({(3, 1): R(2), (2,): R(0)})
    assert p.terms == {(1, 3): R(2)}
    assert p.coefficient((3, 1)) == R(2)
    assert p.coefficient((2,)) == 0


def test_qpoly_rejects_nonpositive_indices():
    with pytest.raises(ValueError):
        QPoly({(0,): R(1)})
    with pytest.raises(ValueError):
        QPoly.monomial((-1, 2))


def test_qpoly_is_immutable():
    with pytest.raises(AttributeError):
        Q1.terms = {}


def test_qpoly_arithmetic():
    p = Q1 + Q3
    sq = p * p
    assert sq == QPoly(
        {(1, 1): R(1), (1, 3): R(2), (3, 3): R(1)}
    )
    assert (sq - sq).is_zero()
    assert -p + p == QPoly.zero()
    assert p.scale(R(1, 2)) + p.scale(R(1, 2)) == p


def test_qpoly_derivative_and_mul_var():
    sq = (Q3 * Q3) * Q1
    assert sq.derivative(3) == Q3.mul_var(1).scale(2)
    assert sq.derivative(2).is_zero()
    assert ONE.derivative(1).is_zero()


def test_weight_parts_sorted_ascending():
    p = QPoly.variable(5) + Q1 + ONE
    assert list(p.weight_parts().keys()) == [0, 1, 5]
    assert p.max_weight() == 5
    assert p.max_index() == 5


# --- the operators ---------------------------------------------------------


def test_lowering_operator_on_constant():
    # L_{-2} 1 = q_1^2 / 2, L_{-4} 1 = q_1 q_3 + q_2^2 / 2
    assert make_L(-2)(ONE) == QPoly({(1, 1): R(1, 2)})
    assert make_L(-4)(ONE) == QPoly({(1, 3): R(1), (2, 2): R(1, 2)})


def test_weight_operator_has_monomial_eigenvectors():
    for indices in [(1,), (3,), (1, 2, 2), (4, 5)]:
        p = QPoly.monomial(indices)
        assert make_L(0)(p) == p.scale(sum(indices))


def test_raising_operator_example():
    assert make_L(2)(Q3) == Q1.scale(3)
    assert make_L(2)(ONE).is_zero()


def test_central_term_pinned():
    # the bracket of the +-2 pair picks up the scalar 1/2 on constants
    assert commutator(make_L(2), make_L(-2), ONE) == ONE.scale(R(1, 2))


def test_alpha_operators():
    assert make_alpha(-2)(ONE) == QPoly.variable(2)
    assert make_alpha(3)(Q3) == ONE.scale(3)
    assert make_alpha(3)(Q1).is_zero()
    with pytest.raises(ValueError):
        make_alpha(0)


def test_operator_metadata():
    assert make_L(2).delta == -2
    assert make_alpha(-4).delta == 4
    assert make_d(5).delta == -5


# --- commutator scans -------------------------------------------------------


def test_virasoro_commutators_small_scan():
    corpus = corpus_monomials(6)
    for m, n in [(1, -1), (2, -2), (3, -3), (2, 1), (-2, 3), (0, 4)]:
        report = check_virasoro_commutator(m, n, corpus)
        assert report.status == PASS, (m, n)


def test_heisenberg_commutators():
    corpus = corpus_monomials(6)
    assert check_heisenberg_commutator(2, 3, corpus).status == PASS
    assert check_heisenberg_commutator(-3, 1, corpus).status == PASS
    skip = check_heisenberg_commutator(2, -2, corpus)
    assert skip.status == SKIPPED
    assert skip.first_mismatch is None


def test_grading_scan():
    corpus = corpus_monomials(6)
    for m in range(-3, 4):
        assert check_grading(m, corpus).status == PASS


def test_jacobi_identity():
    def bracket(A, B):
        return lambda p: A(B(p)) - B(A(p))

    corpus = corpus_monomials(5)
    for a, b, c in [(2, -3, 1), (-2, -1, 3)]:
        La, Lb, Lc = make_L(a), make_L(b), make_L(c)
        ab, bc, ca = bracket(La, Lb), bracket(Lb, Lc), bracket(Lc, La)
        for p in corpus:
            total = (
                ab(Lc(p)) - Lc(ab(p))
                + bc(La(p)) - La(bc(p))
                + ca(Lb(p)) - Lb(ca(p))
            )
            assert total.is_zero(), (a, b, c, p)


# --- exponentials ------------------------------------------------------------


def test_exp_rejects_non_lowering_operator():
    with pytest.raises(ValueError):
        exp_op_apply([(R(1), make_L(0))], Q1)
    with pytest.raises(ValueError):
        exp_op_apply([(R(1), make_alpha(-2))], Q1)


def test_exp_of_empty_sum_is_identity():
    p = Q1 * Q3
    assert exp_op_apply([], p) == p


def test_exp_single_shift():
    # exp(-b_3 d_5) q_5 = q_5 - 1/36
    b3 = R(1, 36)
    out = exp_op_apply([(-b3, make_d(5))], QPoly.variable(5))
    assert out == QPoly.variable(5) - ONE.scale(b3)


def test_exp_group_law_on_commuting_shifts():
    c5, c7 = -R(1, 36), -R(1, 4320)
    A = [(c5, make_d(5))]
    B = [(c7, make_d(7))]
    p = QPoly.monomial((5, 7))
    joint = exp_op_apply(A + B, p)
    staged = exp_op_apply(A, exp_op_apply(B, p))
    assert joint == staged
    assert joint.coefficient(()) == c5 * c7


# --- the factorization --------------------------------------------------------


def test_factorization_sides_agree_on_q3():
    lhs, rhs = factorization_sides(9)
    expected = Q3 + Q1.scale(R(1, 60))
    assert lhs(Q3) == expected
    assert rhs(Q3) == expected


def test_factorization_scan_passes():
    report = verify_factorization(9)
    assert report.status == PASS
    assert report.identity == "factorization"
    assert report.order == 9


def test_factorization_detects_wrong_l1():
    lhs, rhs = factorization_sides(9)
    lhs_bad, _ = factorization_sides(
        9, l_values=(R(1, 179), R(-1, 22680), R(-29, 12247200), R(1, 12028500))
    )
    assert lhs_bad(Q3) != rhs(Q3)


# --- the fixture ---------------------------------------------------------------


def test_fixture_loads_with_expected_values():
    F, bound = load_fk_fixture()
    assert bound == 18
    assert F.coefficient((1, 1, 1)) == R(1, 6)
    assert F.coefficient((3,)) == R(1, 24)
    assert F.coefficient((1, 5)) == R(1, 8)
    assert F.coefficient((3, 3)) == R(1, 48)
    assert F.coefficient((9,)) == R(35, 384)
    assert F.coefficient((15,)) == R(5005, 3072)
    assert len(F.terms) == 76


def test_fixture_regenerates_byte_identical(tmp_path):
    # guards against hand edits: the generator must reproduce the shipped file
    root = Path(__file__).resolve().parent.parent
    script = root / "scripts" / "generate_fk_fixture.py"
    shipped = root / "src" / "branchflow" / "data" / "fk_fixture.json"
    out = tmp_path / "fixture.json"
    subprocess.run(
        [sys.executable, str(script), "--out", str(out)],
        check=True,
        capture_output=True,
    )
    assert out.read_bytes() == shipped.read_bytes()


def test_fixture_explicit_path_roundtrip(tmp_path):
    doc = {
        "weight_bound": 3,
        "terms": [
            {"monomial": [1, 1, 1], "coefficient": "1/6"},
            {"monomial": [3], "coefficient": "1/24"},
        ],
    }
    path = tmp_path / "small.json"
    path.write_text(json.dumps(doc))
    F, bound = load_fk_fixture(path)
    assert bound == 3
    assert F.coefficient((3,)) == R(1, 24)


# --- the string-type constraints -----------------------------------------------


def test_kw_constraints_pass_on_shipped_fixture():
    rep1 = verify_kw_constraints(1)
    rep2 = verify_kw_constraints(2)
    assert rep1.status == PASS and rep1.order == 13
    assert rep2.status == PASS and rep2.order == 11


def test_kw_residual_vanishes_only_inside_window():
    F, bound = load_fk_fixture()
    residual = kw_residual(F, 1)
    # everything provable from the fixture cancels; the tail is truncation noise
    for w in residual.weight_parts():
        assert w > bound - 5


def test_kw_constraints_detect_perturbed_coefficient():
    F, bound = load_fk_fixture()
    terms = dict(F.terms)
    terms[(3,)] = R(1, 23)
    report = verify_kw_constraints(1, F=QPoly(terms), weight_bound=bound)
    assert report.status == FAIL
    assert report.first_mismatch.exponent == 1
    assert report.first_mismatch.lhs == "1/184"
    assert report.first_mismatch.rhs == "0"


def test_kw_constraints_reject_short_fixture():
    F = QPoly({(1, 1, 1): R(1, 6), (3,): R(1, 24)})
    with pytest.raises(ValueError, match="too small"):
        verify_kw_constraints(1, F=F, weight_bound=3)

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from randaztec.combinatorics import (SignatureError, all_sequences, as_signature, conjugate,
                                     dk_eigenrelation_check, empirical_measure,
                                     interlace_check, kappa_coefficient, kappa_float,
                                     make_sequence, moments_pk, pr_coefficient, schur_at_ones,
                                     schur_eval, schur_exact, schur_exact_dual,
                                     sequence_probability, vertical_successors,
                                     horizontal_predecessors)

signatures = st.lists(st.integers(0, 6), min_size=1, max_size=4).map(
    lambda xs: tuple(sorted(xs, reverse=True)))


def test_interlacing_examples():
    assert interlace_check((1, 1, 0), (1, 1, 1, 0), "horizontal")
    assert interlace_check((1, 0), (2, 1), "vertical")
    assert not interlace_check((0, 0), (2, 0), "vertical")
    assert interlace_check((1, 1, 0), (2, 2, 1), "vertical")


def test_interlacing_length_errors():
    with pytest.raises(SignatureError):
        interlace_check((1,), (1,), "horizontal")
    with pytest.raises(SignatureError):
        interlace_check((1,), (1, 0), "vertical")
    with pytest.raises(ValueError):
        interlace_check((1,), (1,), "diagonal")


def test_as_signature_rejects_increasing():
    with pytest.raises(SignatureError):
        as_signature((0, 1))


@pytest.mark.parametrize("lam,N,val", [((0, 0, 0), 3, 1), ((1, 0), 2, 2), ((2, 1, 0), 3, 8)])
def test_schur_at_ones(lam, N, val):
    assert schur_at_ones(lam, N) == val


def test_schur_eval_examples():
    assert schur_eval((0, 0), (2, 3)) == pytest.approx(1)
    assert schur_eval((1, 0), (2, 3)) == pytest.approx(5)
    assert schur_eval((2, 0), (2, 3)) == pytest.approx(19)


def test_schur_eval_coincident_points_error():
    with pytest.raises(ValueError, match="coincident"):
        schur_eval((1, 0), (1.0, 1.0))


@given(signatures)
def test_schur_exact_at_ones_matches_dimension_formula(lam):
    assert schur_exact(lam, [1] * len(lam)) == schur_at_ones(lam, len(lam))


@given(signatures, st.lists(st.fractions(min_value=Fraction(1, 5), max_value=3,
                                         max_denominator=7), min_size=1, max_size=4))
def test_dual_jacobi_trudi_is_conjugate(lam, vals):
    assert schur_exact_dual(lam, vals) == schur_exact(conjugate(lam), vals)


@given(signatures)
def test_schur_exact_matches_bialternant(lam):
    xs = [1.3, 0.7, 2.1, 0.45][:len(lam)]
    assert complex(float(schur_exact(lam, [Fraction(x).limit_denominator(100) for x in xs]))) \
        == pytest.approx(schur_eval(lam, xs), rel=1e-9)


def test_kappa_examples():
    b = Fraction(2, 7)
    assert kappa_coefficient((0,), (1,), b) == b
    assert kappa_coefficient((0,), (0,), b) == 1 - b
    assert sum(kappa_coefficient((0, 0), u, b) for u in [(0, 0), (1, 0), (1, 1)]) == 1


@given(signatures, st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20)))
def test_kappa_rows_sum_to_one(lam, b):
    tot = sum(kappa_coefficient(lam, u, b) for u in vertical_successors(lam))
    assert tot == 1
    for u in vertical_successors(lam):
        assert kappa_float(lam, u, float(b)) == pytest.approx(float(kappa_coefficient(lam, u, b)))


def test_pr_examples():
    assert pr_coefficient((1, 0), (1,)) == Fraction(1, 2)
    assert pr_coefficient((1, 0), (0,)) == Fraction(1, 2)
    assert pr_coefficient((4,), ()) == 1


@given(signatures.filter(lambda s: len(s) >= 2))
def test_pr_rows_sum_to_one(ups):
    assert sum(pr_coefficient(ups, l) for l in horizontal_predecessors(ups)) == 1


def test_sequence_probability_m1():
    b = Fraction(1, 3)
    assert sequence_probability(make_sequence(1, [(0,), (1,)]), [b]).value == b
    assert sequence_probability(make_sequence(1, [(0,), (0,)]), [b]).value == 1 - b


def test_sequence_probability_sums_to_one():
    seqs = list(all_sequences(2))
    assert len(seqs) == 8
    half = [Fraction(1, 2)] * 2
    assert sum(sequence_probability(s, half).value for s in seqs) == 1
    bs = [Fraction(2, 3), Fraction(1, 5), Fraction(3, 4)]
    assert sum(sequence_probability(s, bs).value for s in all_sequences(3)) == 1


def test_invalid_sequence_has_zero_probability():
    seq = make_sequence(1, [(0,), (2,)])
    res = sequence_probability(seq, [Fraction(1, 2)])
    assert res.value == 0 and not res.valid and res.reason


def test_moments_pk_examples():
    assert moments_pk((0, 0, 0), 1) == 3
    assert moments_pk((0,) * 7, 1) == 21
    assert moments_pk((2, 2, 1), 2) == 26


def test_empirical_measure_examples():
    assert empirical_measure((0, 0)) == [0.5, 0.0]
    assert empirical_measure((2, 2, 1)) == pytest.approx([4 / 3, 1, 1 / 3])
    N = 400
    atoms = empirical_measure((0,) * N)
    for k in (1, 2, 3):
        assert sum(a ** k for a in atoms) / N == pytest.approx(1 / (k + 1), abs=2 / N)


@pytest.mark.parametrize("lam,k", [((0, 0), 1), ((1, 0), 1), ((2, 1, 0), 2), ((3,), 2)])
def test_eigenrelation(lam, k):
    assert dk_eigenrelation_check(lam, k)


def test_eigenrelation_detects_wrong_eigenvalue(monkeypatch):
    import randaztec.combinatorics as c
    monkeypatch.setattr(c, "moments_pk", lambda lam, k: 999)
    assert not c.dk_eigenrelation_check((1, 0), 1)

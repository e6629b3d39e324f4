"""Adjoint trace invariant tests.

Expected values below were computed with independent oracles: hand-built
3x3 ad matrices for sl2 (documented inline), the closed form
5 / (2 (2 + dim)) for alpha, and explicit 2x2 defining matrices.
"""

import random
from fractions import Fraction

import pytest

from celalg import adinv
from celalg.adinv import (
    DefiningRep,
    QuarticForm,
    check_classical_table,
    check_commutator_identity,
    check_contract_identity,
    check_dihedral,
    check_polarized,
    classify,
    expected_alpha,
    find_polarized_counterexample,
    footnote_witness_trace,
    quartic_alpha,
    quartic_trace,
    random_element,
)
from celalg.liealg import UsageError, simple_lie_algebra


def _rng(tag):
    return random.Random(f"test-adinv:{tag}")


def test_quartic_trace_sl2_h():
    # oracle: ad_h = diag(0, 2, -2) in basis (h, e, f), so Tr(ad_h^4) = 16+16
    L = simple_lie_algebra("A", 1)
    h = L.basis_element(0)
    assert quartic_trace(L, h, h, h, h) == 32


def test_quartic_trace_nilpotent_and_zero():
    L = simple_lie_algebra("A", 1)
    e = L.basis_element(1)
    assert quartic_trace(L, e, e, e, e) == 0  # ad_e is nilpotent of order 3
    z = L.zero()
    h = L.basis_element(0)
    assert quartic_trace(L, z, h, h, h) == 0  # multilinearity


def test_quartic_trace_multilinearity():
    L = simple_lie_algebra("A", 2)
    rng = _rng("multilinear")
    for _ in range(10):
        a, b, c, d, a2 = (random_element(L, rng) for _ in range(5))
        s = tuple(x + y for x, y in zip(a, a2))
        lhs = quartic_trace(L, s, b, c, d)
        rhs = quartic_trace(L, a, b, c, d) + quartic_trace(L, a2, b, c, d)
        assert lhs == rhs


def test_quartic_form_cache_dihedral_invariance():
    L = simple_lie_algebra("A", 2)
    qf = QuarticForm(L)
    rng = _rng("cache")
    for _ in range(10):
        i, j, k, l = (rng.randrange(L.dim) for _ in range(4))
        v = qf.basis_trace(i, j, k, l)
        assert v == qf.basis_trace(j, k, l, i)    # rotation
        assert v == qf.basis_trace(i, l, k, j)    # reversal
        assert v == qf.basis_trace(j, i, l, k)    # (12)(34)
    # only canonical representatives are stored
    for key in qf.cache:
        assert key == min(tuple(key[p] for p in adinv.DIHEDRAL[r])
                          for r in range(8))


def test_contract_identity_sl2_hhh():
    # oracle computed by hand: both sides equal -16 h
    L = simple_lie_algebra("A", 1)
    h = L.basis_element(0)
    rep = check_contract_identity(L, h, h, h)
    assert rep.passed
    n = L.dim
    lhs = [0] * n
    for i in range(n):
        t = L.bracket(h, L.bracket(h, L.basis_element(i)))
        u = L.bracket(h, L.dual_element(i))
        for k, v in enumerate(L.bracket(t, u)):
            lhs[k] += v
    assert tuple(lhs) == (-16, 0, 0)


def test_contract_identity_zero_argument():
    L = simple_lie_algebra("A", 2)
    z = L.zero()
    h = L.basis_element(0)
    assert check_contract_identity(L, z, h, h).passed


@pytest.mark.parametrize("series,rank,n", [("G", 2, 100), ("A", 2, 50)])
def test_contract_identity_random(series, rank, n):
    L = simple_lie_algebra(series, rank)
    rng = _rng(f"contract-{series}{rank}")
    for _ in range(n):
        a, b, c = (random_element(L, rng) for _ in range(3))
        assert check_contract_identity(L, a, b, c).passed


def test_dihedral_random_sl3():
    L = simple_lie_algebra("A", 2)
    rng = _rng("dihedral")
    for _ in range(30):
        tup = [random_element(L, rng) for _ in range(4)]
        assert check_dihedral(L, *tup).passed


def test_commutator_identity_equal_arguments_trivial():
    L = simple_lie_algebra("A", 1)
    h = L.basis_element(0)
    assert check_commutator_identity(L, h, h, h, h).passed


@pytest.mark.parametrize("series,rank,n", [("A", 1, 50), ("B", 2, 25), ("F", 4, 3)])
def test_commutator_identity_random(series, rank, n):
    L = simple_lie_algebra(series, rank)
    rng = _rng(f"comm-{series}{rank}")
    for _ in range(n):
        tup = [random_element(L, rng) for _ in range(4)]
        assert check_commutator_identity(L, *tup).passed


@pytest.mark.parametrize("series,rank,alpha", [
    ("A", 1, Fraction(1, 2)),
    ("A", 2, Fraction(1, 4)),
    ("D", 4, Fraction(1, 12)),
    ("G", 2, Fraction(5, 32)),
])
def test_quartic_alpha_admissible(series, rank, alpha):
    L = simple_lie_algebra(series, rank)
    got = quartic_alpha(L, samples=24, master_seed=7)
    assert got == alpha == expected_alpha(L.dim)


@pytest.mark.parametrize("series,rank", [("A", 3), ("B", 2), ("C", 3)])
def test_quartic_alpha_absent(series, rank):
    L = simple_lie_algebra(series, rank)
    assert quartic_alpha(L, samples=24, master_seed=7) is None


def test_quartic_alpha_sample_floor():
    L = simple_lie_algebra("A", 1)
    with pytest.raises(UsageError):
        quartic_alpha(L, samples=5)


def test_polarized_collapse_equal_arguments():
    # a=b=c=d reduces to 3 Tr(ad_a^4) = 3 alpha (Tr ad_a^2)^2
    L = simple_lie_algebra("A", 1)
    h = L.basis_element(0)
    assert check_polarized(L, h, h, h, h, Fraction(1, 2)).passed


def test_polarized_random_g2():
    L = simple_lie_algebra("G", 2)
    rng = _rng("polarized-g2")
    for _ in range(25):
        tup = [random_element(L, rng) for _ in range(4)]
        assert check_polarized(L, *tup, Fraction(5, 32)).passed


def test_polarized_counterexample_a3():
    # no candidate alpha makes the polarized identity hold on A3
    L = simple_lie_algebra("A", 3)
    rng = _rng("a3-candidates")
    candidates = set()
    while len(candidates) < 3:
        a = random_element(L, rng)
        m = L.ad_matrix(a)
        t2 = adinv.trace_mul(m, m)
        if t2:
            m2 = adinv.mat_mul(m, m)
            candidates.add(Fraction(adinv.trace_mul(m2, m2), t2 * t2))
    for alpha in candidates:
        assert find_polarized_counterexample(L, alpha, master_seed=13) is not None


def test_classify_default_list():
    rows = dict((name, (ok, alpha)) for name, ok, alpha in classify(max_rank=4))
    assert set(rows) == {"A1", "A2", "A3", "A4", "B2", "B3", "B4",
                         "C3", "C4", "D4", "D5", "G2", "F4", "E6"}
    admissible = {"A1": Fraction(1, 2), "A2": Fraction(1, 4),
                  "D4": Fraction(1, 12), "G2": Fraction(5, 32),
                  "F4": Fraction(5, 108), "E6": Fraction(1, 32)}
    for name, (ok, alpha) in rows.items():
        if name in admissible:
            assert ok and alpha == admissible[name]
        else:
            assert not ok and alpha is None


def test_classical_table_a1_diagonal():
    # a = h = diag(1,-1): 32 = 2*2*Tr(h^4) + 6*(Tr h^2)^2 = 8 + 24
    L = simple_lie_algebra("A", 1)
    h = L.basis_element(0)
    rep = DefiningRep(L)
    assert rep.matrix(h) == [[1, 0], [0, -1]]
    assert check_classical_table(L, h, rep).passed


@pytest.mark.parametrize("series,rank", [("A", 2), ("A", 3), ("B", 2),
                                         ("C", 3), ("D", 4), ("D", 5)])
def test_classical_table_random(series, rank):
    L = simple_lie_algebra(series, rank)
    rep = DefiningRep(L)
    rng = _rng(f"table-{series}{rank}")
    for _ in range(10):
        assert check_classical_table(L, random_element(L, rng), rep).passed


def test_classical_table_d4_quartic_coefficient_cancels():
    assert adinv.CLASSICAL_TABLE["D"](4) == (0, 3)


def test_classical_table_rejects_exceptional():
    with pytest.raises(UsageError):
        check_classical_table(simple_lie_algebra("G", 2), None)


@pytest.mark.parametrize("series,rank", [("A", 1), ("A", 2), ("A", 3),
                                         ("B", 2), ("G", 2), ("D", 4)])
def test_footnote_witness_nonzero(series, rank):
    L = simple_lie_algebra(series, rank)
    assert footnote_witness_trace(L) != 0


def test_footnote_witness_sl2_value():
    # hand computation: ad_h ad_e ad_f has trace 4 in basis (h, e, f)
    assert footnote_witness_trace(simple_lie_algebra("A", 1)) == 4


def test_quartic_alpha_degenerate_sample_raises(monkeypatch):
    # force every sample to the nilpotent e, whose squared adjoint trace is 0
    L = simple_lie_algebra("A", 1)
    monkeypatch.setattr(adinv, "random_element",
                        lambda lie, rng: lie.basis_element(1))
    with pytest.raises(adinv.SamplingError):
        adinv.quartic_alpha(L, samples=20, master_seed=1)

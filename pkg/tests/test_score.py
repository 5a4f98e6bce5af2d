import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from conftest import instances
from tvhom import (
    convolve_family,
    dirac,
    encode_pair,
    laplace_v,
    remainder_l2,
    score_law,
    signal_stats,
    sqrt_quadratic_mean,
    sum_abs_mean,
    t_functional,
)
from tvhom.constants import d_rho
from tvhom.errors import EnumerationBudgetExceeded, NotAdmissible
from tvhom.score import (
    ScoreLaw,
    enumerate_psi,
    expected_abs_psi,
    homogenized_law,
    iid_sqrt_quadratic_mean,
    iid_sum_abs_mean,
    psi,
    remainder_l2_closed_form,
)

LAW_A = {-0.2: 0.625, 1 / 3: 0.375}


def brute_expectation(laws, f):
    """E f(U_1..U_n) by looping over every support tuple."""
    total = 0.0
    for combo in itertools.product(*[list(zip(l.values, l.probs)) for l in laws]):
        u = np.array([c[0] for c in combo])
        total += math.prod(c[1] for c in combo) * f(u)
    return total


def laws_of(inst):
    return [score_law(encode_pair(P, Q)) for P, Q in inst.pairs()]


class TestScoreLaw:
    def test_dirac(self):
        law = score_law(dirac(0.0))
        assert law.as_dict() == {0.0: 1.0}

    def test_pair_a(self, eta_a):
        law = score_law(eta_a)
        np.testing.assert_allclose(law.values, sorted(LAW_A), atol=1e-15)
        np.testing.assert_allclose(law.probs, [LAW_A[k] for k in sorted(LAW_A)], atol=1e-15)
        assert abs(law.mean) <= 1e-15

    def test_not_admissible(self):
        with pytest.raises(NotAdmissible):
            score_law(dirac(0.5))

    @given(instances(max_n=4, max_m=4))
    @settings(max_examples=60)
    def test_zero_mean(self, inst):
        for law in laws_of(inst):
            assert abs(law.mean) <= 1e-9
            assert np.all(np.abs(law.values) <= 1)

    def test_homogenized_law_is_average(self, eta_a):
        other = score_law(encode_pair((0.2, 0.8), (0.6, 0.4)))
        bar = homogenized_law([score_law(eta_a), other])
        for v, p in zip(other.values, other.probs):
            assert bar.as_dict()[v] == pytest.approx(p / 2 + LAW_A.get(v, 0) / 2)


class TestExpectations:
    def test_single(self, eta_a):
        assert sum_abs_mean([score_law(eta_a)]) == pytest.approx(0.25, abs=1e-15)

    def test_two_copies(self, eta_a):
        law = score_law(eta_a)
        # values -0.4, 2/15, 2/3 with probs 0.390625, 0.46875, 0.140625
        hand = 0.390625 * 0.4 + 0.46875 * 2 / 15 + 0.140625 * 2 / 3
        assert hand == pytest.approx(0.3125, abs=1e-15)
        assert sum_abs_mean([law, law]) == pytest.approx(0.3125, abs=1e-15)
        assert iid_sum_abs_mean(law, 2) == pytest.approx(0.3125, abs=1e-15)

    def test_point_masses(self):
        zero = ScoreLaw([0.0], [1.0])
        assert sum_abs_mean([zero] * 4) == 0.0
        assert sqrt_quadratic_mean([zero] * 4) == 0.0
        assert laplace_v([zero], 3.0) == 1.0

    def test_sqrt_single_is_abs(self, eta_a):
        assert sqrt_quadratic_mean([score_law(eta_a)]) == pytest.approx(0.25, abs=1e-15)

    def test_sqrt_two_copies(self, eta_a):
        law = score_law(eta_a)
        oracle = brute_expectation([law, law], lambda u: math.sqrt(np.sum(u ** 2)))
        assert sqrt_quadratic_mean([law, law]) == pytest.approx(oracle, abs=1e-15)
        assert iid_sqrt_quadratic_mean(law, 2) == pytest.approx(oracle, abs=1e-15)

    def test_laplace(self, eta_a):
        law = score_law(eta_a)
        assert laplace_v([law], 0.0) == 1.0
        assert laplace_v([law], 1.0) == pytest.approx(0.625 * math.exp(-0.04) + 0.375 * math.exp(-1 / 9), rel=1e-15)

    def test_budget(self, eta_a):
        law = score_law(eta_a)
        with pytest.raises(EnumerationBudgetExceeded):
            sum_abs_mean([law] * 5, cap=16)
        with pytest.raises(EnumerationBudgetExceeded):
            enumerate_psi([law] * 5, cap=16)

    @given(instances(max_n=3, max_m=3))
    @settings(max_examples=30, deadline=None)
    def test_sqrt_v_by_laplace_quadrature(self, inst):
        # sqrt(x) = (1 / (2 sqrt(pi))) * int_0^inf (1 - e^{-lam x}) lam^{-3/2} dlam
        laws = laws_of(inst)
        f = lambda lam: (1.0 - laplace_v(laws, lam)) * lam ** -1.5
        val = (quad(f, 0, 1, limit=200)[0] + quad(f, 1, np.inf, limit=200)[0]) / (2 * math.sqrt(math.pi))
        assert sqrt_quadratic_mean(laws) == pytest.approx(val, abs=1e-7)

    @given(instances(max_n=4, max_m=3))
    @settings(max_examples=30, deadline=None)
    def test_iid_matches_generic(self, inst):
        bar = homogenized_law(laws_of(inst))
        n = min(inst.n, 3)
        assert iid_sum_abs_mean(bar, n) == pytest.approx(sum_abs_mean([bar] * n), abs=1e-13)
        assert iid_sqrt_quadratic_mean(bar, n) == pytest.approx(sqrt_quadratic_mean([bar] * n), abs=1e-13)


class TestSignal:
    def test_dirac(self):
        s = signal_stats([dirac(0.0)])
        assert (s.alpha, s.nu) == (0.0, 0.0)

    def test_pair_a(self, eta_a):
        s = signal_stats([eta_a])
        assert s.alpha == pytest.approx(0.0340742, abs=1e-6)
        assert s.nu == pytest.approx(0.0666667, abs=1e-6)
        assert s.nu == pytest.approx(0.625 * 0.04 + 0.375 / 9, rel=1e-14)

    def test_additive(self, eta_a):
        s = signal_stats([eta_a, eta_a])
        assert s.alpha == pytest.approx(0.0681483, abs=1e-6)
        assert s.nu == pytest.approx(0.1333333, abs=1e-6)

    @given(instances(max_n=5, max_m=4))
    @settings(max_examples=80)
    def test_alpha_nu_sandwich(self, inst):
        s = signal_stats([encode_pair(P, Q) for P, Q in inst.pairs()])
        assert s.alpha <= s.nu + 1e-12
        assert s.nu <= 2 * s.alpha + 1e-12


class TestRemainder:
    def test_single(self):
        assert remainder_l2([0.4]) == 0.0

    def test_three(self):
        assert remainder_l2([0.1, 0.2, 0.3]) == pytest.approx(0.006, abs=1e-17)

    @given(st.lists(st.floats(0, 1), min_size=1, max_size=12))
    def test_closed_form_and_sinh_bound(self, a):
        r = remainder_l2(a)
        rho = sum(a)
        assert r == pytest.approx(remainder_l2_closed_form(a), abs=1e-12)
        assert r <= math.sinh(rho) - rho + 1e-12

    def test_small_moments_no_cancellation(self):
        a = [1e-6] * 3
        assert remainder_l2(a) == pytest.approx(1e-18, rel=1e-12)


def test_psi_expansion():
    # Psi equals the sum over odd subsets of the product of coordinates
    y = np.array([0.3, -0.5, 0.2, 0.9])
    odd = sum(
        math.prod(y[list(s)])
        for k in (1, 3)
        for s in itertools.combinations(range(4), k)
    )
    assert psi(y) == pytest.approx(odd, abs=1e-15)


@given(instances(max_n=5, max_m=3))
@settings(max_examples=60, deadline=None)
def test_score_representation_and_linearization(inst):
    etas = [encode_pair(P, Q) for P, Q in inst.pairs()]
    laws = [score_law(e) for e in etas]
    t = t_functional(convolve_family(etas))
    e_psi = expected_abs_psi(laws)
    assert abs(e_psi - t) <= 1e-9
    assert e_psi == pytest.approx(brute_expectation(laws, lambda u: abs(psi(u))), abs=1e-12)

    a = [l.second_moment for l in laws]
    rho = sum(a)
    prob, ps, s = enumerate_psi(laws)
    er2 = remainder_l2(a)
    assert float(np.dot(prob, (ps - s) ** 2)) == pytest.approx(er2, abs=1e-12)
    assert float(np.dot(prob, np.abs(ps - s))) ** 2 <= er2 + 1e-9
    e_s = sum_abs_mean(laws)
    assert e_s >= rho / math.sqrt(1 + 3 * rho) - 1e-9
    assert abs(e_psi - e_s) <= d_rho(rho) * e_s + 1e-9

    e_v = sqrt_quadratic_mean(laws)
    assert e_v / (2 * math.sqrt(2)) <= e_s + 1e-9
    assert e_s <= 2 * e_v + 1e-9


@given(instances(max_n=5, max_m=3))
@settings(max_examples=60, deadline=None)
def test_laplace_ordering(inst):
    laws = laws_of(inst)
    bar = homogenized_law(laws)
    n = inst.n
    for lam in (0.01, 0.1, 1.0, 10.0, 100.0):
        assert laplace_v([bar] * n, lam) >= laplace_v(laws, lam) - 1e-12
    assert iid_sqrt_quadratic_mean(bar, n) <= sqrt_quadratic_mean(laws) + 1e-9

import math

import numpy as np
import pytest
from scipy.integrate import quad

from qitest.efficacy import (
    AlternativeModel,
    EfficacyTest,
    _ModelTables,
    conditional_entry_density,
    efficacy,
    exponential_entry,
    model_linear_risk,
    model_reciprocal_risk,
    pitman_are,
    sigma_xy,
    uniform_entry,
    ybar,
)
from qitest.errors import DomainError, IntegrationFailure


@pytest.fixture(scope="module")
def exp_model():
    # constant hazards 0.3 everywhere, exponential(2) entries
    return AlternativeModel(entry=exponential_entry(2.0))


@pytest.fixture(scope="module")
def exp_tables(exp_model):
    return _ModelTables(exp_model)


class TestEntryDensity:
    def test_closed_form_value(self, exp_model, exp_tables):
        got = conditional_entry_density(exp_model, t=1.0, l=0.5, _tables=exp_tables)
        want = 2 * math.exp(-1.0) / (1 - math.exp(-2.0))
        assert got == pytest.approx(want, rel=1e-6)

    def test_outside_support_is_zero(self, exp_model, exp_tables):
        assert conditional_entry_density(exp_model, 1.0, 1.0, _tables=exp_tables) == 0.0
        assert conditional_entry_density(exp_model, 1.0, 1.7, _tables=exp_tables) == 0.0
        assert conditional_entry_density(exp_model, 1.0, -0.1, _tables=exp_tables) == 0.0

    def test_rejects_nonpositive_time(self, exp_model):
        with pytest.raises(DomainError):
            conditional_entry_density(exp_model, 0.0, 0.5)

    @pytest.mark.parametrize("psi0,psi1,t", [(0.0, 0.0, 1.0), (0.0, 1.0, 0.7), (1.0, 1.0, 2.5)])
    def test_normalization(self, psi0, psi1, t):
        model = model_linear_risk(exponential_entry(2.0), psi0, psi1)
        tables = _ModelTables(model)
        val = quad(lambda l: conditional_entry_density(model, t, l, _tables=tables),
                   0.0, t, limit=300, epsabs=1e-11, epsrel=1e-10)[0]
        assert val == pytest.approx(1.0, abs=1e-8)


class TestYbar:
    def test_closed_form_value(self, exp_model):
        want = math.exp(-0.3) * (1 - math.exp(-2.0))
        assert ybar(exp_model, 1.0) == pytest.approx(want, rel=1e-6)

    def test_vanishes_at_zero(self, exp_model, exp_tables):
        assert float(exp_tables.ybar(1e-9)) == pytest.approx(0.0, abs=1e-8)

    def test_matches_independent_quadrature(self):
        # nested-quadrature oracle straight from the defining double integral
        model = model_linear_risk(exponential_entry(2.0), psi0=1.0, psi1=1.0)
        gamma0 = 1.3
        gamma1 = 1.3

        def oracle(t):
            def integrand(l):
                return (2 * math.exp(-2 * l)) * math.exp(-gamma0 * l - gamma1 * (t - l))

            return quad(integrand, 0.0, t, epsabs=1e-12)[0]

        for t in (0.4, 1.3, 3.7):
            assert ybar(model, t) == pytest.approx(oracle(t), rel=1e-6)

    def test_nonincreasing_factor(self, exp_model, exp_tables):
        ts = np.linspace(1.0, 20.0, 30)
        vals = [float(exp_tables.ybar(t)) for t in ts]
        # beyond the entry bulk the at-risk fraction decays
        assert all(a >= b for a, b in zip(vals[10:], vals[11:]))


class TestSigmaXY:
    def test_constant_process(self, exp_model):
        assert sigma_xy(exp_model, 1.0, lambda l: np.ones_like(l), lambda l: l) == pytest.approx(0.0, abs=1e-12)

    def test_truncated_exponential_variance(self, exp_model):
        got = sigma_xy(exp_model, 1.0, lambda l: l, lambda l: l)
        lam, t = 2.0, 1.0
        z = 1 - math.exp(-lam * t)
        m1 = (1 - (1 + lam * t) * math.exp(-lam * t)) / (lam * z)
        m2 = (2 - (2 + 2 * lam * t + (lam * t) ** 2) * math.exp(-lam * t)) / (lam**2 * z)
        assert got == pytest.approx(m2 - m1 * m1, rel=1e-7)

    def test_reflection_antisymmetry(self, exp_model, exp_tables):
        f = exp_model.entry.cdf
        a = sigma_xy(exp_model, 2.0, lambda l: l, lambda l: 1 - f(l), _tables=exp_tables)
        b = sigma_xy(exp_model, 2.0, lambda l: l, f, _tables=exp_tables)
        assert a == pytest.approx(-b, rel=1e-9)

    def test_variance_nonnegative(self, exp_model, exp_tables):
        for t in (0.3, 1.0, 4.0):
            for proc in (lambda l: l, np.sin, exp_model.entry.cdf):
                assert sigma_xy(exp_model, t, proc, proc, _tables=exp_tables) >= 0.0


class TestEfficacy:
    def test_uniform_rank_equals_linear_exactly(self):
        model = model_linear_risk(uniform_entry(), 0.0, 1.0)
        rank = efficacy(model, "rank")
        linear = efficacy(model, "linear")
        assert rank.efficacy == linear.efficacy

    def test_beta_cancels_in_ratios(self):
        base = model_linear_risk(exponential_entry(2.0), 0.0, 1.0)
        scaled = AlternativeModel(entry=base.entry, psi0=0.0, psi1=1.0,
                                  a_fun=base.a_fun, beta=3.7)
        r1 = pitman_are(base, "linear", "sign")
        r2 = pitman_are(scaled, "linear", "sign")
        assert r1 == pytest.approx(r2, rel=1e-12)
        assert efficacy(scaled, "linear").mu_inf == pytest.approx(
            3.7 * efficacy(base, "linear").mu_inf, rel=1e-12)

    def test_self_ratio_is_one(self):
        model = model_linear_risk(exponential_entry(2.0), 0.0, 0.0)
        assert pitman_are(model, "rank", "rank") == pytest.approx(1.0)

    def test_sign_variance_matches_uniform_rank_limit(self, exp_model):
        # the within-risk-set scaled rank has limiting variance 1/12
        res = efficacy(AlternativeModel(entry=exp_model.entry), "sign")
        tables = _ModelTables(exp_model)
        from qitest.efficacy import _cov_var, _moment_tables

        _moment_tables(tables, exp_model, regularize=False)
        for ub in (0.5, 2.0, 8.0):
            _, var = _cov_var(tables, EfficacyTest.SIGN_SIGN, ub)
            assert var == pytest.approx(1 / 12, rel=1e-5)
        assert res.sigma2_inf > 0

    def test_divergent_covariate_raises_without_regularization(self):
        model = model_reciprocal_risk(exponential_entry(2.0), 0.0, 1.0)
        with pytest.raises(IntegrationFailure, match="not integrable"):
            efficacy(model, "linear")

    def test_divergent_covariate_has_regularized_value(self):
        model = model_reciprocal_risk(exponential_entry(2.0), 0.0, 1.0)
        res = efficacy(model, "linear", regularize=True)
        assert math.isfinite(res.efficacy) and res.efficacy > 0

    def test_published_linear_covariate_cells(self):
        # exponential entries: censored-column ratios against the sign/sign
        # member, compared to the published table at its stated 5% slack
        model = model_linear_risk(exponential_entry(2.0), 0.0, 1.0)
        assert pitman_are(model, "linear", "sign") == pytest.approx(1.800, rel=0.05)
        model11 = model_linear_risk(exponential_entry(2.0), 1.0, 1.0)
        assert pitman_are(model11, "rank", "sign") == pytest.approx(1.325, rel=0.05)

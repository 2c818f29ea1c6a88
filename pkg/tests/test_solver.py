import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_forms, diagonal_tensor, lambda_error_bound, random_dense
from fcgeig.bform import DiagPower, Identity2
from fcgeig.errors import (
    InfeasiblePoint,
    LineSearchFailed,
    ZeroDirection,
    ZeroPreviousGradient,
    ZeroVector,
)
from fcgeig.generators import example1, example6
from fcgeig.manifold import Objective, Sense, feas_grad, feas_hess, h_eval
from fcgeig.solver import (
    SolveConfig,
    direction,
    initial_step,
    line_search,
    residual,
    solve,
)
from fcgeig.tensor import dense_from_entries


class TestConfig:
    def test_defaults(self):
        c = SolveConfig()
        assert (c.sigma1, c.sigma2, c.rho, c.tol) == (1e-4, 1e-4, 0.1, 1e-8)
        assert (c.max_iter, c.max_backtracks, c.delta) == (500, 60, None)

    @pytest.mark.parametrize(
        "kw",
        [{"sigma1": 0.0}, {"sigma1": 1.0}, {"sigma2": 0.0}, {"rho": 1.0}, {"tol": 0.0},
         {"max_iter": -1}, {"delta": -0.5}],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            SolveConfig(**kw)


class TestDirection:
    def test_first(self):
        np.testing.assert_array_equal(direction([1.0, 2.0], None, None, 0), [-1.0, -2.0])

    def test_worked(self):
        d = direction([0.0, 2.0], [1.0, 0.0], [-1.0, 0.0], 1)
        np.testing.assert_array_equal(d, [-4.0, -2.0])
        assert d @ np.array([0.0, 2.0]) == -4.0

    def test_orthogonal(self):
        # F_k orthogonal to y = F_k - F_prev and to d_prev
        F_prev = np.array([1.0, 0.0, 1.0])
        F_k = np.array([0.0, 1.0, 0.0])
        F_prev = F_prev + F_k  # then y = -(1, 0, 1), F_k . y = 0
        d = direction(F_k, F_prev, np.array([3.0, 0.0, 1.0]), 4)
        np.testing.assert_allclose(d, -F_k)

    def test_zero_previous(self):
        with pytest.raises(ZeroPreviousGradient):
            direction([1.0, 0.0], [0.0, 0.0], [1.0, 1.0], 2)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 30))
    def test_descent_identity(self, seed, n):
        g = np.random.default_rng(seed)
        F, Fp, dp = g.standard_normal((3, n)) * g.lognormal(0, 2, 3)[:, None]
        d = direction(F, Fp, dp, 1)
        FF = F @ F
        # rounding is relative to the largest term in d, not to d itself
        # (for n = 1 the beta and theta terms cancel exactly)
        y = F - Fp
        terms = np.abs(F @ y / (Fp @ Fp) * dp) + np.abs(F @ dp / (Fp @ Fp) * y)
        assert abs(d @ F + FF) <= 1e-12 * (FF + np.abs(F) @ terms)


class TestInitialStep:
    cfg = SolveConfig()

    def test_arithmetic(self):
        # F.d = -4 and d^T H d = 8
        F = np.array([2.0, 0.0])
        d = np.array([-2.0, 0.0])
        assert initial_step(F, d, 8.0, self.cfg) == 0.5
        assert initial_step(F, d, np.diag([2.0, 7.0]), self.cfg) == 0.5

    def test_fallback(self):
        assert initial_step([1.0, 0.0], [-1.0, 0.0], 0.0, self.cfg) == 1.0
        assert initial_step([1.0, 0.0], [-1.0, 0.0], 1e-15, self.cfg) == 1.0

    def test_constant(self):
        assert initial_step([1.0, 0.0], [-1.0, 0.0], 3.0, SolveConfig(delta=0.7)) == 0.7

    def test_clamped(self):
        assert initial_step([1e-6, 0.0], [-1e-6, 0.0], 1e9 * 1e-12, self.cfg) == pytest.approx(1e-9)
        assert initial_step([1e6, 0.0], [-1.0, 0.0], 1e-13, self.cfg) == 1e10
        assert initial_step([1e-20, 0.0], [-1.0, 0.0], 1.0, self.cfg) == 1e-10

    def test_zero_direction(self):
        with pytest.raises(ZeroDirection):
            initial_step([1.0, 0.0], [0.0, 0.0], 1.0, self.cfg)


class TestLineSearch:
    def scan(self, obj, x, F, d, delta, cfg):
        """Independent scalar scan of h along the retraction curve."""
        Fd, dd = F @ d, d @ d
        f0 = h_eval(obj, x)
        for i in range(cfg.max_backtracks + 1):
            a = delta * cfg.rho**i
            y = obj.B.retract(x, d, a)
            if h_eval(obj, y) <= f0 + cfg.sigma1 * a * Fd - cfg.sigma2 * a * a * dd:
                return a, i
        return None

    @staticmethod
    def same(got, ref):
        assert got[1] == ref[1]
        assert got[0] == pytest.approx(ref[0], rel=1e-14)

    @pytest.mark.parametrize("sense", list(Sense))
    def test_example1_scan(self, sense):
        obj = Objective(example1(), Identity2(), sense)
        cfg = SolveConfig()
        x = np.array([1.0, 0.0, 0.0])
        F = feas_grad(obj, x)
        d = -F
        delta = initial_step(F, d, feas_hess(obj, x), cfg)
        self.same(line_search(obj, x, F, d, delta, cfg), self.scan(obj, x, F, d, delta, cfg))

    def test_forced_backtracks(self):
        obj = Objective(example1(), Identity2(), Sense.MAXIMIZE)
        cfg = SolveConfig()
        x = np.array([1.0, 0.0, 0.0])
        F = feas_grad(obj, x)
        alpha, i = line_search(obj, x, F, -F, 1e4, cfg)
        assert i > 0
        self.same((alpha, i), self.scan(obj, x, F, -F, 1e4, cfg))

    def test_accepts_delta(self):
        obj = Objective(example1(), Identity2())
        x = np.array([1.0, 0.0, 0.0])
        F = feas_grad(obj, x)
        assert line_search(obj, x, F, -F, 1e-3, SolveConfig()) == (1e-3, 0)

    def test_fails(self):
        obj = Objective(example1(), Identity2())
        x = np.array([1.0, 0.0, 0.0])
        F = feas_grad(obj, x)
        # ascent direction: no step satisfies sufficient decrease
        with pytest.raises(LineSearchFailed):
            line_search(obj, x, F, F, 1.0, SolveConfig(max_backtracks=5))

    def test_infeasible(self):
        obj = Objective(example1(), Identity2())
        with pytest.raises(InfeasiblePoint):
            line_search(obj, [1.0, 1.0, 0.0], np.ones(3), -np.ones(3), 1.0, SolveConfig())


def test_origin_trial_point_is_rejected_not_fatal():
    # d = -x / delta puts the first trial point at the origin; later trials are
    # positive multiples of x, where h is unchanged, so the search runs out of
    # backtracks instead of raising ZeroVector
    obj = Objective(diagonal_tensor(4, [1.0, 2.0]), Identity2())
    x = np.array([0.6, 0.8])
    F = feas_grad(obj, x)
    with pytest.raises(LineSearchFailed):
        line_search(obj, x, F, -x / 0.5, 0.5, SolveConfig(max_backtracks=3))


class TestResidual:
    def test_exact(self):
        obj = Objective(diagonal_tensor(4, [1.0, 2.0, 3.0]), Identity2())
        assert residual(obj, [0.0, 1.0, 0.0]) == 0.0

    def test_small_branch_is_F(self, gen):
        A, _ = random_dense(gen, 3, 4)
        A = -(-A)
        obj = Objective(A, Identity2())
        x = Identity2().normalize(gen.standard_normal(4))
        assert abs(A.txm(x)) <= 1.0
        assert residual(obj, x) == pytest.approx(np.linalg.norm(feas_grad(obj, x)), rel=1e-14)

    def test_scaled_branch(self):
        # order 2: A x = 2 x + eps u with u orthogonal to x, so lam = 2 and Res = eps / 2
        eps = 1e-3
        M = 2 * np.eye(2) + eps * np.array([[0.0, 1.0], [1.0, 0.0]])
        A = dense_from_entries(2, 2, [((1, 1), M[0, 0]), ((1, 2), M[0, 1]), ((2, 2), M[1, 1])])
        assert residual(Objective(A, Identity2()), [1.0, 0.0]) == pytest.approx(eps / 2, rel=1e-12)

    def test_uses_original_sign(self):
        A = diagonal_tensor(3, [2.0, 3.0])
        x = np.array([0.6, 0.8])
        assert residual(Objective(A, Identity2(), Sense.MAXIMIZE), x) == residual(
            Objective(A, Identity2()), x
        )


class TestSolve:
    def test_example1(self):
        obj = Objective(example1(), Identity2(), Sense.MAXIMIZE)
        g = np.random.default_rng(7)
        for _ in range(20):
            r = solve(obj, g.uniform(-1, 1, 3))
            assert r.converged and r.residual <= 1e-8
            assert round(r.lam, 4) in {-0.0006, 0.0180, 0.4306, 0.8730}

    def test_example6(self):
        obj = Objective(example6(), DiagPower(4), Sense.MAXIMIZE)
        g = np.random.default_rng(8)
        for _ in range(20):
            r = solve(obj, g.uniform(-1, 1, 3))
            assert r.converged
            assert round(r.lam, 4) in {0.8944, 1.9316, 2.3129}

    def test_diagonal_global_max(self):
        obj = Objective(diagonal_tensor(4, [1.0, 2.0, 3.0]), Identity2(), Sense.MAXIMIZE)
        r = solve(obj, [1e-3, -1e-3, 1.0])
        assert r.converged
        assert r.lam == pytest.approx(3.0, abs=1e-12)

    def test_start_already_converged(self):
        obj = Objective(diagonal_tensor(4, [1.0, 2.0, 3.0]), Identity2())
        r = solve(obj, [0.0, 5.0, 0.0])
        assert r.converged and r.iterations == 0 and r.lam == 2.0
        assert len(r.trace) == 1 and math.isnan(r.trace[0].alpha)

    def test_zero_start(self):
        with pytest.raises(ZeroVector):
            solve(Objective(example1(), Identity2()), np.zeros(3))

    def test_max_iter(self):
        r = solve(Objective(example1(), Identity2()), [1.0, 0.3, -0.2], SolveConfig(max_iter=1))
        assert not r.converged and r.iterations == 1
        assert "residual" in r.message

    def test_line_search_failure_is_reported(self):
        cfg = SolveConfig(delta=1e6, max_backtracks=2)
        r = solve(Objective(example1(), Identity2()), [1.0, 0.3, -0.2], cfg)
        assert not r.converged
        assert "backtracks" in r.message

    def test_trace_shape(self):
        r = solve(Objective(example1(), Identity2(), "max"), [1.0, 0.3, -0.2])
        assert [e.k for e in r.trace] == list(range(r.iterations + 1))
        assert r.trace[-1].res == r.residual
        assert all(e.alpha > 0 for e in r.trace[1:])


# -- invariants over random instances ------------------------------------------

@st.composite
def problems(draw):
    gen = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    dim = draw(st.integers(2, 5))
    order = draw(st.integers(3, 5))
    A, _ = random_dense(gen, order, dim)
    B = all_forms(gen, dim, order=draw(st.sampled_from([2, 4])))[draw(st.integers(0, 3))]
    return Objective(A, B, draw(st.sampled_from(list(Sense)))), gen.uniform(-1, 1, dim)


@settings(max_examples=30, deadline=None)
@given(problems())
def test_iterate_invariants(prob):
    obj, x0 = prob
    cfg = SolveConfig()
    states = []
    r = solve(obj, x0, cfg, callback=states.append)
    lams = [e.lam for e in r.trace]
    for s in states:
        assert abs(obj.B.phi(s.x) - 1.0) <= 1e-10
        FF = s.F @ s.F
        assert abs(s.d @ s.F + FF) <= 1e-12 * FF
        np.testing.assert_allclose(s.x_next, obj.B.retract(s.x, s.d, s.alpha), rtol=0, atol=1e-15)
        bound = cfg.sigma1 * s.alpha * (s.F @ s.d) - cfg.sigma2 * s.alpha**2 * (s.d @ s.d)
        assert s.decrease <= bound
        assert s.decrease < 0
    assert abs(obj.B.phi(r.x) - 1.0) <= 1e-10
    # lambda moves monotonically in the solve sense, up to the rounding error
    # of recomputing A x^m at each iterate
    sgn = 1.0 if obj.sense is Sense.MAXIMIZE else -1.0
    for s, a, b in zip(states, lams, lams[1:]):
        slack = lambda_error_bound(obj, s.x, a) + lambda_error_bound(obj, s.x_next, b)
        assert sgn * (b - a) >= -slack
    if r.converged:
        assert r.residual <= cfg.tol


def test_step_lengths_decay():
    gen = np.random.default_rng(3)
    checked = 0
    for _ in range(40):
        A, _ = random_dense(gen, 4, 6)
        obj = Objective(A, Identity2(), Sense.MAXIMIZE)
        steps = []
        r = solve(obj, gen.uniform(-1, 1, 6),
                  callback=lambda s: steps.append(s.alpha**2 * (s.d @ s.d)))
        if r.converged and r.iterations >= 20:
            assert np.mean(steps[-5:]) < np.mean(steps[:5])
            assert np.isfinite(sum(steps))
            checked += 1
    assert checked > 0

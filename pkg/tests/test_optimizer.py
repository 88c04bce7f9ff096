import math

import numpy as np
import pytest
from scipy import optimize

from finitekey.estimation import xi_relative
from finitekey.infomeasures import EmpiricalDistribution, relative_entropy
from finitekey.optimizer import (BASIS_LABELS, N_COORDS, AccurateProblem, OptimizationResult,
                                 Status, choi_from_coords, coords_from_choi, entropy_gradient,
                                 entropy_value, fd_gradient, min_ambiguity_accurate,
                                 phase1_feasible)
from finitekey.quantum import (BELL_PROJECTOR, AmplitudeDamping, ChoiMatrix,
                               choi_of, cond_entropy_x_given_e, sample_statistics,
                               stats_accurate)

from .conftest import random_choi

YY = BASIS_LABELS.index("YY")


def yy_scan_minimum(rho):
    """Minimum of S(X|E) over the one direction the statistic cannot see.

    The z/x statistics fix every coordinate except YY, so at exact statistics
    the feasible set is a segment of YY values keeping rho PSD.
    """
    x0 = coords_from_choi(rho)

    def psd_margin(y):
        x = x0.copy()
        x[YY] = y
        return np.linalg.eigvalsh(choi_from_coords(x))[0]

    lo = optimize.brentq(psd_margin, -1.0 - 1e-9, x0[YY]) if psd_margin(-1.0) < 0 else -1.0
    hi = optimize.brentq(psd_margin, x0[YY], 1.0 + 1e-9) if psd_margin(1.0) < 0 else 1.0

    def s(y):
        x = x0.copy()
        x[YY] = y
        return entropy_value(x)

    res = optimize.minimize_scalar(s, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    return min(res.fun, s(lo), s(hi))


def random_feasible_points(prob, rng, n):
    """Strictly feasible points spread over the (convex) region.

    From a point well inside the region, walk a uniform fraction of the way
    to the boundary along a random direction.
    """
    deep = phase1_feasible(AccurateProblem(prob.lambda_m, prob.xi_prime / 2), prob.xi_prime / 2)
    centre = deep.coords if deep.feasible else phase1_feasible(prob, prob.xi_prime).coords

    def inside(x):
        return np.linalg.eigvalsh(choi_from_coords(x))[0] > 0 and prob.divergence(x) < prob.xi_prime

    pts = []
    for _ in range(n):
        u = rng.normal(size=N_COORDS)
        u /= np.linalg.norm(u)
        lo, hi = 0.0, 4.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            lo, hi = (mid, hi) if inside(centre + mid * u) else (lo, mid)
        pts.append(centre + rng.uniform(0.0, 0.999) * lo * u)
    return pts


# ---------------------------------------------------------------- coordinates

def test_coordinates_are_affine_and_injective(rng):
    assert np.allclose(choi_from_coords(np.zeros(N_COORDS)), np.eye(4) / 4)
    for _ in range(20):
        rho = random_choi(rng)
        np.testing.assert_allclose(choi_from_coords(coords_from_choi(rho)), rho, atol=1e-14)
    flat = np.array([choi_from_coords(e).ravel() - np.eye(4).ravel() / 4 for e in np.eye(N_COORDS)])
    assert np.linalg.matrix_rank(flat) == N_COORDS


def test_coordinate_image_satisfies_equalities(rng):
    for _ in range(20):
        rho = choi_from_coords(rng.normal(size=N_COORDS))
        assert np.trace(rho) == pytest.approx(1.0, abs=1e-14)
        np.testing.assert_allclose(np.einsum("ajbj->ab", rho.reshape(2, 2, 2, 2)), np.eye(2) / 2, atol=1e-14)


def test_stats_map_matches_quantum_module(rng):
    prob = AccurateProblem(np.full(16, 1 / 16), 0.1)
    for _ in range(20):
        rho = random_choi(rng)
        np.testing.assert_allclose(prob.stats(coords_from_choi(rho)), stats_accurate(rho).probs, atol=1e-14)


# ---------------------------------------------------------------- derivatives

def _interior_points(rng, n=10):
    return [coords_from_choi(0.7 * random_choi(rng) + 0.3 * np.eye(4) / 4) for _ in range(n)]


def test_fd_gradient_two_vs_four_point(rng):
    for x in _interior_points(rng):
        g2 = fd_gradient(entropy_value, x, h=1e-6, stencil=2)
        g4 = fd_gradient(entropy_value, x, h=1e-4, stencil=4)
        assert np.linalg.norm(g2 - g4) <= 1e-4 * np.linalg.norm(g4)


def test_analytic_gradient_matches_fd(rng):
    for x in _interior_points(rng):
        g4 = fd_gradient(entropy_value, x, h=1e-4, stencil=4)
        np.testing.assert_allclose(entropy_gradient(x), g4, rtol=1e-6, atol=1e-8)


def test_divergence_derivatives_match_fd(rng, dep01):
    lam = sample_statistics(stats_accurate(dep01), 1000, 3)
    prob = AccurateProblem(lam, 0.1)
    for x in _interior_points(rng, 5):
        g, H = prob.divergence_derivatives(x)
        np.testing.assert_allclose(g, fd_gradient(prob.divergence, x, h=1e-5, stencil=4), rtol=1e-6, atol=1e-9)
        Hfd = np.array([fd_gradient(lambda z: prob.divergence_derivatives(z)[0][k], x, 1e-5, 4)
                        for k in range(N_COORDS)])
        np.testing.assert_allclose(H, Hfd, rtol=1e-5, atol=1e-7)


def test_divergence_agrees_with_infomeasures(rng, dep01):
    lam = sample_statistics(stats_accurate(dep01), 500, 9)
    prob = AccurateProblem(lam, 0.1)
    for x in _interior_points(rng, 5):
        assert prob.divergence(x) == pytest.approx(relative_entropy(lam.probs, prob.stats(x)), abs=1e-12)


def test_fd_gradient_rejects_stencil():
    with pytest.raises(ValueError):
        fd_gradient(entropy_value, np.zeros(N_COORDS), stencil=3)


# ---------------------------------------------------------------- phase I

def test_phase1_exact_statistic_is_feasible(benchmark_channel):
    lam = stats_accurate(choi_of(benchmark_channel))
    result = phase1_feasible(lam, 1e-6)
    assert result.feasible and result.divergence < 1e-6


@pytest.mark.parametrize("seed", range(8))
def test_phase1_sampled_statistic_is_feasible(seed, dep01):
    m = 10**6
    lam = sample_statistics(stats_accurate(dep01), m, seed)
    result = phase1_feasible(lam, xi_relative(m, 16, 1e-5))
    assert result.feasible


def test_phase1_point_mass_is_infeasible():
    probs = np.zeros(16)
    probs[5] = 1.0  # (z, x, 0, 1): a mismatched-basis outcome, at most 1/8 under any channel
    result = phase1_feasible(EmpiricalDistribution(probs), 1e-3)
    assert not result.feasible
    assert result.divergence >= 1e-3
    out = min_ambiguity_accurate(EmpiricalDistribution(probs), 1e-3)
    assert out.status is Status.INFEASIBLE and math.isnan(out.value)


# ---------------------------------------------------------------- phase II

def test_identity_channel_collapses_to_one():
    result = min_ambiguity_accurate(stats_accurate(BELL_PROJECTOR), 1e-9)
    assert result.status is Status.CONVERGED
    assert result.value == pytest.approx(1.0, abs=1e-3)


def test_exact_statistics_match_yy_scan(benchmark_channel):
    rho = choi_of(benchmark_channel)
    result = min_ambiguity_accurate(stats_accurate(rho), 1e-9)
    oracle = yy_scan_minimum(rho.entries)
    assert result.status is Status.CONVERGED
    assert result.value == pytest.approx(oracle, abs=1e-3)
    assert result.value <= cond_entropy_x_given_e(rho) + 1e-6


def test_depolarizing_exact_value(dep01):
    # the YY direction lets Eve reach 1 - h(0.05), below S(X|E) of the channel itself
    oracle = yy_scan_minimum(dep01.entries)
    assert oracle == pytest.approx(1 - 0.2863969571159561, abs=1e-8)
    assert min_ambiguity_accurate(stats_accurate(dep01), 1e-9).value == pytest.approx(oracle, abs=1e-3)


@pytest.fixture(scope="module")
def sampled_problem():
    rho = choi_of(AmplitudeDamping(0.1))
    m = 10**4
    lam = sample_statistics(stats_accurate(rho), m, 11)
    xi = xi_relative(m, 16, 1e-5)
    return lam, xi, min_ambiguity_accurate(lam, xi)


def test_minimizer_is_feasible(sampled_problem):
    lam, xi, result = sampled_problem
    assert result.status is Status.CONVERGED
    assert relative_entropy(lam.probs, stats_accurate(result.minimizer).probs) <= xi + 1e-8
    assert isinstance(result.minimizer, ChoiMatrix)
    assert result.value == pytest.approx(cond_entropy_x_given_e(result.minimizer), abs=1e-9)


def test_minimality_witness(sampled_problem, rng):
    lam, xi, result = sampled_problem
    prob = AccurateProblem(lam, xi)
    for x in random_feasible_points(prob, rng, 300):
        assert result.value <= entropy_value(x) + 1e-7


def test_restart_independence(sampled_problem, rng):
    lam, xi, result = sampled_problem
    prob = AccurateProblem(lam, xi)
    for x in random_feasible_points(prob, rng, 3):
        other = min_ambiguity_accurate(lam, xi, start=choi_from_coords(x))
        assert other.value == pytest.approx(result.value, abs=1e-5)


def test_matches_general_purpose_solver(sampled_problem):
    lam, xi, result = sampled_problem
    prob = AccurateProblem(lam, xi)
    x0 = coords_from_choi(result.minimizer) * 0.9
    cons = [{"type": "ineq", "fun": lambda z: xi - prob.divergence(z)},
            {"type": "ineq", "fun": lambda z: np.linalg.eigvalsh(choi_from_coords(z))[0]}]
    ref = optimize.minimize(entropy_value, x0, constraints=cons, method="SLSQP",
                            options={"ftol": 1e-12, "maxiter": 500})
    assert ref.fun >= result.value - 1e-5
    assert ref.fun == pytest.approx(result.value, abs=1e-3)


def test_radius_monotonicity(sampled_problem):
    lam, xi, _ = sampled_problem
    radii = [xi / 8, xi / 4, xi / 2, xi, 2 * xi]
    values = [min_ambiguity_accurate(lam, r).value for r in radii]
    for smaller_radius, larger_radius in zip(values, values[1:]):
        assert smaller_radius >= larger_radius - 1e-6


def test_start_must_be_strictly_feasible(sampled_problem):
    lam, xi, _ = sampled_problem
    with pytest.raises(ValueError, match="strictly feasible"):
        min_ambiguity_accurate(lam, xi, start=BELL_PROJECTOR)


def test_iteration_cap_reported(sampled_problem):
    lam, xi, result = sampled_problem
    # budget runs out in phase I: nothing is proven, so this is not "infeasible"
    early = min_ambiguity_accurate(lam, xi, max_iter=2)
    assert early.status is Status.MAX_ITERATIONS and math.isnan(early.value)
    # budget runs out in phase II
    late = min_ambiguity_accurate(lam, xi, max_iter=result.iterations // 2)
    assert late.status is Status.MAX_ITERATIONS and math.isfinite(late.value)


def test_problem_validation():
    with pytest.raises(ValueError):
        AccurateProblem(np.full(4, 0.25), 0.1)
    with pytest.raises(ValueError):
        AccurateProblem(np.full(16, 1 / 16), 0.0)


def test_result_text_round_trip(sampled_problem):
    _, _, result = sampled_problem
    back = OptimizationResult.from_text(result.to_text())
    assert back.value == result.value and back.status is result.status
    assert back.minimizer == result.minimizer
    np.testing.assert_array_equal(back.coords, result.coords)
    with pytest.raises(ValueError, match="missing"):
        OptimizationResult.from_text("value=0.5\n")

"""
Eve's worst-case ambiguity under accurate channel estimation.

Solves

    minimize    S(X|E)(rho)
    subject to  rho a real Choi matrix,  D(lambda_m || lambda_inf(rho)) <= xi'

with a log-barrier interior-point method. Real Choi matrices with Alice
marginal ``I/2`` form a 7-dimensional affine set; we use the coordinates

    rho(x) = I/4 + sum_k x_k P_k / 4,
    P_k in (I Z, I X, Z Z, Z X, X Z, X X, Y Y),

so ``x_k = tr(rho P_k)`` are Pauli correlators and ``x = 0`` is ``I/4``.
The trace and partial-trace constraints hold identically; positivity and
the divergence constraint are handled by the barrier

    S(x) - mu * (log(xi' - D(x)) + log det rho(x)).

Phase I minimizes ``D(x) - mu log det rho(x)`` from ``I/4`` until a
strictly feasible point appears. Gradients of the entropies are analytic
(matrix logarithms); the entropy Hessian is a central difference of that
gradient. The barrier parts have closed-form Hessians.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .infomeasures import LN2
from .quantum import SX, SY, SZ, I2, OUTCOME_VECTORS, ChoiMatrix, pinch_alice

log = logging.getLogger(__name__)

BASIS_LABELS = ("IZ", "IX", "ZZ", "ZX", "XZ", "XX", "YY")
_PAULI = {"I": I2, "X": SX, "Z": SZ, "Y": SY}
# (7, 4, 4); every element is real symmetric, traceless, with zero Bob-trace
BASIS = np.array([np.kron(_PAULI[a], _PAULI[b]).real / 4.0 for a, b in BASIS_LABELS])
N_COORDS = len(BASIS_LABELS)
CENTER = np.eye(4) / 4.0

# outcome probabilities are affine in the coordinates: stats(x) = STATS_JAC @ x + 1/16
STATS_JAC = 0.25 * np.einsum("ji,kil,jl->jk", OUTCOME_VECTORS, BASIS, OUTCOME_VECTORS)
STATS_OFFSET = 0.25 * np.einsum("ji,il,jl->j", OUTCOME_VECTORS, CENTER, OUTCOME_VECTORS)

MU_START = 1.0
MU_FINAL = 1e-9
MU_FACTOR = 10.0
STEP_TOL = 1e-8
GAP_TOL = 1e-7
MAX_ITER = 500
# log det of a 4x4 matrix plus one scalar constraint
BARRIER_DEGREE = 5


class Status(enum.Enum):
    CONVERGED = "converged"
    INFEASIBLE = "infeasible"
    MAX_ITERATIONS = "max_iterations"


class OptimizerError(RuntimeError):
    """Numerical breakdown inside the interior-point iterations."""


def choi_from_coords(x) -> np.ndarray:
    return CENTER + np.tensordot(np.asarray(x, dtype=float), BASIS, axes=1)


def coords_from_choi(rho) -> np.ndarray:
    a = np.asarray(rho, dtype=float)
    # tr(rho P_k) = 4 tr(rho B_k)
    return 4.0 * np.einsum("kij,ij->k", BASIS, a)


def _logm_sym(a: np.ndarray) -> tuple[np.ndarray, float]:
    """Natural log of a symmetric positive definite matrix, and its min eigenvalue."""
    w, v = np.linalg.eigh(a)
    if w[0] <= 0.0:
        raise np.linalg.LinAlgError("matrix is not positive definite")
    return (v * np.log(w)) @ v.T, float(w[0])


def entropy_gradient(x) -> np.ndarray:
    """Gradient of ``S(rho_XB) - S(rho_AB)`` in coordinates, in bits.

    The derivative of ``-tr(a log a)`` is ``-(log a + I)``; the identity part
    drops out because every basis direction is traceless.
    """
    rho = choi_from_coords(x)
    log_ab, _ = _logm_sym(rho)
    log_xb, _ = _logm_sym(pinch_alice(rho))
    g = log_ab - log_xb
    return np.einsum("kij,ij->k", BASIS, g) / LN2


def entropy_value(x) -> float:
    rho = choi_from_coords(x)
    w_ab = np.linalg.eigvalsh(rho)
    w_xb = np.linalg.eigvalsh(pinch_alice(rho))

    def _s(w):
        w = np.clip(w, 0.0, None)
        nz = w[w > 0]
        return float(-np.sum(nz * np.log(nz)))

    return (_s(w_xb) - _s(w_ab)) / LN2


def fd_gradient(fun: Callable[[np.ndarray], float], x, h: float = 1e-6,
                stencil: int = 2) -> np.ndarray:
    """Central finite-difference gradient with a 2- or 4-point stencil."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        if stencil == 2:
            g[k] = (fun(x + e) - fun(x - e)) / (2 * h)
        elif stencil == 4:
            g[k] = (-fun(x + 2 * e) + 8 * fun(x + e) - 8 * fun(x - e) + fun(x - 2 * e)) / (12 * h)
        else:
            raise ValueError("stencil must be 2 or 4")
    return g


def _entropy_hessian(x: np.ndarray, lmin: float) -> np.ndarray:
    # step shrinks with the smallest eigenvalue so rho +- h B_k stays definite
    h = min(1e-5, 1e-2 * lmin)
    H = np.empty((N_COORDS, N_COORDS))
    for k in range(N_COORDS):
        e = np.zeros(N_COORDS)
        e[k] = h
        H[:, k] = (entropy_gradient(x + e) - entropy_gradient(x - e)) / (2 * h)
    return 0.5 * (H + H.T)


@dataclass
class AccurateProblem:
    """Data of one accurate-estimation instance: observed type and radius."""

    lambda_m: np.ndarray
    xi_prime: float
    _support: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        lam = np.asarray(getattr(self.lambda_m, "probs", self.lambda_m), dtype=float)
        if lam.shape != (16,):
            raise ValueError(f"accurate statistics need 16 outcomes, got {lam.shape}")
        if self.xi_prime <= 0:
            raise ValueError(f"xi_prime must be positive, got {self.xi_prime}")
        self.lambda_m = lam
        self._support = lam > 0

    def stats(self, x) -> np.ndarray:
        return STATS_JAC @ np.asarray(x, dtype=float) + STATS_OFFSET

    def divergence(self, x) -> float:
        """``D(lambda_m || lambda_inf(rho(x)))`` in bits."""
        ell = self.stats(x)[self._support]
        lam = self.lambda_m[self._support]
        if np.any(ell <= 0):
            return math.inf
        return max(float(np.sum(lam * np.log(lam / ell))) / LN2, 0.0)

    def divergence_derivatives(self, x) -> tuple[np.ndarray, np.ndarray]:
        ell = self.stats(x)[self._support]
        lam = self.lambda_m[self._support]
        A = STATS_JAC[self._support]
        g = -(A.T @ (lam / ell)) / LN2
        H = (A.T * (lam / ell**2)) @ A / LN2
        return g, H


def _logdet_parts(x: np.ndarray) -> tuple[float, np.ndarray, np.ndarray, float]:
    """``log det rho``, its gradient and Hessian, and the min eigenvalue."""
    rho = choi_from_coords(x)
    w, v = np.linalg.eigh(rho)
    if w[0] <= 0:
        return -math.inf, None, None, float(w[0])
    inv = (v / w) @ v.T
    ib = np.einsum("ij,kjl->kil", inv, BASIS)  # rho^{-1} B_k
    g = np.einsum("kii->k", ib)
    H = np.einsum("kij,lji->kl", ib, ib)
    return float(np.sum(np.log(w))), g, H, float(w[0])


def _newton(fun, derivs, x0: np.ndarray, max_iter: int,
            stop: Callable[[np.ndarray], bool] | None = None) -> tuple[np.ndarray, int, bool]:
    """Damped Newton on a barrier function; ``fun`` is +inf off the domain.

    Returns the final point, the number of iterations and whether ``stop``
    fired.
    """
    x = x0.copy()
    fx = fun(x)
    if not math.isfinite(fx):
        raise OptimizerError("Newton started outside the barrier domain")
    for it in range(1, max_iter + 1):
        g, H = derivs(x)
        if not (np.all(np.isfinite(g)) and np.all(np.isfinite(H))):
            raise OptimizerError("non-finite derivatives at an interior point")
        try:
            L = np.linalg.cholesky(H)
            dx = -np.linalg.solve(L.T, np.linalg.solve(L, g))
        except np.linalg.LinAlgError:
            w, v = np.linalg.eigh(H)
            w = np.maximum(w, 1e-12 * max(1.0, abs(w[-1])))
            dx = -(v / w) @ (v.T @ g)
        decrement2 = float(-g @ dx)
        if decrement2 / 2.0 <= 1e-14:
            return x, it - 1, False
        t = 1.0
        slope = g @ dx
        while True:
            x_new = x + t * dx
            f_new = fun(x_new)
            if math.isfinite(f_new) and f_new <= fx + 0.25 * t * slope:
                break
            t *= 0.5
            if t < 1e-12:
                # no further decrease resolvable in floating point
                return x, it, False
        step = t * np.linalg.norm(dx)
        x, fx = x_new, f_new
        if stop is not None and stop(x):
            return x, it, True
        if step < STEP_TOL:
            return x, it, False
    return x, max_iter, False


@dataclass(frozen=True)
class Phase1Result:
    """Outcome of the feasibility search.

    ``feasible`` is False when the smallest divergence reachable by any real
    Choi matrix is not below ``xi_prime``, or when the iteration budget ran
    out first (``exhausted``), in which case nothing was proven.
    """

    feasible: bool
    coords: np.ndarray
    divergence: float
    iterations: int
    exhausted: bool = False

    @property
    def choi(self) -> ChoiMatrix:
        return ChoiMatrix(choi_from_coords(self.coords))


def strict_margin(xi_prime: float) -> float:
    return min(1e-9, 0.1 * xi_prime)


def phase1_feasible(lambda_m, xi_prime: float, max_iter: int = MAX_ITER) -> Phase1Result:
    """Find a real Choi matrix strictly inside the relative-entropy ball."""
    prob = lambda_m if isinstance(lambda_m, AccurateProblem) else AccurateProblem(lambda_m, xi_prime)
    target = prob.xi_prime - strict_margin(prob.xi_prime)
    x = np.zeros(N_COORDS)
    d = prob.divergence(x)
    if d < target:
        return Phase1Result(True, x, d, 0)

    mu = MU_START
    total = 0
    while True:
        def fun(z, mu=mu):
            ld, _, _, _ = _logdet_parts(z)
            if not math.isfinite(ld):
                return math.inf
            return prob.divergence(z) - mu * ld

        def derivs(z, mu=mu):
            _, gl, Hl, _ = _logdet_parts(z)
            gd, Hd = prob.divergence_derivatives(z)
            return gd - mu * gl, Hd + mu * Hl

        x, its, hit = _newton(fun, derivs, x, max_iter - total,
                              stop=lambda z: prob.divergence(z) < target)
        total += its
        d = prob.divergence(x)
        if hit or d < target:
            return Phase1Result(True, x, d, total)
        if not math.isfinite(d):
            raise OptimizerError("divergence diverged during phase I")
        # the central-path point certifies min D >= d - 4 mu
        if d - 4.0 * mu >= prob.xi_prime or mu < 1e-15:
            return Phase1Result(False, x, d, total)
        if total >= max_iter:
            return Phase1Result(False, x, d, total, exhausted=True)
        mu /= MU_FACTOR


@dataclass(frozen=True)
class OptimizationResult:
    """Minimum of ``S(X|E)`` over the region, with the point attaining it."""

    minimizer: ChoiMatrix
    value: float
    iterations: int
    status: Status
    coords: np.ndarray
    divergence: float
    xi_prime: float

    def to_text(self) -> str:
        """``key=value`` lines; entries of ``choi`` are row-major."""
        lines = [
            f"value={self.value!r}",
            f"status={self.status.value}",
            f"iterations={self.iterations}",
            f"xi_prime={self.xi_prime!r}",
            f"divergence={self.divergence!r}",
            f"basis={','.join(BASIS_LABELS)}",
            "coords=" + " ".join(repr(float(c)) for c in self.coords),
            "choi=" + self.minimizer.to_text(),
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "OptimizationResult":
        fields = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ValueError(f"malformed result line {line!r}")
            fields[key.strip()] = val.strip()
        try:
            return cls(
                minimizer=ChoiMatrix.from_text(fields["choi"]),
                value=float(fields["value"]),
                iterations=int(fields["iterations"]),
                status=Status(fields["status"]),
                coords=np.array([float(t) for t in fields["coords"].split()]),
                divergence=float(fields["divergence"]),
                xi_prime=float(fields["xi_prime"]),
            )
        except KeyError as exc:
            raise ValueError(f"result record is missing {exc.args[0]!r}") from None


def _barrier_functions(prob: AccurateProblem, mu: float):
    def fun(z):
        ld, _, _, _ = _logdet_parts(z)
        if not math.isfinite(ld):
            return math.inf
        slack = prob.xi_prime - prob.divergence(z)
        if slack <= 0:
            return math.inf
        return entropy_value(z) - mu * (math.log(slack) + ld)

    def derivs(z):
        _, gl, Hl, lmin = _logdet_parts(z)
        gd, Hd = prob.divergence_derivatives(z)
        slack = prob.xi_prime - prob.divergence(z)
        gs = entropy_gradient(z)
        Hs = _entropy_hessian(z, lmin)
        g = gs + mu * (gd / slack - gl)
        H = Hs + mu * (Hd / slack + np.outer(gd, gd) / slack**2 + Hl)
        return g, H

    return fun, derivs


def min_ambiguity_accurate(lambda_m, xi_prime: float, start=None,
                           mu_final: float = MU_FINAL,
                           max_iter: int = MAX_ITER) -> OptimizationResult:
    """Minimize ``S(X|E)`` over real Choi matrices in the ball
    ``D(lambda_m || lambda_inf(rho)) <= xi_prime``.

    Parameters
    ----------
    lambda_m : EmpiricalDistribution or array_like
        Observed 16-outcome statistic (see ``quantum.stats_accurate``).
    xi_prime : float
        Radius of the relative-entropy ball, in bits.
    start : ChoiMatrix or array_like, optional
        Strictly feasible starting point. Phase I is run when omitted.

    Returns
    -------
    OptimizationResult
        ``value`` is NaN when the region is empty.
    """
    prob = AccurateProblem(lambda_m, xi_prime)
    if start is None:
        p1 = phase1_feasible(prob, xi_prime, max_iter=max_iter)
        total = p1.iterations
        if not p1.feasible:
            status = Status.MAX_ITERATIONS if p1.exhausted else Status.INFEASIBLE
            return OptimizationResult(p1.choi, math.nan, total, status,
                                      p1.coords, p1.divergence, xi_prime)
        x = p1.coords
    else:
        x = coords_from_choi(start)
        total = 0
        ld, _, _, _ = _logdet_parts(x)
        if not math.isfinite(ld) or not prob.divergence(x) < xi_prime:
            raise ValueError("start point is not strictly feasible")

    status = Status.CONVERGED
    mu = MU_START
    while True:
        fun, derivs = _barrier_functions(prob, mu)
        x, its, _ = _newton(fun, derivs, x, max(max_iter - total, 1))
        total += its
        if total >= max_iter:
            status = Status.MAX_ITERATIONS
            break
        if mu <= mu_final * (1 + 1e-12):
            break
        mu /= MU_FACTOR
    if status is Status.CONVERGED and BARRIER_DEGREE * mu > GAP_TOL:
        status = Status.MAX_ITERATIONS
    value = entropy_value(x)
    if not math.isfinite(value):
        raise OptimizerError("objective is not finite at the final iterate")
    log.debug("accurate optimum %.10f after %d iterations (%s)", value, total, status.value)
    return OptimizationResult(ChoiMatrix(choi_from_coords(x)), value, total, status,
                              x, prob.divergence(x), xi_prime)

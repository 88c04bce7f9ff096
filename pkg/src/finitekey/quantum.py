"""
Qubit channels as real 4x4 Choi matrices, and the measurement statistics
and entropies computed from them.

Basis order is ``|00>, |01>, |10>, |11>`` with Alice's qubit first. A Choi
matrix is ``(id x E)(|psi><psi|)`` for the Bell state
``|psi> = (|00> + |11>) / sqrt(2)``, so Alice's marginal is always ``I/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .infomeasures import EmpiricalDistribution, shannon_entropy

SYM_TOL = 1e-10
PSD_TOL = 1e-9
TRACE_TOL = 1e-10
MARGINAL_TOL = 1e-9

I2 = np.eye(2)
SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
SY = np.array([[0.0, -1j], [1j, 0.0]])
# Bloch components in (Z, X, Y) order
PAULIS_ZXY = (SZ, SX, SY)

BELL = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)
BELL_PROJECTOR = np.outer(BELL, BELL)

# measurement bases: index 0 is z, index 1 is x; rows are the bit-0 / bit-1 vectors
BASIS_VECTORS = (
    np.eye(2),
    np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0),
)
BASIS_NAMES = ("z", "x")


def accurate_outcomes() -> list[tuple[str, str, int, int]]:
    """Labels ``(alice_basis, bob_basis, a, b)`` of the 16-outcome alphabet,
    in the order used by :func:`stats_accurate`."""
    return [(BASIS_NAMES[ba], BASIS_NAMES[bb], a, b)
            for ba in range(2) for bb in range(2) for a in range(2) for b in range(2)]


def _outcome_vectors() -> np.ndarray:
    vecs = []
    for ba in range(2):
        for bb in range(2):
            for a in range(2):
                for b in range(2):
                    vecs.append(np.kron(BASIS_VECTORS[ba][a], BASIS_VECTORS[bb][b]))
    return np.array(vecs)


# (16, 4) array; row k is the product vector |a_{beta_A} b_{beta_B}> of outcome k
OUTCOME_VECTORS = _outcome_vectors()


class NotCompletelyPositive(ValueError):
    """Raised when a Bloch map does not induce a valid Choi matrix."""


def partial_trace_bob(rho: np.ndarray) -> np.ndarray:
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    return np.einsum("ajbj->ab", r)


def pinch_alice(rho: np.ndarray) -> np.ndarray:
    """Dephase Alice's qubit in the z basis (zero the off-diagonal 2x2 blocks)."""
    out = np.array(rho, dtype=float, copy=True)
    out[:2, 2:] = 0.0
    out[2:, :2] = 0.0
    return out


@dataclass(frozen=True)
class ChoiMatrix:
    """Validated real Choi matrix of a qubit channel."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.entries, dtype=float)
        if a.shape == (16,):
            a = a.reshape(4, 4)
        if a.shape != (4, 4):
            raise ValueError(f"Choi matrix must be 4x4, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("Choi matrix entries must be finite")
        if np.max(np.abs(a - a.T)) > SYM_TOL:
            raise ValueError("Choi matrix is not symmetric")
        a = 0.5 * (a + a.T)
        if abs(np.trace(a) - 1.0) > TRACE_TOL:
            raise ValueError(f"Choi matrix trace is {np.trace(a)!r}, expected 1")
        if np.max(np.abs(partial_trace_bob(a) - 0.5 * I2)) > MARGINAL_TOL:
            raise ValueError("partial trace over Bob is not I/2 (channel not trace preserving)")
        lmin = float(np.linalg.eigvalsh(a)[0])
        if lmin < -PSD_TOL:
            raise ValueError(f"Choi matrix is not positive semidefinite (min eigenvalue {lmin:.3e})")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChoiMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash(self.entries.tobytes())

    def to_text(self) -> str:
        """Sixteen whitespace-separated entries, row-major."""
        return " ".join(repr(float(v)) for v in self.entries.ravel())

    @classmethod
    def from_text(cls, text: str) -> "ChoiMatrix":
        tokens = text.split()
        if len(tokens) != 16:
            raise ValueError(f"expected 16 Choi matrix entries, got {len(tokens)}")
        return cls(np.array([float(t) for t in tokens]).reshape(4, 4))


@dataclass(frozen=True)
class BlochAffineMap:
    """Qubit channel acting on Bloch vectors ``theta -> M theta + t``.

    Components are ordered ``(theta_Z, theta_X, theta_Y)``.
    """

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self) -> None:
        M = np.array(self.linear, dtype=float)
        t = np.array(self.translation, dtype=float)
        if M.shape != (3, 3) or t.shape != (3,):
            raise ValueError("linear must be 3x3 and translation a 3-vector")
        object.__setattr__(self, "linear", M)
        object.__setattr__(self, "translation", t)

    def apply(self, operator: np.ndarray) -> np.ndarray:
        """Action of the channel on an arbitrary 2x2 operator."""
        op = np.asarray(operator)
        tr = np.trace(op)
        theta = np.array([np.trace(op @ P) for P in PAULIS_ZXY])
        out_theta = self.linear @ theta + tr * self.translation
        return 0.5 * (tr * I2 + sum(c * P for c, P in zip(out_theta, PAULIS_ZXY)))


@dataclass(frozen=True)
class AmplitudeDamping:
    q: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"damping parameter must lie in [0, 1], got {self.q}")


@dataclass(frozen=True)
class Depolarizing:
    q: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"depolarizing parameter must lie in [0, 1], got {self.q}")


@dataclass(frozen=True)
class Explicit:
    choi: ChoiMatrix


ChannelSpec = Union[AmplitudeDamping, Depolarizing, Explicit]


def choi_from_bloch(bloch: BlochAffineMap) -> ChoiMatrix:
    """Choi matrix ``sum_ij |i><j| x E(|i><j|) / 2`` of a Bloch affine map."""
    rho = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            unit = np.zeros((2, 2))
            unit[i, j] = 1.0
            rho += 0.5 * np.kron(unit, bloch.apply(unit))
    if np.max(np.abs(rho.imag)) > SYM_TOL:
        raise ValueError("Bloch map induces a complex Choi matrix; only real ones are supported")
    rho = rho.real
    lmin = float(np.linalg.eigvalsh(0.5 * (rho + rho.T))[0])
    if lmin < -PSD_TOL:
        raise NotCompletelyPositive(f"map is not completely positive (min Choi eigenvalue {lmin:.3e})")
    return ChoiMatrix(rho)


def amplitude_damping_bloch(q: float) -> BlochAffineMap:
    s = math.sqrt(1.0 - q)
    return BlochAffineMap(np.diag([1.0 - q, s, s]), np.array([q, 0.0, 0.0]))


def depolarizing_bloch(q: float) -> BlochAffineMap:
    return BlochAffineMap((1.0 - q) * np.eye(3), np.zeros(3))


def choi_of(spec: ChannelSpec) -> ChoiMatrix:
    if isinstance(spec, AmplitudeDamping):
        return choi_from_bloch(amplitude_damping_bloch(spec.q))
    if isinstance(spec, Depolarizing):
        return ChoiMatrix((1.0 - spec.q) * BELL_PROJECTOR + spec.q * np.eye(4) / 4.0)
    if isinstance(spec, Explicit):
        return ChoiMatrix(spec.choi.entries)
    raise TypeError(f"unknown channel spec {spec!r}")


def eigenvalues_sym4(matrix) -> np.ndarray:
    """Eigenvalues of a real symmetric 4x4 matrix, in descending order."""
    a = np.asarray(matrix, dtype=float)
    if a.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {a.shape}")
    if np.max(np.abs(a - a.T)) > SYM_TOL:
        raise ValueError("matrix is not symmetric")
    return np.linalg.eigvalsh(0.5 * (a + a.T))[::-1]


def von_neumann_entropy(matrix) -> float:
    """Von Neumann entropy in bits; tiny negative eigenvalues are clamped."""
    w = np.clip(eigenvalues_sym4(matrix), 0.0, None)
    return shannon_entropy(w / w.sum())


def cond_entropy_x_given_e(rho) -> float:
    """Eve's ambiguity about Alice's z-basis bit, ``S(rho_XB) - S(rho_AB)``."""
    a = np.asarray(rho, dtype=float)
    return von_neumann_entropy(pinch_alice(a)) - von_neumann_entropy(a)


def stats_conventional(rho) -> EmpiricalDistribution:
    """``(p_ph, 1 - p_ph)``: x-basis disagreement probability of the Choi state."""
    a = np.asarray(rho, dtype=float)
    probs = np.einsum("ki,ij,kj->k", OUTCOME_VECTORS, a, OUTCOME_VECTORS)
    # outcomes 13 and 14 are (x, x, 0, 1) and (x, x, 1, 0)
    p_ph = float(np.clip(probs[13] + probs[14], 0.0, 1.0))
    return EmpiricalDistribution(np.array([p_ph, 1.0 - p_ph]), 0)


def stats_accurate_array(rho) -> np.ndarray:
    """Unvalidated version of :func:`stats_accurate` for use inside loops."""
    a = np.asarray(rho, dtype=float)
    return 0.25 * np.einsum("ki,ij,kj->k", OUTCOME_VECTORS, a, OUTCOME_VECTORS)


def stats_accurate(rho) -> EmpiricalDistribution:
    """Joint distribution over the 16 outcomes ``(beta_A, beta_B, a, b)``.

    Bases and Alice's bit are uniform, so each entry is
    ``(1/4) (1/2) Pr[b | a, beta_A, beta_B]`` with
    ``Pr[b | a, ...] = 2 <a b| rho |a b>``.
    """
    probs = np.clip(stats_accurate_array(rho), 0.0, None)
    return EmpiricalDistribution(probs / probs.sum(), 0)


def sample_statistics(dist: EmpiricalDistribution, m: int,
                      seed: int | np.random.SeedSequence) -> EmpiricalDistribution:
    """Type of ``m`` i.i.d. draws from ``dist``; deterministic in ``seed``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(m, dist.probs)
    return EmpiricalDistribution(counts / m, m)

"""Kraus-form quantum channels: validation, action, composition, Choi matrices.

A channel is a finite list of dim_out x dim_in Kraus operators E_j acting as
rho -> sum_j E_j rho E_j†. Trace preservation means sum_j E_j† E_j equals the
identity; the Frobenius norm of the difference is the completeness defect.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError
from .linalg import DEFAULT_ATOL, dag, kron

ID2 = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


@dataclass(frozen=True)
class Channel:
    """Immutable Kraus-form channel."""

    kraus: tuple

    def __post_init__(self):
        if not self.kraus:
            raise DimensionError("channel needs at least one Kraus operator")
        ops = []
        shape = None
        for i, op in enumerate(self.kraus):
            op = np.asarray(op, dtype=np.complex128)
            if op.ndim != 2:
                raise DimensionError(f"Kraus operator {i} is not a matrix")
            if shape is None:
                shape = op.shape
            elif op.shape != shape:
                raise DimensionError(
                    f"Kraus operator {i} has shape {op.shape}, expected {shape}"
                )
            op = op.copy()
            op.flags.writeable = False
            ops.append(op)
        object.__setattr__(self, "kraus", tuple(ops))

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]


@dataclass(frozen=True)
class ChannelReport:
    trace_preserving: bool
    trace_nonincreasing: bool
    defect: float


def validate(ch: Channel, atol: float = DEFAULT_ATOL) -> ChannelReport:
    """Completeness check: defect = ||sum E†E - 1||_F."""
    g = sum(dag(e) @ e for e in ch.kraus)
    defect = float(np.linalg.norm(g - np.eye(ch.dim_in)))
    top = float(np.linalg.eigvalsh((g + dag(g)) / 2).max())
    return ChannelReport(
        trace_preserving=defect <= atol,
        trace_nonincreasing=top <= 1.0 + atol,
        defect=defect,
    )


def require_valid(
    ch: Channel, atol: float = DEFAULT_ATOL, allow_trace_decreasing: bool = False
) -> ChannelReport:
    """Gate for operations that assume a physical channel.

    Trace-preserving channels always pass. Trace-decreasing ones pass only
    when explicitly allowed (downstream code renormalizes); trace-increasing
    Kraus sets are always rejected.
    """
    report = validate(ch, atol)
    if report.trace_preserving:
        return report
    if not report.trace_nonincreasing:
        raise ValueError(
            f"Kraus set increases trace (completeness defect {report.defect:.3e})"
        )
    if not allow_trace_decreasing:
        raise ValueError(
            f"channel is trace decreasing (defect {report.defect:.3e}); "
            "pass allow_trace_decreasing=True to proceed with renormalization"
        )
    return report


def apply(ch: Channel, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise DimensionError(
            f"state shape {rho.shape} does not match channel input {ch.dim_in}"
        )
    out = np.zeros((ch.dim_out, ch.dim_out), dtype=np.complex128)
    for e in ch.kraus:
        out += e @ rho @ dag(e)
    return out


def compose(second: Channel, first: Channel) -> Channel:
    """Channel acting as second after first; Kraus products R_j E_k."""
    if first.dim_out != second.dim_in:
        raise DimensionError(
            f"cannot compose: first output {first.dim_out} != second input {second.dim_in}"
        )
    return Channel(tuple(r @ e for r in second.kraus for e in first.kraus))


def choi(ch: Channel) -> np.ndarray:
    """Unnormalized Choi matrix (1 tensor ch) applied to sum_ij |ii><jj|."""
    d_in, d_out = ch.dim_in, ch.dim_out
    c = np.zeros((d_in * d_out, d_in * d_out), dtype=np.complex128)
    for e in ch.kraus:
        w = e.T.reshape(-1)  # component (i, a) = E[a, i]
        c += np.outer(w, w.conj())
    return c


def choi_distance(a: Channel, b: Channel) -> float:
    """Frobenius distance between Choi matrices; zero iff the maps agree."""
    if a.dim_in != b.dim_in or a.dim_out != b.dim_out:
        raise DimensionError("channels act on different spaces")
    return float(np.linalg.norm(choi(a) - choi(b)))


def identity(dim: int) -> Channel:
    if dim < 1:
        raise DimensionError("dim must be >= 1")
    return Channel((np.eye(dim, dtype=np.complex128),))


def unitary(u: np.ndarray) -> Channel:
    """Channel conjugating by a single unitary."""
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {u.shape}")
    defect = np.linalg.norm(dag(u) @ u - np.eye(u.shape[0]))
    if defect > DEFAULT_ATOL:
        raise DimensionError(f"matrix is not unitary (defect {defect:.3e})")
    return Channel((u,))


def bit_flip(p: float) -> Channel:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"flip probability must be in [0, 1], got {p}")
    return Channel((np.sqrt(1 - p) * ID2, np.sqrt(p) * PAULI_X))


def phase_flip(p: float) -> Channel:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"flip probability must be in [0, 1], got {p}")
    return Channel((np.sqrt(1 - p) * ID2, np.sqrt(p) * PAULI_Z))


def _weyl_ops(dim: int) -> list:
    """The dim^2 shift-and-clock unitaries X^j Z^k."""
    omega = np.exp(2j * np.pi / dim)
    shift = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(dim):
        shift[(i + 1) % dim, i] = 1.0
    clock = np.diag(omega ** np.arange(dim))
    ops = []
    xj = np.eye(dim, dtype=np.complex128)
    for _ in range(dim):
        zk = np.eye(dim, dtype=np.complex128)
        for _ in range(dim):
            ops.append(xj @ zk)
            zk = zk @ clock
        xj = xj @ shift
    return ops


def depolarizing(dim: int, p: float) -> Channel:
    """rho -> (1-p) rho + p * tr(rho) * 1/dim."""
    if dim < 2:
        raise DimensionError("depolarizing needs dim >= 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing strength must be in [0, 1], got {p}")
    ops = [np.sqrt(1 - p) * np.eye(dim, dtype=np.complex128)]
    ops += [np.sqrt(p) / dim * w for w in _weyl_ops(dim)]
    return Channel(tuple(ops))


def single_qubit_on(n: int, site: int, ch: Channel) -> Channel:
    """Lift a one-qubit channel to n qubits, acting on the given site.

    Site 0 is the leftmost (most significant) tensor factor.
    """
    if n < 1:
        raise DimensionError("need n >= 1 qubits")
    if not 0 <= site < n:
        raise DimensionError(f"site {site} out of range for {n} qubits")
    if ch.dim_in != 2 or ch.dim_out != 2:
        raise DimensionError("channel to lift must act on a single qubit")
    left = np.eye(2**site, dtype=np.complex128)
    right = np.eye(2 ** (n - site - 1), dtype=np.complex128)
    return Channel(tuple(kron(left, e, right) for e in ch.kraus))


def _x_on(n: int, site: int) -> np.ndarray:
    return kron(np.eye(2**site), PAULI_X, np.eye(2 ** (n - site - 1)))


def restricted_flip(n: int, p: float) -> Channel:
    """Single bit flips with no double events:
    Kraus {sqrt(1 - n p) 1, sqrt(p) X_1, ..., sqrt(p) X_n}."""
    if n < 1:
        raise DimensionError("need n >= 1 qubits")
    if p < 0 or n * p > 1:
        raise ValueError(f"need 0 <= p and n*p <= 1, got n={n}, p={p}")
    ops = [np.sqrt(1 - n * p) * np.eye(2**n, dtype=np.complex128)]
    ops += [np.sqrt(p) * _x_on(n, site) for site in range(n)]
    return Channel(tuple(ops))


def collective_unitary(n: int, terms: Sequence) -> Channel:
    """Random collective rotation: Kraus {sqrt(w_i) U_i^(tensor n)}.

    terms is a sequence of (weight, U) pairs with weights summing to 1 and
    each U unitary on a single subsystem.
    """
    if n < 1:
        raise DimensionError("need n >= 1 subsystems")
    if not terms:
        raise ValueError("need at least one (weight, unitary) term")
    weights = np.array([w for w, _ in terms], dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > DEFAULT_ATOL:
        raise ValueError(f"weights must be nonnegative and sum to 1, got {weights}")
    ops = []
    for w, u in terms:
        u = np.asarray(u, dtype=np.complex128)
        defect = np.linalg.norm(dag(u) @ u - np.eye(u.shape[0]))
        if u.ndim != 2 or u.shape[0] != u.shape[1] or defect > DEFAULT_ATOL:
            raise ValueError("each term must carry a unitary matrix")
        ops.append(np.sqrt(w) * kron(*([u] * n)))
    return Channel(tuple(ops))


def random_channel(dim: int, k: int, seed: int) -> Channel:
    """Seed-deterministic random trace-preserving channel with k Kraus operators.

    Stacks k Gaussian dim x dim blocks and orthonormalizes the stack into an
    isometry, so sum E†E = 1 holds exactly up to rounding.
    """
    if dim < 1 or k < 1:
        raise DimensionError(f"need dim >= 1 and k >= 1, got ({dim}, {k})")
    rng = np.random.default_rng(seed)
    g = (rng.standard_normal((k * dim, dim)) + 1j * rng.standard_normal((k * dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    ph = np.diagonal(r).copy()
    ph /= np.abs(ph)
    w = q * ph.conjugate()
    return Channel(tuple(w[j * dim : (j + 1) * dim, :] for j in range(k)))

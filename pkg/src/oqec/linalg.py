"""Dense complex linear algebra for finite-dimensional quantum systems.

Conventions used throughout the package:

* composite indices are row-major: the factor pair (a, b) maps to
  ``a * dim_b + b``, matching ``numpy.kron`` and C-order ``reshape``;
* eigenvalues and Schmidt coefficients are returned in descending order;
* spectrum entries at or below ``SPECTRUM_CUTOFF`` are treated as zero;
* eigenvector phases are fixed so the first component of magnitude above
  ``SPECTRUM_CUTOFF`` is real and nonnegative;
* entropies are in bits (log base 2).
"""

from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from .errors import DimensionError, NotAStateError, NotHermitianError

DEFAULT_ATOL = 1e-9
SPECTRUM_CUTOFF = 1e-12


def dag(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def kron(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    if not ops:
        raise DimensionError("kron needs at least one operand")
    out = np.asarray(ops[0], dtype=np.complex128)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=np.complex128))
    return out


def unitarity_defect(m: np.ndarray) -> float:
    """Frobenius distance of m†m from the identity."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return float(np.linalg.norm(dag(m) @ m - np.eye(m.shape[0])))


def partial_trace(m: np.ndarray, dims: Iterable[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out tensor factors of a square matrix.

    Parameters
    ----------
    m : square matrix on the tensor product of the listed factors.
    dims : dimension of each factor, in order.
    keep : indices of the factors to retain; all others are traced out.
        Kept factors stay in their original relative order.
    """
    dims = [int(d) for d in dims]
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"invalid factor dimensions {dims}")
    total = int(np.prod(dims))
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (total, total):
        raise DimensionError(f"matrix shape {m.shape} does not match factors {dims}")
    keep_set = set(int(i) for i in keep)
    if any(i < 0 or i >= len(dims) for i in keep_set):
        raise DimensionError(f"keep indices {sorted(keep_set)} out of range for {len(dims)} factors")
    traced = [i for i in range(len(dims)) if i not in keep_set]
    t = m.reshape(dims + dims)
    n = len(dims)
    for ax in reversed(traced):
        t = np.trace(t, axis1=ax, axis2=ax + n)
        n -= 1
    d_keep = int(np.prod([dims[i] for i in sorted(keep_set)])) if keep_set else 1
    return t.reshape(d_keep, d_keep)


def _fix_phases(vecs: np.ndarray, cutoff: float = SPECTRUM_CUTOFF) -> np.ndarray:
    """Rotate each column so its first significant entry is real nonnegative."""
    out = np.array(vecs, dtype=np.complex128, copy=True)
    for i in range(out.shape[1]):
        col = out[:, i]
        nz = np.flatnonzero(np.abs(col) > cutoff)
        if nz.size:
            pivot = col[nz[0]]
            out[:, i] = col * (pivot.conjugate() / abs(pivot))
    return out


def _lex_key(col: np.ndarray) -> tuple:
    return tuple((round(float(z.real), 10), round(float(z.imag), 10)) for z in col)


def eig_hermitian(m: np.ndarray, atol: float = DEFAULT_ATOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix with deterministic output.

    Returns (eigenvalues, eigenvectors): eigenvalues descending, eigenvectors
    as orthonormal columns with the phase convention above. Degenerate
    clusters (adjacent eigenvalues within SPECTRUM_CUTOFF) are ordered
    lexicographically by their phase-fixed entries, so repeated runs on the
    same input agree.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if np.linalg.norm(m - dag(m)) > atol:
        raise NotHermitianError(
            f"matrix is not Hermitian within atol={atol} "
            f"(defect {np.linalg.norm(m - dag(m)):.3e})"
        )
    w, v = np.linalg.eigh((m + dag(m)) / 2)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = _fix_phases(v[:, order])
    # deterministic order inside exactly degenerate clusters
    i = 0
    while i < len(w):
        j = i
        while j + 1 < len(w) and w[j] - w[j + 1] <= SPECTRUM_CUTOFF:
            j += 1
        if j > i:
            cols = sorted(range(i, j + 1), key=lambda c: _lex_key(v[:, c]))
            v[:, i : j + 1] = v[:, cols]
            w[i : j + 1] = w[cols]
        i = j + 1
    return w, v


def schmidt(
    vec: np.ndarray, dim_left: int, dim_right: int, cutoff: float = SPECTRUM_CUTOFF
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Schmidt decomposition of a bipartite vector.

    The vector is reshaped row-major to (dim_left, dim_right). Returns
    (coeffs, left, right) with coefficients descending and > cutoff, and
    left/right orthonormal vectors as matrix columns, so that

        vec == sum_i coeffs[i] * kron(left[:, i], right[:, i]).
    """
    vec = np.asarray(vec, dtype=np.complex128).reshape(-1)
    if dim_left < 1 or dim_right < 1 or vec.size != dim_left * dim_right:
        raise DimensionError(
            f"vector of size {vec.size} does not split as {dim_left} x {dim_right}"
        )
    u, s, vh = np.linalg.svd(vec.reshape(dim_left, dim_right), full_matrices=False)
    keep = s > cutoff
    coeffs = s[keep]
    left = u[:, keep]
    right = vh[keep, :].T.copy()
    for i in range(left.shape[1]):
        nz = np.flatnonzero(np.abs(left[:, i]) > cutoff)
        if nz.size:
            pivot = left[nz[0], i]
            phase = pivot.conjugate() / abs(pivot)
            left[:, i] *= phase
            right[:, i] *= phase.conjugate()
    return coeffs, left, right


def require_state(rho: np.ndarray, atol: float = DEFAULT_ATOL) -> np.ndarray:
    """Check the density-matrix contract and return the spectrum, descending.

    Raises NotAStateError if rho is not Hermitian within atol, has an
    eigenvalue below -atol, or its trace differs from 1 by more than atol.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise NotAStateError(f"expected a square matrix, got shape {rho.shape}")
    herm_defect = float(np.linalg.norm(rho - dag(rho)))
    if herm_defect > atol:
        raise NotAStateError(f"not Hermitian within atol={atol} (defect {herm_defect:.3e})")
    w = np.linalg.eigvalsh((rho + dag(rho)) / 2)
    if float(w.min()) < -atol:
        raise NotAStateError(f"negative eigenvalue {w.min():.3e} below -atol")
    tr = float(np.real(np.trace(rho)))
    if abs(tr - 1.0) > atol:
        raise NotAStateError(f"trace {tr!r} differs from 1 beyond atol={atol}")
    return np.sort(w)[::-1]


def von_neumann_entropy(rho: np.ndarray, atol: float = DEFAULT_ATOL) -> float:
    """Von Neumann entropy in bits; eigenvalues <= SPECTRUM_CUTOFF contribute 0."""
    w = require_state(rho, atol)
    w = w[w > SPECTRUM_CUTOFF]
    return float(-np.dot(w, np.log2(w)))


def complete_basis(cols: Optional[np.ndarray], dim: int) -> np.ndarray:
    """Orthonormal completion of a set of orthonormal columns.

    Sweeps the canonical axes in index order, Gram-Schmidt-projecting each
    against everything collected so far, which makes the result deterministic.
    Returns only the new columns, shape (dim, dim - k).
    """
    if cols is None:
        cols = np.zeros((dim, 0), dtype=np.complex128)
    cols = np.asarray(cols, dtype=np.complex128).reshape(dim, -1)
    have = cols.copy()
    added = []
    for i in range(dim):
        if have.shape[1] >= dim:
            break
        e = np.zeros(dim, dtype=np.complex128)
        e[i] = 1.0
        r = e - have @ (dag(have) @ e)
        r = r - have @ (dag(have) @ r)
        n = float(np.linalg.norm(r))
        if n > 1e-7:
            r /= n
            have = np.hstack([have, r[:, None]])
            added.append(r)
    if have.shape[1] != dim:
        raise DimensionError("could not complete basis; input columns not orthonormal?")
    if not added:
        return np.zeros((dim, 0), dtype=np.complex128)
    return np.stack(added, axis=1)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary, deterministic for a given generator state."""
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    ph = np.diagonal(r).copy()
    ph /= np.abs(ph)
    return q * ph.conjugate()


def random_state_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state vector."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    """Random mixed state: normalized GG† with a (dim x rank) Gaussian G."""
    rank = dim if rank is None else int(rank)
    if rank < 1:
        raise DimensionError("rank must be >= 1")
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ dag(g)
    return rho / np.real(np.trace(rho))

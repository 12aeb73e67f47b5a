"""Worked decomposition/noise pairs with known verdicts, for tests and demos.

Every entry carries a decomposition, a trace-preserving noise channel, the
expected verdict of each correctability condition, and a short note. The
first four entries are correctable by construction; the last is a designed
failure. An optional ninth-qubit subsystem-code entry (dim_v = 512) is kept
behind the extended flag because of its size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import PAULI_X, PAULI_Z, Channel, collective_unitary, restricted_flip
from .errors import DimensionError
from .linalg import complete_basis, dag, eig_hermitian, haar_unitary, kron
from .spaces import Decomposition

HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    dec: Decomposition
    noise: Channel
    expected: dict
    note: str


def _basis_columns(dim: int, order) -> np.ndarray:
    out = np.zeros((dim, len(order)), dtype=np.complex128)
    for i, j in enumerate(order):
        out[j, i] = 1.0
    return out


def _z_on(n: int, site: int) -> np.ndarray:
    return kron(np.eye(2**site), PAULI_Z, np.eye(2 ** (n - site - 1)))


def _bit_flip_3() -> CatalogEntry:
    # code words |000>, |111>; complement in index order
    frame = _basis_columns(8, [0, 7, 1, 2, 3, 4, 5, 6])
    dec = Decomposition(dim_a=2, dim_b=1, dim_c=6, frame=frame)
    return CatalogEntry(
        name="bit_flip_3",
        dec=dec,
        noise=restricted_flip(3, 0.1),
        expected={"b": True, "c": True, "d": True},
        note="three-qubit repetition code against single bit flips",
    )


def _phase_flip_3() -> CatalogEntry:
    frame = kron(HADAMARD, HADAMARD, HADAMARD) @ _basis_columns(
        8, [0, 7, 1, 2, 3, 4, 5, 6]
    )
    dec = Decomposition(dim_a=2, dim_b=1, dim_c=6, frame=frame)
    kraus = [np.sqrt(0.7) * np.eye(8, dtype=np.complex128)]
    kraus += [np.sqrt(0.1) * _z_on(3, site) for site in range(3)]
    return CatalogEntry(
        name="phase_flip_3",
        dec=dec,
        noise=Channel(tuple(kraus)),
        expected={"b": True, "c": True, "d": True},
        note="Hadamard twin of bit_flip_3: |+++>, |---> against single phase flips",
    )


def _dfs_2qubit_dephasing() -> CatalogEntry:
    # decoherence-free pair |01>, |10> under collective dephasing
    frame = _basis_columns(4, [1, 2, 0, 3])
    dec = Decomposition(dim_a=2, dim_b=1, dim_c=2, frame=frame)
    noise = collective_unitary(2, [(0.5, np.eye(2)), (0.5, PAULI_Z)])
    return CatalogEntry(
        name="dfs_2qubit_dephasing",
        dec=dec,
        noise=noise,
        expected={"b": True, "c": True, "d": True},
        note="noise acts as a pure phase on the code sector; identity already recovers",
    )


def _spin_coupling_frame() -> np.ndarray:
    """Total-spin basis of three qubits, ordered (multiplicity, spin) pairs
    first: two j=1/2 doublets spanning A tensor B, then the j=3/2 quadruplet."""
    s2, s3, s6 = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(6.0)
    f = np.zeros((8, 8), dtype=np.complex128)
    # doublet from the (12)-singlet: (|010> - |100>)/sqrt2 x {|0>, |1>} on qubit 3
    f[[2, 4], 0] = [1 / s2, -1 / s2]
    f[[3, 5], 1] = [1 / s2, -1 / s2]
    # doublet from the (12)-triplet, Clebsch-Gordan 1 x 1/2 -> 1/2
    f[[1, 2, 4], 2] = [np.sqrt(2.0 / 3.0), -1 / s6, -1 / s6]
    f[[3, 5, 6], 3] = [1 / s6, 1 / s6, -np.sqrt(2.0 / 3.0)]
    # j = 3/2 quadruplet, m = 3/2 .. -3/2
    f[0, 4] = 1.0
    f[[1, 2, 4], 5] = [1 / s3, 1 / s3, 1 / s3]
    f[[3, 5, 6], 6] = [1 / s3, 1 / s3, 1 / s3]
    f[7, 7] = 1.0
    return f


def _ns_3qubit_collective() -> CatalogEntry:
    rng = np.random.default_rng(11)
    terms = []
    for w in (0.5, 0.3, 0.2):
        u = haar_unitary(2, rng)
        u = u * np.linalg.det(u) ** -0.5  # special-unitary representative
        terms.append((w, u))
    dec = Decomposition(dim_a=2, dim_b=2, dim_c=4, frame=_spin_coupling_frame())
    return CatalogEntry(
        name="ns_3qubit_collective",
        dec=dec,
        noise=collective_unitary(3, terms),
        expected={"b": True, "c": True, "d": True},
        note="noiseless subsystem: collective rotations act only on the spin factor B",
    )


def _bitflip_3_vs_z() -> CatalogEntry:
    frame = _basis_columns(8, [0, 7, 1, 2, 3, 4, 5, 6])
    dec = Decomposition(dim_a=2, dim_b=1, dim_c=6, frame=frame)
    kraus = (
        np.sqrt(0.5) * np.eye(8, dtype=np.complex128),
        np.sqrt(0.5) * _z_on(3, 0),
    )
    return CatalogEntry(
        name="bitflip_3_vs_z",
        dec=dec,
        noise=Channel(kraus),
        expected={"b": False, "c": False, "d": False},
        note="repetition code against a phase error it cannot see: fails everything",
    )


def _pauli_string(n: int, ops: dict) -> np.ndarray:
    """Tensor product with the given single-site operators, identity elsewhere."""
    factors = [ops.get(i, np.eye(2)) for i in range(n)]
    return kron(*factors)


def _bacon_shor_9() -> CatalogEntry:
    """3x3 subsystem code: one protected qubit, four gauge qubits.

    The frame is built numerically but deterministically: take the joint +1
    eigenspace of the four stabilizers (double-row X products, double-column
    Z products), restrict the dressed logical pair (X on row 0, Z on column
    0) to it, and split the code space into the logical eigenstructure with
    the gauge factor as multiplicity.
    """
    n = 9
    site = lambda r, c: 3 * r + c
    stabilizers = []
    for r in (0, 1):
        stabilizers.append(
            _pauli_string(n, {site(rr, c): PAULI_X for rr in (r, r + 1) for c in range(3)})
        )
    for c in (0, 1):
        stabilizers.append(
            _pauli_string(n, {site(r, cc): PAULI_Z for cc in (c, c + 1) for r in range(3)})
        )
    proj = np.eye(2**n, dtype=np.complex128)
    for s in stabilizers:
        proj = proj @ (np.eye(2**n) + s) / 2
    w, v = eig_hermitian(proj)
    basis = v[:, w > 0.5]  # 32 columns
    if basis.shape[1] != 32:
        raise DimensionError("stabilizer code space has unexpected dimension")
    logical_x = _pauli_string(n, {site(0, c): PAULI_X for c in range(3)})
    logical_z = _pauli_string(n, {site(r, 0): PAULI_Z for r in range(3)})
    z_restricted = dag(basis) @ logical_z @ basis
    wz, vz = eig_hermitian(z_restricted)
    gauge = vz[:, wz > 0.5]  # 16 columns: the logical-0 sector
    if gauge.shape[1] != 16:
        raise DimensionError("logical-Z eigenspace has unexpected dimension")
    up = basis @ gauge
    down = logical_x @ up
    code_cols = np.hstack([up, down])  # (a, b) -> a*16 + b
    frame = np.hstack([code_cols, complete_basis(code_cols, 2**n)])
    dec = Decomposition(dim_a=2, dim_b=16, dim_c=480, frame=frame)
    return CatalogEntry(
        name="bacon_shor_9",
        dec=dec,
        noise=restricted_flip(9, 0.01),
        expected={"b": True, "c": True, "d": True},
        note="nine-qubit subsystem code; same-column flips differ by gauge only",
    )


_BUILDERS = {
    "bit_flip_3": _bit_flip_3,
    "phase_flip_3": _phase_flip_3,
    "dfs_2qubit_dephasing": _dfs_2qubit_dephasing,
    "ns_3qubit_collective": _ns_3qubit_collective,
    "bitflip_3_vs_z": _bitflip_3_vs_z,
}

_EXTENDED_BUILDERS = {
    "bacon_shor_9": _bacon_shor_9,
}


def catalog(extended: bool = False) -> list:
    """All catalog entries; pass extended=True to include the large ones."""
    entries = [build() for build in _BUILDERS.values()]
    if extended:
        entries += [build() for build in _EXTENDED_BUILDERS.values()]
    return entries


def get(name: str) -> CatalogEntry:
    """Look up one entry by name (extended entries included)."""
    builder = _BUILDERS.get(name) or _EXTENDED_BUILDERS.get(name)
    if builder is None:
        known = ", ".join([*_BUILDERS, *_EXTENDED_BUILDERS])
        raise ValueError(f"unknown catalog entry {name!r}; known: {known}")
    return builder()

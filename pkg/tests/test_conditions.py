"""Correctability conditions and the purified-state machinery.

The joint reference-environment marginal has a closed form in terms of the
code-sector Gram blocks G_jk = code† E_j† E_k code; the tests rebuild it from
that formula as an independent oracle.
"""

import numpy as np
import pytest

from oqec.channels import Channel, apply, depolarizing, identity, random_channel, unitary
from oqec.codes import get
from oqec.conditions import (
    check_condition_b,
    check_condition_c,
    check_condition_d,
    coherent_info,
    dpi_trace,
    purify,
)
from oqec.errors import DegenerateChannelError, DimensionError
from oqec.linalg import dag, haar_unitary, kron
from oqec.spaces import Decomposition


def _rng(seed=0):
    return np.random.default_rng(seed)


def _joint_marginal_oracle(dec, ch):
    """rho'_{R_A R_B E} from the Gram blocks of the rotated Kraus operators."""
    code = dec.code_vectors()
    de = len(ch.kraus)
    dab = dec.dim_a * dec.dim_b
    out = np.zeros((dab * de, dab * de), dtype=complex)
    for j, ej in enumerate(ch.kraus):
        for k, ek in enumerate(ch.kraus):
            g = dag(code) @ dag(ej) @ ek @ code
            unit = np.zeros((de, de), dtype=complex)
            unit[j, k] = 1.0
            out += kron(g.conj(), unit)
    return out / dab


def test_purify_shapes_and_norm():
    entry = get("bit_flip_3")
    ps = purify(entry.dec, entry.noise)
    assert ps.dims == (2, 1, 8, 4)
    assert abs(np.linalg.norm(ps.psi) - 1.0) < 1e-12
    assert ps.norm_in == pytest.approx(1.0, abs=1e-12)


def test_purify_v_marginal_is_channel_output():
    """Tracing out both references and E leaves E applied to the code-average."""
    entry = get("ns_3qubit_collective")
    ps = purify(entry.dec, entry.noise)
    code = entry.dec.code_vectors()
    rho_in = code @ dag(code) / entry.dec.dim_code
    np.testing.assert_allclose(ps.marginal((2,)), apply(entry.noise, rho_in), atol=1e-12)


@pytest.mark.parametrize(
    "name", ["bit_flip_3", "phase_flip_3", "dfs_2qubit_dephasing", "ns_3qubit_collective", "bitflip_3_vs_z"]
)
def test_joint_marginal_matches_gram_block_oracle(name):
    entry = get(name)
    ps = purify(entry.dec, entry.noise)
    np.testing.assert_allclose(
        ps.marginal((0, 1, 3)), _joint_marginal_oracle(entry.dec, entry.noise), atol=1e-12
    )


def test_joint_marginal_oracle_on_random_instances():
    rng = _rng(2)
    for trial in range(10):
        da, db, dc = 2, int(rng.integers(1, 3)), int(rng.integers(0, 3))
        dv = da * db + dc
        dec = Decomposition(da, db, dc, frame=haar_unitary(dv, rng))
        ch = random_channel(dv, int(rng.integers(1, 4)), seed=300 + trial)
        ps = purify(dec, ch)
        np.testing.assert_allclose(
            ps.marginal((0, 1, 3)), _joint_marginal_oracle(dec, ch), atol=1e-12
        )


def test_purify_rejects_wrong_dimension():
    with pytest.raises(DimensionError):
        purify(Decomposition(2, 2, 0), identity(3))


def test_purify_gates_trace_decreasing():
    dec = Decomposition(2, 1, 0)
    half = Channel((np.diag([1.0, 1.0 / np.sqrt(2)]).astype(complex),))
    with pytest.raises(ValueError):
        purify(dec, half)
    ps = purify(dec, half, allow_trace_decreasing=True)
    assert ps.norm_in == pytest.approx(0.75, abs=1e-12)
    assert abs(np.linalg.norm(ps.psi) - 1.0) < 1e-12


def test_purify_rejects_annihilating_channel():
    dec = Decomposition(1, 1, 1)
    kill = Channel((np.diag([0.0, 1.0]).astype(complex),))
    with pytest.raises(DegenerateChannelError):
        purify(dec, kill, allow_trace_decreasing=True)


def test_condition_b_blocks_for_bit_flip_code():
    """The flip-error blocks are scalars: the error weights on the diagonal."""
    entry = get("bit_flip_3")
    report = check_condition_b(entry.dec, entry.noise)
    assert report.passed
    blocks = report.witnesses["b_blocks"]
    weights = [0.7, 0.1, 0.1, 0.1]
    for j in range(4):
        for k in range(4):
            expected = weights[j] if j == k else 0.0
            assert blocks[(j, k)].shape == (1, 1)
            assert abs(blocks[(j, k)][0, 0] - expected) < 1e-12


def test_condition_b_residual_invariant_under_kraus_remix():
    entry = get("bitflip_3_vs_z")
    base = check_condition_b(entry.dec, entry.noise)
    u = haar_unitary(len(entry.noise.kraus), _rng(23))
    remixed = Channel(
        tuple(
            sum(u[i, m] * entry.noise.kraus[i] for i in range(len(entry.noise.kraus)))
            for m in range(len(entry.noise.kraus))
        )
    )
    again = check_condition_b(entry.dec, remixed)
    assert abs(base.residual - again.residual) < 1e-9
    assert not base.passed


def test_condition_b_flags_worst_pair():
    entry = get("bitflip_3_vs_z")
    report = check_condition_b(entry.dec, entry.noise)
    pair = report.witnesses["max_pair"]
    assert report.witnesses["pair_residuals"][pair] == pytest.approx(
        report.witnesses["max_pair_residual"]
    )
    assert report.witnesses["max_pair_residual"] > 1e-3


def test_condition_c_product_witnesses():
    entry = get("bit_flip_3")
    report = check_condition_c(purify(entry.dec, entry.noise))
    assert report.passed
    np.testing.assert_allclose(report.witnesses["rho_ra"], np.eye(2) / 2, atol=1e-12)
    joint_dim = 2 * 1 * 4
    assert report.witnesses["rho_rbe"].shape == (4, 4)
    assert report.residual < 1e-12
    assert joint_dim == 8


def test_condition_d_entropy_witnesses():
    entry = get("ns_3qubit_collective")
    report = check_condition_d(purify(entry.dec, entry.noise))
    assert report.passed
    w = report.witnesses
    assert w["entropy_a"] == pytest.approx(1.0)
    assert w["gap"] == pytest.approx(0.0, abs=1e-9)
    assert abs(w["entropy_v"] - w["entropy_rbe"] - 1.0) < 1e-9


def test_condition_d_gap_nonnegative_for_generic_noise():
    rng = _rng(31)
    for trial in range(10):
        dv = int(rng.integers(4, 9))
        da, db = 2, 1
        dec = Decomposition(da, db, dv - da * db, frame=haar_unitary(dv, rng))
        ch = random_channel(dv, int(rng.integers(1, 4)), seed=900 + trial)
        report = check_condition_d(purify(dec, ch))
        assert report.witnesses["gap"] >= -1e-9


def test_three_conditions_agree_on_fixtures():
    for entry in [get(n) for n in ("bit_flip_3", "dfs_2qubit_dephasing", "bitflip_3_vs_z")]:
        rb = check_condition_b(entry.dec, entry.noise, tol=1e-8)
        ps = purify(entry.dec, entry.noise)
        rc = check_condition_c(ps, tol=1e-8)
        rd = check_condition_d(ps, tol=1e-8)
        assert rb.passed == rc.passed == rd.passed == entry.expected["b"]


def test_coherent_info_frozen_values():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    rho = np.outer(bell, bell.conj())
    assert coherent_info(rho, 2, 2) == pytest.approx(1.0, abs=1e-12)
    # mixed reference, pure system: S(V) - S(RV) = 0 - 1
    mixed_r = kron(np.eye(2) / 2, np.diag([1.0, 0.0]).astype(complex))
    assert coherent_info(mixed_r, 2, 2) == pytest.approx(-1.0, abs=1e-12)
    # pure reference carries nothing: S(V) - S(RV) = 1 - 1
    pure_r = kron(np.diag([1.0, 0.0]).astype(complex), np.eye(2) / 2)
    assert coherent_info(pure_r, 2, 2) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DimensionError):
        coherent_info(rho, 3, 2)


def test_dpi_trace_identity_chain_constant():
    entry = get("bit_flip_3")
    vals = dpi_trace(entry.dec, [identity(8), identity(8)])
    assert vals == pytest.approx([1.0, 1.0, 1.0], abs=1e-12)


def test_dpi_trace_initial_value_counts_protected_qubits():
    dec = Decomposition(4, 2, 0)
    vals = dpi_trace(dec, [])
    assert vals == pytest.approx([2.0], abs=1e-12)


def test_dpi_trace_monotone_on_random_chains():
    rng = _rng(37)
    for trial in range(8):
        dv = int(rng.integers(3, 7))
        da = 2
        db = int(rng.integers(1, dv // da + 1))
        dec = Decomposition(da, db, dv - da * db, frame=haar_unitary(dv, rng))
        chain = [
            random_channel(dv, int(rng.integers(1, 4)), seed=50 * trial + i)
            for i in range(int(rng.integers(1, 4)))
        ]
        vals = dpi_trace(dec, chain)
        assert all(b <= a + 1e-9 for a, b in zip(vals, vals[1:]))


def test_dpi_trace_strictly_decreasing_through_depolarizing():
    entry = get("bit_flip_3")
    vals = dpi_trace(entry.dec, [depolarizing(8, 0.3), depolarizing(8, 0.3)])
    assert vals[0] > vals[1] + 0.1
    assert vals[1] > vals[2] + 0.1


def test_dpi_trace_requires_trace_preserving_links():
    dec = Decomposition(2, 1, 0)
    half = Channel((np.sqrt(0.5) * np.eye(2, dtype=complex),))
    with pytest.raises(ValueError):
        dpi_trace(dec, [half])


def test_dpi_trace_unitary_step_is_lossless():
    entry = get("bit_flip_3")
    u = haar_unitary(8, _rng(41))
    vals = dpi_trace(entry.dec, [unitary(u)])
    assert vals == pytest.approx([1.0, 1.0], abs=1e-10)

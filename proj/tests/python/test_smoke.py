import numpy as np
import pytest

import dusff


def test_pauli_matrices():
    sx, sy, sz = dusff.gell_mann_generators(2)
    assert np.allclose(sx, [[0, 1], [1, 0]])
    assert np.allclose(sy, [[0, -1j], [1j, 0]])
    assert np.allclose(sz, [[1, 0], [0, -1]])


def test_dual_gate_duality():
    u = [dusff.haar_unitary(2, seed=3, stream=k) for k in range(4)]
    gate = dusff.build_dual_gate(*u, coupling=0.8, d=2)
    check = dusff.check_dual_unitary(gate)
    assert check["ok"]
    assert check["dual_residual"] < 1e-10
    # the reshuffled identity is not unitary
    assert not dusff.check_dual_unitary(np.eye(4, dtype=complex))["ok"]


def test_rmt_reference_values():
    assert dusff.cue_sff(3, 2) == 2.0
    assert dusff.coe_sff(1, 10) == pytest.approx(20.0 / 11.0, abs=1e-12)


def test_commutant_counts():
    for t in (1, 2):
        report = dusff.commutant_dimension(dusff.build_M_set(t, 2))
        assert report["dimension"] == t
        assert report["gap"] > 1e-4
    report = dusff.commutant_dimension(dusff.build_MT_set(1, 2))
    assert report["dimension"] == 2


def test_dihedral_rank_and_momentum_state():
    assert dusff.dihedral_rank(3, 2)["rank"] == 6
    v = dusff.momentum_state(1, 2, 2, 2)
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)


def test_transfer_spectrum_and_duality():
    gu = dusff.build_dual_gate(
        *(dusff.haar_unitary(2, seed=5, stream=k) for k in range(4)),
        coupling=1.1,
        d=2,
    )
    gw = dusff.build_dual_gate(
        *(dusff.haar_unitary(2, seed=6, stream=k) for k in range(4)),
        coupling=0.7,
        d=2,
    )
    dist = dusff.DisorderDistribution.gaussian(2, 0.2)
    ctx = dusff.make_transfer_context(gu, gw, t=1, disorder=dist)
    spectrum = dusff.leading_spectrum(ctx, k=4)
    assert spectrum["unimodular_count"] == 1
    assert spectrum["spectral_radius"] <= 1.0 + 1e-8

    spec = dusff.CircuitSpec(2, 3, gu, gw, dist)
    est = dusff.sff_estimate(spec, t=1, n_samples=1500, seed=11)
    expect = dusff.trace_transfer_power(ctx, 3).real
    assert abs(est["mean"] - expect) < 3 * est["std_error"]


def test_trace_methods_agree():
    gu = dusff.swap_gate(2)
    dist = dusff.DisorderDistribution.gaussian(2, 0.3)
    spec = dusff.CircuitSpec(2, 2, gu, gu, dist)
    dense = dusff.trace_power(spec, t=2, seed=4, method="dense")
    rows = dusff.trace_power(spec, t=2, seed=4, method="dual_rows")
    assert dense == pytest.approx(rows, abs=1e-9)


def test_verification_entry_point():
    results = dusff.run_verification([11])
    assert len(results) == 1
    assert results[0]["passed"]

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geoion import model, qcore
from geoion.errors import CalibrationError, PreconditionError, SingularityError
from geoion.model import (BasisEnergies, EffectiveField, IonParams, LaserDrive, PhononMode,
                          TwoBitDriveConfig)


def test_rotating_frame_field_detuned():
    ion = IonParams(10.0)
    H, f = model.rotating_frame_1q(ion, LaserDrive(0, 0.3, 10.0 - 0.8, 0.0))
    assert (f.x, f.y, f.z) == pytest.approx((0.3, 0.0, 0.4))
    assert np.allclose(H, 0.3 * qcore.pauli("x") + 0.4 * qcore.pauli("z"))


@given(st.floats(-math.pi, math.pi))
def test_rotating_frame_resonant_field_in_plane(phi):
    _, f = model.rotating_frame_1q(IonParams(10.0), LaserDrive(0, 0.2, 10.0, phi))
    assert f.z == 0.0
    assert math.hypot(f.x, f.y) == pytest.approx(0.2)


def test_rotating_frame_zero_rabi_is_diagonal():
    H, _ = model.rotating_frame_1q(IonParams(10.0), LaserDrive(0, 0.0, 9.0))
    assert np.allclose(H, 0.5 * qcore.pauli("z"))


@given(st.floats(0, 2), st.floats(-2, 2), st.floats(-3, 3))
def test_rotating_frame_squares_to_field_norm(rabi, det, phi):
    H, f = model.rotating_frame_1q(IonParams(10.0), LaserDrive(0, rabi, 10.0 - det, phi))
    assert qcore.is_hermitian(H)
    assert qcore.max_abs(H @ H - f.magnitude ** 2 * np.eye(2)) <= 1e-12


def _single_ion(eta, cutoff=2, rabi=0.3, lamb_dicke="first_order", phi=0.0):
    return ([IonParams(10.0)], PhononMode(1.0, eta, cutoff), [LaserDrive(0, rabi, 9.5, phi)], lamb_dicke)


def test_lab_frame_eta_zero_has_no_phonon_coupling():
    ions, ph, drives, ld = _single_ion(0.0)
    H = model.lab_frame(ions, ph, drives, 0.7, ld)
    lv = ph.levels
    # only the qubit flips; the phonon index is conserved
    for a in range(2 * lv):
        for b in range(2 * lv):
            if a % lv != b % lv:
                assert H[a, b] == 0
    w = drives[0].omega_L
    assert H[lv, 0] == pytest.approx(0.3 * np.exp(-1j * w * 0.7))


def test_lab_frame_sideband_matrix_element():
    ions, ph, drives, ld = _single_ion(0.1)
    H = model.lab_frame(ions, ph, drives, 0.0, ld)
    lv = ph.levels  # |1, n=1> sits at index lv + 1
    assert H[lv + 1, 0] == pytest.approx(1j * 0.1 * 0.3, abs=1e-15)


@settings(max_examples=30)
@given(st.integers(0, 2**31), st.sampled_from(["first_order", "exact"]))
def test_lab_frame_hermitian(seed, mode):
    rng = np.random.default_rng(seed)
    ions = [IonParams(10.0, 0), IonParams(10.2, 1)]
    drives = [LaserDrive(0, rng.uniform(0, 1), rng.uniform(8, 12), rng.uniform(-3, 3)),
              LaserDrive(1, rng.uniform(0, 1), rng.uniform(8, 12), rng.uniform(-3, 3))]
    H = model.lab_frame(ions, PhononMode(1.0, rng.uniform(0, 0.2), 4), drives, rng.uniform(0, 50), mode)
    assert qcore.max_abs(H - H.conj().T) <= 1e-12


def test_exact_lamb_dicke_converges_linearly():
    ions, _, drives, _ = _single_ion(0.0, cutoff=5)
    H0 = model.lab_frame(ions, PhononMode(1.0, 0.0, 5), drives, 0.3, "exact")
    d = [qcore.max_abs(model.lab_frame(ions, PhononMode(1.0, eta, 5), drives, 0.3, "exact") - H0)
         for eta in (1e-3, 1e-4)]
    assert d[0] / d[1] == pytest.approx(10, rel=0.01)


def test_eta_warning_and_validation():
    with pytest.warns(UserWarning):
        PhononMode(1.0, 0.4, 3)
    with pytest.raises(PreconditionError):
        PhononMode(1.0, -0.1, 3)
    with pytest.raises(PreconditionError):
        LaserDrive(0, -1.0, 1.0)


def test_g_effective_examples():
    assert model.g_effective(0.01, 0.01, 1.1, 0.9, 1.0) == pytest.approx(1e-4 * (10 - 1 / 1.9), rel=1e-12)
    assert model.g_effective(0.01, 0.01, 1.1, 0.9, 1.0) == pytest.approx(9.4737e-4, rel=1e-4)
    # 1/(d1 - w) = 1/(d2 + w): d1 = 3, d2 = 1
    assert model.g_effective(0.02, 0.03, 3.0, 1.0, 1.0) == pytest.approx(0.0, abs=1e-18)
    assert model.g_effective(0.01, 0.01, 0.9, 0.9, 1.0) < 0


def test_g_effective_singularities():
    with pytest.raises(SingularityError):
        model.g_effective(0.1, 0.1, 1.0, 0.5, 1.0)
    with pytest.raises(SingularityError):
        TwoBitDriveConfig.from_detunings(10, 0.1, 0.1, 1.0, 0.9)
    with pytest.raises(PreconditionError):
        TwoBitDriveConfig.from_detunings(10, 0.1, 0.1, -0.1, 0.9)


def test_effective_2q_examples():
    cfg = TwoBitDriveConfig.from_detunings(10, 0.1, 0.1, 1.1, 0.9)
    H = model.effective_2q(cfg, 0.01)
    expected = np.zeros((4, 4), complex)
    expected[0, 3] = expected[3, 0] = 0.01
    assert np.allclose(H, expected, atol=1e-18)


@given(st.floats(-1, 1), st.floats(-0.1, 0.1), st.floats(-math.pi, math.pi))
def test_effective_2q_properties(wd, g, Phi):
    cfg = TwoBitDriveConfig.from_detunings(10, 0.1, 0.1, 1.1, 0.9, Phi=Phi, omegaD_tilde=wd)
    H = model.effective_2q(cfg, g)
    assert qcore.is_hermitian(H)
    for i in (1, 2):
        assert np.all(H @ qcore.basis(4, i) == 0)
    P = np.diag([0, 1, 1, 0]).astype(complex)
    assert np.array_equal(H @ P, P @ H)
    ev = np.linalg.eigvalsh(H[np.ix_([0, 3], [0, 3])])
    r = math.sqrt((wd / 2) ** 2 + g ** 2)
    assert ev == pytest.approx([-r, r], abs=1e-12)


def test_two_bit_field_follows_phase():
    cfg = TwoBitDriveConfig.from_detunings(10, 0.1, 0.1, 1.1, 0.9, Phi=0.4, omegaD_tilde=0.2)
    f = model.two_bit_field(cfg, 0.5)
    assert (f.x, f.y, f.z) == pytest.approx((0.5 * math.cos(0.4), 0.5 * math.sin(0.4), 0.1))
    assert cfg.with_phase(1.0).Phi == pytest.approx(1.0)


def test_user_supplied_energies_give_zero_detuning():
    cfg = TwoBitDriveConfig.from_detunings(10, 0.1, 0.1, 1.1, 0.9, omegaD_tilde=0.3)
    wl = cfg.drive1.omega_L + cfg.drive2.omega_L
    out = cfg.with_energies(BasisEnergies((wl + 0.7, 0.7, 0.1, -0.1)))
    assert out.omegaD_tilde == 0.0 and out.stark_mode == "user_supplied"


def test_interaction_picture_hamiltonian_matches_transform():
    sc = model.two_ion_scene(rabi=(0.2, 0.3), eta=0.1, fock_cutoff=3)
    lab = model.DrivenHamiltonian.lab(sc)
    ip = model.DrivenHamiltonian.interaction(sc)
    E = model.free_energies(sc)
    for t in (0.0, 1.3, 17.0):
        U0 = np.diag(np.exp(1j * E * t))
        oracle = U0 @ (lab.matrix(t) - np.diag(E)) @ U0.conj().T
        assert qcore.max_abs(ip.matrix(t) - oracle) <= 1e-12
        assert qcore.max_abs(ip.shifted(0.5).matrix(t) - ip.matrix(t + 0.5)) <= 1e-12


def test_laser_frame_hamiltonian_is_static_transform():
    sc = model.two_ion_scene(rabi=(0.2, 0.3), eta=0.1, fock_cutoff=3)
    ip = model.DrivenHamiltonian.interaction(sc)
    HL = model.laser_frame_hamiltonian(sc)
    # propagate a short time both ways and compare after the frame map
    psi0 = qcore.basis(sc.dim, 0)
    from geoion.evolve import IntegratorConfig, propagate_timedep
    t = 3.0
    tr = propagate_timedep(ip, psi0, t, IntegratorConfig(0.002))
    psi_L = qcore.expm_hermitian(HL, t) @ psi0
    # laser frame keeps the phonon energy; interaction picture removes it
    n = np.real(np.diag(sc.embed_phonon(qcore.num(sc.phonon.levels))))
    mapped = model.laser_frame_map(sc, t) * np.exp(-1j * n * t) * tr.final
    assert abs(np.vdot(psi_L, mapped)) == pytest.approx(1.0, abs=1e-9)


def test_tuned_scene_has_smaller_gap_and_near_zero_omegaD():
    sc = model.two_ion_scene(rabi=(0.1, 0.1))
    tuned = model.tune_two_photon_resonance(sc)
    g = model.scene_g_jk(tuned)
    assert model.dressed_gap(tuned) < model.dressed_gap(sc)
    cal = model.calibrate_omegaD(tuned, leakage_tol=0.2)
    assert abs(cal.omegaD_tilde) < 0.05 * abs(g)
    assert cal.contrast > 0.99


def test_calibrate_omegaD_recovers_sign():
    sc = model.tune_two_photon_resonance(model.two_ion_scene(rabi=(0.1, 0.1)))
    g = model.scene_g_jk(sc)
    d1, d2 = sc.drives
    for shift in (+1.5 * g, -1.5 * g):
        # raising laser 2 lowers omegaD by the same amount
        moved = sc.with_drives((d1, LaserDrive(d2.target_ion, d2.rabi, d2.omega_L + shift, d2.phi)))
        cal = model.calibrate_omegaD(moved, leakage_tol=0.2)
        assert cal.omegaD_tilde == pytest.approx(-shift, rel=0.1)


def test_omegaD_fit_on_effective_model():
    wd, g = 0.002, 0.001
    cfg = TwoBitDriveConfig.from_detunings(10, 0.1, 0.1, 1.1, 0.9, omegaD_tilde=wd)
    H = model.effective_2q(cfg, g)
    ev, vec = np.linalg.eigh(H)
    t = np.linspace(0, 4 * math.pi / math.hypot(g, wd / 2), 3000)
    psi = vec @ (np.exp(-1j * np.outer(ev, t)) * (vec.conj().T @ qcore.basis(4, 0))[:, None])
    Om, C = model.fit_two_level_oscillation(t, np.abs(psi[3]) ** 2)
    assert model.omegaD_from_fit(Om, C) == pytest.approx(wd, rel=0.05)


def test_fit_rejects_flat_signal():
    with pytest.raises(CalibrationError):
        model.fit_two_level_oscillation(np.linspace(0, 1, 10), np.zeros(10))


def test_params_round_trip():
    ph = PhononMode(1.0, 0.05, 9)
    drives = (LaserDrive(0, 0.1, 11.1, 0.2), LaserDrive(1, 0.1, 9.1))
    d = model.params_to_dict(10.0, ph, drives, {"stark_mode": "calibrated"})
    assert model.params_from_dict(d) == (10.0, ph, drives, {"stark_mode": "calibrated"})
    with pytest.raises(PreconditionError):
        model.params_from_dict({"eta": 0.1})


def test_scene_guards():
    with pytest.raises(PreconditionError):
        model.Scene((IonParams(10.0, 0),), PhononMode(), (LaserDrive(5, 0.1, 9.0),))
    with pytest.raises(PreconditionError):
        model.Scene((IonParams(10.0, 0),), PhononMode(), (), "second_order")


def test_project_populations_sum_to_one():
    sc = model.two_ion_scene(fock_cutoff=3)
    rng = np.random.default_rng(1)
    psi = qcore.normalize(rng.normal(size=sc.dim) + 1j * rng.normal(size=sc.dim))
    q, p = model.project_qubit_populations(sc, psi)
    assert q.sum() == pytest.approx(1.0) and p.sum() == pytest.approx(1.0)
    assert q.shape == (4,) and p.shape == (4,)


def test_effective_field_from_drive():
    f = EffectiveField.from_drive(10.0, LaserDrive(0, 0.2, 9.6, math.pi / 2))
    assert (f.x, f.y, f.z) == pytest.approx((0.0, 0.2, 0.2), abs=1e-15)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert f.magnitude == pytest.approx(math.sqrt(0.08))

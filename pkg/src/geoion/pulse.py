"""Pulse sequences for geometric one- and two-bit gates.

Every primitive is a pair of pi-pulses about two effective fields, separated
by an instantaneous laser phase jump.  Closed forms used by the tests:

* rotation, fields ``(w, 0, d/2)`` then ``(-w, 0, d/2)`` with tilt
  ``theta = atan2(2w, d)``: ``U = -exp(i 2 theta sigma_y) = exp(i gamma sigma_y)``
  with ``gamma = 2 theta - pi``;
* phase gate, resonant fields at azimuth ``-phi0`` then ``+phi0``:
  ``U = -exp(-i 2 phi0 sigma_z)``.

The two-bit versions act identically on span{|00>, |11>} with the two-bit
Pauli operators, and as the identity on |01>, |10>.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import optimize

from . import qcore
from .errors import CalibrationError, CyclicityError, PreconditionError
from .evolve import propagate_piecewise, unitary_of_sequence
from .model import (ACTIVE_2Q, EffectiveField, IonParams, LaserDrive, TwoBitDriveConfig,
                    two_bit_field)
from .phase import aa_phase

SEGMENT_FRAMES = ("rotating_at_laser", "interaction_picture", "lab")


@dataclass(frozen=True)
class PulseSegment:
    duration: float
    drives: tuple
    field: EffectiveField
    frame: str = "rotating_at_laser"
    block: int = 0
    label: str = ""

    def __post_init__(self):
        if not self.duration > 0:
            raise PreconditionError("segment duration must be positive")
        if not self.drives:
            raise PreconditionError("segment needs at least one drive")
        if self.frame not in SEGMENT_FRAMES:
            raise PreconditionError(f"unknown frame {self.frame!r}")


@dataclass(frozen=True)
class PulseSequence:
    segments: tuple
    subject: tuple  # ("one_qubit", ion) or ("two_qubit", j, k)
    intent: str = ""
    global_phase: float = 0.0  # target = exp(i global_phase) * realised unitary
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def dim(self):
        return 2 if self.subject[0] == "one_qubit" else 4

    @property
    def active_subspace(self):
        return (0, 1) if self.dim == 2 else ACTIVE_2Q

    @property
    def total_duration(self):
        return math.fsum(s.duration for s in self.segments)

    def _pauli(self, which):
        if self.dim == 2:
            return qcore.pauli(which)
        return qcore.pauli(which, ACTIVE_2Q, 4)

    def z_operator(self):
        return self._pauli("z")

    def segment_hamiltonian(self, k):
        f = self.segments[k].field
        return f.x * self._pauli("x") + f.y * self._pauli("y") + f.z * self._pauli("z")

    def then(self, other, intent=None):
        """Concatenate ``other`` after ``self``; blocks stay separate."""
        if other.subject != self.subject:
            raise PreconditionError("cannot concatenate sequences on different subjects")
        offset = (max(s.block for s in self.segments) + 1) if self.segments else 0
        segs = self.segments + tuple(replace(s, block=s.block + offset) for s in other.segments)
        return PulseSequence(segs, self.subject, intent or f"{self.intent}; {other.intent}",
                             self.global_phase + other.global_phase, {**self.meta})

    def to_dict(self):
        return {
            "subject": list(self.subject),
            "intent": self.intent,
            "global_phase": self.global_phase,
            "total_duration": self.total_duration,
            "segments": [
                {"duration": s.duration, "frame": s.frame, "block": s.block, "label": s.label,
                 "field": [s.field.x, s.field.y, s.field.z],
                 "drives": [{"ion": d.target_ion, "rabi": d.rabi, "omega_L": d.omega_L,
                             "phi": d.phi} for d in s.drives]}
                for s in self.segments],
        }

    @classmethod
    def from_dict(cls, d):
        segs = tuple(
            PulseSegment(s["duration"],
                         tuple(LaserDrive(x["ion"], x["rabi"], x["omega_L"], x["phi"]) for x in s["drives"]),
                         EffectiveField(*s["field"]), s["frame"], s.get("block", 0), s.get("label", ""))
            for s in d["segments"])
        return cls(segs, tuple(d["subject"]), d.get("intent", ""), d.get("global_phase", 0.0))


def empty_sequence(subject, intent="identity"):
    return PulseSequence((), tuple(subject), intent)


def pi_pulse_duration(f: EffectiveField):
    """Duration of a pi rotation about ``f``: ``2 |Omega| tau = pi``."""
    mag = f.magnitude
    if mag <= 0:
        raise PreconditionError("zero effective field: pi-pulse duration undefined")
    return math.pi / (2 * mag)


def _segment(drives, f, frame, label):
    return PulseSegment(pi_pulse_duration(f), tuple(drives), f, frame, 0, label)


# ---------------------------------------------------------------- one bit


def seq_rotation_1q(ion: IonParams, rabi, detuning, reverse=False):
    """Geometric rotation ``exp(i gamma sigma_y)`` by two detuned pi-pulses.

    Laser phase 0 then pi (``reverse`` swaps them, giving ``pi - 2 theta``).
    """
    if not (rabi > 0 and detuning > 0):
        raise PreconditionError("rotation needs rabi > 0 and detuning > 0")
    omega_L = ion.omega0 - detuning
    phases = (math.pi, 0.0) if reverse else (0.0, math.pi)
    segs = []
    for i, phi in enumerate(phases):
        d = LaserDrive(ion.label, rabi, omega_L, phi)
        segs.append(_segment([d], EffectiveField.from_drive(ion.omega0, d), "rotating_at_laser",
                             f"pi-pulse {i + 1}, phi={phi:.6g}"))
    theta = math.atan2(2 * rabi, detuning)
    return PulseSequence(tuple(segs), ("one_qubit", ion.label), "one-bit geometric rotation",
                         meta={"theta": theta, "omega0": ion.omega0, "reverse": reverse})


def seq_phase_1q(ion: IonParams, rabi, phi0):
    """Resonant phase gate ``-exp(-i 2 phi0 sigma_z)`` (phases -phi0 then +phi0)."""
    if not rabi > 0:
        raise PreconditionError("phase gate needs rabi > 0")
    segs = []
    for i, phi in enumerate((-phi0, phi0)):
        d = LaserDrive(ion.label, rabi, ion.omega0, phi)
        segs.append(_segment([d], EffectiveField.from_drive(ion.omega0, d), "interaction_picture",
                             f"resonant pi-pulse {i + 1}, phi={phi:.6g}"))
    return PulseSequence(tuple(segs), ("one_qubit", ion.label), "one-bit geometric phase gate",
                         meta={"phi0": phi0, "omega0": ion.omega0})


def closed_form_rotation(theta):
    """``-(n2 . sigma)(n1 . sigma)`` for the two rotation-pulse axes."""
    n1 = np.array([math.sin(theta), 0.0, math.cos(theta)])
    n2 = np.array([-math.sin(theta), 0.0, math.cos(theta)])
    return -qcore.pauli_vector(n2) @ qcore.pauli_vector(n1)


def closed_form_phase(phi0):
    n1 = np.array([math.cos(phi0), -math.sin(phi0), 0.0])
    n2 = np.array([math.cos(phi0), math.sin(phi0), 0.0])
    return -qcore.pauli_vector(n2) @ qcore.pauli_vector(n1)


def arctan_formula_gamma(rabi, detuning):
    """Closed form ``4 arctan(2 rabi / detuning)`` for side-by-side reports."""
    return 4 * math.atan(2 * rabi / detuning)


# ---------------------------------------------------------------- two bits


def _two_bit_segment(config, g_jk, Phi, frame, label):
    # a negative coupling is the same as a pi shift of the two-bit phase
    g, Phi = abs(g_jk), Phi + (math.pi if g_jk < 0 else 0.0)
    cfg = config.with_phase(Phi)
    f = two_bit_field(cfg, g)
    return _segment([cfg.drive1, cfg.drive2], f, frame, label)


def seq_rotation_2q(config: TwoBitDriveConfig, g_jk, reverse=False):
    """Two-bit analogue of :func:`seq_rotation_1q` in the two-bit rotating frame."""
    if g_jk == 0:
        raise PreconditionError("two-bit rotation needs g_jk != 0")
    phases = (math.pi, 0.0) if reverse else (0.0, math.pi)
    segs = tuple(_two_bit_segment(config, g_jk, config.Phi + p, "rotating_at_laser",
                                  f"two-bit pi-pulse {i + 1}, Phi={p:.6g}")
                 for i, p in enumerate(phases))
    theta = math.atan2(2 * abs(g_jk), config.omegaD_tilde)
    return PulseSequence(segs, ("two_qubit", config.drive1.target_ion, config.drive2.target_ion),
                         "two-bit geometric rotation",
                         meta={"theta": theta, "g_jk": g_jk, "omegaD_tilde": config.omegaD_tilde,
                               "reverse": reverse})


def seq_phase_2q(config: TwoBitDriveConfig, Phi0, g_jk):
    """Resonant two-bit phase gate ``-exp(-i 2 Phi0 Sigma_z)`` on span{|00>, |11>}."""
    if abs(config.omegaD_tilde) > 1e-14:
        raise PreconditionError("two-bit phase gate requires omegaD_tilde = 0 (resonance)")
    if g_jk == 0:
        raise PreconditionError("two-bit phase gate needs g_jk != 0")
    segs = tuple(_two_bit_segment(config, g_jk, p, "interaction_picture",
                                  f"two-bit resonant pi-pulse {i + 1}, Phi={p:.6g}")
                 for i, p in enumerate((-Phi0, Phi0)))
    return PulseSequence(segs, ("two_qubit", config.drive1.target_ion, config.drive2.target_ion),
                         "two-bit geometric phase gate", meta={"Phi0": Phi0, "g_jk": g_jk})


def z_phase_angle_to_phi0(beta):
    """Phase-gate laser phase realising ``exp(-i beta Z)`` exactly (``Z^2 = 1`` on the subspace)."""
    return 0.5 * (beta + math.pi)


def seq_ujk(config: TwoBitDriveConfig, g_jk, alpha, table=None):
    """Composite sequence for ``U_jk(alpha) = exp(i alpha/2 Sigma_x)``.

    Three blocks: pre-phase ``exp(-i pi/4 Sigma_z)``, geometric rotation with
    ``Gamma = alpha/2``, and the resonant phase shift
    ``exp(-i Gamma~ Sigma_z)`` with ``Gamma~ = omegaD tau / 2 - pi/4`` that
    cancels the detuning phases of the rotation.
    """
    if table is None:
        raise CalibrationError("seq_ujk needs a calibrated gamma table")
    Gamma = qcore.wrap_phase(0.5 * alpha)
    if abs(abs(Gamma) - math.pi) < 1e-9:
        raise PreconditionError("alpha = +-2 pi is not reachable by a single rotation")
    # a negative coupling mirrors the tilt, which swaps the two phase orders
    reverse = (Gamma > 0) != (g_jk < 0)
    theta = table.theta_for(-Gamma if Gamma > 0 else Gamma)
    g = abs(g_jk)
    wd = 2 * g / math.tan(theta) if abs(theta - math.pi / 2) > 1e-15 else 0.0
    resonant = replace(config, omegaD_tilde=0.0)
    rot = seq_rotation_2q(replace(config, omegaD_tilde=wd), g_jk, reverse=reverse)
    a = 0.5 * wd * rot.total_duration
    pre = seq_phase_2q(resonant, z_phase_angle_to_phi0(math.pi / 4), g_jk)
    cancel = seq_phase_2q(resonant, z_phase_angle_to_phi0(a - math.pi / 4), g_jk)
    seq = pre.then(rot).then(cancel, intent=f"two-bit rotation U_jk(alpha={alpha:.6g})")
    return replace(seq, meta={"alpha": alpha, "Gamma": Gamma, "theta": theta, "omegaD_tilde": wd,
                              "Gamma_tilde": a - math.pi / 4, "g_jk": g_jk})


# ---------------------------------------------------------------- calibration


@dataclass(frozen=True)
class CalibrationTable:
    theta: np.ndarray
    rabi: np.ndarray
    detuning: np.ndarray
    gamma: np.ndarray  # wrapped into (-pi, pi]
    branch: np.ndarray  # gamma_unwrapped = gamma + 2 pi * branch
    subject: str = "one_qubit"

    def __post_init__(self):
        if np.any(np.diff(self.theta) <= 0):
            raise CalibrationError("theta grid must be strictly increasing")
        if np.any(np.abs(np.diff(self.unwrapped)) >= math.pi):
            raise CalibrationError("unflagged 2 pi jump in calibrated gamma")

    @property
    def unwrapped(self):
        return self.gamma + 2 * math.pi * self.branch

    @property
    def formula_gamma(self):
        return np.array([qcore.wrap_phase(4 * math.atan(2 * r / d)) if d > 0 else math.pi
                         for r, d in zip(self.rabi, self.detuning)])

    def reachable(self):
        u = self.unwrapped
        return float(u.min()), float(u.max())

    def theta_for(self, gamma, refine=True):
        """Inverse lookup: tilt producing ``exp(i gamma sigma_y)``.

        Linear interpolation on the unwrapped branch, then (optionally) a
        root-find on the simulated phase to machine precision.  Targets just
        outside the table are bracketed within ``(0, pi/2]``.
        """
        u = self.unwrapped
        if np.any(np.diff(u) <= 0):
            raise CalibrationError("calibrated gamma is not monotone in theta")
        lo_u, hi_u = u[0], u[-1]
        g = None
        for m in range(-2, 3):
            cand = gamma + 2 * math.pi * m
            if lo_u - 0.5 <= cand <= hi_u + 0.5:
                g = cand
                break
        if g is None:
            raise CalibrationError(f"gamma={gamma:.6g} outside reachable range [{lo_u:.4g}, {hi_u:.4g}]")
        theta0 = float(np.interp(g, u, self.theta))
        if not refine:
            return theta0

        def resid(th):
            return math.remainder(simulated_gamma(th, self.subject) - g, 2 * math.pi)

        a, b = max(1e-9, theta0 - 0.05), min(math.pi / 2, theta0 + 0.05)
        if resid(a) * resid(b) > 0:
            a, b = 1e-9, math.pi / 2
        if resid(b) == 0:
            return b
        return float(optimize.brentq(resid, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theta", "rabi", "detuning", "gamma", "branch", "formula_gamma"])
        for row in zip(self.theta, self.rabi, self.detuning, self.gamma, self.branch, self.formula_gamma):
            w.writerow([repr(float(x)) for x in row[:4]] + [int(row[4]), repr(float(row[5]))])
        return buf.getvalue()


_CAL_ION = IonParams(10.0, 0)
_CAL_RABI = 0.1


def _rotation_for_theta(theta, subject="one_qubit", rabi=_CAL_RABI):
    # fixed transverse strength; detuning sets the tilt
    det = 2 * rabi / math.tan(theta)
    if subject == "one_qubit":
        if det <= 0:
            det = 1e-300
        return seq_rotation_1q(_CAL_ION, rabi, det)
    cfg = TwoBitDriveConfig.from_detunings(10.0, 0.05, 0.05, 1.1, 1.1, omegaD_tilde=det)
    return seq_rotation_2q(cfg, rabi)


def simulated_gamma(theta, subject="one_qubit"):
    """Phase acquired by the first sigma_y eigenstate, from the exact propagator."""
    seq = _rotation_for_theta(theta, subject)
    U = unitary_of_sequence(seq, frame="rotating_at_laser")
    psi = _plus_state(seq)
    ov = np.vdot(psi, U @ psi)
    return math.atan2(ov.imag, ov.real)


def _plus_state(seq):
    if seq.dim == 2:
        return qcore.sigma_y_eigenstate(+1)
    v = np.zeros(4, dtype=complex)
    v[0], v[3] = 1j / math.sqrt(2), 1 / math.sqrt(2)
    return v


def calibrate_gamma(theta_grid, subject="one_qubit", rabi=_CAL_RABI, samples_per_segment=200):
    """Simulate the rotation sequence on a tilt grid and tabulate its geometric phase."""
    theta_grid = np.asarray(theta_grid, dtype=float)
    if np.any(theta_grid <= 0) or np.any(theta_grid > math.pi / 2):
        raise PreconditionError("theta values must lie in (0, pi/2]")
    rabis, dets, gammas = [], [], []
    for th in theta_grid:
        seq = _rotation_for_theta(th, subject, rabi)
        traj = propagate_piecewise(seq, _plus_state(seq), samples_per_segment)
        try:
            dec = aa_phase(traj)
        except CyclicityError as exc:
            raise CalibrationError(f"non-cyclic evolution at theta={th}") from exc
        if not dec.valid:
            raise CalibrationError(f"cyclicity defect {dec.cyclicity_defect:.2e} at theta={th}")
        rabis.append(rabi)
        dets.append(2 * rabi / math.tan(th))
        gammas.append(dec.geometric)
    gammas = np.array(gammas)
    unwrapped = np.unwrap(gammas)
    branch = np.round((unwrapped - gammas) / (2 * math.pi)).astype(int)
    return CalibrationTable(theta_grid, np.array(rabis), np.array(dets), gammas, branch, subject)


def default_table(subject="one_qubit", n=64):
    return calibrate_gamma(np.linspace(0.02, math.pi / 2 - 1e-3, n), subject)


# ---------------------------------------------------------------- SU(2) compiler


def zyz_decompose(U):
    """``U = exp(i chi) Rz(a) Ry(b) Rz(c)`` with ``Rz(x) = exp(-i x sigma_z / 2)`` etc.

    Uses the package Pauli matrices; ``b`` lies in ``[0, pi]``.
    """
    P = qcore.pauli("x")
    Us = P @ np.asarray(U, dtype=complex) @ P  # package Paulis = P (textbook Paulis) P
    det = np.linalg.det(Us)
    chi = 0.5 * math.atan2(det.imag, det.real)
    V = Us * np.exp(-1j * chi)
    b = 2 * math.atan2(abs(V[1, 0]), abs(V[0, 0]))
    s = 2 * np.angle(V[1, 1]) if abs(V[1, 1]) > 1e-14 else 0.0
    d = 2 * np.angle(V[1, 0]) if abs(V[1, 0]) > 1e-14 else 0.0
    a, c = 0.5 * (s + d), 0.5 * (s - d)
    return float(chi), float(a), float(b), float(c)


def rz(x):
    return qcore.expm_hermitian(0.5 * qcore.pauli("z"), x)


def ry(x):
    return qcore.expm_hermitian(0.5 * qcore.pauli("y"), x)


def compile_su2(target, ion: IonParams = None, rabi=0.1, table=None, frame="interaction", tol=1e-12):
    """Compile a one-qubit unitary into geometric rotation / phase primitives.

    The y-rotation leg holds ``rabi`` fixed and picks the detuning from the
    calibrated tilt; in the interaction picture the detuning phase it leaves
    behind is absorbed into the following z leg.  The returned sequence
    carries ``global_phase`` with ``target = exp(i global_phase) U_seq``.
    """
    ion = ion or IonParams(10.0, 0)
    table = table if table is not None else default_table()
    chi, a, b, c = zyz_decompose(target)
    subject = ("one_qubit", ion.label)
    if b < tol:
        zs = [a + c]
    else:
        gamma = -0.5 * b
        theta = table.theta_for(gamma)
        det = 2 * rabi / math.tan(theta)
        if det <= 0:
            raise CalibrationError("rotation leg requires positive detuning")
        rot = seq_rotation_1q(ion, rabi, det)
        extra = det * rot.total_duration if frame == "interaction" else 0.0
        zs = [c, None, a + extra]
        legs_rot = rot
    seq = empty_sequence(subject, "compiled SU(2)")
    for z in zs:
        if z is None:
            seq = seq.then(legs_rot)
            continue
        # exp(-i z sigma_z / 2) with z folded into (-pi, pi]; each 2 pi fold is a global -1
        zf = qcore.wrap_phase(0.5 * z) * 2
        k = round((z - zf) / (2 * math.pi))
        chi += k * math.pi
        if abs(zf) < tol:
            continue
        seq = seq.then(seq_phase_1q(ion, rabi, z_phase_angle_to_phi0(0.5 * zf)))
    return replace(seq, intent="compiled SU(2)", global_phase=qcore.wrap_phase(chi),
                   meta={"euler": (chi, a, b, c), "frame": frame})

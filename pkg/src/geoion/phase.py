"""Total, dynamical and geometric (Aharonov-Anandan) phases of cyclic evolutions.

The solid angle of the Bloch-sphere loop is computed independently of the
state phases, giving an oracle for ``geometric = -solid_angle / 2``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import CyclicityError, ResolutionError
from .qcore import wrap_phase

VALID_DEFECT = 1e-6
HARD_DEFECT = 1e-3


@dataclass(frozen=True)
class PhaseDecomposition:
    total: float
    dynamical: float
    geometric: float
    cyclicity_defect: float

    @property
    def valid(self):
        return self.cyclicity_defect <= VALID_DEFECT

    def to_dict(self):
        d = asdict(self)
        d["valid"] = self.valid
        return d


def total_phase(psi0, psiT, tol=VALID_DEFECT):
    """``arg <psi0|psiT>`` in (-pi, pi]; requires ``1 - |<psi0|psiT>| <= tol``."""
    ov = np.vdot(psi0, psiT)
    defect = 1.0 - abs(ov)
    if defect > tol:
        raise CyclicityError(f"evolution is not cyclic (defect {defect:.3e} > {tol:.1e})")
    return wrap_phase(math.atan2(ov.imag, ov.real))


def dynamical_phase(traj):
    """``-integral <psi|H|psi> dt`` by composite Simpson per segment."""
    total = 0.0
    for k in np.unique(traj.segment):
        sel = traj.segment == k
        t = traj.times[sel]
        if len(t) < 3:
            raise ResolutionError("need at least 3 samples per segment")
        total += simpson(traj.expectation_H[sel], x=t)
    return -float(total)


def aa_phase(traj):
    """Split the phase acquired along a cyclic trajectory."""
    psi0, psiT = traj.states[0], traj.states[-1]
    defect = 1.0 - abs(np.vdot(psi0, psiT))
    tot = total_phase(psi0, psiT, tol=HARD_DEFECT)
    dyn = dynamical_phase(traj)
    return PhaseDecomposition(tot, dyn, wrap_phase(tot - dyn), float(defect))


@dataclass
class BlochPath:
    points: np.ndarray

    @property
    def closure_defect(self):
        return float(np.linalg.norm(self.points[0] - self.points[-1]))

    @classmethod
    def from_trajectory(cls, traj):
        if traj.bloch is None:
            raise ResolutionError("trajectory carries no Bloch vectors")
        return cls(np.asarray(traj.bloch))


def _triangle_solid_angle(a, b, c):
    # Van Oosterom-Strackee; vectorised over b, c
    num = np.einsum("j,ij->i", a, np.cross(b, c))
    den = 1.0 + b @ a + np.einsum("ij,ij->i", b, c) + c @ a
    return 2.0 * np.arctan2(num, den)


def solid_angle(path: BlochPath, max_gap=0.1, closure_tol=1e-8):
    """Signed solid angle enclosed by a closed Bloch-sphere path.

    Evaluates the line integral of ``(1 - cos theta) dphi`` about the north
    pole edge by edge; each edge contributes the exact area of the geodesic
    triangle (pole, p_i, p_i+1), so great-circle arcs are integrated exactly.
    Orientation follows the right-hand rule.  If the path passes near the
    south pole the reference pole is moved, which only changes the result by
    a multiple of 4 pi.
    """
    p = np.asarray(path.points, dtype=float)
    if len(p) < 2:
        return 0.0
    if path.closure_defect > closure_tol:
        raise ResolutionError(f"path not closed (defect {path.closure_defect:.2e})")
    p = p / np.linalg.norm(p, axis=1)[:, None]
    gaps = np.arccos(np.clip(np.einsum("ij,ij->i", p[:-1], p[1:]), -1.0, 1.0))
    if gaps.size and gaps.max() > max_gap:
        raise ResolutionError(f"consecutive points {gaps.max():.3f} rad apart (> {max_gap})")
    ref = np.array([0.0, 0.0, 1.0])
    if np.min(p @ ref) < -1 + 1e-6:
        candidates = np.vstack([np.eye(3), -np.eye(3)])
        ref = candidates[np.argmin([np.max(p @ -c) for c in candidates])]
    omega = float(np.sum(_triangle_solid_angle(ref, p[:-1], p[1:])))
    return math.fmod(omega, 4 * math.pi)

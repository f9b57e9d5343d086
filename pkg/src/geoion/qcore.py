"""Dense linear algebra and state primitives.

States are 1-d complex ``numpy`` arrays and operators are 2-d complex arrays.
Basis conventions used throughout the package:

* one qubit: ``(|0>, |1>)`` with ``sigma_z = |1><1| - |0><0| = diag(-1, +1)``
  and ``sigma_+ = |1><0|``;
* two qubits: ``(|00>, |01>, |10>, |11>)``, the leftmost label is ion j;
* the phonon factor is always rightmost, Fock states ``|0> .. |N-1>``.

With these choices ``sigma_x sigma_y = i sigma_z`` and the eigenstates of
``sigma_y`` are ``|+-> = (|1> +- i|0>)/sqrt(2)``.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import DimensionError, KindError

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10

_PAULI_2 = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, 1j], [-1j, 0]], dtype=complex),
    "z": np.array([[-1, 0], [0, 1]], dtype=complex),
    "plus": np.array([[0, 0], [1, 0]], dtype=complex),
    "minus": np.array([[0, 1], [0, 0]], dtype=complex),
}


def pauli(which, subspace=None, dim=2):
    """Pauli operator on a two-dimensional subspace of a ``dim``-level space.

    ``subspace=(lo, hi)`` names the basis indices playing the roles of |0> and
    |1>. Outside the subspace the operator is zero; e.g. ``pauli("z", (0, 3), 4)``
    is the two-bit Sigma_z with ``Sigma_z|11> = +|11>`` and ``Sigma_z|00> = -|00>``.
    """
    if which not in _PAULI_2:
        raise KindError(f"unknown Pauli kind {which!r}")
    if subspace is None:
        if dim != 2:
            raise DimensionError("a subspace is required when dim != 2")
        return _PAULI_2[which].copy()
    lo, hi = subspace
    if lo == hi or not (0 <= lo < dim and 0 <= hi < dim):
        raise DimensionError(f"invalid subspace {subspace!r} for dim {dim}")
    out = np.zeros((dim, dim), dtype=complex)
    idx = (lo, hi)
    p = _PAULI_2[which]
    for a in range(2):
        for b in range(2):
            out[idx[a], idx[b]] = p[a, b]
    return out


def pauli_vector(n, subspace=None, dim=2):
    """``n . sigma`` for a real 3-vector ``n``."""
    n = np.asarray(n, dtype=float)
    return sum(c * pauli(w, subspace, dim) for c, w in zip(n, "xyz"))


def kron(*ops):
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def destroy(n_levels):
    """Annihilation operator on ``n_levels`` Fock states."""
    return np.diag(np.sqrt(np.arange(1, n_levels)), k=1).astype(complex)


def num(n_levels):
    return np.diag(np.arange(n_levels)).astype(complex)


def basis(dim, index):
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def basis_labels(n_qubits, fock_levels=None):
    """Labels in the package basis order, e.g. ``['00', '01', '10', '11']``."""
    labels = ["".join(bits) for bits in itertools.product("01", repeat=n_qubits)]
    if fock_levels:
        labels = [f"{q},{n}" for q in labels for n in range(fock_levels)]
    return labels


def sigma_y_eigenstate(sign):
    """|+> (sign=+1) or |-> (sign=-1), eigenstates of sigma_y."""
    return np.array([sign * 1j, 1.0], dtype=complex) / math.sqrt(2)


def normalize(psi):
    psi = np.asarray(psi, dtype=complex)
    nrm = np.linalg.norm(psi)
    if nrm == 0 or not np.isfinite(nrm):
        raise DimensionError("cannot normalize a zero or non-finite vector")
    return psi / nrm


def dagger(a):
    return np.conj(np.transpose(a))


def max_abs(a):
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def is_hermitian(h, tol=HERMITIAN_TOL):
    h = np.asarray(h)
    return h.ndim == 2 and h.shape[0] == h.shape[1] and max_abs(h - dagger(h)) <= tol


def is_unitary(u, tol=UNITARY_TOL):
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return max_abs(dagger(u) @ u - np.eye(u.shape[0])) <= tol


def eigh_hermitian(h):
    """Eigendecomposition with a hermiticity check; returns ``(evals, evecs)``."""
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h, tol=max(HERMITIAN_TOL, HERMITIAN_TOL * max_abs(h))):
        raise KindError("operator is not hermitian")
    return np.linalg.eigh(0.5 * (h + dagger(h)))


def expm_from_eig(evals, evecs, t):
    return (evecs * np.exp(-1j * evals * t)) @ dagger(evecs)


def expm_hermitian(h, t):
    """Exact propagator ``exp(-i H t)`` via eigendecomposition of ``H``."""
    evals, evecs = eigh_hermitian(h)
    return expm_from_eig(evals, evecs, t)


def fidelity_up_to_phase(u, v):
    """``|Tr(U^dagger V)| / dim``; equals 1 iff ``U = exp(i chi) V``."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise DimensionError(f"shape mismatch {u.shape} vs {v.shape}")
    val = abs(np.trace(dagger(u) @ v)) / u.shape[0]
    return float(min(val, 1.0))


def expect(op, psi):
    psi = np.asarray(psi)
    return complex(np.vdot(psi, op @ psi))


def bloch_of(psi):
    """Bloch vector ``(<sigma_x>, <sigma_y>, <sigma_z>)`` of a qubit state."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2,):
        raise DimensionError("bloch_of needs a two-component state")
    a0, a1 = psi
    c = np.conj(a0) * a1
    # <x> = 2 Re(a0* a1); <y> = -2 Im(a0* a1) for sigma_y = [[0, i], [-i, 0]]
    return np.array([2 * c.real, -2 * c.imag, abs(a1) ** 2 - abs(a0) ** 2])


def wrap_phase(x):
    """Map an angle into (-pi, pi]; -pi itself is sent to +pi."""
    y = math.remainder(float(x), 2 * math.pi)
    if y <= -math.pi + 1e-15:
        y += 2 * math.pi
    return y


def phase_distance(a, b):
    """Smallest absolute difference between two angles modulo 2 pi."""
    return abs(math.remainder(float(a) - float(b), 2 * math.pi))

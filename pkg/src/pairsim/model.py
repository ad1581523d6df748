"""Hamiltonian and Liouvillian assembly for the driven pair-emission model.

A driven two-level atom converts its excitation into a photon-phonon pair
through the tripartite coupling J (sigma+ a b + sigma- a^dag b^dag).  In the
rotating frame used throughout, the atom and the photon mode both carry the
detuning Delta while the phonon mode carries none; that asymmetry is part of
the model definition, not an omission.

Rate-name convention (also deliberate): kappa is the decay rate of the atom,
gamma_c the photon loss rate, gamma_m the phonon loss rate.  The mechanical
bath may be thermal (m_th > 0), the optical and atomic baths are taken at
zero temperature.

Superoperators act on column-stacked density matrices: vec(A rho B) =
(B^T kron A) vec(rho).  This vectorization contract is frozen; mixing it
with the row-stacking convention silently transposes everything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError
from .operators import (
    HilbertSpace,
    atom_lowering,
    phonon_lowering,
    photon_lowering,
)

__all__ = [
    "SystemParams",
    "build_hamiltonian",
    "hamiltonian_superop",
    "lindblad_dissipator",
    "build_liouvillian",
    "vec",
    "unvec",
    "trace_functional",
]


@dataclass(frozen=True)
class SystemParams:
    """Model parameters, all in units of the atom decay rate unless the
    caller chooses otherwise (kappa=1 keeps that convention)."""

    delta: float = 0.0
    j_coupling: float = 0.0
    omega: float = 0.0
    kappa: float = 1.0
    gamma_c: float = 0.0
    gamma_m: float = 0.0
    m_th: float = 0.0

    def __post_init__(self) -> None:
        for name in ("kappa", "gamma_c", "gamma_m", "m_th"):
            value = getattr(self, name)
            if value < 0:
                raise ConfigError(f"{name} must be nonnegative, got {value}")
        for name in ("delta", "j_coupling", "omega", "kappa", "gamma_c", "gamma_m", "m_th"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")

    def with_value(self, name: str, value: float) -> "SystemParams":
        """Copy with one field replaced (used by the sweep driver)."""
        if name not in self.__dataclass_fields__:
            raise ConfigError(f"unknown parameter {name!r}")
        return replace(self, **{name: value})

    @property
    def max_rate(self) -> float:
        return max(self.kappa, self.gamma_c, self.gamma_m * (self.m_th + 1.0))

    @property
    def min_positive_rate(self) -> float:
        rates = [r for r in (self.kappa, self.gamma_c, self.gamma_m) if r > 0]
        if not rates:
            raise ConfigError("no positive damping rate; the dynamics has no relaxation scale")
        return min(rates)


def build_hamiltonian(params: SystemParams, space: HilbertSpace) -> sp.csr_matrix:
    """Rotating-frame Hamiltonian on the composite space.

    H = Delta sigma+ sigma- + Delta a^dag a
        + J (sigma+ a b + sigma- a^dag b^dag) + Omega (sigma+ + sigma-)
    """
    s_minus = atom_lowering(space)
    s_plus = s_minus.conj().T.tocsr()
    a = photon_lowering(space)
    b = phonon_lowering(space)

    h = params.delta * (s_plus @ s_minus)
    h = h + params.delta * (a.conj().T @ a)
    pair = s_plus @ a @ b
    h = h + params.j_coupling * (pair + pair.conj().T)
    h = h + params.omega * (s_plus + s_minus)
    return h.tocsr()


def hamiltonian_superop(h: sp.spmatrix) -> sp.csr_matrix:
    """Coherent part -i [H, .] as a superoperator (column-stacking)."""
    dim = h.shape[0]
    eye = sp.identity(dim, dtype=complex, format="csr")
    return (-1j * (sp.kron(eye, h) - sp.kron(h.T, eye))).tocsr()


def lindblad_dissipator(op: sp.spmatrix, rate: float) -> sp.csr_matrix:
    """Superoperator for rate * (o rho o^dag - {o^dag o, rho} / 2)."""
    if rate < 0:
        raise ConfigError(f"dissipator rate must be nonnegative, got {rate}")
    op = sp.csr_matrix(op)
    dim = op.shape[0]
    eye = sp.identity(dim, dtype=complex, format="csr")
    odo = (op.conj().T @ op).tocsr()
    jump = sp.kron(op.conj(), op)
    anticomm = 0.5 * (sp.kron(eye, odo) + sp.kron(odo.T, eye))
    return (rate * (jump - anticomm)).tocsr()


def build_liouvillian(params: SystemParams, space: HilbertSpace) -> sp.csr_matrix:
    """Full generator of the master equation, as a sparse matrix acting on
    vectorized density matrices.

    L = -i[H, .] + kappa D[sigma-] + gamma_c D[a]
        + gamma_m (m_th + 1) D[b] + gamma_m m_th D[b^dag]
    """
    h = build_hamiltonian(params, space)
    lv = hamiltonian_superop(h)
    if params.kappa > 0:
        lv = lv + lindblad_dissipator(atom_lowering(space), params.kappa)
    if params.gamma_c > 0:
        lv = lv + lindblad_dissipator(photon_lowering(space), params.gamma_c)
    if params.gamma_m > 0:
        b = phonon_lowering(space)
        lv = lv + lindblad_dissipator(b, params.gamma_m * (params.m_th + 1.0))
        if params.m_th > 0:
            lv = lv + lindblad_dissipator(b.conj().T.tocsr(), params.gamma_m * params.m_th)
    return lv.tocsr()


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of vec()."""
    return np.asarray(v).reshape((dim, dim), order="F")


def trace_functional(dim: int) -> np.ndarray:
    """Row vector t with t @ vec(rho) = trace(rho)."""
    t = np.zeros(dim * dim, dtype=complex)
    t[np.arange(dim) * (dim + 1)] = 1.0
    return t

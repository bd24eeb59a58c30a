"""Homogeneous deformation states and the line/area/volume invariants.

``K1 = |F|``, ``K2 = |cof F|`` and ``K3 = det F``. Derivatives are taken with
respect to the Hencky strain ``log V``; first derivatives are returned as
symmetric tensors, second derivatives as 6x6 tangents (see
:mod:`hyperlab.symtensor`).
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .symtensor import (
    IDENTITY,
    ONE_DYAD_ONE,
    dyad66,
    eig_sym,
    exp_derivative66,
    exp_sym,
    log_spd,
)


class NonPositiveDeterminant(ValueError):
    pass


class NonPositiveStretch(ValueError):
    pass


def cofactor(F) -> np.ndarray:
    """``det(F) F^-T`` assembled from 2x2 minors; valid for singular F."""
    F = np.asarray(F, dtype=float)
    C = np.empty((3, 3))
    for i in range(3):
        i1, i2 = (i + 1) % 3, (i + 2) % 3
        for j in range(3):
            j1, j2 = (j + 1) % 3, (j + 2) % 3
            C[i, j] = F[i1, j1] * F[i2, j2] - F[i1, j2] * F[i2, j1]
    return C


@dataclass(frozen=True, eq=False)
class DeformationState:
    F: np.ndarray

    def __post_init__(self):
        F = np.array(self.F, dtype=float)
        if F.shape != (3, 3):
            raise ValueError(f"F must be 3x3, got shape {F.shape}")
        J = float(np.linalg.det(F))
        if not J > 0.0:
            raise NonPositiveDeterminant(f"det F = {J:.6g} must be positive")
        F.setflags(write=False)
        object.__setattr__(self, "F", F)

    @classmethod
    def from_logv(cls, logV) -> "DeformationState":
        state = cls(exp_sym(logV))
        # keep the caller's strain exactly rather than re-deriving it
        state.__dict__["logV"] = 0.5 * (np.asarray(logV, float) + np.asarray(logV, float).T)
        return state

    @cached_property
    def J(self) -> float:
        return float(np.linalg.det(self.F))

    @cached_property
    def B(self) -> np.ndarray:
        return self.F @ self.F.T

    @cached_property
    def cofF(self) -> np.ndarray:
        return cofactor(self.F)

    @cached_property
    def cofB(self) -> np.ndarray:
        return self.cofF @ self.cofF.T

    @cached_property
    def Binv(self) -> np.ndarray:
        return self.cofB / self.J**2

    @cached_property
    def K(self) -> tuple:
        return (
            float(np.sqrt(np.trace(self.B))),
            float(np.sqrt(np.trace(self.cofB))),
            self.J,
        )

    @cached_property
    def spectral(self):
        """Eigen-decomposition of B: squared principal stretches and directions."""
        return eig_sym(self.B)

    @cached_property
    def stretches(self) -> np.ndarray:
        return np.sqrt(self.spectral.values)

    @cached_property
    def logV(self) -> np.ndarray:
        return 0.5 * log_spd(self.B)

    @cached_property
    def log_stretches(self) -> np.ndarray:
        """Eigenvalues of log V, ordered like :attr:`spectral`."""
        return 0.5 * np.log(self.spectral.values)


def invariants(F) -> tuple:
    return DeformationState(F).K


def invariants_from_logs(x) -> tuple:
    """``(K1, K2, K3)`` from the principal log-stretches."""
    # scalar math is much faster than numpy for three entries
    a, b, c = (float(v) for v in x)
    K3 = math.exp(a + b + c)
    return (
        math.sqrt(math.exp(2 * a) + math.exp(2 * b) + math.exp(2 * c)),
        K3 * math.sqrt(math.exp(-2 * a) + math.exp(-2 * b) + math.exp(-2 * c)),
        K3,
    )


def invariants_from_logv(logV) -> tuple:
    return invariants_from_logs(np.linalg.eigvalsh(0.5 * (logV + np.transpose(logV))))


def dK_dlogV(state: DeformationState):
    K1, K2, K3 = state.K
    return (
        state.B / K1,
        (K2**2 * IDENTITY - state.cofB) / K2,
        K3 * IDENTITY,
    )


def dB_dlogV(state: DeformationState) -> np.ndarray:
    """6x6 tangent of ``B = exp(2 log V)``."""
    lam2, vecs = state.spectral
    return exp_derivative66(0.5 * np.log(lam2), vecs, k=2.0)


def dBinv_dlogV(state: DeformationState) -> np.ndarray:
    lam2, vecs = state.spectral
    return exp_derivative66(0.5 * np.log(lam2), vecs, k=-2.0)


def stretch_divided_difference(a, b) -> float:
    """``(a - b) / (log a - log b)`` for positive a, b; equals ``a`` when they coincide.

    With ``a, b`` the squared principal stretches this is the shear coefficient
    of ``D_logV B``; its eigenvalue on a normalised eigenframe shear is twice this.
    """
    d = np.log(a) - np.log(b)
    g = np.sqrt(a * b)
    if abs(d) < 1e-6:
        return float(g * (1.0 + d * d / 24.0))
    return float((a - b) / d)


def d2K_dlogV(state: DeformationState):
    K1, K2, K3 = state.K
    dK1, dK2, _ = dK_dlogV(state)
    B, Binv = state.B, state.Binv
    d2K1 = (dB_dlogV(state) - dyad66(dK1, dK1)) / K1
    d2K2 = dyad66(dK2, dK2) / K2 - (K3**2 / K2) * (
        dBinv_dlogV(state) + 2 * K3**2 * dyad66(Binv / K2, Binv / K2)
    )
    d2K3 = K3 * ONE_DYAD_ONE
    return d2K1, d2K2, d2K3


def lemma_tensors(state: DeformationState):
    """``D B - 2 (B/K1)(x)(B/K1)`` (PSD) and ``D B^-1 + 2 K3^2 (B^-1/K2)(x)(B^-1/K2)`` (NSD).

    Both have the hydrostatic direction as their kernel.
    """
    K1, K2, K3 = state.K
    B, Binv = state.B, state.Binv
    first = dB_dlogV(state) - 2 * dyad66(B / K1, B / K1)
    second = dBinv_dlogV(state) + 2 * K3**2 * dyad66(Binv / K2, Binv / K2)
    return first, second


def axial_block(stretches) -> np.ndarray:
    """3x3 matrix acting on the axial eigenframe components in the PSD lemma.

    Singular with the kernel along (1, 1, 1).
    """
    l2 = np.asarray(stretches, dtype=float) ** 2
    return np.diag(l2 * l2.sum()) - np.outer(l2, l2)


def make_uniaxial(l1, l2, l3=None) -> DeformationState:
    l3 = l2 if l3 is None else l3
    lam = np.array([l1, l2, l3], dtype=float)
    if np.any(lam <= 0.0):
        raise NonPositiveStretch(f"stretches must be positive, got {lam}")
    return DeformationState(np.diag(lam))


def make_shear(gamma) -> DeformationState:
    F = np.eye(3)
    F[0, 1] = gamma
    return DeformationState(F)

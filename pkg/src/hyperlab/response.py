"""Stress and tangent evaluation.

The Cauchy stress of an invariant model is assembled from ``Psi_i`` and the
log-strain derivatives of the invariants; an independent route differentiates
the energy in the Hencky strain numerically (Kirchhoff stress is the gradient
of the energy with respect to ``log V``).
"""

from dataclasses import dataclass

import numpy as np

from .kinematics import (DeformationState, NonPositiveStretch, d2K_dlogV, dK_dlogV,
                         invariants_from_logs)
from .models import (CauchyLaw, InvariantModel, LogStrainModel, OutOfDomain,
                     PrincipalStretchModel)
from .symtensor import HYDROSTATIC6, basis6, dyad66, from_basis6, to_basis6


@dataclass(frozen=True)
class StressState:
    sigma: np.ndarray
    tau: np.ndarray
    J: float


def _as_state(state_or_logv) -> DeformationState:
    if isinstance(state_or_logv, DeformationState):
        return state_or_logv
    return DeformationState.from_logv(state_or_logv)


def cauchy_stress(model, state) -> StressState:
    state = _as_state(state)
    J = state.J
    if isinstance(model, InvariantModel):
        psi_i = model.grad(state.K)
        tau = sum(p * d for p, d in zip(psi_i, dK_dlogV(state)))
    elif isinstance(model, LogStrainModel):
        tau = model.kirchhoff(state.logV)
    elif isinstance(model, CauchyLaw):
        sigma = model.cauchy(state.logV)
        return StressState(sigma, J * sigma, J)
    else:
        raise TypeError(f"cannot evaluate stress for {type(model).__name__}")
    tau = 0.5 * (tau + tau.T)
    return StressState(tau / J, tau, J)


def sigma_hat(model, logV) -> np.ndarray:
    """Cauchy stress as a function of the Hencky strain.

    Works on the principal values of ``log V`` directly, which keeps repeated
    evaluation (finite-difference tangents) cheap.
    """
    E = 0.5 * (np.asarray(logV, dtype=float) + np.transpose(logV))
    if isinstance(model, InvariantModel):
        x, Q = np.linalg.eigh(E)
        K1, K2, K3 = K = invariants_from_logs(x)
        g = model.grad(K)
        b = np.exp(2 * x)
        s = (g[0] * b / K1 + g[1] * (K2 * K2 - K3 * K3 / b) / K2 + g[2] * K3) / K3
        return (Q * s) @ Q.T
    if isinstance(model, LogStrainModel):
        return model.kirchhoff(E) / np.exp(np.trace(E))
    if isinstance(model, CauchyLaw):
        return model.cauchy(E)
    return cauchy_stress(model, DeformationState.from_logv(E)).sigma


def _richardson_diff(fn, x0, direction, h):
    """Central difference of ``fn`` along ``direction`` with one Richardson step (O(h^4))."""
    def cd(step):
        return (fn(x0 + step * direction) - fn(x0 - step * direction)) / (2 * step)
    return (4 * cd(h / 2) - cd(h)) / 3


def _fd_basis6(fn, E, h, gap_tol=1e-8, max_shrinks=6):
    """Derivatives of ``fn`` along the six basis directions at ``E``, as columns.

    Central differences at ``h, h/2, h/4, ...`` are paired into Richardson
    estimates; the gap between successive estimates measures their error.
    Returns the first estimate whose gap is below ``gap_tol`` relative, or
    else the one with the smallest gap (steep energies near a domain wall,
    rounding near zero). Steps that leave the domain are skipped.
    """
    E = np.asarray(E, dtype=float)

    def central(step):
        cols = []
        for a in range(6):
            d = basis6(a)
            cols.append(np.ravel((fn(E + step * d) - fn(E - step * d)) / (2 * step)))
        return np.array(cols).T

    prev_c, prev_R = None, None
    best, best_gap = None, np.inf
    for _ in range(2 * max_shrinks + 2):
        try:
            c = central(h)
        except OutOfDomain:
            prev_c, prev_R = None, None
            h /= 2
            continue
        if prev_c is not None:
            R = (4 * c - prev_c) / 3
            if prev_R is not None:
                scale = np.abs(R).max()
                gap = np.abs(R - prev_R).max()
                if gap <= gap_tol * scale or scale == 0.0:
                    return R
                if gap < best_gap:
                    best, best_gap = R, gap
                elif gap > 8 * best_gap:
                    # rounding has taken over
                    break
            prev_R = R
        prev_c = c
        h /= 2
    if best is None:
        if prev_R is None:
            raise OutOfDomain("no finite-difference step fits inside the domain")
        return prev_R
    return best


def cauchy_stress_fd(model, state, h=None) -> StressState:
    """Kirchhoff stress by finite differences of the energy in the Hencky strain."""
    state = _as_state(state)
    E = state.logV
    if h is None:
        h = 1e-3 * max(1.0, np.linalg.norm(E))
    grad6 = _fd_basis6(model.energy_logv, E, h, gap_tol=1e-9)[0]
    tau = from_basis6(grad6)
    return StressState(tau / state.J, tau, state.J)


def principal_cauchy(model: PrincipalStretchModel, stretches, p=None) -> StressState:
    """Principal Cauchy stresses as a diagonal tensor.

    With ``p`` given the material is treated as incompressible,
    ``sigma_i = -p + l_i dpsi/dl_i``; otherwise ``sigma_i = l_i dpsi/dl_i / J``.
    """
    lam = np.asarray(stretches, dtype=float)
    if np.any(lam <= 0):
        raise NonPositiveStretch(f"stretches must be positive, got {lam}")
    J = float(np.prod(lam))
    t = lam * model.grad(lam)
    if p is None:
        return StressState(np.diag(t / J), np.diag(t), J)
    sigma = np.diag(t - p)
    return StressState(sigma, J * sigma, J)


def tangent_analytic(model, state) -> np.ndarray:
    """6x6 derivative of the Cauchy stress with respect to ``log V``."""
    state = _as_state(state)
    if isinstance(model, InvariantModel):
        K3 = state.K[2]
        psi_i = model.grad(state.K)
        psi_ij = model.hess(state.K)
        dK = [to_basis6(d) for d in dK_dlogV(state)]
        d2K = d2K_dlogV(state)
        tau6 = sum(p * d for p, d in zip(psi_i, dK))
        T = -np.outer(tau6, dK[2]) / K3**2
        for i in range(3):
            for j in range(3):
                if psi_ij[i, j] != 0.0:
                    T += psi_ij[i, j] * np.outer(dK[i], dK[j]) / K3
            T += psi_i[i] * d2K[i] / K3
        return T
    if isinstance(model, LogStrainModel):
        E = state.logV
        tau = model.kirchhoff(E)
        return (model.kirchhoff_tangent(E) - dyad66(tau, np.eye(3))) / state.J
    if isinstance(model, CauchyLaw):
        T = model.tangent(state.logV)
        if T is None:
            raise TypeError(f"{model.name} provides no analytic tangent; use tangent_fd")
        return T
    raise TypeError(f"cannot evaluate tangent for {type(model).__name__}")


def tangent_fd(model, logV, h=1e-4) -> np.ndarray:
    """6x6 tangent of ``sigma_hat`` by Richardson-extrapolated central differences."""
    return _fd_basis6(lambda X: to_basis6(sigma_hat(model, X)), logV, h)


def kirchhoff_tangent_fd(model, logV, h=1e-4) -> np.ndarray:
    """6x6 Hessian of the energy in the Hencky strain, from differences of the Kirchhoff stress."""
    return _fd_basis6(lambda X: to_basis6(cauchy_stress(model, DeformationState.from_logv(X)).tau),
                      logV, h)


def first_piola(model, F) -> np.ndarray:
    """``S1 = tau F^-T``."""
    state = DeformationState(F)
    tau = cauchy_stress(model, state).tau
    return tau @ state.cofF / state.J


def is_coaxial(sigma, B, tol=1e-10) -> bool:
    c = sigma @ B - B @ sigma
    return np.linalg.norm(c) <= tol * max(np.linalg.norm(sigma) * np.linalg.norm(B), 1e-300)


# hydrostatic direction, handy for tests and the checkers
HYDROSTATIC = from_basis6(HYDROSTATIC6)

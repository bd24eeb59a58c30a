"""Strain-energy models and the Hencky Cauchy-elastic law.

Three kinds of material description live here:

* :class:`InvariantModel` -- an energy ``Psi(K1, K2, K3)`` with analytic first
  and second partials;
* :class:`LogStrainModel` -- an energy given directly in the Hencky strain
  together with its Kirchhoff stress and Kirchhoff tangent;
* :class:`CauchyLaw` -- a Cauchy stress given directly in the Hencky strain
  (not necessarily hyperelastic).

:class:`PrincipalStretchModel` covers incompressible energies in principal
stretches. Additive energy constants are fixed so the energy vanishes in the
reference configuration.
"""

import math
from typing import Callable, Optional

import numpy as np

from .kinematics import DeformationState, invariants_from_logs
from .symtensor import IDENTITY, IDENTITY66, ONE_DYAD_ONE, dyad66

SQRT3 = math.sqrt(3.0)
K_IDENTITY = (SQRT3, SQRT3, 1.0)


class BadParams(ValueError):
    pass


class OutOfDomain(ValueError):
    pass


def _plain(v):
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_plain(x) for x in v]
    return float(v) if isinstance(v, (int, float, np.number)) else v


def _require(cond, msg):
    if not cond:
        raise BadParams(msg)


class InvariantModel:
    """Energy ``Psi(K1, K2, K3)``.

    ``depends`` flags which invariants ``Psi`` actually depends on; checkers
    use it to select the reduced two-invariant conditions.
    """

    def __init__(self, name, params, psi, grad, hess,
                 admissible: Optional[Callable] = None, depends=(True, True, True)):
        self.name = name
        self.params = dict(params)
        self._psi = psi
        self._grad = grad
        self._hess = hess
        self._admissible = admissible
        self.depends = tuple(bool(d) for d in depends)
        self._offset = 0.0
        self._offset = self.psi(K_IDENTITY)

    def __repr__(self):
        args = ", ".join(f"{k}={_plain(v)!r}" for k, v in self.params.items())
        return f"{self.name}({args})"

    def admissible(self, K) -> bool:
        return self._admissible is None or bool(self._admissible(*K))

    def _check(self, K):
        if not self.admissible(K):
            raise OutOfDomain(f"{self.name}: K = {tuple(K)} outside the admissible domain")

    def psi(self, K) -> float:
        self._check(K)
        return float(self._psi(*K)) - self._offset

    def grad(self, K) -> np.ndarray:
        self._check(K)
        return np.asarray(self._grad(*K), dtype=float)

    def hess(self, K) -> np.ndarray:
        self._check(K)
        return np.asarray(self._hess(*K), dtype=float)

    # the common model interface used by response/conditions

    def admissible_logv(self, logV) -> bool:
        return self.admissible(invariants_from_logs(np.linalg.eigvalsh(logV)))

    def energy_logv(self, logV) -> float:
        return self.psi(invariants_from_logs(np.linalg.eigvalsh(logV)))

    def energy_F(self, F) -> float:
        return self.psi(DeformationState(F).K)

    def energy(self, state: DeformationState) -> float:
        return self.psi(state.K)


class LogStrainModel:
    """Energy ``W(log V)`` with Kirchhoff stress ``tau = D W`` and its 6x6 tangent."""

    def __init__(self, name, params, energy, kirchhoff, kirchhoff_tangent,
                 admissible: Optional[Callable] = None):
        self.name = name
        self.params = dict(params)
        self._energy = energy
        self._kirchhoff = kirchhoff
        self._tangent = kirchhoff_tangent
        self._admissible = admissible
        self._offset = 0.0
        self._offset = self.energy_logv(np.zeros((3, 3)))

    def __repr__(self):
        args = ", ".join(f"{k}={_plain(v)!r}" for k, v in self.params.items())
        return f"{self.name}({args})"

    def admissible_logv(self, logV) -> bool:
        return self._admissible is None or bool(self._admissible(logV))

    def _check(self, logV):
        if not self.admissible_logv(logV):
            raise OutOfDomain(f"{self.name}: strain outside the admissible domain")

    def energy_logv(self, logV) -> float:
        self._check(logV)
        return float(self._energy(np.asarray(logV, float))) - self._offset

    def energy_F(self, F) -> float:
        return self.energy_logv(DeformationState(F).logV)

    def energy(self, state: DeformationState) -> float:
        return self.energy_logv(state.logV)

    def kirchhoff(self, logV) -> np.ndarray:
        self._check(logV)
        return np.asarray(self._kirchhoff(np.asarray(logV, float)), dtype=float)

    def kirchhoff_tangent(self, logV) -> np.ndarray:
        self._check(logV)
        return np.asarray(self._tangent(np.asarray(logV, float)), dtype=float)


class CauchyLaw:
    """Cauchy stress given directly as ``sigma(log V)``."""

    def __init__(self, name, params, cauchy, tangent: Optional[Callable] = None):
        self.name = name
        self.params = dict(params)
        self._cauchy = cauchy
        self._tangent = tangent

    def __repr__(self):
        args = ", ".join(f"{k}={_plain(v)!r}" for k, v in self.params.items())
        return f"{self.name}({args})"

    def admissible_logv(self, logV) -> bool:
        return True

    def cauchy(self, logV) -> np.ndarray:
        return np.asarray(self._cauchy(np.asarray(logV, float)), dtype=float)

    def tangent(self, logV) -> Optional[np.ndarray]:
        return None if self._tangent is None else np.asarray(self._tangent(logV), dtype=float)


class PrincipalStretchModel:
    """Permutation-symmetric energy ``psi(l1, l2, l3)`` in principal stretches."""

    def __init__(self, name, params, psi, grad):
        self.name = name
        self.params = dict(params)
        self._psi = psi
        self._grad = grad

    def __repr__(self):
        args = ", ".join(f"{k}={_plain(v)!r}" for k, v in self.params.items())
        return f"{self.name}({args})"

    def psi(self, stretches) -> float:
        return float(self._psi(np.asarray(stretches, dtype=float)))

    def grad(self, stretches) -> np.ndarray:
        return np.asarray(self._grad(np.asarray(stretches, dtype=float)), dtype=float)


# -- Hencky-type models ------------------------------------------------------


def hencky(mu, lam) -> LogStrainModel:
    """Quadratic Hencky energy ``mu |log V|^2 + lam/2 (tr log V)^2``."""
    _require(mu > 0 and 2 * mu + 3 * lam > 0, f"hencky needs mu > 0 and 2mu+3lam > 0 (mu={mu}, lam={lam})")

    def energy(E):
        t = np.trace(E)
        return mu * np.sum(E * E) + 0.5 * lam * t * t

    def kirchhoff(E):
        return 2 * mu * E + lam * np.trace(E) * IDENTITY

    def tangent(E):
        return 2 * mu * IDENTITY66 + lam * ONE_DYAD_ONE

    return LogStrainModel("hencky", {"mu": mu, "lam": lam}, energy, kirchhoff, tangent)


def exponentiated_hencky(mu, lam, alpha, beta) -> LogStrainModel:
    _require(mu > 0 and lam > 0, f"exponentiated_hencky needs mu, lam > 0 (mu={mu}, lam={lam})")
    _require(alpha > 3 / 8 and beta > 1 / 8,
             f"exponentiated_hencky needs alpha > 3/8 and beta > 1/8 (alpha={alpha}, beta={beta})")

    def energy(E):
        t = np.trace(E)
        return mu / alpha * np.exp(alpha * np.sum(E * E)) + lam / (2 * beta) * np.exp(beta * t * t)

    def kirchhoff(E):
        t = np.trace(E)
        return (2 * mu * np.exp(alpha * np.sum(E * E)) * E
                + lam * np.exp(beta * t * t) * t * IDENTITY)

    def tangent(E):
        t = np.trace(E)
        a = np.exp(alpha * np.sum(E * E))
        b = np.exp(beta * t * t)
        return (2 * mu * a * (IDENTITY66 + 2 * alpha * dyad66(E, E))
                + lam * b * (1 + 2 * beta * t * t) * ONE_DYAD_ONE)

    return LogStrainModel("exponentiated_hencky",
                          {"mu": mu, "lam": lam, "alpha": alpha, "beta": beta},
                          energy, kirchhoff, tangent)


def hencky_1928(mu, lam) -> CauchyLaw:
    """Cauchy-elastic law ``sigma = 2 mu log V + lam tr(log V) 1``."""
    _require(mu > 0 and 2 * mu + 3 * lam > 0, f"hencky_1928 needs mu > 0 and 2mu+3lam > 0 (mu={mu}, lam={lam})")

    def cauchy(E):
        return 2 * mu * E + lam * np.trace(E) * IDENTITY

    def tangent(E):
        return 2 * mu * IDENTITY66 + lam * ONE_DYAD_ONE

    return CauchyLaw("hencky_1928", {"mu": mu, "lam": lam}, cauchy, tangent)


# -- invariant-based families ------------------------------------------------


def uniaxial_family(alpha) -> InvariantModel:
    """``sqrt(3) K1 + K3^-alpha / alpha``; at ``alpha = 0`` the volumetric term is ``-log K3``."""
    _require(0 <= alpha < 1, f"uniaxial_family needs alpha in [0, 1), got {alpha}")
    a = float(alpha)

    if a == 0.0:
        def psi(K1, K2, K3):
            return SQRT3 * K1 - math.log(K3)
    else:
        def psi(K1, K2, K3):
            return SQRT3 * K1 + K3 ** (-a) / a

    def grad(K1, K2, K3):
        return (SQRT3, 0.0, -K3 ** (-a - 1))

    def hess(K1, K2, K3):
        h = np.zeros((3, 3))
        h[2, 2] = (a + 1) * K3 ** (-(a + 2))
        return h

    return InvariantModel("uniaxial_family", {"alpha": alpha}, psi, grad, hess,
                          depends=(True, False, True))


def shear_family(alpha, beta) -> InvariantModel:
    """``K1^alpha K3^(-alpha/3) exp(beta log^2 K3)``."""
    _require(0 < alpha < 1, f"shear_family needs alpha in (0, 1), got {alpha}")
    _require(beta > 1 / 8, f"shear_family needs beta > 1/8, got {beta}")
    a, b = float(alpha), float(beta)

    def u_terms(K3):
        L = math.log(K3)
        u = K3 ** (-a / 3) * math.exp(b * L * L)
        g = (-a / 3 + 2 * b * L) / K3
        dg = (2 * b + a / 3 - 2 * b * L) / K3**2
        return u, u * g, u * (g * g + dg)

    def psi(K1, K2, K3):
        return K1**a * u_terms(K3)[0]

    def grad(K1, K2, K3):
        u, du, _ = u_terms(K3)
        return (a * K1 ** (a - 1) * u, 0.0, K1**a * du)

    def hess(K1, K2, K3):
        u, du, d2u = u_terms(K3)
        h13 = a * K1 ** (a - 1) * du
        return np.array([
            [a * (a - 1) * K1 ** (a - 2) * u, 0.0, h13],
            [0.0, 0.0, 0.0],
            [h13, 0.0, K1**a * d2u],
        ])

    return InvariantModel("shear_family", {"alpha": alpha, "beta": beta}, psi, grad, hess,
                          depends=(True, False, True))


def _chain_limited(name, idx, alpha, beta, gamma, shift_factor):
    _require(alpha >= 1, f"{name} needs alpha >= 1, got {alpha}")
    _require(beta > 3 ** (alpha / 2), f"{name} needs beta > 3^(alpha/2), got {beta}")
    _require(gamma >= 0.25, f"{name} needs gamma >= 1/4, got {gamma}")
    a, b, c = float(alpha), float(beta), float(gamma)
    shift = c - shift_factor * a * 3 ** (a / 2 - 1) / (b - 3 ** (a / 2))

    def admissible(K1, K2, K3):
        return (K1, K2)[idx] ** a < b

    def psi(K1, K2, K3):
        k = (K1, K2)[idx]
        return -math.log(b - k**a) - c * math.log(K3) + shift * K3

    def grad(K1, K2, K3):
        k = (K1, K2)[idx]
        g = [0.0, 0.0, -c / K3 + shift]
        g[idx] = a * k ** (a - 1) / (b - k**a)
        return tuple(g)

    def hess(K1, K2, K3):
        k = (K1, K2)[idx]
        d = b - k**a
        h = np.zeros((3, 3))
        h[idx, idx] = a * ((a - 1) * k ** (a - 2) / d + a * k ** (2 * (a - 1)) / d**2)
        h[2, 2] = c / K3**2
        return h

    depends = (idx == 0, idx == 1, True)
    return InvariantModel(name, {"alpha": alpha, "beta": beta, "gamma": gamma},
                          psi, grad, hess, admissible=admissible, depends=depends)


def chain_limited_line(alpha, beta, gamma) -> InvariantModel:
    """Energy finite only for ``K1^alpha < beta``."""
    return _chain_limited("chain_limited_line", 0, alpha, beta, gamma, 1.0)


def chain_limited_area(alpha, beta, gamma) -> InvariantModel:
    """Energy finite only for ``K2^alpha < beta``."""
    return _chain_limited("chain_limited_area", 1, alpha, beta, gamma, 2.0)


def chain_limited_volume(beta) -> InvariantModel:
    """``K1^3 / (beta - log^2 K3) - 3 sqrt(3)/beta K3``, finite only for ``log^2 K3 < beta``."""
    _require(0 < beta <= 27 / 4, f"chain_limited_volume needs 0 < beta <= 27/4, got {beta}")
    b = float(beta)
    c = 3 * SQRT3 / b

    def admissible(K1, K2, K3):
        return math.log(K3) ** 2 < b

    def u_terms(K3):
        L = math.log(K3)
        u = 1.0 / (b - L * L)
        du = 2 * L * u * u / K3
        d2u = (2 * u * u * (1 - L) + 8 * L * L * u**3) / K3**2
        return u, du, d2u

    def psi(K1, K2, K3):
        return K1**3 * u_terms(K3)[0] - c * K3

    def grad(K1, K2, K3):
        u, du, _ = u_terms(K3)
        return (3 * K1**2 * u, 0.0, K1**3 * du - c)

    def hess(K1, K2, K3):
        u, du, d2u = u_terms(K3)
        h13 = 3 * K1**2 * du
        return np.array([
            [6 * K1 * u, 0.0, h13],
            [0.0, 0.0, 0.0],
            [h13, 0.0, K1**3 * d2u],
        ])

    return InvariantModel("chain_limited_volume", {"beta": beta}, psi, grad, hess,
                          admissible=admissible, depends=(True, False, True))


def monomial(alpha, beta=0.0, gamma=0.0) -> InvariantModel:
    """``K1^alpha K2^beta K3^gamma``; not stress-free in general."""
    a, b, c = float(alpha), float(beta), float(gamma)

    def psi(K1, K2, K3):
        return K1**a * K2**b * K3**c

    def grad(K1, K2, K3):
        p = psi(K1, K2, K3)
        return (a * p / K1, b * p / K2, c * p / K3)

    def hess(K1, K2, K3):
        p = psi(K1, K2, K3)
        e = np.array([a, b, c])
        k = np.array([K1, K2, K3])
        return p * (np.outer(e, e) - np.diag(e)) / np.outer(k, k)

    return InvariantModel("monomial", {"alpha": alpha, "beta": beta, "gamma": gamma},
                          psi, grad, hess, depends=(a != 0, b != 0, c != 0))


def ball_counterexample() -> InvariantModel:
    """``|F F^T|^2 - 4 det F`` written as ``K1^4 - 2 K2^2 - 4 K3``."""

    def psi(K1, K2, K3):
        return K1**4 - 2 * K2**2 - 4 * K3

    def grad(K1, K2, K3):
        return (4 * K1**3, -4 * K2, -4.0)

    def hess(K1, K2, K3):
        return np.diag([12 * K1**2, -4.0, 0.0])

    return InvariantModel("ball_counterexample", {}, psi, grad, hess)


# -- incompressible ----------------------------------------------------------


def ogden_terms(mu, alpha) -> PrincipalStretchModel:
    """``sum_p mu_p (l1^a_p + l2^a_p + l3^a_p)`` with no parameter restrictions."""
    mu = [float(m) for m in np.atleast_1d(mu)]
    alpha = [float(a) for a in np.atleast_1d(alpha)]
    _require(len(mu) == len(alpha) and mu, "mu and alpha must be non-empty lists of equal length")

    def psi(lam):
        return sum(m * np.sum(lam**a) for m, a in zip(mu, alpha))

    def grad(lam):
        return sum(m * a * lam ** (a - 1) for m, a in zip(mu, alpha))

    return PrincipalStretchModel("ogden", {"mu": mu, "alpha": alpha}, psi, grad)


def incompressible_ogden(mu, alpha) -> PrincipalStretchModel:
    """Ogden-type energy meeting Ball's sufficient polyconvexity conditions (``mu_p > 0``, ``alpha_p >= 1``)."""
    mu_l, alpha_l = np.atleast_1d(mu), np.atleast_1d(alpha)
    _require(np.all(mu_l > 0), f"incompressible_ogden needs all mu_p > 0, got {mu_l.tolist()}")
    _require(np.all(alpha_l >= 1), f"incompressible_ogden needs all alpha_p >= 1, got {alpha_l.tolist()}")
    model = ogden_terms(mu_l, alpha_l)
    model.name = "incompressible_ogden"
    return model


CONSTRUCTORS = {
    "hencky": hencky,
    "exponentiated_hencky": exponentiated_hencky,
    "hencky_1928": hencky_1928,
    "uniaxial_family": uniaxial_family,
    "shear_family": shear_family,
    "chain_limited_line": chain_limited_line,
    "chain_limited_area": chain_limited_area,
    "chain_limited_volume": chain_limited_volume,
    "monomial": monomial,
    "ball_counterexample": ball_counterexample,
    "incompressible_ogden": incompressible_ogden,
}

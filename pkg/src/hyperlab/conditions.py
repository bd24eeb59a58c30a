"""Constitutive-inequality checkers.

Every checker evaluates a condition pointwise over a :class:`SamplingPlan` and
returns a :class:`ConditionReport`. A PASS certifies the condition on the
samples only. Margins are relative (normalised by a local stress scale) and
already include the decision tolerance, so ``margin < 0`` is a failure.
"""

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .kinematics import DeformationState, invariants_from_logs
from .models import (
    K_IDENTITY,
    CauchyLaw,
    InvariantModel,
    LogStrainModel,
    OutOfDomain,
    PrincipalStretchModel,
)
from .response import (
    _richardson_diff,
    cauchy_stress,
    first_piola,
    kirchhoff_tangent_fd,
    sigma_hat,
    tangent_fd,
)
from .symtensor import tangent_eigvals

PASS = "PASS"
FAIL = "FAIL"
OUT_OF_SCOPE = "OUT_OF_SCOPE_SAMPLES"

TOL = 1e-9
CLIP = 0.99


@dataclass(frozen=True)
class SamplingPlan:
    """Hencky-strain samples ``log V`` with ``|log V| <= radius``.

    ``random`` draws rotated strains; ``grid`` lays a ``per_axis``-point grid of
    principal log-stretches over ``[-box, box]^3`` (coaxial states suffice for
    isotropic models). The reference state is always the first sample.
    """

    mode: str = "random"
    radius: float = 2.0
    n: int = 1000
    seed: int = 0
    box: Optional[float] = None
    per_axis: int = 9
    clip: bool = True

    def samples(self) -> list:
        out = [np.zeros((3, 3))]
        if self.mode == "grid":
            box = self.radius / np.sqrt(3) if self.box is None else self.box
            axis = np.linspace(-box, box, self.per_axis)
            for x in axis:
                for y in axis:
                    for z in axis:
                        if x == y == z == 0.0:
                            continue
                        out.append(np.diag([x, y, z]))
            return out
        if self.mode != "random":
            raise ValueError(f"unknown sampling mode {self.mode!r}")
        rng = np.random.default_rng(self.seed)
        for _ in range(self.n - 1):
            out.append(random_logv(rng, self.radius))
        return out

    def pairs(self) -> list:
        """Random pairs of distinct samples for pairwise monotonicity."""
        rng = np.random.default_rng(self.seed + 1)
        return [(random_logv(rng, self.radius), random_logv(rng, self.radius))
                for _ in range(self.n)]


def random_rotation(rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_logv(rng, radius) -> np.ndarray:
    """Random symmetric tensor, uniform in direction, norm uniform in ``[0, radius]``."""
    x = rng.normal(size=3)
    x *= rng.uniform(0.0, radius) / np.linalg.norm(x)
    Q = random_rotation(rng)
    return (Q * x) @ Q.T


@dataclass
class ConditionReport:
    condition: str
    model: str
    verdict: str
    worst_margin: float
    witness: Optional[dict]
    samples_evaluated: int
    samples_out_of_domain: int = 0
    plan: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        return asdict(self)


class _Tracker:
    """Keeps the worst margin and its witness, reduced in sample order."""

    def __init__(self):
        self.worst = np.inf
        self.witness = None
        self.n = 0
        self.out = 0

    def add(self, margin, witness):
        self.n += 1
        if margin < self.worst:
            self.worst = float(margin)
            self.witness = witness

    def report(self, condition, model, plan) -> ConditionReport:
        if self.worst < 0:
            verdict = FAIL
        elif self.out or self.n == 0:
            verdict = OUT_OF_SCOPE
        else:
            verdict = PASS
        plan_d = asdict(plan) if isinstance(plan, SamplingPlan) else dict(plan or {})
        worst = self.worst if np.isfinite(self.worst) else float("nan")
        return ConditionReport(condition, repr(model), verdict, worst, self.witness,
                               self.n, self.out, plan_d)


def _nonneg(v, scale):
    return v / scale + TOL


def _pos(v, scale):
    return v / scale - TOL


def clip_to_domain(model, logV, factor=CLIP, iters=60):
    """Pull an inadmissible strain back along its ray to ``factor`` times the boundary."""
    if model.admissible_logv(logV):
        return logV
    if isinstance(model, InvariantModel):
        # scaling log V scales its eigenvalues, so bisect on those
        x = np.linalg.eigvalsh(logV)

        def inside(t):
            return model.admissible(invariants_from_logs(t * x))
    else:
        def inside(t):
            return model.admissible_logv(t * logV)
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if inside(mid):
            lo = mid
        else:
            hi = mid
    return factor * lo * logV


def _domain_samples(model, plan: SamplingPlan):
    """Yield admissible samples; inadmissible ones are clipped or counted."""
    for E in plan.samples():
        if model.admissible_logv(E):
            yield E, True
        elif plan.clip:
            yield clip_to_domain(model, E), True
        else:
            yield E, False


def _tensor_witness(E) -> dict:
    return {"logV": np.asarray(E).round(17).tolist()}


# -- invariant-based sufficient conditions -----------------------------------


def _require_invariant(model, what):
    if not isinstance(model, InvariantModel):
        raise TypeError(f"{what} needs an invariant-based model, got {model!r}")


def polyconvex_margin(model: InvariantModel, K) -> float:
    g = model.grad(K)
    H = model.hess(K)
    gscale = max(np.abs(g).max(), 1e-300)
    hscale = max(np.abs(H).max(), 1e-300)
    return min(_nonneg(g[0], gscale), _nonneg(g[1], gscale),
               _nonneg(np.linalg.eigvalsh(H)[0], hscale))


def check_polyconvex_sufficient(model, plan: SamplingPlan) -> ConditionReport:
    """Psi convex and non-decreasing in K1, K2 at every sample."""
    _require_invariant(model, "check_polyconvex_sufficient")
    t = _Tracker()
    for E, ok in _domain_samples(model, plan):
        if not ok:
            t.out += 1
            continue
        K = invariants_from_logs(np.linalg.eigvalsh(E))
        t.add(polyconvex_margin(model, K), {"K": list(K), **_tensor_witness(E)})
    return t.report("polyconvex_sufficient", model, plan)


def _min_eig_scaled(M, scale) -> float:
    """Smallest eigenvalue of ``M`` relative to its size.

    With a positive diagonal the matrix is first brought to unit diagonal;
    the congruence keeps the inertia but stops one large diagonal entry from
    swamping a small yet well-resolved eigenvalue.
    """
    d = np.diag(M)
    if np.all(d > 0):
        s = 1.0 / np.sqrt(d)
        return float(np.linalg.eigvalsh(M * s[:, None] * s[None, :])[0])
    return float(np.linalg.eigvalsh(M)[0]) / scale


def tstsm_matrix(model: InvariantModel, K) -> np.ndarray:
    K1, K2, K3 = K
    g = model.grad(K)
    H = model.hess(K)
    k = np.asarray(K)
    M = H * np.outer(k, k)
    M[0, 0] += K1 * g[0]
    M[1, 1] += K2 * g[1]
    M[0, 2] -= 0.5 * K1 * g[0]
    M[2, 0] -= 0.5 * K1 * g[0]
    M[1, 2] -= 0.5 * K2 * g[1]
    M[2, 1] -= 0.5 * K2 * g[1]
    return M


def tstsm_margin(model: InvariantModel, K) -> float:
    g = model.grad(K)
    M = tstsm_matrix(model, K)
    K1, K2, _ = K
    scale = max(np.abs(M).max(), abs(K1 * g[0]), abs(K2 * g[1]), 1e-300)
    g1, g2 = K1 * g[0], K2 * g[1]
    mono = max(min(_pos(g1, scale), _nonneg(g2, scale)),
               min(_nonneg(g1, scale), _pos(g2, scale)))
    if not model.depends[1] or not model.depends[0]:
        # two-invariant reduction: drop the row/column of the absent invariant
        keep = [0, 2] if not model.depends[1] else [1, 2]
        sub = M[np.ix_(keep, keep)]
        drop_mono = _pos(g1, scale) if keep[0] == 0 else _pos(g2, scale)
        return min(drop_mono, _pos(_min_eig_scaled(sub, scale), 1.0))
    v = np.array([1.0, 2.0, 3.0])
    return min(mono, _nonneg(_min_eig_scaled(M, scale), 1.0), _pos(v @ M @ v / 14.0, scale))


def check_tstsm_sufficient(model, plan: SamplingPlan) -> ConditionReport:
    """Invariant-based sufficient conditions for positive definiteness of D sigma / D log V."""
    _require_invariant(model, "check_tstsm_sufficient")
    t = _Tracker()
    for E, ok in _domain_samples(model, plan):
        if not ok:
            t.out += 1
            continue
        K = invariants_from_logs(np.linalg.eigvalsh(E))
        t.add(tstsm_margin(model, K), {"K": list(K), **_tensor_witness(E)})
    return t.report("tstsm_sufficient", model, plan)


def hill_invariant_margin(model: InvariantModel, K) -> float:
    """Sufficient invariant conditions for convexity in log V of a K3-independent energy."""
    K1, K2, _ = K
    g = model.grad(K)
    M = tstsm_matrix(model, K)[:2, :2]
    scale = max(np.abs(M).max(), abs(K1 * g[0]), abs(K2 * g[1]), 1e-300)
    g1, g2 = K1 * g[0], K2 * g[1]
    mono = max(min(_pos(g1, scale), _nonneg(g2, scale)),
               min(_nonneg(g1, scale), _pos(g2, scale)))
    v = np.array([1.0, 2.0])
    return min(mono, _nonneg(_min_eig_scaled(M, scale), 1.0), _pos(v @ M @ v / 5.0, scale))


# -- numerical conditions ----------------------------------------------------


def tangent_margin(T) -> float:
    w = tangent_eigvals(T)
    scale = max(np.abs(w).max(), 1e-300)
    return _pos(w[0], scale)


def check_tstsm_numeric(model, plan: SamplingPlan) -> ConditionReport:
    """Smallest eigenvalue of the finite-difference tangent of sigma(log V) is positive."""
    t = _Tracker()
    for E, ok in _domain_samples(model, plan):
        if not ok:
            t.out += 1
            continue
        try:
            T = tangent_fd(model, E)
        except OutOfDomain:
            t.out += 1
            continue
        t.add(tangent_margin(T), _tensor_witness(E))
    return t.report("tstsm_numeric", model, plan)


def pair_margin(model, E0, E1) -> float:
    dE = E1 - E0
    dS = sigma_hat(model, E1) - sigma_hat(model, E0)
    scale = max(np.linalg.norm(dS) * np.linalg.norm(dE), 1e-300)
    return _pos(np.sum(dS * dE), scale)


def check_tstsm_plus(model, plan: SamplingPlan) -> ConditionReport:
    """Pairwise monotonicity ``<sigma1 - sigma0, log V1 - log V0> > 0``."""
    t = _Tracker()
    for E0, E1 in plan.pairs():
        if plan.clip:
            E0, E1 = clip_to_domain(model, E0), clip_to_domain(model, E1)
        elif not (model.admissible_logv(E0) and model.admissible_logv(E1)):
            t.out += 1
            continue
        if np.allclose(E0, E1):
            continue
        t.add(pair_margin(model, E0, E1),
              {"logV0": E0.round(17).tolist(), "logV1": E1.round(17).tolist()})
    return t.report("tstsm_plus", model, plan)


def check_hill(model, plan: SamplingPlan) -> ConditionReport:
    """Convexity of the energy in the Hencky strain (FD Hessian positive definite)."""
    if isinstance(model, (CauchyLaw, PrincipalStretchModel)):
        raise TypeError("check_hill needs a compressible strain-energy model")
    t = _Tracker()
    for E, ok in _domain_samples(model, plan):
        if not ok:
            t.out += 1
            continue
        try:
            T = kirchhoff_tangent_fd(model, E)
        except OutOfDomain:
            t.out += 1
            continue
        t.add(tangent_margin(T), _tensor_witness(E))
    return t.report("hill", model, plan)


def check_hill_invariant(model, plan: SamplingPlan) -> ConditionReport:
    """Invariant-based sufficient conditions for Hill's inequality (K3-independent energies)."""
    _require_invariant(model, "check_hill_invariant")
    if model.depends[2]:
        raise ValueError(f"{model!r} depends on K3; the two-invariant conditions do not apply")
    t = _Tracker()
    for E, ok in _domain_samples(model, plan):
        if not ok:
            t.out += 1
            continue
        K = invariants_from_logs(np.linalg.eigvalsh(E))
        t.add(hill_invariant_margin(model, K), {"K": list(K), **_tensor_witness(E)})
    return t.report("hill_invariant", model, plan)


# -- Legendre-Hadamard -------------------------------------------------------


def elasticity_tensor_fd(model, F, h=1e-5) -> np.ndarray:
    """``A[i, J, k, L] = d S1_iJ / d F_kL`` by Richardson central differences."""
    F = np.asarray(F, dtype=float)
    A = np.empty((3, 3, 3, 3))
    for k in range(3):
        for L in range(3):
            dF = np.zeros((3, 3))
            dF[k, L] = 1.0
            A[:, :, k, L] = _richardson_diff(lambda X: first_piola(model, X), F, dF, h)
    return A


def acoustic_tensor(A, n) -> np.ndarray:
    Q = np.einsum("ijkl,j,l->ik", A, n, n)
    return 0.5 * (Q + Q.T)


def rank_one_second_difference(model, F, a, b, h=1e-4) -> float:
    """``d^2/dt^2 W(F + t a (x) b)`` at ``t = 0`` (Richardson, step backed off to keep det F > 0)."""
    F = np.asarray(F, dtype=float)
    D = np.outer(a, b)
    while np.linalg.det(F - h * D) <= 0 or np.linalg.det(F + h * D) <= 0:
        h /= 2

    def sd(step):
        return (model.energy_F(F + step * D) - 2 * model.energy_F(F) + model.energy_F(F - step * D)) / step**2

    return (4 * sd(h / 2) - sd(h)) / 3


def lh_margin(model, F, directions) -> tuple:
    """Worst relative acoustic-tensor eigenvalue over propagation directions ``b``."""
    A = elasticity_tensor_fd(model, F)
    scale = max(np.abs(A).max(), 1e-300)
    worst, wit = np.inf, None
    for b in directions:
        w, v = np.linalg.eigh(acoustic_tensor(A, b))
        m = _nonneg(w[0], scale)
        if m < worst:
            worst, wit = m, (v[:, 0], b)
    return worst, wit


def check_legendre_hadamard(model, plan: SamplingPlan, n_directions=64) -> ConditionReport:
    """Rank-one convexity sampled over ``F = R V`` and propagation directions.

    For each ``F`` the acoustic tensor is minimised exactly over the
    polarisation ``a``; the witness ``(F, a, b)`` carries the second
    difference of ``W`` along ``a (x) b`` as an independent confirmation.
    """
    if isinstance(model, (CauchyLaw, PrincipalStretchModel)):
        raise TypeError("check_legendre_hadamard needs a compressible strain-energy model")
    rng = np.random.default_rng(plan.seed + 2)
    dirs = rng.normal(size=(n_directions, 3))
    dirs = np.vstack([np.eye(3), dirs / np.linalg.norm(dirs, axis=1, keepdims=True)])
    t = _Tracker()
    for E, ok in _domain_samples(model, plan):
        if not ok:
            t.out += 1
            continue
        F = random_rotation(rng) @ DeformationState.from_logv(E).F
        try:
            m, (a, b) = lh_margin(model, F, dirs)
        except OutOfDomain:
            t.out += 1
            continue
        wit = None
        if m < t.worst:
            wit = {"F": F.round(17).tolist(), "a": a.tolist(), "b": b.tolist(),
                   "second_difference": rank_one_second_difference(model, F, a, b)}
        t.add(m, wit)
    return t.report("legendre_hadamard", model, plan)


# -- linearisation -----------------------------------------------------------


@dataclass(frozen=True)
class LinearizedConstants:
    mu: float
    lam: float

    @property
    def kappa(self) -> float:
        return (2 * self.mu + 3 * self.lam) / 3

    @property
    def nu(self) -> float:
        return self.lam / (2 * (self.lam + self.mu))

    @property
    def young(self) -> float:
        return 9 * self.kappa * self.mu / (3 * self.kappa + self.mu)

    @property
    def proper(self) -> bool:
        return self.mu > 0 and 2 * self.mu + 3 * self.lam > 0

    def to_dict(self) -> dict:
        return {"mu": self.mu, "lam": self.lam, "kappa": self.kappa,
                "nu": self.nu, "proper": self.proper}


def linearize(model, h=1e-3) -> LinearizedConstants:
    """Lame constants from the small-strain Cauchy response at the reference state."""
    shear = np.zeros((3, 3))
    shear[0, 1] = shear[1, 0] = 0.5
    dil = np.eye(3) / 3
    zero = np.zeros((3, 3))
    mu = _richardson_diff(lambda E: sigma_hat(model, E)[0, 1], zero, shear, h)
    kappa = _richardson_diff(lambda E: np.trace(sigma_hat(model, E)) / 3, zero, dil, h)
    return LinearizedConstants(float(mu), float(kappa - 2 * mu / 3))


# -- incompressible and ODE checks -------------------------------------------


def ode_residual(c1, c2, k, x) -> float:
    """Max relative residual of ``x^2 u u'' - (x u' - u/2)^2 = k u^2 / 4`` for the closed-form ``u``."""
    if c2 == 0:
        raise ValueError("c2 = 0 gives the trivial solution u = 0")
    x = np.asarray(x, dtype=float)
    L = np.log(x)
    u = c2 * x**c1 * np.exp((k + 1) / 8 * L * L)
    g = (c1 + (k + 1) / 4 * L) / x
    dg = ((k + 1) / 4 - c1 - (k + 1) / 4 * L) / x**2
    du = u * g
    d2u = u * (g * g + dg)
    res = x**2 * u * d2u - (x * du - u / 2) ** 2 - k * u * u / 4
    return float(np.max(np.abs(res) / u**2))


def potential(model: PrincipalStretchModel, x) -> float:
    """Energy along incompressible uniaxial stretch ``(e^x, e^-x/2, e^-x/2)``."""
    return model.psi(np.exp([x, -x / 2, -x / 2]))


def check_ball_potential(model: PrincipalStretchModel, x_grid, h=1e-3) -> ConditionReport:
    """Convexity of the uniaxial potential, sampled on ``x_grid`` by second differences."""
    t = _Tracker()
    for x in np.asarray(x_grid, dtype=float):
        def sd(s):
            return (potential(model, x + s) - 2 * potential(model, x) + potential(model, x - s)) / s**2
        d2 = (4 * sd(h / 2) - sd(h)) / 3
        scale = max(abs(potential(model, x)), np.abs(model.grad(np.exp([x, -x / 2, -x / 2]))).max(), 1e-300)
        t.add(_nonneg(d2, scale), {"x": float(x), "phi_xx": float(d2)})
    grid = np.asarray(x_grid, dtype=float)
    return t.report("ball_potential_convexity", model,
                    {"x_min": float(grid.min()), "x_max": float(grid.max()), "n": int(grid.size)})

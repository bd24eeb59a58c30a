"""Homogeneous deformation programs: uniaxial tension-compression and simple shear."""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .conditions import potential
from .kinematics import make_shear, make_uniaxial
from .models import InvariantModel, OutOfDomain, PrincipalStretchModel
from .response import cauchy_stress, principal_cauchy


class NoBracket(RuntimeError):
    pass


class NonConvergence(RuntimeError):
    pass


@dataclass
class Trace:
    """Tabulated response along a deformation program; NaN marks failed rows."""

    control: np.ndarray
    columns: dict
    metadata: dict = field(default_factory=dict)

    def __getitem__(self, name) -> np.ndarray:
        if name == "control":
            return self.control
        return self.columns[name]

    @property
    def names(self) -> list:
        return ["control", *self.columns]

    @property
    def failures(self) -> int:
        return int(np.sum(~np.isfinite(self.columns["sigma11"])))


@dataclass
class MonotonicityReport:
    is_monotone: bool
    extrema: list
    asymptote: float

    def maxima(self) -> list:
        return [(x, v) for x, v, kind in self.extrema if kind == "max"]

    def minima(self) -> list:
        return [(x, v) for x, v, kind in self.extrema if kind == "min"]


def rtsafe(f: Callable, lo: float, hi: float, x0: Optional[float] = None,
           xtol=1e-15, max_iter=200) -> float:
    """Root of ``f`` in ``[lo, hi]``: Newton steps on a central-difference slope, bisection when they leave the bracket."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NoBracket(f"f({lo:.6g}) and f({hi:.6g}) have the same sign")
    if flo > 0:
        lo, hi = hi, lo
    x = 0.5 * (lo + hi) if x0 is None or not min(lo, hi) < x0 < max(lo, hi) else x0
    for _ in range(max_iter):
        fx = f(x)
        if fx == 0.0:
            return x
        if fx < 0:
            lo = x
        else:
            hi = x
        h = 1e-7 * max(1.0, abs(x))
        slope = (f(x + h) - f(x - h)) / (2 * h)
        step_ok = slope != 0.0 and np.isfinite(slope)
        xn = x - fx / slope if step_ok else None
        if xn is None or not min(lo, hi) < xn < max(lo, hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= xtol * max(1.0, abs(x)):
            return xn
        x = xn
    raise NonConvergence(f"no convergence after {max_iter} iterations (bracket [{lo}, {hi}])")


def transverse_residual(model, l1, l2) -> float:
    """Lateral Kirchhoff stress of the uniaxial state ``diag(l1, l2, l2)``."""
    if isinstance(model, InvariantModel):
        state = make_uniaxial(l1, l2)
        K1, K2, K3 = state.K
        g = model.grad(state.K)
        return g[0] * l2**2 / K1 + g[1] * (K2**2 - K3**2 / l2**2) / K2 + g[2] * K3
    return float(cauchy_stress(model, make_uniaxial(l1, l2)).tau[1, 1])


def solve_transverse(model, l1, guess=None, lo=None, hi=None) -> float:
    """Transverse stretch giving zero lateral stress, searched in ``log l2``.

    The default window ``[1e-6 min(1, l1), 1e6 max(1, l1)]`` follows the axial stretch.
    """
    if l1 <= 0:
        raise ValueError(f"l1 must be positive, got {l1}")
    lo = 1e-6 * min(1.0, l1) if lo is None else lo
    hi = 1e6 * max(1.0, l1) if hi is None else hi

    def f(y):
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                return transverse_residual(model, l1, math.exp(y))
        except (OutOfDomain, OverflowError):
            return math.nan

    ylo, yhi = math.log(lo), math.log(hi)
    if guess is not None:
        # expand a bracket outwards from the previous solution
        y0 = math.log(guess)
        f0 = f(y0)
        if f0 == 0.0:
            return guess
        w = 1e-3
        while w < (yhi - ylo):
            a, b = max(ylo, y0 - w), min(yhi, y0 + w)
            fa, fb = f(a), f(b)
            if np.isfinite(fa) and np.isfinite(f0) and np.sign(fa) != np.sign(f0):
                return math.exp(rtsafe(f, a, y0, y0))
            if np.isfinite(fb) and np.isfinite(f0) and np.sign(fb) != np.sign(f0):
                return math.exp(rtsafe(f, y0, b, y0))
            w *= 4
    grid = np.linspace(ylo, yhi, 241)
    vals = [f(y) for y in grid]
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if np.isfinite(fa) and np.isfinite(fb) and np.sign(fa) != np.sign(fb):
            return math.exp(rtsafe(f, a, b))
    raise NoBracket(f"no sign change of the lateral stress for l2 in [{lo}, {hi}] at l1 = {l1}")


def count_transverse_roots(model, l1, lo=1e-6, hi=1e6, n=2401) -> int:
    """Sign changes of the lateral stress on a log-spaced scan."""
    vals = np.array([transverse_residual(model, l1, l2) for l2 in np.geomspace(lo, hi, n)])
    s = np.sign(vals[np.isfinite(vals)])
    s = s[s != 0]
    return int(np.sum(s[1:] != s[:-1]))


def _energy(model, state) -> float:
    # stress laws without a potential leave the column empty
    return model.energy(state) if hasattr(model, "energy") else math.nan


def _continuation_order(control):
    """Row indices starting at the row nearest zero, then outwards both ways."""
    i0 = int(np.argmin(np.abs(control)))
    return [i0, *range(i0 + 1, len(control)), *range(i0 - 1, -1, -1)], i0


def trace_uniaxial(model, log_l1) -> tuple:
    """Unconstrained uniaxial tension-compression along e1."""
    x = np.asarray(log_l1, dtype=float)
    n = x.size
    cols = {k: np.full(n, np.nan) for k in ("lambda2", "sigma11", "sigma22", "sigma33", "energy")}
    order, i0 = _continuation_order(x)
    prev = {}
    for i in order:
        l1 = math.exp(x[i])
        seed = prev.get(i - 1 if i > i0 else i + 1) if i != i0 else None
        try:
            l2 = solve_transverse(model, l1, guess=seed)
            state = make_uniaxial(l1, l2)
            sig = cauchy_stress(model, state).sigma
        except (NoBracket, NonConvergence, OutOfDomain):
            continue
        prev[i] = l2
        cols["lambda2"][i] = l2
        cols["sigma11"][i] = sig[0, 0]
        cols["sigma22"][i] = sig[1, 1]
        cols["sigma33"][i] = sig[2, 2]
        cols["energy"][i] = _energy(model, state)
    trace = Trace(x, cols, {"program": "uniaxial", "model": repr(model), "control": "log_lambda1"})

    def sigma11(xx):
        l1 = math.exp(xx)
        return cauchy_stress(model, make_uniaxial(l1, solve_transverse(model, l1))).sigma[0, 0]

    return trace, analyze_monotonicity(x, cols["sigma11"], sigma11)


def uniaxial_sigma11_incompressible(model: PrincipalStretchModel, x) -> float:
    """Axial stress with the lateral stress eliminated through the Lagrange parameter."""
    lam = np.exp([x, -x / 2, -x / 2])
    g = model.grad(lam)
    return lam[0] * g[0] - 0.5 * lam[1] * (g[1] + g[2])


def _ridders_derivative(f, x, h, shrink=1.4, levels=10, safe=2.0) -> float:
    """Ridders' extrapolation tableau of central differences, shrinking ``h`` by ``shrink``.

    Returns the entry with the smallest error estimate.
    """
    c2 = shrink * shrink
    prev = [(f(x + h) - f(x - h)) / (2 * h)]
    best, err = prev[0], math.inf
    for i in range(1, levels):
        h /= shrink
        row = [(f(x + h) - f(x - h)) / (2 * h)]
        fac = c2
        for j in range(1, i + 1):
            row.append((row[j - 1] * fac - prev[j - 1]) / (fac - 1))
            fac *= c2
            e = max(abs(row[j] - row[j - 1]), abs(row[j] - prev[j - 1]))
            if e <= err:
                best, err = row[j], e
        if abs(row[i] - prev[i - 1]) >= safe * err:
            break
        prev = row
    return best


def trace_uniaxial_incompressible(model: PrincipalStretchModel, x_grid, h=0.1) -> tuple:
    x = np.asarray(x_grid, dtype=float)
    s11 = np.array([uniaxial_sigma11_incompressible(model, xi) for xi in x])
    s11_fd = np.array([_ridders_derivative(lambda t: potential(model, t), xi, h) for xi in x])
    p = np.array([np.exp(-xi / 2) * model.grad(np.exp([xi, -xi / 2, -xi / 2]))[1] for xi in x])
    # the principal-stress route must leave the lateral faces traction free
    s22 = np.array([principal_cauchy(model, np.exp([xi, -xi / 2, -xi / 2]), pi).sigma[1, 1]
                    for xi, pi in zip(x, p)])
    energy = np.array([potential(model, xi) - potential(model, 0.0) for xi in x])
    cols = {"lambda2": np.exp(-x / 2), "sigma11": s11, "sigma11_potential": s11_fd,
            "sigma22": s22, "pressure": p, "energy": energy}
    trace = Trace(x, cols, {"program": "uniaxial_incompressible", "model": repr(model),
                            "control": "log_lambda1"})
    return trace, analyze_monotonicity(x, s11, lambda xi: uniaxial_sigma11_incompressible(model, xi))


def trace_shear(model, gamma) -> tuple:
    g = np.asarray(gamma, dtype=float)
    n = g.size
    cols = {k: np.full(n, np.nan) for k in ("sigma11", "sigma22", "sigma33", "sigma12", "energy")}
    for i, gi in enumerate(g):
        try:
            state = make_shear(gi)
            sig = cauchy_stress(model, state).sigma
        except OutOfDomain:
            continue
        cols["sigma11"][i] = sig[0, 0]
        cols["sigma22"][i] = sig[1, 1]
        cols["sigma33"][i] = sig[2, 2]
        cols["sigma12"][i] = sig[0, 1]
        cols["energy"][i] = _energy(model, state)
    trace = Trace(g, cols, {"program": "shear", "model": repr(model), "control": "gamma"})
    return trace, analyze_monotonicity(g, cols["sigma12"],
                                       lambda x: cauchy_stress(model, make_shear(x)).sigma[0, 1])


_GOLD = (math.sqrt(5) - 1) / 2


def _golden_extremum(f, a, b, sign, tol=1e-7):
    """Golden-section search for the maximum of ``sign * f`` on ``[a, b]``."""
    c, d = b - _GOLD * (b - a), a + _GOLD * (b - a)
    fc, fd = sign * f(c), sign * f(d)
    while abs(b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLD * (b - a)
            fc = sign * f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLD * (b - a)
            fd = sign * f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def analyze_monotonicity(control, values, func: Optional[Callable] = None) -> MonotonicityReport:
    """Interior extrema from sign changes of the discrete slope.

    With ``func`` each extremum is refined by golden-section search on the
    two grid cells around it; otherwise a parabola through three points is used.
    """
    x = np.asarray(control, dtype=float)
    v = np.asarray(values, dtype=float)
    ok = np.isfinite(v)
    x, v = x[ok], v[ok]
    if x.size < 3:
        raise ValueError("need at least three finite rows")
    dv = np.diff(v)
    s = np.sign(dv)
    # carry flat steps over so plateaus do not count as extrema
    for i in range(1, s.size):
        if s[i] == 0:
            s[i] = s[i - 1]
    extrema = []
    for i in range(1, s.size):
        if s[i] != s[i - 1] and s[i] != 0 and s[i - 1] != 0:
            kind = "max" if s[i - 1] > 0 else "min"
            a, b = x[i - 1], x[i + 1]
            if func is not None:
                xe, ve = _golden_extremum(func, a, b, 1 if kind == "max" else -1)
            else:
                x0, x1, x2 = x[i - 1], x[i], x[i + 1]
                y0, y1, y2 = v[i - 1], v[i], v[i + 1]
                den = (x0 - x1) * (x0 - x2) * (x1 - x2)
                A = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den
                Bc = (x2**2 * (y0 - y1) + x1**2 * (y2 - y0) + x0**2 * (y1 - y2)) / den
                xe = -Bc / (2 * A) if A != 0 else x1
                ve = float(np.polyval([A, Bc, (y0 - A * x0**2 - Bc * x0)], xe))
            extrema.append((float(xe), float(ve), kind))
    return MonotonicityReport(not extrema, extrema, float(v[-1]))

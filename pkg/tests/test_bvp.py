import math

import numpy as np
import pytest

from hyperlab import bvp
from hyperlab import models as M
from hyperlab.bvp import NoBracket, NonConvergence
from hyperlab.conditions import linearize
from hyperlab.kinematics import make_uniaxial
from hyperlab.models import InvariantModel
from hyperlab.response import cauchy_stress
from oracles import (
    ogden_sigma11, shear_energy, shear_extremum, shear_sigma12, transverse_cubic,
    transverse_quadratic, uniaxial_sigma11, young,
)

UNIAXIAL_ALPHAS = (0.0, 0.25, 0.5, 0.75)


def test_rtsafe_finds_roots_and_rejects_bad_brackets():
    assert bvp.rtsafe(lambda x: x**3 - 2, 0.0, 3.0) == pytest.approx(2 ** (1 / 3), rel=1e-14)
    assert bvp.rtsafe(lambda x: 1 - x, 0.0, 3.0) == pytest.approx(1.0, rel=1e-14)
    # a kink defeats Newton; bisection still converges
    assert bvp.rtsafe(lambda x: np.sign(x - 0.3) * abs(x - 0.3) ** 0.2, 0.0, 1.0) == pytest.approx(0.3, abs=1e-12)
    with pytest.raises(NoBracket):
        bvp.rtsafe(lambda x: x * x + 1, -1.0, 1.0)
    with pytest.raises(NonConvergence):
        bvp.rtsafe(lambda x: np.sign(x - 0.3) * abs(x - 0.3) ** 0.2, 0.0, 1.0, xtol=0.0, max_iter=3)


@pytest.mark.parametrize("model", [M.uniaxial_family(0.5), M.shear_family(0.5, 1.0), M.hencky(1.0, 1.0),
                                   M.hencky_1928(1.0, 1.0)], ids=repr)
def test_identity_has_unit_transverse_stretch(model):
    assert bvp.solve_transverse(model, 1.0) == pytest.approx(1.0, abs=1e-12)


def test_transverse_closed_forms():
    for l1 in np.geomspace(0.1, 20, 40):
        assert bvp.solve_transverse(M.uniaxial_family(0.0), l1) == pytest.approx(transverse_quadratic(l1), rel=1e-12)
        assert bvp.solve_transverse(M.uniaxial_family(0.5), l1) == pytest.approx(transverse_cubic(l1), rel=1e-12)
    assert bvp.solve_transverse(M.uniaxial_family(0.0), 2.0) == pytest.approx(1.23903, abs=1e-5)


def test_transverse_residual_is_small():
    for a in UNIAXIAL_ALPHAS:
        m = M.uniaxial_family(a)
        for l1 in (0.2, 0.9, 3.0, 40.0):
            l2 = bvp.solve_transverse(m, l1)
            scale = max(abs(x) for x in m.grad(make_uniaxial(l1, l2).K))
            assert abs(bvp.transverse_residual(m, l1, l2)) <= 1e-12 * scale


def test_transverse_root_is_unique_for_the_uniaxial_family():
    for a in UNIAXIAL_ALPHAS:
        for l1 in (0.3, 1.0, 5.0):
            assert bvp.count_transverse_roots(M.uniaxial_family(a), l1) == 1


def test_transverse_errors():
    with pytest.raises(ValueError):
        bvp.solve_transverse(M.uniaxial_family(0.5), 0.0)
    # the monomial K1 never produces a compressive lateral stress
    with pytest.raises(NoBracket):
        bvp.solve_transverse(M.monomial(1.0), 1.5)


def test_continuation_guess_matches_cold_start():
    m = M.uniaxial_family(0.25)
    cold = bvp.solve_transverse(m, 3.0)
    warm = bvp.solve_transverse(m, 3.0, guess=cold * 1.01)
    assert warm == pytest.approx(cold, rel=1e-13)


@pytest.mark.parametrize("alpha", UNIAXIAL_ALPHAS)
def test_uniaxial_trace(alpha):
    grid = np.linspace(-2, 4, 121)
    trace, report = bvp.trace_uniaxial(M.uniaxial_family(alpha), grid)
    assert trace.failures == 0
    assert np.abs(trace["sigma22"]).max() <= 1e-12
    assert np.abs(trace["sigma33"]).max() <= 1e-12
    i0 = int(np.argmin(np.abs(grid)))
    assert grid[i0] == 0.0
    assert abs(trace["sigma11"][i0]) <= 1e-10 and trace["lambda2"][i0] == pytest.approx(1.0)
    for x, l2, s in zip(grid, trace["lambda2"], trace["sigma11"]):
        assert s == pytest.approx(uniaxial_sigma11(alpha, math.exp(x), l2), rel=1e-10, abs=1e-13)
    assert not report.is_monotone
    assert len(report.maxima()) == 1
    s = trace["sigma11"]
    (xm, _), = report.maxima()
    assert np.all(np.diff(s[grid > xm]) < 0)
    m = M.uniaxial_family(alpha)
    np.testing.assert_allclose(trace["energy"], [m.energy(make_uniaxial(math.exp(x), l2))
                                                 for x, l2 in zip(grid, trace["lambda2"])])


@pytest.mark.parametrize("alpha", UNIAXIAL_ALPHAS)
def test_uniaxial_stress_decays_at_large_stretch(alpha):
    # the decay is slow for larger alpha, so probe far beyond the plotted range
    m = M.uniaxial_family(alpha)
    x = np.array([4.0, 12.0, 24.0, 40.0])
    trace, _ = bvp.trace_uniaxial(m, x)
    assert np.all(np.diff(trace["sigma11"]) < 0)
    assert trace["sigma11"][-1] < 0.1


def test_uniaxial_example_row():
    trace, _ = bvp.trace_uniaxial(M.uniaxial_family(0.0), np.array([-1.0, 0.0, math.log(2.0)]))
    assert trace["sigma11"][2] == pytest.approx(0.52291, abs=1e-5)
    assert abs(trace["sigma22"][2]) < 1e-14


@pytest.mark.parametrize("alpha", UNIAXIAL_ALPHAS)
def test_initial_slope_is_young_modulus(alpha):
    h = 1e-4
    vals = [cauchy_stress(M.uniaxial_family(alpha),
                          make_uniaxial(math.exp(x), bvp.solve_transverse(M.uniaxial_family(alpha), math.exp(x)))).sigma[0, 0]
            for x in (-h, h)]
    lin = linearize(M.uniaxial_family(alpha))
    assert (vals[1] - vals[0]) / (2 * h) == pytest.approx(young(1.0, alpha + 1 / 3), rel=1e-6)
    assert lin.young == pytest.approx(young(1.0, alpha + 1 / 3), rel=1e-8)


def test_trace_records_failed_rows():
    # a chain-limited energy cannot reach huge axial stretches
    m = M.chain_limited_line(2.0, 4.0, 0.25)
    trace, _ = bvp.trace_uniaxial(m, np.linspace(-0.5, 2.0, 11))
    assert trace.failures > 0
    assert np.isfinite(trace["sigma11"][2])


def test_uniaxial_trace_for_a_cauchy_law():
    trace, report = bvp.trace_uniaxial(M.hencky_1928(1.0, 1.0), np.linspace(-1, 1, 11))
    assert trace.failures == 0
    assert np.all(np.isnan(trace["energy"]))
    np.testing.assert_allclose(trace["sigma11"], 2.5 * np.linspace(-1, 1, 11), atol=1e-12)
    assert report.is_monotone


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_shear_trace(alpha):
    g = np.linspace(-8, 8, 401)
    trace, report = bvp.trace_shear(M.shear_family(alpha, 1.0), g)
    np.testing.assert_allclose(trace["sigma12"], shear_sigma12(alpha, g), rtol=0, atol=1e-12)
    np.testing.assert_allclose(trace["sigma22"], -0.5 * trace["sigma11"], atol=1e-13)
    np.testing.assert_allclose(trace["sigma33"], -0.5 * trace["sigma11"], atol=1e-13)
    np.testing.assert_allclose(trace["energy"], shear_energy(alpha, g), atol=1e-12)
    assert [x for x, _ in report.maxima()] == [pytest.approx(shear_extremum(alpha), abs=1e-6)]
    assert [x for x, _ in report.minima()] == [pytest.approx(-shear_extremum(alpha), abs=1e-6)]
    assert trace["sigma12"][200] == 0.0


def test_shear_examples():
    trace, report = bvp.trace_shear(M.shear_family(0.5, 1.0), np.linspace(-8, 8, 401))
    i = int(np.argmin(np.abs(trace.control - 1.0)))
    assert trace["sigma12"][i] == pytest.approx(0.5 * 4**-0.75, rel=1e-12)
    assert trace["sigma12"][i] == pytest.approx(0.176777, abs=1e-6)
    (x, v), = report.maxima()
    assert x == pytest.approx(2.44949, abs=1e-5)
    assert v == pytest.approx(0.23570, abs=1e-5)


def test_polyconvex_model_is_monotone_in_shear():
    _, report = bvp.trace_shear(M.uniaxial_family(0.5), np.linspace(-8, 8, 201))
    assert report.is_monotone


def test_hencky_1928_is_not_monotone_in_shear():
    _, report = bvp.trace_shear(M.hencky_1928(1.0, 1.0), np.linspace(-8, 8, 401))
    assert not report.is_monotone


def test_incompressible_trace():
    m = M.incompressible_ogden([1.0], [2.0])
    x = np.linspace(-2, 2, 81)
    trace, report = bvp.trace_uniaxial_incompressible(m, x)
    np.testing.assert_allclose(trace["sigma11"], 2 * np.exp(2 * x) - 2 * np.exp(-x), rtol=1e-13, atol=1e-13)
    assert np.max(np.abs(trace["sigma11"] - trace["sigma11_potential"])) <= 1e-8
    np.testing.assert_allclose(trace["sigma22"], 0.0, atol=1e-13)
    assert trace["sigma11"][40] == 0.0
    assert report.is_monotone


def test_incompressible_ogden_multi_term():
    mu, alpha = [0.5, 0.1, 2.0], [1.0, 4.0, 1.5]
    x = np.linspace(-2, 2, 41)
    trace, _ = bvp.trace_uniaxial_incompressible(M.incompressible_ogden(mu, alpha), x)
    np.testing.assert_allclose(trace["sigma11"], [ogden_sigma11(mu, alpha, xi) for xi in x], rtol=1e-12, atol=1e-13)


def test_monotonicity_analysis():
    x = np.linspace(0, 1, 11)
    rep = bvp.analyze_monotonicity(x, x**3 + x)
    assert rep.is_monotone and rep.extrema == []
    rep = bvp.analyze_monotonicity(x, np.full_like(x, 2.0))
    assert rep.is_monotone
    rep = bvp.analyze_monotonicity(x, -(x - 0.43) ** 2)
    (xe, ve, kind), = rep.extrema
    assert kind == "max" and xe == pytest.approx(0.43, abs=1e-12)
    rep = bvp.analyze_monotonicity(x, -(x - 0.43) ** 2, func=lambda t: -(t - 0.43) ** 2)
    assert rep.extrema[0][0] == pytest.approx(0.43, abs=1e-6)
    rep = bvp.analyze_monotonicity(x, np.where(x < 0.5, np.nan, x))
    assert rep.is_monotone
    with pytest.raises(ValueError):
        bvp.analyze_monotonicity([0.0, 1.0], [1.0, 2.0])

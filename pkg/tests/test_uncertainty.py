import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tunnelgauge.errors import DivergentDeltaL, InvalidSpec, MethodUnavailable, NoPositiveRoot
from tunnelgauge.potential import R_C, AsymRectangular, DoubleBarrier, LinearSlowing, Rectangular
from tunnelgauge.scattering import transmission
from tunnelgauge.uncertainty import (
    EPS_DIV, analyze, d2T_dl2, delta_l, delta_l_second_order, dp2_per_electron, dT_dl,
    regularized_delta_l, uncertainty_product,
)

RECT = Rectangular(5.0, 5.0)
K = math.sqrt(2.5 / R_C)
T_25 = 1.0 / math.cosh(K * 5.0) ** 2


def dead_point(n, V0=5.0, l=5.0):
    return V0 + R_C * (n * math.pi / (2 * l)) ** 2


def eq14_15(E, V0, l):
    """Direct per-electron momentum variances for the symmetric rectangle.

    Returns (elastic, inelastic) from T, k and k0^2 = (V0 - E)/R_C, which
    turns negative above the barrier.
    """
    k2 = E / R_C
    k02 = (V0 - E) / R_C
    if E < V0:
        T = 1 / (1 + V0**2 * math.sinh(math.sqrt(k02) * l) ** 2 / (4 * E * (V0 - E)))
    else:
        T = 1 / (1 + V0**2 * math.sin(math.sqrt(-k02) * l) ** 2 / (4 * E * (E - V0)))
    k = math.sqrt(k2)
    m1_el = -T * (k2 + k02) / (2 * k)
    m2_el = -T * (k2 + k02)
    m1_in = T * (k2 - k02) / (2 * k)
    m2_in = -T * k02
    return -m2_el + m1_el**2, -m2_in + m1_in**2


# -- dT/dl --------------------------------------------------------------------

def test_dTdl_deep_tunneling():
    d = dT_dl(RECT, 2.5, "analytic")
    assert d == pytest.approx(-2 * K * T_25 * math.tanh(K * 5.0), rel=1e-12)
    assert d == pytest.approx(-1.964e-3, rel=5e-4)


def test_dTdl_first_zero():
    assert dead_point(1) == pytest.approx(5.3760, abs=1e-4)
    assert abs(dT_dl(RECT, dead_point(1), "analytic")) < 1e-15


def test_dTdl_analytic_vs_fd():
    for E in np.linspace(0.05, 14.9, 200):
        a = dT_dl(RECT, E, "analytic")
        if abs(a) < 1e-6 or abs(E - 5.0) < 1e-3:
            continue
        f = dT_dl(RECT, E, "finite_difference")
        assert f == pytest.approx(a, rel=1e-6)


def test_dTdl_auto_and_unavailable():
    assert dT_dl(RECT, 2.5) == dT_dl(RECT, 2.5, "analytic")
    spec = AsymRectangular(5.0, 5.0, 1.0)
    assert dT_dl(spec, 2.5) == dT_dl(spec, 2.5, "finite_difference")
    with pytest.raises(MethodUnavailable):
        dT_dl(spec, 2.5, "analytic")
    with pytest.raises(InvalidSpec):
        dT_dl(RECT, 2.5, "spline")


def test_dTdl_double_barrier_width_choice():
    spec = DoubleBarrier(4.0, -2.1, 8.0, 2.0, 1.2)
    gap = dT_dl(spec, 0.8)
    assert gap == dT_dl(spec, 0.8, width="l1")
    other = dT_dl(spec, 0.8, width="l3")
    assert gap != other
    # opaque vacuum gap: T falls roughly like exp(-2 kappa l1)
    kap = math.sqrt((4.0 - 0.8) / R_C)
    assert gap / transmission(spec, 0.8) == pytest.approx(-2 * kap, rel=0.05)
    with pytest.raises(InvalidSpec):
        dT_dl(spec, 0.8, width="l9")


def test_dTdl_opaque_asymptotic_branch():
    # k0 l > 350 takes the asymptotic branch; it must agree with the exact form
    spec = Rectangular(10.0, 306.0)
    k0 = math.sqrt(5.0 / R_C)
    assert k0 * 306 > 350
    d = dT_dl(spec, 5.0, "analytic")
    assert d == pytest.approx(-2 * k0 * transmission(spec, 5.0), rel=1e-9)


def test_second_derivative():
    for E in (1.0, 2.5, 7.0):
        d2 = d2T_dl2(RECT, E)
        h = 1e-4
        ref = (dT_dl(Rectangular(5, 5 + h), E, "analytic")
               - dT_dl(Rectangular(5, 5 - h), E, "analytic")) / (2 * h)
        assert d2 == pytest.approx(ref, rel=1e-4)


# -- variances ----------------------------------------------------------------

def test_dp2_examples():
    rep = analyze(RECT, 2.5)
    assert rep.dp2_elastic == pytest.approx(T_25 * 2 * K**2 * (1 + T_25 / 2), rel=1e-12)
    assert rep.dp2_elastic == pytest.approx(1.593e-3, rel=1e-3)
    assert rep.dp2_inelastic == pytest.approx(T_25 * K**2, rel=1e-12)
    assert rep.dp2_inelastic == pytest.approx(7.96e-4, rel=1e-3)
    assert dp2_per_electron(0.0, -1.0) == 1.0
    assert dp2_per_electron(2.0, 1.0) == 3.0
    assert dp2_per_electron(0.0, 1.0) == -1.0  # not clamped


def test_pipeline_matches_direct_variances():
    for E in np.linspace(0.03, 14.97, 500):
        if abs(E - 5.0) < 1e-6:
            continue
        rep = analyze(RECT, E, need_dTdl=False)
        el, inel = eq14_15(E, 5.0, 5.0)
        assert rep.dp2_elastic == pytest.approx(el, rel=1e-12)
        assert rep.dp2_inelastic == pytest.approx(inel, rel=1e-12)


@pytest.mark.parametrize("spec", [
    RECT, AsymRectangular(5.0, 5.0, 1.0), AsymRectangular(5.0, 5.0, 2.0),
    LinearSlowing(5.0, 5.0, 1.0, 64), LinearSlowing(5.0, 5.0, 2.0, 128),
], ids=["rect", "asym1", "asym2", "lin1", "lin2"])
def test_variance_ordering_below_barrier(spec):
    top = min(spec.V0, spec.V0 - getattr(spec, "phi", 0.0)) if spec.kind != "rectangular" else spec.V0
    for E in np.linspace(0.0, top, 502)[1:-1]:
        rep = analyze(spec, E, need_dTdl=False)
        assert rep.dp2_elastic >= rep.dp2_inelastic


def test_negative_variance_flagged_not_clamped():
    rep = analyze(RECT, dead_point(5))
    assert rep.dp2_inelastic < 0
    assert "negative_dp2:inelastic" in rep.flags
    assert math.isnan(rep.product_inelastic)


# -- position uncertainty ---------------------------------------------------------

def test_delta_l_examples():
    assert delta_l(1e6, 0.5, 1.0) == pytest.approx(5e-4, rel=1e-15)
    assert delta_l(1e6, 0.0, 1.0) == 0.0
    assert delta_l(1e6, 1.0, 1.0) == 0.0
    assert delta_l(10, 0.3, -2.0) == delta_l(10, 0.3, 2.0)
    with pytest.raises(DivergentDeltaL):
        delta_l(1e6, 0.5, 0.0)
    with pytest.raises(DivergentDeltaL):
        delta_l(1e6, 0.5, 0.5 * EPS_DIV)
    with pytest.raises(InvalidSpec):
        delta_l(0.5, 0.5, 1.0)


def test_delta_l_at_dead_point():
    E = dead_point(1)
    with pytest.raises(DivergentDeltaL):
        delta_l(1e6, transmission(RECT, E), dT_dl(RECT, E))
    with pytest.raises(DivergentDeltaL):
        uncertainty_product(RECT, E, "elastic")


def test_second_order_regular_limit():
    first = delta_l(1e6, 0.3, 0.5)
    second = delta_l_second_order(1e6, 0.3, 0.5, 1e-3)
    assert second == pytest.approx(first, rel=1e-2)
    assert delta_l_second_order(1e6, 0.3, 0.5, 0.0) == pytest.approx(first, rel=1e-15)
    assert delta_l_second_order(1e6, 0.3, -0.5, 1e-3) == pytest.approx(first, rel=1e-2)


def test_second_order_degenerate_slope():
    N, T, d2 = 1e6, 0.4, -0.03
    target = math.sqrt(T * (1 - T) / N)
    assert delta_l_second_order(N, T, 0.0, d2) == pytest.approx(
        math.sqrt(2 * target / abs(d2)), rel=1e-12)
    assert delta_l_second_order(N, 0.0, 0.3, 1.0) == 0.0
    with pytest.raises(NoPositiveRoot):
        delta_l_second_order(N, T, 0.0, 0.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(-2, 2), st.floats(-5, 5).filter(lambda v: abs(v) > 1e-3))
def test_second_order_root_solves_quadratic(T, slope, curv):
    N = 1e4
    dl = delta_l_second_order(N, T, slope, curv)
    target = math.sqrt(T * (1 - T) / N)
    # dl is a magnitude; one of the two displacement signs solves the expansion
    resid = min(abs(abs(slope * x + 0.5 * curv * x * x) - target) for x in (dl, -dl))
    assert resid <= 1e-9 * target


def test_regularized_at_dead_points():
    for n in range(1, 6):
        dl = regularized_delta_l(RECT, dead_point(n), 1e6)
        assert math.isfinite(dl) and dl >= 0


# -- the product ------------------------------------------------------------

def test_quantum_limit_products():
    assert uncertainty_product(RECT, 2.5, "inelastic") == pytest.approx(0.4997, rel=5e-3)
    assert uncertainty_product(RECT, 2.5, "elastic") == pytest.approx(0.7073, rel=5e-3)
    # closed forms at E = V0/2
    c = math.sqrt(1 - T_25) / math.tanh(K * 5.0)
    assert uncertainty_product(RECT, 2.5, "inelastic") == pytest.approx(c / 2, rel=1e-12)
    assert uncertainty_product(RECT, 2.5, "elastic") == pytest.approx(
        c * math.sqrt(1 + T_25 / 2) / math.sqrt(2), rel=1e-12)


def test_product_is_n_independent():
    for E in (0.7, 2.5, 4.1, 9.3):
        rep = analyze(RECT, E)
        for model in ("elastic", "inelastic"):
            dp2 = getattr(rep, f"dp2_{model}")
            values = [delta_l(N, rep.T, rep.dTdl) * math.sqrt(N * dp2) for N in (1, 1e3, 1e6)]
            assert values == pytest.approx([rep.product(model)] * 3, rel=1e-12)


def test_product_ordering_below_barrier():
    for E in np.linspace(0.01, 4.99, 200):
        rep = analyze(RECT, E)
        assert rep.product_elastic >= rep.product_inelastic


def test_dead_points_only_above_barrier():
    Es = np.linspace(1e-3, 15.0, 20001)
    d = np.array([dT_dl(RECT, E, "analytic") for E in Es])
    assert np.all(d[Es < 5.0] < 0)
    sign_change = np.nonzero(np.sign(d[:-1]) != np.sign(d[1:]))[0]
    expected = [dead_point(n) for n in range(1, 10) if dead_point(n) < 15.0]
    assert len(sign_change) == len(expected)
    for i, E_n in zip(sign_change, expected):
        assert Es[i] <= E_n <= Es[i + 1]
        assert E_n > 5.0
    for E_n in expected:
        assert "divergent_dTdl" in analyze(RECT, E_n).flags
        assert math.isinf(analyze(RECT, E_n).product_elastic)


def test_report_to_dict_and_unknown_model():
    d = analyze(RECT, 2.5).to_dict()
    assert d["flags"] == [] and set(d) >= {"E", "T", "dTdl", "product_elastic"}
    with pytest.raises(InvalidSpec):
        uncertainty_product(RECT, 2.5, "plastic")

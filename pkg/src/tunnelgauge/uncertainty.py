"""
Heisenberg uncertainty product of the test mass.

Per incident electron the test mass receives a momentum kick with mean m1
and second moment -m2 (see currents), so the kick variance is

    dp2 = -m2 + m1**2.

Counting N electrons gives dN = sqrt(N T (1 - T)), which a displacement
dl must produce through dT/dl.  Then dl * dp = sqrt(T(1-T)) sqrt(dp2) / |dT/dl|,
independent of N.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

from .currents import MODELS, transferred_elastic, transferred_inelastic
from .errors import DivergentDeltaL, InvalidSpec, MethodUnavailable, NoPositiveRoot
from .potential import DEGENERATE_TOL, GAP_WIDTH, R_C, BarrierSpec, Rectangular
from .scattering import NUDGE, solve, transmission

EPS_DIV = 1e-12  # 1/A
FD_REL_STEP = 1e-6
FD2_REL_STEP = 1e-4


def _width_name(spec: BarrierSpec, width: str | None) -> str:
    name = width or GAP_WIDTH[spec.kind]
    if not hasattr(spec, name):
        raise InvalidSpec(f"{spec.kind} has no width parameter {name!r}")
    return name


def _rectangular_dTdl(E: float, V0: float, l: float) -> float:
    if abs(E - V0) <= DEGENERATE_TOL:
        E = E + NUDGE
    if E < V0:
        k0 = math.sqrt((V0 - E) / R_C)
        alpha = V0**2 / (4.0 * E * (V0 - E))
        x = k0 * l
        if x > 350.0:
            # T ~ 4 exp(-2x)/alpha, so dT/dl ~ -2 k0 T
            return -2.0 * k0 * 4.0 * math.exp(-2.0 * x) / alpha
        T = 1.0 / (1.0 + alpha * math.sinh(x) ** 2)
        return -T * T * alpha * k0 * math.sinh(2.0 * x)
    k0 = math.sqrt((E - V0) / R_C)
    beta = V0**2 / (4.0 * E * (E - V0))
    T = 1.0 / (1.0 + beta * math.sin(k0 * l) ** 2)
    return -T * T * beta * k0 * math.sin(2.0 * k0 * l)


def dT_dl(spec: BarrierSpec, E: float, method: str = "auto", width: str | None = None) -> float:
    """Derivative of the transmission with respect to the gap width.

    method is "analytic" (rectangular barrier only), "finite_difference"
    or "auto" (analytic when available).
    """
    name = _width_name(spec, width)
    if method == "auto":
        method = "analytic" if isinstance(spec, Rectangular) else "finite_difference"
    if method == "analytic":
        if not isinstance(spec, Rectangular):
            raise MethodUnavailable(f"no analytic dT/dl for {spec.kind}")
        return _rectangular_dTdl(E, spec.V0, spec.l)
    if method != "finite_difference":
        raise InvalidSpec(f"unknown method {method!r}")
    l = getattr(spec, name)
    h = max(FD_REL_STEP * l, 1e-6)
    T_plus = transmission(replace(spec, **{name: l + h}), E)
    T_minus = transmission(replace(spec, **{name: l - h}), E)
    return (T_plus - T_minus) / (2.0 * h)


def d2T_dl2(spec: BarrierSpec, E: float, width: str | None = None) -> float:
    """Central second difference with step 1e-4 of the width."""
    name = _width_name(spec, width)
    l = getattr(spec, name)
    h = FD2_REL_STEP * l
    T0 = transmission(spec, E)
    T_plus = transmission(replace(spec, **{name: l + h}), E)
    T_minus = transmission(replace(spec, **{name: l - h}), E)
    return (T_plus - 2.0 * T0 + T_minus) / (h * h)


def dp2_per_electron(m1: float, m2: float) -> float:
    """Variance of the momentum kick per incident electron (hbar^2/A^2). Not clamped."""
    return -m2 + m1 * m1


def delta_l(N: float, T: float, dTdl: float) -> float:
    """First-order position uncertainty sqrt(T(1-T)/N)/|dT/dl| in A."""
    if N < 1:
        raise InvalidSpec("N must be at least 1")
    if abs(dTdl) < EPS_DIV:
        raise DivergentDeltaL(f"|dT/dl| = {abs(dTdl):.3g} < {EPS_DIV}: transducer dead point")
    return math.sqrt(T * (1.0 - T) / N) / abs(dTdl)


def delta_l_second_order(N: float, T: float, dTdl: float, d2Tdl2: float) -> float:
    """Smallest |dl| with |dT/dl dl + d2T/dl2 dl^2 / 2| = sqrt(T(1-T)/N).

    Both signs of the displacement are allowed, so the root exists whenever
    the second derivative is nonzero, including at dT/dl = 0.
    """
    if N < 1:
        raise InvalidSpec("N must be at least 1")
    target = math.sqrt(max(T * (1.0 - T), 0.0) / N)
    if target == 0.0:
        return 0.0
    a, b = 0.5 * d2Tdl2, dTdl
    roots = []
    for c in (target, -target):
        if a == 0.0:
            if b != 0.0:
                roots.append(abs(c / b))
            continue
        disc = b * b + 4.0 * a * c
        if disc < 0.0:
            continue
        sq = math.sqrt(disc)
        # numerically stable pair
        q = -0.5 * (b + math.copysign(sq, b)) if b != 0.0 else 0.5 * sq
        cands = [q / a] if q == 0.0 else [q / a, -c / q]
        roots.extend(abs(r) for r in cands if r != 0.0)
    if not roots:
        raise NoPositiveRoot("second-order expansion has no real displacement root")
    return min(roots)


@dataclass(frozen=True)
class UncertaintyReport:
    E: float
    T: float
    dTdl: float
    m1_elastic: float
    m2_elastic: float
    m1_inelastic: float
    m2_inelastic: float
    dp2_elastic: float
    dp2_inelastic: float
    product_elastic: float
    product_inelastic: float
    flags: tuple[str, ...] = ()

    def product(self, model: str) -> float:
        return getattr(self, f"product_{model}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["flags"] = list(self.flags)
        return d


def _product(T: float, dp2: float, dTdl: float) -> float:
    if dp2 < 0.0:
        return math.nan
    if abs(dTdl) < EPS_DIV:
        return math.inf
    return math.sqrt(T * (1.0 - T)) * math.sqrt(dp2) / abs(dTdl)


def analyze(spec: BarrierSpec, E: float, method: str = "auto",
            width: str | None = None, need_dTdl: bool = True) -> UncertaintyReport:
    """Full single-energy report for both interaction models."""
    sol = solve(spec, E)
    el = transferred_elastic(sol)
    inel = transferred_inelastic(sol)
    flags = list(sol.flags)
    dp2 = {"elastic": dp2_per_electron(el.m1, el.m2),
           "inelastic": dp2_per_electron(inel.m1, inel.m2)}
    if need_dTdl:
        slope = dT_dl(spec, E, method, width)
        if abs(slope) < EPS_DIV:
            flags.append("divergent_dTdl")
    else:
        slope = math.nan
    for model in MODELS:
        if dp2[model] < 0.0:
            flags.append(f"negative_dp2:{model}")
    products = {m: _product(sol.T, dp2[m], slope) if need_dTdl else math.nan for m in MODELS}
    return UncertaintyReport(
        E=E, T=sol.T, dTdl=slope,
        m1_elastic=el.m1, m2_elastic=el.m2, m1_inelastic=inel.m1, m2_inelastic=inel.m2,
        dp2_elastic=dp2["elastic"], dp2_inelastic=dp2["inelastic"],
        product_elastic=products["elastic"], product_inelastic=products["inelastic"],
        flags=tuple(flags),
    )


def uncertainty_product(spec: BarrierSpec, E: float, model: str, method: str = "auto") -> float:
    """dl * dp in units of hbar.  Raises DivergentDeltaL at a dead point."""
    if model not in MODELS:
        raise InvalidSpec(f"unknown model {model!r}")
    rep = analyze(spec, E, method)
    if "divergent_dTdl" in rep.flags:
        raise DivergentDeltaL(f"dT/dl vanishes at E = {E} eV")
    return rep.product(model)


def regularized_delta_l(spec: BarrierSpec, E: float, N: float, method: str = "auto") -> float:
    """Position uncertainty from the second-order expansion, finite at dead points."""
    T = transmission(spec, E)
    return delta_l_second_order(N, T, dT_dl(spec, E, method), d2T_dl2(spec, E))

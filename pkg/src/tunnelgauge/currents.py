"""
Momentum and momentum-squared currents, and what the test mass receives.

Units (hbar = 1): the momentum current J_p is in eV per unit |psi|^2, the
momentum-squared current J_p2 in eV/A per unit |psi|^2, the probability
flux j in eV A.  Dividing by the incident flux gives per-electron moments,
m1 = J_p/j_inc in hbar/A and m2 = J_p2/j_inc in hbar^2/A^2.

Two interaction models:

* elastic   - the test mass only feels the force of its own potential steps:
              Jp_t  = sum dV |psi(x_i)|^2
              Jp2_t = -i sum dV (psi* psi' - psi psi'*)(x_i)
* inelastic - in addition, everything carried into the test mass is absorbed:
              the currents just inside the right lead are added.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AtInterface, InvalidSpec
from .potential import DEGENERATE_TOL, R_C, mass_steps
from .scattering import ScatteringSolution, eval_psi

MODELS = ("elastic", "inelastic")
_STEP_TOL = 1e-12  # A


@dataclass(frozen=True)
class CurrentsReport:
    model: str
    Jp_t: float
    Jp2_t: float
    m1: float
    m2: float
    T: float


def _check_not_at_step(solution: ScatteringSolution, x: float):
    for xs in solution.profile.step_positions:
        if abs(x - xs) <= _STEP_TOL:
            raise AtInterface(f"x = {x} A is a potential step; the current jumps there")


def momentum_current_at(solution: ScatteringSolution, x: float) -> float:
    """J_p(x) = (hbar^2/4m)(2|psi'|^2 - psi* psi'' - psi''* psi)."""
    _check_not_at_step(solution, x)
    psi, d1, d2, _ = solution.derivatives(x)
    val = 0.5 * R_C * (2.0 * d1.conjugate() * d1 - psi.conjugate() * d2 - d2.conjugate() * psi)
    return val.real


def momentum2_current_at(solution: ScatteringSolution, x: float) -> float:
    """J_p2(x) = i(hbar^3/4m)(psi* psi''' - psi'* psi'' + psi''* psi' - psi'''* psi)."""
    _check_not_at_step(solution, x)
    psi, d1, d2, d3 = solution.derivatives(x)
    c = complex.conjugate
    val = 0.5j * R_C * (c(psi) * d3 - c(d1) * d2 + c(d2) * d1 - c(d3) * psi)
    return val.real


def lead_currents(solution: ScatteringSolution) -> tuple[float, float]:
    """(J_p, J_p2) inside the test-mass lead: 2 R_C |t|^2/2pi times (k_f^2, k_f^3)."""
    k_f = solution.k[-1].real
    dens = abs(solution.t) ** 2 / (2.0 * math.pi)
    return 2.0 * R_C * k_f**2 * dens, 2.0 * R_C * k_f**3 * dens


def _step_terms(solution: ScatteringSolution, steps) -> tuple[float, float]:
    jp = jp2 = 0.0
    for x, dV in steps:
        psi, dpsi = eval_psi(solution, x)
        jp += dV * abs(psi) ** 2
        # -i (psi* psi' - psi psi'*) = 2 Im(psi* psi')
        jp2 += dV * 2.0 * (psi.conjugate() * dpsi).imag
    return jp, jp2


def _report(model, solution, jp, jp2) -> CurrentsReport:
    return CurrentsReport(model, jp, jp2, jp / solution.j_inc, jp2 / solution.j_inc, solution.T)


def transferred_elastic(solution: ScatteringSolution, profile=None) -> CurrentsReport:
    profile = profile or solution.profile
    jp, jp2 = _step_terms(solution, mass_steps(profile))
    return _report("elastic", solution, jp, jp2)


def transferred_inelastic(solution: ScatteringSolution, profile=None) -> CurrentsReport:
    profile = profile or solution.profile
    jp, jp2 = _step_terms(solution, mass_steps(profile))
    lp, lp2 = lead_currents(solution)
    return _report("inelastic", solution, jp + lp, jp2 + lp2)


def transferred(solution: ScatteringSolution, model: str, profile=None) -> CurrentsReport:
    if model == "elastic":
        return transferred_elastic(solution, profile)
    if model == "inelastic":
        return transferred_inelastic(solution, profile)
    raise InvalidSpec(f"unknown model {model!r}; expected one of {MODELS}")


def rectangular_T(E: float, V0: float, l: float) -> float:
    """Textbook transmission of a symmetric rectangular barrier, above and below V0."""
    if V0 == 0.0:
        return 1.0
    if E < V0:
        k0 = math.sqrt((V0 - E) / R_C)
        try:
            sh2 = math.sinh(k0 * l) ** 2
        except OverflowError:
            return 0.0
        return 1.0 / (1.0 + V0**2 * sh2 / (4.0 * E * (V0 - E)))
    k0 = math.sqrt((E - V0) / R_C)
    return 1.0 / (1.0 + V0**2 * math.sin(k0 * l) ** 2 / (4.0 * E * (E - V0)))


def closed_form_rectangular(E: float, V0: float, l: float, model: str) -> tuple[float, float]:
    """Raw (Jp_t, Jp2_t) for the symmetric rectangular barrier in closed form.

    Above the barrier k0^2 = (V0 - E)/R_C simply turns negative.
    """
    if abs(E - V0) <= DEGENERATE_TOL:
        raise InvalidSpec("closed forms are singular at E = V0; nudge the energy first")
    T = rectangular_T(E, V0, l)
    k2 = E / R_C
    k = math.sqrt(k2)
    k02 = (V0 - E) / R_C
    pref = 1.0 / (2.0 * math.pi)
    if model == "elastic":
        return (-pref * R_C * T * (k2 + k02),
                -pref * 2.0 * R_C * T * (k2 + k02) * k)
    if model == "inelastic":
        return (pref * R_C * T * (k2 - k02),
                -pref * 2.0 * R_C * T * k02 * k)
    raise InvalidSpec(f"unknown model {model!r}")

"""
Stationary scattering states of a piecewise-constant potential.

In region i the wavefunction is

    psi_i(x) = A_i exp(i k_i (x - x_ref_i)) + B_i exp(-i k_i (x - x_ref_i))

with x_ref = 0 in both leads and x_ref = right edge of the region inside.
The incident amplitude is A_0 = 1/sqrt(2 pi) (wavevector normalisation),
so the transmitted wave is t exp(i k_f x) / sqrt(2 pi).

The solution is built from the transmitted side towards the tip.  Growing
evanescent factors are pulled out into a running log-scale, which keeps
every stored amplitude of order one whatever the barrier opacity.
"""
from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass, replace

from .errors import GridTooCoarse, InvalidSpec, NonPropagatingLead
from .potential import (
    DEGENERATE_TOL, R_C, LinearSlowing, PotentialProfile, build_profile,
    wavevector,
)

SQRT_2PI = math.sqrt(2.0 * math.pi)
NUDGE = 1e-9  # eV
_LOG_TINY = math.log(sys.float_info.min)


def as_profile(obj) -> PotentialProfile:
    if isinstance(obj, PotentialProfile):
        return obj
    return build_profile(obj)


@dataclass(frozen=True)
class ScatteringSolution:
    profile: PotentialProfile
    E: float
    k: tuple[complex, ...]
    x_ref: tuple[float, ...]
    # per-region amplitudes before the common factor norm * exp(log_scale[i])
    coeffs: tuple[tuple[complex, complex], ...]
    log_scale: tuple[float, ...]
    norm: complex
    t: complex
    r: complex
    T: float
    R: float
    j_inc: float
    j_trans: float
    nudged: bool = False
    underflow: bool = False

    @property
    def flags(self) -> tuple[str, ...]:
        out = []
        if self.nudged:
            out.append("nudged")
        if self.underflow:
            out.append("underflow_T")
        return tuple(out)

    def amplitudes(self, i: int) -> tuple[complex, complex]:
        """(A_i, B_i) in the local coordinate x - x_ref[i]."""
        a, b = self.coeffs[i]
        f = self.norm * math.exp(self.log_scale[i])
        return f * a, f * b

    def _waves(self, x: float, region: int | None = None) -> tuple[int, complex, complex]:
        """Region index and the two partial waves A e^{ik xi}, B e^{-ik xi} at x."""
        i = self.profile.region_index(x) if region is None else region
        k = self.k[i]
        xi = x - self.x_ref[i]
        a, b = self.coeffs[i]
        ls = self.log_scale[i]
        fwd = self.norm * a * cmath.exp(ls + 1j * k * xi) if a else 0j
        bwd = self.norm * b * cmath.exp(ls - 1j * k * xi) if b else 0j
        return i, fwd, bwd

    def derivatives(self, x: float, order: int = 3, region: int | None = None) -> list[complex]:
        """[psi, psi', ..., psi^(order)] at x from the region plane-wave form.

        region forces which region's amplitudes are used (one-sided limits at a step).
        """
        i, fwd, bwd = self._waves(x, region)
        ik = 1j * self.k[i]
        return [fwd * ik**n + bwd * (-ik) ** n for n in range(order + 1)]


def _propagate_left(k: complex, a: complex, b: complex, width: float):
    """psi, psi' at the left edge of an interior region, and the factored log-growth."""
    g = k.imag * width
    m_f = cmath.exp(-1j * k * width - g)
    m_b = cmath.exp(1j * k * width - g)
    return a * m_f + b * m_b, 1j * k * (a * m_f - b * m_b), g


def solve(profile, E: float) -> ScatteringSolution:
    """Scattering state for an electron incident from the tip side at energy E."""
    profile = as_profile(profile)
    regions = profile.regions
    pots = profile.potentials()
    if not (E > pots[0] and E > pots[-1]):
        raise NonPropagatingLead(
            f"E = {E} eV does not exceed both lead potentials ({pots[0]}, {pots[-1]})"
        )
    E_eff = E
    nudged = any(abs(E - V) <= DEGENERATE_TOL for V in pots)
    if nudged:
        E_eff = E + NUDGE
    ks = tuple(wavevector(E_eff, V) for V in pots)
    n = len(regions)
    x_ref = tuple([0.0] + [r.x_right for r in regions[1:-1]] + [0.0])

    coeffs: list[tuple[complex, complex]] = [(0j, 0j)] * n
    L = [0.0] * n
    coeffs[-1] = (1 + 0j, 0j)
    for s in range(n - 2, -1, -1):
        X = regions[s].x_right
        kr = ks[s + 1]
        a, b = coeffs[s + 1]
        if s + 1 == n - 1:
            e = cmath.exp(1j * kr * X)
            psi, dpsi, g = a * e, 1j * kr * a * e, 0.0
        else:
            psi, dpsi, g = _propagate_left(kr, a, b, regions[s + 1].width)
        scale = abs(psi) + abs(dpsi) / abs(kr)
        psi /= scale
        dpsi /= scale
        L[s] = L[s + 1] + g + math.log(scale)
        kl = ks[s]
        u = dpsi / (1j * kl)
        if s == 0:
            coeffs[s] = (0.5 * (psi + u) * cmath.exp(-1j * kl * X),
                         0.5 * (psi - u) * cmath.exp(1j * kl * X))
        else:
            coeffs[s] = (0.5 * (psi + u), 0.5 * (psi - u))

    a0, b0 = coeffs[0]
    L0 = L[0]
    log_scale = tuple(li - L0 for li in L)
    norm = 1.0 / (SQRT_2PI * a0)
    k_in, k_out = ks[0].real, ks[-1].real
    log_T = math.log(k_out / k_in) - 2.0 * L0 - 2.0 * math.log(abs(a0))
    underflow = log_T < _LOG_TINY
    if underflow:
        t, T = 0j, 0.0
    else:
        t = cmath.exp(-L0) / a0
        T = (k_out / k_in) * abs(t) ** 2
    r = b0 / a0
    j_inc = 2.0 * R_C * k_in / (2.0 * math.pi)
    return ScatteringSolution(
        profile=profile, E=E_eff, k=ks, x_ref=x_ref, coeffs=tuple(coeffs),
        log_scale=log_scale, norm=norm, t=t, r=r, T=T, R=abs(r) ** 2,
        j_inc=j_inc, j_trans=T * j_inc, nudged=nudged, underflow=underflow,
    )


def transmission(profile, E: float) -> float:
    return solve(profile, E).T


def eval_psi(solution: ScatteringSolution, x: float) -> tuple[complex, complex]:
    """(psi, psi') at x.  At a step the right-hand region is used; both sides agree."""
    psi, dpsi = solution.derivatives(x, 1)
    return psi, dpsi


def region_flux(solution: ScatteringSolution, i: int) -> float:
    """Probability flux 2 R_C Im(psi* psi') in region i, from its amplitudes."""
    k = solution.k[i]
    A, B = solution.amplitudes(i)
    if k.imag == 0.0:
        return 2.0 * R_C * k.real * (abs(A) ** 2 - abs(B) ** 2)
    return 4.0 * R_C * k.imag * (A.conjugate() * B).imag


def probability_current(solution: ScatteringSolution) -> float:
    """Probability flux carried by the state, in units where hbar = 1 (eV A).

    Equal to the transmitted flux, which is the same in every region.
    """
    return solution.j_trans


def staircase_convergence(spec: LinearSlowing, E: float, tol: float,
                          n_start: int = 4, n_max: int = 1 << 14) -> tuple[int, float]:
    """Smallest n (by doubling from n_start) with |T(2n) - T(n)| <= tol * |T(2n)|.

    Returns n and T(2n).
    """
    if not isinstance(spec, LinearSlowing):
        raise InvalidSpec("staircase convergence applies to linear_slowing barriers")
    n = n_start
    T_n = transmission(replace(spec, n_steps=n), E)
    while n <= n_max:
        T_2n = transmission(replace(spec, n_steps=2 * n), E)
        if abs(T_2n - T_n) <= tol * abs(T_2n):
            return n, T_2n
        n, T_n = 2 * n, T_2n
    raise ArithmeticError(f"staircase not converged to {tol} by n_steps = {n_max}")


# -- independent oracle -----------------------------------------------------


def _taylor_cs(z: float) -> tuple[float, float]:
    """Series for cos(sqrt z) and sin(sqrt z)/sqrt z, valid for small |z| of either sign."""
    c = 1.0 - z / 2 + z**2 / 24 - z**3 / 720 + z**4 / 40320
    s = 1.0 - z / 6 + z**2 / 120 - z**3 / 5040 + z**4 / 362880
    return c, s


def numerov_transmission(profile, E: float, h: float | None = None) -> float:
    """Transmission by Numerov integration of psi'' = -q(x) psi, q = (E - V)/R_C.

    Integrates from the transmitted side (outgoing plane wave of unit
    amplitude) towards the tip, one region at a time with a step that fits the
    region exactly.  psi and psi' are carried across each step with a
    one-sided Taylor series; the incident amplitude is read off the last two
    grid points in the tip-side lead.  Test oracle only.
    """
    profile = as_profile(profile)
    pots = profile.potentials()
    if not (E > pots[0] and E > pots[-1]):
        raise NonPropagatingLead(f"E = {E} eV below a lead potential")
    qs = [(E - V) / R_C for V in pots]
    k_max = max(math.sqrt(abs(q)) for q in qs)
    if h is None:
        h = min(0.01, 0.095 / k_max)
    if k_max * h >= 0.1:
        raise GridTooCoarse(f"k_max * h = {k_max * h:.3g} >= 0.1")

    xs = profile.step_positions
    bounds = [xs[0] - 1.0, *xs, xs[-1] + 1.0]
    k_f = math.sqrt(qs[-1])
    k_i = math.sqrt(qs[0])

    # right lead: exact outgoing wave on the two outermost nodes
    seg = len(bounds) - 2
    x_hi, x_lo = bounds[seg + 1], bounds[seg]
    m = max(2, math.ceil((x_hi - x_lo) / h))
    hs = (x_hi - x_lo) / m
    psi_next = cmath.exp(1j * k_f * x_hi)
    psi = cmath.exp(1j * k_f * (x_hi - hs))
    n_left = m - 1  # nodes still to produce down to x_lo
    for region in range(len(pots) - 1, -1, -1):
        q = qs[region]
        z = q * hs * hs
        c1 = 2.0 * (1.0 - 5.0 * z / 12.0) / (1.0 + z / 12.0)
        for _ in range(n_left):
            psi, psi_next = c1 * psi - psi_next, psi
        if region == 0:
            break
        # psi sits on the left edge of this region, psi_next one step inside
        c, s = _taylor_cs(z)
        dpsi = (psi_next - c * psi) / (hs * s)
        # next region to the left
        x_hi, x_lo = bounds[region], bounds[region - 1]
        m = max(2, math.ceil((x_hi - x_lo) / h))
        hs = (x_hi - x_lo) / m
        c, s = _taylor_cs(qs[region - 1] * hs * hs)
        psi_next, psi = psi, c * psi - hs * s * dpsi
        n_left = m - 1

    x1 = bounds[0]
    x2 = x1 + hs
    # psi(x1) = psi, psi(x2) = psi_next, solve for the incident amplitude
    e1, e2 = cmath.exp(1j * k_i * x1), cmath.exp(1j * k_i * x2)
    det = e1 / e2 - e2 / e1
    A = (psi / e2 - psi_next / e1) / det
    return (k_f / k_i) / abs(A) ** 2

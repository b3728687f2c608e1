"""Homodyne Bell experiment: modulation depth, CHSH, local-realism verdict.

Each signal channel is mixed with a coherent local oscillator on a 50:50
beamsplitter; the observable is the modulation depth
E = <D1 D2>/<S1 S2> built from photon-number differences and sums at the
two detector pairs. E reduces to a two-frequency fringe in the oscillator
phases whose leading coefficient, at the optimal oscillator amplitudes, is
C1 = |g1|/(1 + sqrt(g2)). Local realism bounds the CHSH combination of
four E values by 2, which C1^2 + C2^2 <= 1/2 guarantees; C1 > 1/sqrt(2)
therefore certifies a violation from interference visibility and
coincidence rate alone.

Three independent computation routes for E (beamsplitter unitaries,
input-operator forms, and the analytic moment formula) cross-validate one
another and are kept deliberately separate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import fock
from .coherence import DEGENERACY_FLOOR, CoherenceMoments, g1, g2
from .errors import DegenerateDenominatorError, DegenerateStateError
from .fock import QuantumState

# sqrt(0.5) is the correctly rounded double for 1/sqrt(2); dividing by
# sqrt(2) lands one ulp low and misclassifies the exact boundary probe
BELL_BOUND_C1 = math.sqrt(0.5)
#: Oscillator scale used for numeric E when the optimum is a limit point;
#: bias in E is O(beta^2) ~ 1e-4.
DEGENERATE_BETA_SCALE = 1e-2
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class LocalOscillator:
    """Coherent local oscillator with real amplitude and phase."""

    beta: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise ValueError(f"beta must be finite and >= 0, got {self.beta!r}")
        object.__setattr__(self, "theta", float(self.theta) % _TWO_PI)

    @property
    def alpha(self) -> complex:
        return self.beta * cmath.exp(1j * self.theta)


@dataclass(frozen=True)
class FringeCoefficients:
    """Amplitudes/offsets of E = c1 cos(t1 - t2 + phi1) + c2 cos(t1 + t2 + phi2).

    phi1 = arg<a1^dag a2>. phi2 carries arg<a1^dag a2^dag> plus a pi offset
    that absorbs the minus sign of the sum-frequency term, so the trig form
    reproduces the moment formula exactly.
    """

    c1: float
    phi1: float
    c2: float
    phi2: float

    def __post_init__(self):
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("fringe coefficients must be non-negative")
        if self.c1 + self.c2 > 1.0 + 1e-9:
            raise ValueError(
                f"c1 + c2 = {self.c1 + self.c2!r} exceeds the unit bound "
                "on the modulation depth")


@dataclass(frozen=True)
class DegenerateLimit:
    """Marker for states with <n1 n2> = 0: the optimal oscillator product
    is zero, so the optimum is approached as the common scale -> 0+ with
    beta1/beta2 fixed at ``ratio``."""

    ratio: float


@dataclass(frozen=True)
class ChshResult:
    b_value: float
    angles: tuple[float, float, float, float]


@dataclass(frozen=True)
class Verdict:
    """All inequality diagnostics for one state.

    c2 and thw_sum are None when only (|g1|, g2) were measured. A Bell
    violation implies a classical-field violation; the converse fails.
    """

    g1_mag: float
    g2: float
    c1: float
    c2: float | None
    thw_sum: float | None
    bell_margin: float
    tg_margin: float
    violates_bell: bool
    violates_classical: bool


def _lo_state(lo: LocalOscillator, tail_eps: float) -> QuantumState:
    return fock.coherent_state(lo.alpha, tail_eps)


def _pure_components(state: QuantumState):
    """Eigen-ensemble of the signal state. Every correlator below is
    linear in the density operator, so summing per-eigenvector results is
    exact and avoids forming the (padded) four-mode density operator."""
    return fock.eigen_components(state)


def _number_pair(state: QuantumState, i: int, j: int) -> float:
    spec = [(0, 0)] * state.system.mode_count
    spec[i] = (1, 1)
    spec[j] = (1, 1)
    return fock.expect_normal_ordered(state, spec).real


def _dd_ss_unitary(four: QuantumState) -> tuple[float, float]:
    """<D1 D2>, <S1 S2> after physically applying the two beamsplitters.

    Modes are (a1, a2, b1, b2); detectors c_k/d_k land on the a_k/b_k
    slots. Pads each pair first so the transforms are exactly unitary.
    """
    s = fock.pad_for_beamsplitter(four, 0, 2)
    s = fock.pad_for_beamsplitter(s, 1, 3)
    s = fock.apply_beamsplitter(s, 0, 2)
    s = fock.apply_beamsplitter(s, 1, 3)
    n01 = _number_pair(s, 0, 1)
    n03 = _number_pair(s, 0, 3)
    n21 = _number_pair(s, 2, 1)
    n23 = _number_pair(s, 2, 3)
    return n01 - n03 - n21 + n23, n01 + n03 + n21 + n23


def _dd_ss_input_operator(four: QuantumState) -> tuple[float, float]:
    """Same two correlators evaluated directly on the input state via
    D_k = i(a_k^dag b_k - a_k b_k^dag) and S_k = a_k^dag a_k + b_k^dag b_k."""
    def term(p_a1, p_a2, p_b1, p_b2):
        return fock.expect_normal_ordered(four, [p_a1, p_a2, p_b1, p_b2])

    up, down = (1, 0), (0, 1)
    none = (0, 0)
    dd = -(term(up, up, down, down) - term(up, down, down, up)
           - term(down, up, up, down) + term(down, down, up, up))
    num = (1, 1)
    ss = (term(num, num, none, none) + term(num, none, none, num)
          + term(none, num, num, none) + term(none, none, num, num))
    return dd.real, ss.real


def modulation_depth_numeric(state_a: QuantumState, lo1: LocalOscillator,
                             lo2: LocalOscillator, route: str = "unitary", *,
                             tail_eps: float = fock.DEFAULT_TAIL_EPS) -> float:
    """E = <D1 D2>/<S1 S2> on the four-mode state a1 x a2 x b1 x b2.

    route="unitary" applies the beamsplitters and measures output photon
    numbers; route="input_operator" evaluates the equivalent input-side
    operator forms without any transform. The two must agree to roundoff.
    """
    if state_a.system.mode_count != 2:
        raise ValueError("state_a must be a two-mode (signal-channel) state")
    if route not in ("unitary", "input_operator"):
        raise ValueError(f"unknown route {route!r}")
    b1 = _lo_state(lo1, tail_eps)
    b2 = _lo_state(lo2, tail_eps)
    dd = ss = 0.0
    for weight, component in _pure_components(state_a):
        four = fock.tensor(fock.tensor(component, b1), b2)
        if route == "unitary":
            d, s = _dd_ss_unitary(four)
        else:
            d, s = _dd_ss_input_operator(four)
        dd += weight * d
        ss += weight * s
    if ss <= 1e-15:
        raise DegenerateDenominatorError(
            f"<S1 S2> = {ss:.3e}: no joint signal, modulation depth undefined")
    return dd / ss


def modulation_depth_analytic(moments: CoherenceMoments,
                              lo1: LocalOscillator,
                              lo2: LocalOscillator) -> float:
    """E from the five channel moments and the oscillator parameters.

    Numerator and denominator are the closed forms obtained by inserting
    the input-operator expressions into coherent-state expectations; the
    numerator bracket is a sum of conjugate pairs and therefore real.
    """
    b1, b2 = lo1.beta, lo2.beta
    den = (moments.n1n2 + moments.n1 * b2 ** 2 + moments.n2 * b1 ** 2
           + b1 ** 2 * b2 ** 2)
    if den <= 1e-15:
        raise DegenerateDenominatorError(
            f"modulation-depth denominator {den:.3e} vanishes")
    diff = lo1.theta - lo2.theta
    total = lo1.theta + lo2.theta
    bracket = 2.0 * (moments.m12 * cmath.exp(1j * diff)).real \
        - 2.0 * (moments.anom.conjugate() * cmath.exp(1j * total)).real
    return b1 * b2 * bracket / den


def optimal_lo_amplitudes(moments: CoherenceMoments):
    """Oscillator amplitudes maximizing the fringe amplitude of E.

    Returns (beta1, beta2) with beta1*beta2 = sqrt(<n1 n2>) and
    beta1/beta2 = sqrt(n1/n2), or a :class:`DegenerateLimit` when
    <n1 n2> = 0 so the optimum is only approached as the scale -> 0+.
    """
    if moments.n1 <= DEGENERACY_FLOOR or moments.n2 <= DEGENERACY_FLOOR:
        raise DegenerateStateError("optimal amplitudes need both channels lit")
    ratio = math.sqrt(moments.n1 / moments.n2)
    if moments.n1n2 <= DEGENERACY_FLOOR:
        return DegenerateLimit(ratio=ratio)
    scale = math.sqrt(math.sqrt(moments.n1n2))
    return scale * math.sqrt(ratio), scale / math.sqrt(ratio)


def lo_pair_for(moments: CoherenceMoments, theta1: float, theta2: float, *,
                scale: float = DEGENERATE_BETA_SCALE
                ) -> tuple[LocalOscillator, LocalOscillator]:
    """Oscillators at the optimal amplitudes, falling back to a small
    common scale (ratio preserved) for degenerate-limit states."""
    betas = optimal_lo_amplitudes(moments)
    if isinstance(betas, DegenerateLimit):
        betas = (scale * math.sqrt(betas.ratio),
                 scale / math.sqrt(betas.ratio))
    return (LocalOscillator(betas[0], theta1),
            LocalOscillator(betas[1], theta2))


def fringe_coefficients_at(moments: CoherenceMoments, beta1: float,
                           beta2: float) -> FringeCoefficients:
    """Trig-form coefficients of E at the given oscillator amplitudes."""
    den = (moments.n1n2 + moments.n1 * beta2 ** 2 + moments.n2 * beta1 ** 2
           + beta1 ** 2 * beta2 ** 2)
    if den <= 1e-15:
        raise DegenerateDenominatorError(
            f"modulation-depth denominator {den:.3e} vanishes")
    prefactor = beta1 * beta2 / den
    coeffs = FringeCoefficients(
        c1=2.0 * prefactor * abs(moments.m12),
        phi1=cmath.phase(moments.m12),
        c2=2.0 * prefactor * abs(moments.anom),
        phi2=(math.pi - cmath.phase(moments.anom)) % _TWO_PI)
    if __debug__:
        _validate_trig_form(moments, LocalOscillator(beta1, 0.0),
                            LocalOscillator(beta2, 0.0), coeffs)
    return coeffs


def _validate_trig_form(moments, lo1, lo2, coeffs, samples: int = 16):
    """Fit the two-frequency fringe from angle scans of the moment formula
    and require agreement with the closed-form coefficients to 1e-9.

    The closed form (including the sign fold in phi2) is derived, not
    quoted, so it is re-checked whenever assertions are enabled.
    """
    grid = _TWO_PI * np.arange(samples) / samples
    # difference-frequency scan at fixed angle sum, then the reverse
    e_diff = np.array([modulation_depth_analytic(
        moments, LocalOscillator(lo1.beta, d / 2),
        LocalOscillator(lo2.beta, -d / 2)) for d in grid])
    e_sum = np.array([modulation_depth_analytic(
        moments, LocalOscillator(lo1.beta, s / 2),
        LocalOscillator(lo2.beta, s / 2)) for s in grid])
    z1 = 2.0 * np.mean(e_diff * np.exp(-1j * grid))
    z2 = 2.0 * np.mean(e_sum * np.exp(-1j * grid))
    err = max(abs(z1 - coeffs.c1 * cmath.exp(1j * coeffs.phi1)),
              abs(z2 - coeffs.c2 * cmath.exp(1j * coeffs.phi2)))
    if err > 1e-9:
        raise AssertionError(
            f"trig-form coefficients disagree with angle-scan fit by {err:.3e}")


def fringe_coefficients(moments: CoherenceMoments) -> FringeCoefficients:
    """Coefficients at the optimal oscillator amplitudes.

    c1 = |g1|/(1 + sqrt(g2)); c2 = |<a1 a2>|/(sqrt(n1 n2) (1 + sqrt(g2))),
    the analogous closed form for the sum-frequency term. Both are exact
    limits for <n1 n2> = 0 states, where finite-amplitude evaluation would
    carry an O(beta^2) bias.
    """
    gg2 = g2(moments)
    if gg2 < 0.0:
        gg2 = 0.0
    root = math.sqrt(moments.n1 * moments.n2) * (1.0 + math.sqrt(gg2))
    return FringeCoefficients(
        c1=abs(moments.m12) / root,
        phi1=cmath.phase(moments.m12),
        c2=abs(moments.anom) / root,
        phi2=(math.pi - cmath.phase(moments.anom)) % _TWO_PI)


def fringe_e(coeffs: FringeCoefficients, theta1: float, theta2: float) -> float:
    """E(theta1, theta2) in trig form."""
    return (coeffs.c1 * math.cos(theta1 - theta2 + coeffs.phi1)
            + coeffs.c2 * math.cos(theta1 + theta2 + coeffs.phi2))


def chsh_value(coeffs: FringeCoefficients,
               angles: Sequence[float]) -> float:
    """B = E(t1,t2) + E(t1,t2') + E(t1',t2) - E(t1',t2')."""
    t1, t1p, t2, t2p = (float(a) for a in angles)
    return (fringe_e(coeffs, t1, t2) + fringe_e(coeffs, t1, t2p)
            + fringe_e(coeffs, t1p, t2) - fringe_e(coeffs, t1p, t2p))


def maximize_chsh(coeffs: FringeCoefficients, *, grid: int = 24,
                  angle_tol: float = 1e-6) -> ChshResult:
    """Deterministically maximize B over the four analyzer angles.

    Coarse grid (first maximum in lexicographic angle order wins ties),
    then coordinate descent with a halving step down to ``angle_tol``.
    B is symmetric under shifting one station's pair of angles by pi, so
    maximizing B also maximizes |B|.
    """
    ang = _TWO_PI * np.arange(grid) / grid
    e = (coeffs.c1 * np.cos(ang[:, None] - ang[None, :] + coeffs.phi1)
         + coeffs.c2 * np.cos(ang[:, None] + ang[None, :] + coeffs.phi2))
    b = (e[:, None, :, None] + e[:, None, None, :]
         + e[None, :, :, None] - e[None, :, None, :])
    flat_best = int(np.argmax(b))
    idx = np.unravel_index(flat_best, b.shape)
    angles = [float(ang[i]) for i in idx]
    best = float(b[idx])
    step = _TWO_PI / grid
    while step > angle_tol:
        moved = True
        while moved:
            moved = False
            for k in range(4):
                for delta in (step, -step):
                    trial = list(angles)
                    trial[k] = angles[k] + delta
                    value = chsh_value(coeffs, trial)
                    if value > best + 1e-15:
                        best, angles, moved = value, trial, True
        step *= 0.5
    wrapped = tuple(a % _TWO_PI for a in angles)
    return ChshResult(b_value=best, angles=wrapped)


def local_realism_verdict(moments: CoherenceMoments) -> Verdict:
    """Full verdict from channel moments: all margins plus the two flags.

    Violations are strict inequalities; boundary states report False with
    a zero margin.
    """
    g1_mag = abs(g1(moments))
    gg2 = g2(moments)
    tg = gg2 - g1_mag ** 2
    coeffs = fringe_coefficients(moments)
    return Verdict(
        g1_mag=g1_mag,
        g2=gg2,
        c1=coeffs.c1,
        c2=coeffs.c2,
        thw_sum=coeffs.c1 ** 2 + coeffs.c2 ** 2,
        bell_margin=BELL_BOUND_C1 - coeffs.c1,
        tg_margin=tg,
        violates_bell=coeffs.c1 > BELL_BOUND_C1,
        violates_classical=tg < 0.0,
    )


def criterion_from_measurements(g1_mag: float, g2_value: float) -> Verdict:
    """Verdict from an interference visibility and a coincidence rate
    alone. c2 is unknown and reported as absent."""
    if not 0.0 <= g1_mag <= 1.0:
        raise ValueError(f"g1 magnitude must lie in [0, 1], got {g1_mag!r}")
    if g2_value < 0.0:
        raise ValueError(f"g2 must be non-negative, got {g2_value!r}")
    c1 = g1_mag / (1.0 + math.sqrt(g2_value))
    tg = g2_value - g1_mag ** 2
    return Verdict(
        g1_mag=float(g1_mag),
        g2=float(g2_value),
        c1=c1,
        c2=None,
        thw_sum=None,
        bell_margin=BELL_BOUND_C1 - c1,
        tg_margin=tg,
        violates_bell=c1 > BELL_BOUND_C1,
        violates_classical=tg < 0.0,
    )


def violation_thresholds() -> tuple[float, float]:
    """(g1 minimum, g2 maximum) for any Bell violation to be possible:
    (1/sqrt(2), (sqrt(2)-1)^2)."""
    return BELL_BOUND_C1, (math.sqrt(2.0) - 1.0) ** 2

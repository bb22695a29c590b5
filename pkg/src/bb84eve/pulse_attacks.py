"""Realistic attacks on pulsed sources: beam-splitter hybrids and photon-number splitting.

Three strategies adapt the single-photon attacks to Poissonian pulses on a
line the eavesdropper has replaced with a lossless one.  With a beam-splitter
of transmission ``t`` she keeps every pulse that puts at least one photon on
each arm (reading it perfectly after the basis announcement, error-free) and
attacks the pulses that reach the receiver intact with a single-photon
strategy of strength ``d``.  With photon-number-splitting she counts photons
nondestructively, steals one photon from every multi-photon pulse, blocks a
fraction ``kappa`` of the single-photon pulses to mimic the expected line
loss, and probes the rest.  Guess probabilities and the error rate the
legitimate parties observe have closed forms in ``(mu, t or kappa, d)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .single_photon import IR_MAX_GUESS_PROB, SQRT2, opt_guess_prob


@dataclass(frozen=True)
class InterceptResend:
    """Breidbart intercept-resend on a fraction ``eps`` of the pulses."""

    eps: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError(f"eps must be in [0, 1], got {self.eps!r}")


@dataclass(frozen=True)
class OptimalIncoherent:
    """Symmetric probe attack of strength ``d`` on every non-empty pulse."""

    d: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.d <= 0.5:
            raise ValueError(f"d must be in [0, 1/2], got {self.d!r}")


@dataclass(frozen=True)
class BsInterceptResend:
    """Beam-splitter tap plus intercept-resend on untapped pulses.

    ``d`` is the per-attacked-pulse disturbance; the intercept fraction on
    fully transmitted pulses is ``eps = 4 d``.
    """

    t: float
    d: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"t must be in [0, 1], got {self.t!r}")
        if not 0.0 <= self.d <= 0.25:
            raise ValueError(f"d must be in [0, 1/4], got {self.d!r}")


@dataclass(frozen=True)
class BsOptimal:
    """Beam-splitter tap plus probe attack of strength ``d`` on untapped pulses."""

    t: float
    d: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"t must be in [0, 1], got {self.t!r}")
        if not 0.0 <= self.d <= 0.5:
            raise ValueError(f"d must be in [0, 1/2], got {self.d!r}")


@dataclass(frozen=True)
class Pns:
    """Photon-number splitting with single-pulse blocking fraction ``kappa``.

    Multi-photon pulses lose one photon to a perfect tap; surviving
    single-photon pulses are probed at strength ``d``.
    """

    kappa: float
    d: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.kappa <= 1.0:
            raise ValueError(f"kappa must be in [0, 1], got {self.kappa!r}")
        if not 0.0 <= self.d <= 0.5:
            raise ValueError(f"d must be in [0, 1/2], got {self.d!r}")


AttackStrategy = (
    InterceptResend | OptimalIncoherent | BsInterceptResend | BsOptimal | Pns
)


@dataclass(frozen=True)
class AttackPrediction:
    """Closed-form per-sifted-bit performance of an attack.

    ``guess_prob`` is the eavesdropper's probability of holding the correct
    bit; ``d_ab`` is the error rate the legitimate parties observe.
    """

    guess_prob: float
    d_ab: float

    def __post_init__(self) -> None:
        # rounding slack: the closed forms can land an ulp outside the range
        if not 0.5 - 1e-12 <= self.guess_prob <= 1.0 + 1e-12:
            raise ValueError(f"guess_prob must be in [1/2, 1], got {self.guess_prob!r}")
        if not 0.0 <= self.d_ab <= 0.5:
            raise ValueError(f"d_ab must be in [0, 1/2], got {self.d_ab!r}")


def _check_mu_t_d(mu: float, t: float, d: float, d_max: float) -> None:
    if mu < 0.0:
        raise ValueError(f"mu must be >= 0, got {mu!r}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must be in [0, 1], got {t!r}")
    if not 0.0 <= d <= d_max:
        raise ValueError(f"d must be in [0, {d_max}], got {d!r}")


def bs_ir_predict(mu: float, t: float, d: float) -> AttackPrediction:
    """Beam-splitter plus intercept-resend performance.

    Guess probability ``(sqrt(2)+2)/4 - e^(-mu(1-t)) sqrt(2) (1/4 - d)`` and
    observed error rate ``d e^(-mu(1-t))``: tapped pulses are read perfectly,
    so the single-photon trade-off is diluted by the tap probability.
    """
    _check_mu_t_d(mu, t, d, 0.25)
    dilution = math.exp(-mu * (1.0 - t))
    guess = IR_MAX_GUESS_PROB - dilution * SQRT2 * (0.25 - d)
    return AttackPrediction(guess_prob=guess, d_ab=d * dilution)


def bs_opt_predict(mu: float, t: float, d: float) -> AttackPrediction:
    """Beam-splitter plus optimal probe attack performance.

    Guess probability ``1 - e^(-mu(1-t)) (1/2 - sqrt(d(1-d)))``; the observed
    error rate is diluted exactly as for the intercept-resend hybrid.
    """
    _check_mu_t_d(mu, t, d, 0.5)
    dilution = math.exp(-mu * (1.0 - t))
    guess = 1.0 - dilution * (0.5 - math.sqrt(d * (1.0 - d)))
    return AttackPrediction(guess_prob=guess, d_ab=d * dilution)


def pns_predict(mu: float, kappa: float, d: float) -> AttackPrediction:
    """Photon-number-splitting performance at blocking fraction ``kappa``.

    Multi-photon pulses yield the bit deterministically and without errors;
    unblocked single-photon pulses contribute the probe attack's guess
    probability and all of the observed disturbance.
    """
    if mu <= 0.0:
        raise ValueError(f"mu must be > 0 (no non-empty pulses otherwise), got {mu!r}")
    if not 0.0 <= kappa <= 1.0:
        raise ValueError(f"kappa must be in [0, 1], got {kappa!r}")
    if not 0.0 <= d <= 0.5:
        raise ValueError(f"d must be in [0, 1/2], got {d!r}")
    e_mu = math.exp(-mu)
    p_single_kept = (1.0 - kappa) * mu * e_mu
    p_multi = 1.0 - e_mu * (1.0 + mu)
    denom = 1.0 - e_mu * (1.0 + mu * kappa)
    guess = (p_multi + p_single_kept * opt_guess_prob(d)) / denom
    return AttackPrediction(guess_prob=guess, d_ab=p_single_kept * d / denom)


@dataclass(frozen=True)
class KappaCalibration:
    """Blocking fraction matching the receiver's expected non-empty rate.

    ``kappa`` is reported raw; ``break_possible`` flags ``kappa >= 1``, where
    blocking single-photon pulses alone already over-suppresses the count and
    the eavesdropper can take the whole key without causing any errors.
    """

    kappa: float
    break_possible: bool


def kappa_for_channel(mu: float, eta: float) -> KappaCalibration:
    """Blocking fraction ``(e^(mu(1-eta)) - 1)/mu`` that mimics a loss-``eta`` line."""
    if mu <= 0.0:
        raise ValueError(f"mu must be > 0, got {mu!r}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be in [0, 1], got {eta!r}")
    kappa = math.expm1(mu * (1.0 - eta)) / mu
    return KappaCalibration(kappa=kappa, break_possible=kappa >= 1.0)


def full_break_transmission(mu: float) -> float:
    """Channel transmission ``1 - ln(1+mu)/mu`` below which the break is total.

    At or below this value the calibrated blocking fraction reaches one and
    photon-number splitting yields the entire key with zero induced errors.
    """
    if mu <= 0.0:
        raise ValueError(f"mu must be > 0, got {mu!r}")
    return 1.0 - math.log1p(mu) / mu

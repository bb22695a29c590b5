"""Mutual-information bounds and tolerable error rates for one-way key distillation.

After sifting, the legitimate parties' data is a binary symmetric channel
with flip rate equal to the observed error rate, so their mutual information
is ``1 - H2(d_ab)`` bits.  The eavesdropper's information is the same
function of her guess probability.  One-way privacy amplification can distill
a secret key while the parties' information exceeds the eavesdropper's, which
for these channels reduces to the linear criterion ``d_ab < 1 - p_correct``.
Each attack therefore has a largest tolerable observed error rate, available
both in closed form and as the numerically located crossing of the two
information curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .pulse_attacks import full_break_transmission, kappa_for_channel
from .single_photon import SQRT2, opt_guess_prob

THRESHOLD_KINDS = ("ir", "opt", "bs_ir", "bs_opt", "pns")

_UNITS = ("bits", "nats")

_BISECT_LO = 1e-12
_BISECT_HI = 0.5 - 1e-12
_BISECT_ITERATIONS = 200


def _log(x: float, unit: str) -> float:
    return math.log2(x) if unit == "bits" else math.log(x)


def _check_unit(unit: str) -> None:
    if unit not in _UNITS:
        raise ValueError(f"unit must be one of {_UNITS}, got {unit!r}")


def phi(z: float, unit: str = "bits") -> float:
    """The symmetric information function ``(1-z)log(1-z) + (1+z)log(1+z)``.

    Defined on ``[-1, 1]`` with ``0 log 0 = 0`` by continuity.  Logs are base
    2 (``unit="bits"``, default) or natural (``unit="nats"``).
    """
    _check_unit(unit)
    if abs(z) > 1.0:
        raise ValueError(f"z must be in [-1, 1], got {z!r}")
    total = 0.0
    for w in (1.0 - z, 1.0 + z):
        if w > 0.0:
            total += w * _log(w, unit)
    return total


def i_ab(d: float, unit: str = "bits") -> float:
    """Mutual information of the sifted key at observed error rate ``d``.

    Binary-symmetric-channel value ``phi(1 - 2d)/2``, i.e. ``1 - H2(d)`` bits.
    """
    if not 0.0 <= d <= 0.5:
        raise ValueError(f"d must be in [0, 1/2], got {d!r}")
    return 0.5 * phi(1.0 - 2.0 * d, unit)


def i_eve(p_correct: float, unit: str = "bits") -> float:
    """Eavesdropper's information at bit-guessing probability ``p_correct``.

    Her effective flip rate is ``1 - p_correct``, giving ``phi(2 p - 1)/2``.
    """
    if not 0.5 <= p_correct <= 1.0:
        raise ValueError(f"p_correct must be in [1/2, 1], got {p_correct!r}")
    return 0.5 * phi(2.0 * p_correct - 1.0, unit)


def feasible(d_ab: float, p_correct: float) -> bool:
    """Whether one-way privacy amplification can still distill a secret key.

    Evaluates ``d_ab < 1 - p_correct``, which is equivalent to the information
    inequality ``i_ab(d_ab) > i_eve(p_correct)`` by monotonicity of ``phi``.
    """
    if not 0.0 <= d_ab <= 0.5:
        raise ValueError(f"d_ab must be in [0, 1/2], got {d_ab!r}")
    if not 0.5 <= p_correct <= 1.0:
        raise ValueError(f"p_correct must be in [1/2, 1], got {p_correct!r}")
    return d_ab < 1.0 - p_correct


@dataclass(frozen=True)
class InfoCurvePoint:
    """One point of the two information curves at observed error rate ``d_ab``."""

    d_ab: float
    i_ab_bits: float
    i_ae_bits: float

    def __post_init__(self) -> None:
        for value in (self.i_ab_bits, self.i_ae_bits):
            if not -1e-12 <= value <= 1.0 + 1e-12:
                raise ValueError(f"information must lie in [0, 1] bits, got {value!r}")

    @property
    def feasible(self) -> bool:
        """Whether one-way distillation still works at this point."""
        return self.i_ab_bits > self.i_ae_bits


def info_curve_point(
    kind: str, d_ab: float, mu: float | None = None, eta: float | None = None
) -> InfoCurvePoint:
    """Evaluate both information curves for ``kind`` at one error rate."""
    return InfoCurvePoint(
        d_ab=d_ab,
        i_ab_bits=i_ab(d_ab),
        i_ae_bits=i_eve(eve_accuracy_at(kind, d_ab, mu, eta)),
    )


@dataclass(frozen=True)
class ThresholdResult:
    """Largest tolerable observed error rate, with the total-break flag.

    ``break_possible`` is set only for photon-number splitting on lines lossy
    enough that the attack causes no errors at all; the threshold is then 0.
    """

    max_d_ab: float
    break_possible: bool = False


def _check_kind(kind: str) -> None:
    if kind not in THRESHOLD_KINDS:
        raise ValueError(f"kind must be one of {THRESHOLD_KINDS}, got {kind!r}")


def _check_mu_eta(kind: str, mu: float | None, eta: float | None) -> None:
    if kind in ("ir", "opt"):
        return
    if mu is None or eta is None:
        raise ValueError(f"kind {kind!r} requires mu and eta")
    if mu <= 0.0:
        raise ValueError(f"mu must be > 0, got {mu!r}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be in [0, 1], got {eta!r}")


def threshold(
    kind: str, mu: float | None = None, eta: float | None = None
) -> ThresholdResult:
    """Closed-form largest tolerable error rate against the given attack.

    Single-photon values: ``1/(2(1+sqrt(2)))`` for intercept-resend and
    ``(2-sqrt(2))/4`` for the optimal probe attack.  The pulsed variants
    shrink these by the tap dilution; photon-number splitting shrinks further
    and collapses to zero once the line is lossy enough for a total break.
    ``mu`` and ``eta`` are ignored for the single-photon kinds.
    """
    _check_kind(kind)
    _check_mu_eta(kind, mu, eta)
    if kind == "ir":
        return ThresholdResult(1.0 / (2.0 * (1.0 + SQRT2)))
    if kind == "opt":
        return ThresholdResult((2.0 - SQRT2) / 4.0)
    assert mu is not None and eta is not None
    if kind == "bs_ir":
        dilution = math.exp(-mu * (1.0 - eta))
        return ThresholdResult(
            (2.0 - SQRT2 * (1.0 - dilution)) / (4.0 * (1.0 + SQRT2))
        )
    if kind == "bs_opt":
        return ThresholdResult((2.0 - SQRT2) / 4.0 * math.exp(-mu * (1.0 - eta)))
    # pns
    bracket = (1.0 + mu) * math.exp(-mu) - math.exp(-eta * mu)
    if bracket <= 0.0:
        return ThresholdResult(0.0, break_possible=True)
    return ThresholdResult(
        (2.0 - SQRT2) / 4.0 * bracket / (1.0 - math.exp(-eta * mu))
    )


def eve_accuracy_at(
    kind: str, d_ab: float, mu: float | None = None, eta: float | None = None
) -> float:
    """Eavesdropper's guess probability as a function of the observed error rate.

    Inverts the disturbance dilution to recover the per-attacked-pulse
    strength implied by ``d_ab`` and evaluates the attack's closed form.  The
    curve is the analytic continuation beyond the attack's physical range
    (needed so the information crossing and the linear criterion coincide);
    the returned value is capped at 1.
    """
    _check_kind(kind)
    _check_mu_eta(kind, mu, eta)
    if not 0.0 <= d_ab <= 0.5:
        raise ValueError(f"d_ab must be in [0, 1/2], got {d_ab!r}")
    if kind == "ir":
        return min(1.0, SQRT2 * d_ab + 0.5)
    if kind == "opt":
        return opt_guess_prob(d_ab)
    assert mu is not None and eta is not None
    dilution = math.exp(-mu * (1.0 - eta))
    if kind == "bs_ir":
        d = d_ab / dilution
        guess = (SQRT2 + 2.0) / 4.0 - dilution * SQRT2 * (0.25 - d)
        return min(1.0, guess)
    if kind == "bs_opt":
        d = min(d_ab / dilution, 0.5)
        return 1.0 - dilution * (0.5 - math.sqrt(d * (1.0 - d)))
    # pns
    cal = kappa_for_channel(mu, eta)
    if cal.break_possible:
        return 1.0
    p_single_kept = (1.0 - cal.kappa) * mu * math.exp(-mu)
    denom = 1.0 - math.exp(-mu) * (1.0 + mu * cal.kappa)
    d = min(d_ab * denom / p_single_kept, 0.5)
    p_multi = 1.0 - math.exp(-mu) * (1.0 + mu)
    return min(1.0, (p_multi + p_single_kept * opt_guess_prob(d)) / denom)


def crossing_point(
    kind: str, mu: float | None = None, eta: float | None = None
) -> float:
    """Error rate where the parties' information meets the eavesdropper's.

    Bisects ``i_ab(d) = i_eve(eve_accuracy_at(kind, d))`` on
    ``(1e-12, 1/2 - 1e-12)``; both curves are monotone there.  Returns 0 in
    the photon-number-splitting total-break region, where the eavesdropper's
    curve sits at one bit for every error rate and there is no crossing.
    """
    _check_kind(kind)
    _check_mu_eta(kind, mu, eta)
    if kind == "pns":
        assert mu is not None and eta is not None
        if eta <= full_break_transmission(mu):
            return 0.0

    def gap(d: float) -> float:
        return i_ab(d) - i_eve(eve_accuracy_at(kind, d, mu, eta))

    lo, hi = _BISECT_LO, _BISECT_HI
    if gap(lo) <= 0.0:
        return 0.0
    for _ in range(_BISECT_ITERATIONS):
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)

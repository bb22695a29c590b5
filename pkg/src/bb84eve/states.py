"""Polarization states and projective measurement for four-state QKD.

Everything lives in a real two-dimensional polarization space spanned by
``|x> = (1, 0)`` and ``|y> = (0, 1)``.  The conjugate basis holds the
Hadamard images ``u = (x + y)/sqrt(2)`` and ``v = (x - y)/sqrt(2)``.
Logical bit values use the standard assignment x, v -> 0 and y, u -> 1.
Amplitudes are real throughout; photon number is modelled separately in
:mod:`bb84eve.pulse_optics`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

NORM_TOL = 1e-12

#: Measurement angle of the intermediate (Breidbart) basis, the maximizer of
#: the bit-guessing probability over all projective measurements.
BREIDBART_ANGLE = math.pi / 8

KET_X = np.array([1.0, 0.0])
KET_Y = np.array([0.0, 1.0])
KET_U = np.array([1.0, 1.0]) / math.sqrt(2.0)
KET_V = np.array([1.0, -1.0]) / math.sqrt(2.0)

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


class Basis(Enum):
    """The two encoding bases: XY (rectilinear) and UV (diagonal)."""

    XY = "XY"
    UV = "UV"


@dataclass(frozen=True)
class BB84Signal:
    """One signal as prepared by the sender: basis, logical bit, state vector."""

    basis: Basis
    bit: int
    state: np.ndarray


@dataclass(frozen=True)
class BreidbartBasis:
    """Orthonormal measurement basis rotated by ``theta`` from the XY basis.

    ``ket0 = (cos(theta), -sin(theta))`` is the outcome associated with logical
    bit 0 and ``ket1 = (sin(theta), cos(theta))`` with bit 1.
    """

    theta: float
    ket0: np.ndarray
    ket1: np.ndarray


# Bit-0 / bit-1 kets per basis, in the order (XY, UV).
_KETS_BIT0 = (KET_X, KET_V)
_KETS_BIT1 = (KET_Y, KET_U)


def _require_unit(vec: np.ndarray, name: str) -> None:
    if abs(float(vec @ vec) - 1.0) > NORM_TOL:
        raise ValueError(f"{name} must be a unit vector, got norm^2 = {float(vec @ vec)!r}")


def encode(bit: int, basis: Basis) -> BB84Signal:
    """Return the signal carrying ``bit`` in ``basis``.

    The state is ``|x>``/``|y>`` for bits 0/1 in the XY basis and
    ``|v>``/``|u>`` in the UV basis.
    """
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    if not isinstance(basis, Basis):
        raise ValueError(f"basis must be a Basis, got {basis!r}")
    idx = 0 if basis is Basis.XY else 1
    state = _KETS_BIT1[idx] if bit else _KETS_BIT0[idx]
    return BB84Signal(basis=basis, bit=bit, state=state)


def born_prob(state: np.ndarray, outcome: np.ndarray) -> float:
    """Probability ``<outcome|state>^2`` of projecting ``state`` onto ``outcome``.

    Both arguments must be unit vectors.
    """
    state = np.asarray(state, dtype=float)
    outcome = np.asarray(outcome, dtype=float)
    _require_unit(state, "state")
    _require_unit(outcome, "outcome")
    amp = float(outcome @ state)
    return min(amp * amp, 1.0)


def measure(
    state: np.ndarray,
    basis_states: tuple[np.ndarray, np.ndarray],
    rng: np.random.Generator,
) -> int:
    """Projective measurement of ``state`` in an orthonormal two-outcome basis.

    Returns 0 with probability ``born_prob(state, basis_states[0])`` and 1
    otherwise, consuming exactly one uniform draw from ``rng``.
    """
    b0 = np.asarray(basis_states[0], dtype=float)
    b1 = np.asarray(basis_states[1], dtype=float)
    _require_unit(b0, "basis_states[0]")
    _require_unit(b1, "basis_states[1]")
    if abs(float(b0 @ b1)) > NORM_TOL:
        raise ValueError("basis_states must be orthogonal")
    p0 = born_prob(state, b0)
    return 0 if rng.random() < p0 else 1


def breidbart_basis(theta: float = BREIDBART_ANGLE) -> BreidbartBasis:
    """Build the rotated measurement basis at angle ``theta``."""
    ket0 = np.array([math.cos(theta), -math.sin(theta)])
    ket1 = np.array([math.sin(theta), math.cos(theta)])
    return BreidbartBasis(theta=theta, ket0=ket0, ket1=ket1)


def breidbart_guess_prob(theta: float) -> float:
    """Probability of guessing the logical bit from one measurement at ``theta``.

    Closed form ``1/2 + (cos(2 theta) + sin(2 theta))/4``, averaged over the
    four equiprobable signals.  Maximized at ``theta = pi/8`` where it equals
    ``(2 + sqrt(2))/4``.
    """
    return 0.5 + 0.25 * (math.cos(2.0 * theta) + math.sin(2.0 * theta))

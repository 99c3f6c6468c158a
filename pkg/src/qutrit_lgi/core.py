"""Pure-state model of the photonic qutrit.

Basis |A>, |B>, |C> = e_0, e_1, e_2.  Evolution operators are products of
three real plane rotations; intermediate measurements are realised by
blocking optical modes, i.e. by projectors applied to the amplitude vector.
Post-measurement states are left sub-normalized so that branch weights read
off directly as squared norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

NORM_TOL = 1e-12


class InvalidInputError(ValueError):
    """Raised for non-finite angles, unphysical states or wrong table kinds."""


class Outcome(IntEnum):
    A = 0
    B = 1
    C = 2


class AmbiguousOutcome(IntEnum):
    """Outcome of a one-mode-blocked measurement, indexed by the blocked mode."""

    B_OR_C = 0
    A_OR_C = 1
    A_OR_B = 2

    @property
    def excluded(self) -> Outcome:
        return Outcome(int(self))

    @classmethod
    def excluding(cls, outcome: Outcome) -> "AmbiguousOutcome":
        return cls(int(outcome))

    @property
    def label(self) -> str:
        return "∪".join(o.name for o in Outcome if o != self.excluded)


@dataclass(frozen=True)
class QutritState:
    amp_a: complex
    amp_b: complex
    amp_c: complex

    def __post_init__(self):
        n2 = self.norm2
        if not math.isfinite(n2):
            raise InvalidInputError("state amplitudes must be finite")
        if n2 > 1 + NORM_TOL:
            raise InvalidInputError(f"squared norm {n2!r} exceeds 1")

    @classmethod
    def basis(cls, outcome: Outcome) -> "QutritState":
        amps = [0j, 0j, 0j]
        amps[int(outcome)] = 1 + 0j
        return cls(*amps)

    @classmethod
    def from_vector(cls, vec) -> "QutritState":
        vec = np.asarray(vec, dtype=complex).reshape(3)
        return cls(complex(vec[0]), complex(vec[1]), complex(vec[2]))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.amp_a, self.amp_b, self.amp_c], dtype=complex)

    @property
    def norm2(self) -> float:
        return abs(self.amp_a) ** 2 + abs(self.amp_b) ** 2 + abs(self.amp_c) ** 2

    def allclose(self, other: "QutritState", atol: float = NORM_TOL) -> bool:
        return bool(np.allclose(self.vector, other.vector, rtol=0.0, atol=atol))


@dataclass(frozen=True)
class EulerAngles:
    """Angles (radians) of U = R23(theta) R13(chi) R12(phi)."""

    theta: float
    chi: float
    phi: float

    def __post_init__(self):
        for name in ("theta", "chi", "phi"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"{name} must be finite")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.theta, self.chi, self.phi)


# mode pairs spanned by each rotation axis
_AXES = {23: (1, 2), 13: (0, 2), 12: (0, 1)}


def elementary_rotation(axis: int, angle: float) -> np.ndarray:
    """Plane rotation in the (i, j) mode pair: +sin above, -sin below the diagonal."""
    if axis not in _AXES:
        raise InvalidInputError(f"axis must be one of {sorted(_AXES)}, got {axis!r}")
    if not math.isfinite(angle):
        raise InvalidInputError("rotation angle must be finite")
    i, j = _AXES[axis]
    c, s = math.cos(angle), math.sin(angle)
    r = np.eye(3, dtype=complex)
    r[i, i] = c
    r[j, j] = c
    r[i, j] = s
    r[j, i] = -s
    return r


def build_unitary(angles: EulerAngles) -> np.ndarray:
    return (
        elementary_rotation(23, angles.theta)
        @ elementary_rotation(13, angles.chi)
        @ elementary_rotation(12, angles.phi)
    )


def evolve(state: QutritState, u: np.ndarray) -> QutritState:
    return QutritState.from_vector(np.asarray(u) @ state.vector)


def born_probs(state: QutritState) -> np.ndarray:
    """Detection probabilities for A, B, C; sub-normalized inputs stay sub-normalized."""
    return np.abs(state.vector) ** 2


def project(state: QutritState, keep: Outcome) -> tuple[float, QutritState]:
    """Pass only mode `keep` (two modes blocked)."""
    vec = np.zeros(3, dtype=complex)
    vec[int(keep)] = state.vector[int(keep)]
    return float(abs(vec[int(keep)]) ** 2), QutritState.from_vector(vec)


def block(state: QutritState, excluded: Outcome) -> tuple[float, QutritState]:
    """Block mode `excluded`; the two surviving amplitudes keep their coherence."""
    vec = state.vector.copy()
    vec[int(excluded)] = 0
    return float(np.sum(np.abs(vec) ** 2)), QutritState.from_vector(vec)


def is_unitary(u: np.ndarray, atol: float = NORM_TOL) -> bool:
    u = np.asarray(u)
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(3))) < atol)

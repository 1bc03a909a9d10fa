"""Closed-form dynamics for the two initial-state families.

Family "psi" starts from (cos(a)|10> + sin(a)|01>)|00>: one shared atomic
excitation.  Family "phi" starts from (cos(a)|11> + sin(a)|00>)|00>: zero or
two excitations.  Everything downstream is parametrized by the mixing angle
alpha in [0, pi/2] and by the dimensionless phase gt.

The closed forms here are the object under test; the independent check lives
in `entanglement` (Wootters concurrence of numerically evolved states).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .hilbert import SpaceConfig, basis_index

__all__ = [
    "PAIR_NAMES",
    "ALPHA_SPECIAL",
    "ALPHA_DEATH_BIRTH",
    "PsiCoefficients",
    "PhiCoefficients",
    "ConcurrenceSextet",
    "Predictability",
    "Trace",
    "initial_concurrence",
    "psi_state",
    "phi_state",
    "psi_concurrence_arrays",
    "phi_concurrence_arrays",
    "psi_concurrences",
    "phi_concurrences",
    "raw_pair_value",
    "predictability",
]

# Canonical ordering of the six qubit pairs.
PAIR_NAMES = ("AB", "ab", "Aa", "Bb", "Ab", "aB")

# Angle where atom-atom death coincides with cavity-cavity birth (phi family).
ALPHA_DEATH_BIRTH = math.atan(0.5)

# Angles where the case analysis of the conic parameters branches.
ALPHA_SPECIAL = (0.0, math.atan(1.0 / 3.0), ALPHA_DEATH_BIRTH, math.pi / 4, math.pi / 2)

_HALF_PI = math.pi / 2


def _check_alpha(alpha: float):
    if not -1e-12 <= alpha <= _HALF_PI + 1e-12:
        raise ValueError(f"alpha must lie in [0, pi/2], got {alpha}")


def initial_concurrence(alpha: float) -> float:
    """Atom-atom concurrence at t=0, written C0 = |sin 2a| in the diagrams."""
    _check_alpha(alpha)
    return abs(math.sin(2.0 * alpha))


@dataclass(frozen=True)
class PsiCoefficients:
    """Amplitudes of |10>|00>, |01>|00>, |00>|10>, |00>|01> for the psi family."""

    x1: complex
    x2: complex
    x3: complex
    x4: complex

    @classmethod
    def at(cls, alpha: float, gt: float) -> "PsiCoefficients":
        _check_alpha(alpha)
        ca, sa = math.cos(alpha), math.sin(alpha)
        cg, sg = math.cos(gt), math.sin(gt)
        return cls(x1=ca * cg, x2=sa * cg, x3=-1j * ca * sg, x4=-1j * sa * sg)

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3, self.x4], dtype=complex)

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.as_array()) ** 2))


@dataclass(frozen=True)
class PhiCoefficients:
    """Amplitudes of |11>|00>, |00>|00>, |10>|01>, |01>|10>, |00>|11>.

    y3 and y4 share one closed form, so they are equal by construction.
    """

    y1: complex
    y2: complex
    y3: complex
    y4: complex
    y5: complex

    @classmethod
    def at(cls, alpha: float, gt: float, omega_t: float = 0.0) -> "PhiCoefficients":
        _check_alpha(alpha)
        ca, sa = math.cos(alpha), math.sin(alpha)
        cg, sg = math.cos(gt), math.sin(gt)
        phase = cmath.exp(-1j * omega_t)
        y34 = -1j * phase * ca * sg * cg
        return cls(
            y1=phase * ca * cg * cg,
            y2=phase.conjugate() * sa,
            y3=y34,
            y4=y34,
            y5=-phase * ca * sg * sg,
        )

    def as_array(self) -> np.ndarray:
        return np.array([self.y1, self.y2, self.y3, self.y4, self.y5], dtype=complex)

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.as_array()) ** 2))


def psi_state(alpha: float, gt: float, cfg: SpaceConfig | None = None) -> np.ndarray:
    """Closed-form psi-family state embedded in the composite space."""
    cfg = cfg or SpaceConfig()
    c = PsiCoefficients.at(alpha, gt)
    ket = np.zeros(cfg.dim, dtype=complex)
    ket[basis_index(cfg, 1, 0, 0, 0)] = c.x1
    ket[basis_index(cfg, 0, 1, 0, 0)] = c.x2
    ket[basis_index(cfg, 0, 0, 1, 0)] = c.x3
    ket[basis_index(cfg, 0, 0, 0, 1)] = c.x4
    return ket


def phi_state(alpha: float, gt: float, omega_t: float = 0.0,
              cfg: SpaceConfig | None = None) -> np.ndarray:
    """Closed-form phi-family state embedded in the composite space."""
    cfg = cfg or SpaceConfig()
    c = PhiCoefficients.at(alpha, gt, omega_t)
    ket = np.zeros(cfg.dim, dtype=complex)
    ket[basis_index(cfg, 1, 1, 0, 0)] = c.y1
    ket[basis_index(cfg, 0, 0, 0, 0)] = c.y2
    ket[basis_index(cfg, 1, 0, 0, 1)] = c.y3
    ket[basis_index(cfg, 0, 1, 1, 0)] = c.y4
    ket[basis_index(cfg, 0, 0, 1, 1)] = c.y5
    return ket


@dataclass(frozen=True)
class ConcurrenceSextet:
    """The six pairwise concurrences at one (alpha, gt) point."""

    c_AB: float
    c_ab: float
    c_Aa: float
    c_Bb: float
    c_Ab: float
    c_aB: float
    alpha: float
    gt: float
    family: str

    def values(self) -> tuple[float, ...]:
        return (self.c_AB, self.c_ab, self.c_Aa, self.c_Bb, self.c_Ab, self.c_aB)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(PAIR_NAMES, self.values()))

    def sum_of_squares(self) -> float:
        return float(sum(v * v for v in self.values()))


@dataclass(frozen=True)
class Predictability:
    """Initial population imbalance |<sz_A>|; sign is + below pi/4, - at or above."""

    p0: float
    sign: int
    family: str

    @property
    def signed(self) -> float:
        return self.sign * self.p0


def predictability(family: str, alpha: float) -> Predictability:
    _check_alpha(alpha)
    if family not in ("psi", "phi"):
        raise ValueError(f"unknown family {family!r}")
    p0 = abs(math.cos(2.0 * alpha))
    sign = 1 if alpha < math.pi / 4 else -1
    return Predictability(p0=p0, sign=sign, family=family)


def psi_concurrence_arrays(alpha: float, gt) -> dict[str, np.ndarray]:
    """Six closed-form psi-family concurrences, vectorized over gt."""
    _check_alpha(alpha)
    gt = np.asarray(gt, dtype=float)
    c0 = abs(math.sin(2.0 * alpha))
    ca2 = math.cos(alpha) ** 2
    sa2 = math.sin(alpha) ** 2
    cos2 = np.cos(gt) ** 2
    sin2 = np.sin(gt) ** 2
    s2g = np.abs(np.sin(2.0 * gt))
    cross = 0.5 * c0 * s2g
    return {
        "AB": c0 * cos2,
        "ab": c0 * sin2,
        "Aa": ca2 * s2g,
        "Bb": sa2 * s2g,
        "Ab": cross,
        "aB": cross,
    }


def phi_concurrence_arrays(alpha: float, gt, clamp: bool = True) -> dict[str, np.ndarray]:
    """Six phi-family concurrences, vectorized over gt.

    With clamp=False the max[0, .] is left off, exposing the signed expressions
    whose zero crossings mark sudden death and birth.  Aa and Bb carry no
    clamp either way.
    """
    _check_alpha(alpha)
    gt = np.asarray(gt, dtype=float)
    c0 = abs(math.sin(2.0 * alpha))
    ca2 = math.cos(alpha) ** 2
    s2g = np.abs(np.sin(2.0 * gt))
    gamma = 0.5 * ca2 * s2g**2
    ab_pair = ca2 * s2g
    raw = {
        "AB": c0 * np.cos(gt) ** 2 - gamma,
        "ab": c0 * np.sin(gt) ** 2 - gamma,
        "Aa": ab_pair,
        "Bb": ab_pair,
        "Ab": 0.5 * c0 * s2g - gamma,
        "aB": 0.5 * c0 * s2g - gamma,
    }
    if not clamp:
        return raw
    return {name: np.maximum(0.0, v) for name, v in raw.items()}


def raw_pair_value(family: str, pair: str, alpha: float, gt):
    """Pre-clamp concurrence expression for one pair; used for root bracketing."""
    if pair not in PAIR_NAMES:
        raise ValueError(f"unknown pair {pair!r}")
    if family == "psi":
        return psi_concurrence_arrays(alpha, gt)[pair]
    if family == "phi":
        return phi_concurrence_arrays(alpha, gt, clamp=False)[pair]
    raise ValueError(f"unknown family {family!r}")


def _sextet_from_arrays(values: dict[str, np.ndarray], alpha: float, gt: float,
                        family: str) -> ConcurrenceSextet:
    return ConcurrenceSextet(
        c_AB=float(values["AB"]),
        c_ab=float(values["ab"]),
        c_Aa=float(values["Aa"]),
        c_Bb=float(values["Bb"]),
        c_Ab=float(values["Ab"]),
        c_aB=float(values["aB"]),
        alpha=alpha,
        gt=float(gt),
        family=family,
    )


def psi_concurrences(alpha: float, gt: float) -> ConcurrenceSextet:
    return _sextet_from_arrays(psi_concurrence_arrays(alpha, gt), alpha, gt, "psi")


def phi_concurrences(alpha: float, gt: float) -> ConcurrenceSextet:
    return _sextet_from_arrays(phi_concurrence_arrays(alpha, gt), alpha, gt, "phi")


@dataclass(frozen=True, eq=False)
class Trace:
    """Closed-form concurrences of one family along a gt grid.

    ``values`` are the physical (clamped) concurrences; ``raw`` keeps the
    pre-clamp expressions so geometric relations can be evaluated only where
    no clamp is active.  For the psi family the two coincide.
    """

    family: str
    alpha: float
    gt: np.ndarray
    values: dict[str, np.ndarray]
    raw: dict[str, np.ndarray]

    @classmethod
    def generate(cls, family: str, alpha: float, gt) -> "Trace":
        gt = np.atleast_1d(np.asarray(gt, dtype=float))
        if family == "psi":
            values = psi_concurrence_arrays(alpha, gt)
            raw = values
        elif family == "phi":
            values = phi_concurrence_arrays(alpha, gt, clamp=True)
            raw = phi_concurrence_arrays(alpha, gt, clamp=False)
        else:
            raise ValueError(f"unknown family {family!r}")
        return cls(family=family, alpha=alpha, gt=gt, values=values, raw=raw)

    def __len__(self) -> int:
        return len(self.gt)

    def sextet(self, i: int) -> ConcurrenceSextet:
        return _sextet_from_arrays(
            {name: self.values[name][i] for name in PAIR_NAMES},
            self.alpha, self.gt[i], self.family,
        )

    def sum_of_squares(self) -> np.ndarray:
        return sum(self.values[name] ** 2 for name in PAIR_NAMES)

    @property
    def initial_concurrence(self) -> float:
        return initial_concurrence(self.alpha)

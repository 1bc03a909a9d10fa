"""Geometric structure of the concurrence dynamics.

Every claim about the shape traced in a concurrence-vs-concurrence diagram is
made checkable here:

* relation residuals: implicit conic equations evaluated along a trajectory
  (max |residual|), with phi-family relations masked to the region where no
  max[0, .] clamp is active;
* conic descriptors: eccentricity / foci / vertices / slopes both from the
  predictability formulas and, independently, extracted from the implicit
  equations by generic conic analysis, so the two routes can be compared;
* hypersphere-shell bounds on the sum of the six squared concurrences;
* sudden-death / rebirth interval detection with bisection refinement on the
  pre-clamp expressions;
* 3-D entanglement-surface sampling for a chosen qubit, plus the projection
  checks tying the surface back to the 2-D diagrams.

Angles at 0 or pi/2 make several denominators vanish; affected relations are
reported as degenerate rather than evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .analytic import PAIR_NAMES, Trace

__all__ = [
    "RelationCheck",
    "ConicDescriptor",
    "ShellBounds",
    "ShellViolationError",
    "DeathReport",
    "SuddenDeathWindow",
    "PSI_RELATIONS",
    "PHI_RELATIONS",
    "QUBIT_TRIPLES",
    "psi_relation_residuals",
    "phi_relation_residuals",
    "relation_residuals",
    "analyze_conic",
    "psi_conic_parameters",
    "phi_conic_parameters",
    "shell_bounds",
    "detect_death_birth",
    "sudden_death_window",
    "death_window_formula",
    "find_death_birth_coincidence",
    "surface_sample",
    "projection_residuals",
    "limiting_circle_residual",
]

ALPHA_0 = analytic.ALPHA_DEATH_BIRTH  # arctan(1/2)

# Default residual tolerances per relation.  Linear identities hold to
# rounding; the quadratic ones get the two extra digits of headroom.
PSI_RELATIONS = {
    "sum_line": 1e-12,
    "cross_symmetry": 1e-12,
    "ratio_line": 1e-12,
    "ellipse_atoms_bb": 1e-10,
    "ellipse_atoms_aa": 1e-10,
    "circle_cross": 1e-10,
    "slope_line_aa": 1e-10,
    "slope_line_bb": 1e-10,
}
PHI_RELATIONS = {
    "parabola_atoms": 1e-10,
    "ellipse_difference": 1e-10,
    "parabola_sum": 1e-10,
    "parabola_cross": 1e-10,
}

# Mask rule: a clamped concurrence participates in a relation point only if
# its pre-clamp value exceeds this.
CLAMP_MASK_TOL = 1e-9

# Denominator magnitude below which a relation is reported degenerate.
_DEGENERATE = 1e-12

# Piecewise conic formulas are snapped to their exact branch-point limits when
# alpha sits within this window of the branch point: the focus formulas behave
# like sqrt(|alpha - alpha_branch|) there, so a 1-ulp angle error otherwise
# inflates a zero focus to ~1e-8.
BRANCH_SNAP_TOL = 1e-12


@dataclass(frozen=True)
class RelationCheck:
    """Outcome of one implicit-relation residual check along a trajectory."""

    relation: str
    family: str
    alpha: float
    max_residual: float  # nan when no point was evaluable
    n_points: int
    n_total: int
    tolerance: float
    status: str  # "pass" | "fail" | "degenerate" | "vacuous"

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "degenerate", "vacuous")


def _check(relation, family, alpha, residuals, mask, tol) -> RelationCheck:
    n_total = int(mask.size)
    n_points = int(np.count_nonzero(mask))
    if n_points == 0:
        return RelationCheck(relation, family, alpha, float("nan"),
                             0, n_total, tol, "vacuous")
    r = float(np.max(np.abs(residuals[mask])))
    return RelationCheck(relation, family, alpha, r, n_points, n_total, tol,
                         "pass" if r <= tol else "fail")


def _degenerate(relation, family, alpha, n_total, tol) -> RelationCheck:
    return RelationCheck(relation, family, alpha, float("nan"),
                         0, n_total, tol, "degenerate")


def psi_relation_residuals(trace: Trace, tolerances: dict | None = None) -> list[RelationCheck]:
    """Residuals of the eight straight-line / ellipse / circle relations.

    The trajectory must come from the psi family at fixed alpha.  Relations
    whose denominators vanish at alpha in {0, pi/2} are reported degenerate.
    """
    if trace.family != "psi":
        raise ValueError("psi_relation_residuals expects a psi-family trace")
    tols = dict(PSI_RELATIONS)
    if tolerances:
        tols.update(tolerances)
    alpha = trace.alpha
    c = trace.values
    c0 = trace.initial_concurrence
    sa2 = math.sin(alpha) ** 2
    ca2 = math.cos(alpha) ** 2
    n = len(trace)
    full = np.ones(n, dtype=bool)
    out = []

    out.append(_check("sum_line", "psi", alpha,
                      c["AB"] + c["ab"] - c0, full, tols["sum_line"]))
    out.append(_check("cross_symmetry", "psi", alpha,
                      c["Ab"] - c["aB"], full, tols["cross_symmetry"]))
    out.append(_check("ratio_line", "psi", alpha,
                      c["Aa"] * sa2 - c["Bb"] * ca2, full, tols["ratio_line"]))

    # (x - C0/2)^2 / (C0^2/4) + y^2 / sin^4 = 1, x in {AB, ab}
    if c0 ** 2 / 4 < _DEGENERATE or sa2 ** 2 < _DEGENERATE:
        out.append(_degenerate("ellipse_atoms_bb", "psi", alpha, n, tols["ellipse_atoms_bb"]))
    else:
        res = [
            (x - c0 / 2) ** 2 / (c0 ** 2 / 4) + c["Bb"] ** 2 / sa2 ** 2 - 1.0
            for x in (c["AB"], c["ab"])
        ]
        out.append(_check("ellipse_atoms_bb", "psi", alpha,
                          np.max(np.abs(res), axis=0), full, tols["ellipse_atoms_bb"]))

    if c0 ** 2 / 4 < _DEGENERATE or ca2 ** 2 < _DEGENERATE:
        out.append(_degenerate("ellipse_atoms_aa", "psi", alpha, n, tols["ellipse_atoms_aa"]))
    else:
        res = [
            (x - c0 / 2) ** 2 / (c0 ** 2 / 4) + c["Aa"] ** 2 / ca2 ** 2 - 1.0
            for x in (c["AB"], c["ab"])
        ]
        out.append(_check("ellipse_atoms_aa", "psi", alpha,
                          np.max(np.abs(res), axis=0), full, tols["ellipse_atoms_aa"]))

    # (x - C0/2)^2 + y^2 = C0^2/4 holds for every x in {AB, ab}, y in {aB, Ab}.
    res = [
        (x - c0 / 2) ** 2 + y ** 2 - c0 ** 2 / 4
        for x in (c["AB"], c["ab"]) for y in (c["aB"], c["Ab"])
    ]
    out.append(_check("circle_cross", "psi", alpha,
                      np.max(np.abs(res), axis=0), full, tols["circle_cross"]))

    # y = (C0 / 2cos^2) * C_Aa with y in {aB, Ab}, and the sin^2 twin.
    if ca2 < _DEGENERATE:
        out.append(_degenerate("slope_line_aa", "psi", alpha, n, tols["slope_line_aa"]))
    else:
        m = c0 / (2 * ca2)
        res = [y - m * c["Aa"] for y in (c["aB"], c["Ab"])]
        out.append(_check("slope_line_aa", "psi", alpha,
                          np.max(np.abs(res), axis=0), full, tols["slope_line_aa"]))
    if sa2 < _DEGENERATE:
        out.append(_degenerate("slope_line_bb", "psi", alpha, n, tols["slope_line_bb"]))
    else:
        m = c0 / (2 * sa2)
        res = [y - m * c["Bb"] for y in (c["Ab"], c["aB"])]
        out.append(_check("slope_line_bb", "psi", alpha,
                          np.max(np.abs(res), axis=0), full, tols["slope_line_bb"]))
    return out


def phi_relation_residuals(trace: Trace, tolerances: dict | None = None,
                           mask_tol: float = CLAMP_MASK_TOL) -> list[RelationCheck]:
    """Masked residuals of the four phi-family relations.

    A point enters a relation only if every clamped concurrence appearing in
    it has pre-clamp value > mask_tol; the relations are derived assuming the
    clamps are inactive.  An empty mask yields a vacuous check, which happens
    for the atom/cavity relations whenever alpha < arctan(1/2) (the AB and ab
    concurrences are then never simultaneously positive).
    """
    if trace.family != "phi":
        raise ValueError("phi_relation_residuals expects a phi-family trace")
    tols = dict(PHI_RELATIONS)
    if tolerances:
        tols.update(tolerances)
    alpha = trace.alpha
    c = trace.values
    raw = trace.raw
    c0 = trace.initial_concurrence
    ca2 = math.cos(alpha) ** 2
    n = len(trace)
    out = []

    both_atoms = (raw["AB"] > mask_tol) & (raw["ab"] > mask_tol)

    if c0 ** 2 < _DEGENERATE or ca2 < _DEGENERATE:
        out.append(_degenerate("parabola_atoms", "phi", alpha, n, tols["parabola_atoms"]))
    else:
        res = ((c["AB"] - c["ab"]) ** 2 / c0 ** 2
               + (c0 - (c["AB"] + c["ab"])) / ca2 - 1.0)
        out.append(_check("parabola_atoms", "phi", alpha, res, both_atoms,
                          tols["parabola_atoms"]))

    if c0 ** 2 < _DEGENERATE or ca2 ** 2 < _DEGENERATE:
        out.append(_degenerate("ellipse_difference", "phi", alpha, n, tols["ellipse_difference"]))
    else:
        res = [
            (c["AB"] - c["ab"]) ** 2 / c0 ** 2 + y ** 2 / ca2 ** 2 - 1.0
            for y in (c["Aa"], c["Bb"])
        ]
        out.append(_check("ellipse_difference", "phi", alpha,
                          np.max(np.abs(res), axis=0), both_atoms,
                          tols["ellipse_difference"]))

    if ca2 < _DEGENERATE:
        out.append(_degenerate("parabola_sum", "phi", alpha, n, tols["parabola_sum"]))
        out.append(_degenerate("parabola_cross", "phi", alpha, n, tols["parabola_cross"]))
        return out

    res = [
        (c["AB"] + c["ab"]) - c0 + y ** 2 / ca2
        for y in (c["Aa"], c["Bb"])
    ]
    out.append(_check("parabola_sum", "phi", alpha,
                      np.max(np.abs(res), axis=0), both_atoms, tols["parabola_sum"]))

    # C_Ab + (C_Aa - C0/2)^2 / (2cos^2) = C0^2 / (8cos^2); only the cross
    # concurrence carries a clamp here.
    res_ab = c["Ab"] + (c["Aa"] - c0 / 2) ** 2 / (2 * ca2) - c0 ** 2 / (8 * ca2)
    res_ba = c["aB"] + (c["Bb"] - c0 / 2) ** 2 / (2 * ca2) - c0 ** 2 / (8 * ca2)
    mask_ab = raw["Ab"] > mask_tol
    mask_ba = raw["aB"] > mask_tol
    residual = np.where(mask_ab, np.abs(res_ab), 0.0)
    residual = np.maximum(residual, np.where(mask_ba, np.abs(res_ba), 0.0))
    out.append(_check("parabola_cross", "phi", alpha, residual,
                      mask_ab | mask_ba, tols["parabola_cross"]))
    return out


def relation_residuals(trace: Trace, **kwargs) -> list[RelationCheck]:
    if trace.family == "psi":
        return psi_relation_residuals(trace, **kwargs)
    return phi_relation_residuals(trace, **kwargs)


# --------------------------------------------------------------------------
# Conic descriptors: printed parameter formulas vs generic extraction
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ConicDescriptor:
    """One diagram's conic with parameters from both evaluation routes.

    coefficients holds the implicit form A x^2 + B xy + C y^2 + D x + E y + F
    in the plane named by ``plane``.  ``printed`` carries the closed
    predictability-based parameter values, ``extracted`` the values recovered
    from the coefficients by generic conic analysis.
    """

    name: str
    kind: str
    plane: tuple[str, str]
    coefficients: tuple[float, float, float, float, float, float]
    printed: dict = field(default_factory=dict)
    extracted: dict = field(default_factory=dict)

    def discrepancies(self) -> dict[str, float]:
        """Absolute printed-vs-extracted differences on shared keys."""
        out = {}
        for key, pv in self.printed.items():
            ev = self.extracted.get(key)
            if ev is None:
                continue
            if isinstance(pv, (tuple, list)):
                out[key] = float(max(abs(p - e) for p, e in zip(pv, ev)))
            else:
                out[key] = float(abs(pv - ev))
        return out


def _ellipse_coeffs(h: float, a: float, b: float) -> tuple[float, ...]:
    """(x-h)^2/a^2 + y^2/b^2 - 1 = 0 as implicit coefficients."""
    return (1.0 / a**2, 0.0, 1.0 / b**2, -2.0 * h / a**2, 0.0, h**2 / a**2 - 1.0)


def analyze_conic(coeffs, circle_tol: float = 1e-12) -> dict:
    """Classify an implicit conic and extract its geometric parameters.

    Returns a dict with "kind" plus, depending on the kind: slope/intercept
    (line), center/radius (circle), center/semi-axes/major_axis/eccentricity/
    focal_distance/foci (ellipse), vertex/focus/focal_distance/axis
    (parabola).  Nearly equal ellipse axes (relative difference below
    circle_tol) are classified as a circle.
    """
    a, b, c, d, e, f = (float(v) for v in coeffs)
    quad = np.array([[a, b / 2.0], [b / 2.0, c]])
    lam, vecs = np.linalg.eigh(quad)
    scale = max(abs(v) for v in (a, b, c, d, e, f))
    if scale == 0.0:
        raise ValueError("all conic coefficients are zero")
    lam_mag = np.abs(lam)

    if lam_mag.max() <= circle_tol * scale:
        # Linear: D x + E y + F = 0.
        if abs(e) < _DEGENERATE and abs(d) < _DEGENERATE:
            raise ValueError("degenerate conic: no quadratic or linear part")
        out = {"kind": "line"}
        if abs(e) >= _DEGENERATE:
            out["slope"] = -d / e
            out["intercept"] = -f / e
        else:
            out["slope"] = math.inf
            out["x_intercept"] = -f / d
        return out

    if lam_mag.min() <= circle_tol * lam_mag.max():
        # Parabola: one vanishing quadratic eigenvalue.
        i_axis = int(np.argmin(lam_mag))
        i_curv = 1 - i_axis
        u = vecs[:, i_axis]  # symmetry-axis direction
        v = vecs[:, i_curv]  # curved direction
        lam1 = lam[i_curv]
        dv = d * v[0] + e * v[1]
        du = d * u[0] + e * u[1]
        if abs(du) < _DEGENERATE:
            raise ValueError("degenerate parabola: no linear term along the axis")
        s_v = -dv / (2.0 * lam1)
        w_v = -(f - dv**2 / (4.0 * lam1)) / du
        vertex = s_v * v + w_v * u
        q = -du / (4.0 * lam1)  # signed focal parameter along +u
        focus = vertex + q * u
        axis = u if q >= 0 else -u
        return {
            "kind": "parabola",
            "vertex": (float(vertex[0]), float(vertex[1])),
            "focus": (float(focus[0]), float(focus[1])),
            "focal_distance": abs(q),
            "axis": (float(axis[0]), float(axis[1])),
        }

    if lam[0] * lam[1] < 0:
        return {"kind": "hyperbola"}

    center = np.linalg.solve(2.0 * quad, -np.array([d, e]))
    f_c = f + 0.5 * (d * center[0] + e * center[1])
    if -f_c / lam[0] <= 0 or -f_c / lam[1] <= 0:
        raise ValueError("implicit equation has no real ellipse points")
    semi = np.sqrt(-f_c / lam)  # paired with vecs columns
    order = np.argsort(semi)[::-1]
    major, minor = float(semi[order[0]]), float(semi[order[1]])
    major_dir = vecs[:, order[0]]
    if major_dir[0] < 0 or (major_dir[0] == 0 and major_dir[1] < 0):
        major_dir = -major_dir
    out = {
        "center": (float(center[0]), float(center[1])),
        "semi_axes": (major, minor),
    }
    if major - minor <= circle_tol * major:
        out.update(kind="circle", radius=major, eccentricity=0.0, focal_distance=0.0)
        return out
    focal = math.sqrt(major**2 - minor**2)
    foci = (
        (float(center[0] + focal * major_dir[0]), float(center[1] + focal * major_dir[1])),
        (float(center[0] - focal * major_dir[0]), float(center[1] - focal * major_dir[1])),
    )
    out.update(
        kind="ellipse",
        eccentricity=focal / major,
        focal_distance=focal,
        major_axis=(float(major_dir[0]), float(major_dir[1])),
        foci=foci,
    )
    return out


def _snapped_p0(alpha: float) -> float:
    """|cos 2a| with exact values at branch points within BRANCH_SNAP_TOL."""
    if abs(alpha - ALPHA_0) <= BRANCH_SNAP_TOL:
        return 0.6
    if abs(alpha - math.pi / 4) <= BRANCH_SNAP_TOL:
        return 0.0
    return abs(math.cos(2.0 * alpha))


def _check_interior(alpha: float):
    if not 0.0 < alpha < math.pi / 2:
        raise ValueError(f"conic parameters need alpha strictly inside (0, pi/2), got {alpha}")


def psi_conic_parameters(alpha: float) -> list[ConicDescriptor]:
    """Descriptors of the five psi-family diagram conics at one angle."""
    _check_interior(alpha)
    p0 = _snapped_p0(alpha)
    c0 = analytic.initial_concurrence(alpha)
    sa2 = math.sin(alpha) ** 2
    ca2 = math.cos(alpha) ** 2
    below = alpha <= math.pi / 4
    ecc = math.sqrt(2.0 * p0 / (1.0 + p0))
    f_minus = math.sqrt(p0 * (1.0 - p0) / 2.0)
    f_plus = math.sqrt(p0 * (1.0 + p0) / 2.0)

    out = []
    coeffs = _ellipse_coeffs(c0 / 2.0, c0 / 2.0, sa2)
    out.append(ConicDescriptor(
        name="ellipse_atoms_bb",
        kind="circle" if p0 == 0.0 else "ellipse",
        plane=("C_AB(ab)", "C_Bb"),
        coefficients=coeffs,
        printed={"eccentricity": ecc, "focal_distance": f_minus if below else f_plus,
                 "center": (c0 / 2.0, 0.0)},
        extracted=analyze_conic(coeffs),
    ))
    coeffs = _ellipse_coeffs(c0 / 2.0, c0 / 2.0, ca2)
    out.append(ConicDescriptor(
        name="ellipse_atoms_aa",
        kind="circle" if p0 == 0.0 else "ellipse",
        plane=("C_AB(ab)", "C_Aa"),
        coefficients=coeffs,
        printed={"eccentricity": ecc, "focal_distance": f_plus if below else f_minus,
                 "center": (c0 / 2.0, 0.0)},
        extracted=analyze_conic(coeffs),
    ))
    coeffs = (1.0, 0.0, 1.0, -c0, 0.0, 0.0)
    out.append(ConicDescriptor(
        name="circle_cross",
        kind="circle",
        plane=("C_AB(ab)", "C_aB(Ab)"),
        coefficients=coeffs,
        printed={"radius": c0 / 2.0, "eccentricity": 0.0, "focal_distance": 0.0,
                 "center": (c0 / 2.0, 0.0)},
        extracted=analyze_conic(coeffs),
    ))
    ratio = (1.0 - p0) / (1.0 + p0)
    coeffs = (0.0, 0.0, 0.0, c0 / (2.0 * ca2), -1.0, 0.0)
    out.append(ConicDescriptor(
        name="slope_line_aa",
        kind="line",
        plane=("C_Aa", "C_aB(Ab)"),
        coefficients=coeffs,
        printed={"slope": ratio ** (0.5 if below else -0.5)},
        extracted=analyze_conic(coeffs),
    ))
    coeffs = (0.0, 0.0, 0.0, c0 / (2.0 * sa2), -1.0, 0.0)
    out.append(ConicDescriptor(
        name="slope_line_bb",
        kind="line",
        plane=("C_Bb", "C_Ab(aB)"),
        coefficients=coeffs,
        printed={"slope": ratio ** (-0.5 if below else 0.5)},
        extracted=analyze_conic(coeffs),
    ))
    return out


def phi_conic_parameters(alpha: float) -> list[ConicDescriptor]:
    """Descriptors of the four phi-family diagram conics at one angle.

    The printed vertex of the cross parabola and the printed focus of the sum
    parabola disagree with the implicit equations; both routes are recorded so
    the discrepancy is visible rather than silently corrected.
    """
    _check_interior(alpha)
    p0 = _snapped_p0(alpha)
    c0 = analytic.initial_concurrence(alpha)
    ca2 = math.cos(alpha) ** 2
    below = alpha <= math.pi / 4
    at_a0 = abs(alpha - ALPHA_0) <= BRANCH_SNAP_TOL

    if at_a0:
        ecc_bar, f_bar = 0.0, 0.0
    elif alpha < ALPHA_0:
        ecc_bar = math.sqrt(max(0.0, (5.0 * p0 - 3.0) / (1.0 + p0)))
        f_bar = math.sqrt(max(0.0, (5.0 * p0 - 3.0) * (1.0 + p0))) / 2.0
    elif alpha < math.pi / 4:
        ecc_bar = math.sqrt(max(0.0, (3.0 - 5.0 * p0) / (4.0 * (1.0 - p0))))
        f_bar = math.sqrt(max(0.0, (3.0 - 5.0 * p0) * (1.0 + p0))) / 2.0
    else:
        ecc_bar = math.sqrt((3.0 + 5.0 * p0) / (4.0 * (1.0 + p0)))
        f_bar = math.sqrt((3.0 + 5.0 * p0) * (1.0 - p0)) / 2.0

    out = []
    coeffs = (1.0 / c0**2, 0.0, 1.0 / ca2**2, 0.0, 0.0, -1.0)
    out.append(ConicDescriptor(
        name="ellipse_difference",
        kind="circle" if at_a0 else "ellipse",
        plane=("C_AB - C_ab", "C_Aa(Bb)"),
        coefficients=coeffs,
        printed={"eccentricity": ecc_bar, "focal_distance": f_bar, "center": (0.0, 0.0)},
        extracted=analyze_conic(coeffs),
    ))

    # Diagram plane (C_AB - C_ab, C_AB + C_ab); the 45-degree symmetry axis of
    # the C_ab x C_AB picture is the second coordinate here.
    coeffs = (ca2 / c0**2, 0.0, 0.0, 0.0, -1.0, c0 - ca2)
    out.append(ConicDescriptor(
        name="parabola_atoms",
        kind="parabola",
        plane=("C_AB - C_ab", "C_AB + C_ab"),
        coefficients=coeffs,
        printed={
            "vertex": (0.0, c0 - (1.0 + p0) / 2.0 if below else c0 - (1.0 - p0) / 2.0),
            "focus": (0.0, c0 - p0 if below else c0 + p0),
        },
        extracted=analyze_conic(coeffs),
    ))

    coeffs = (1.0 / ca2, 0.0, 0.0, 0.0, 1.0, -c0)
    out.append(ConicDescriptor(
        name="parabola_sum",
        kind="parabola",
        plane=("C_Aa(Bb)", "C_AB + C_ab"),
        coefficients=coeffs,
        printed={
            "vertex": (0.0, math.sqrt(1.0 - p0**2)),
            # As printed; dimensionally inconsistent with the implicit form
            # and flagged through discrepancies(), not asserted.
            "focus": (0.0, math.sqrt(1.0 - p0) - (1.0 + p0) if below
                      else math.sqrt(1.0 - p0) - (1.0 - p0)),
        },
        extracted=analyze_conic(coeffs),
    ))

    coeffs = (1.0 / (2.0 * ca2), 0.0, 0.0, -c0 / (2.0 * ca2), 1.0, 0.0)
    out.append(ConicDescriptor(
        name="parabola_cross",
        kind="parabola",
        plane=("C_Aa(Bb)", "C_Ab(aB)"),
        coefficients=coeffs,
        printed={
            # Printed vertex height is twice the implicit one; kept as printed.
            "vertex": (math.sqrt(1.0 - p0**2) / 2.0,
                       (1.0 - p0) / 2.0 if below else (1.0 + p0) / 2.0),
            "focus": (math.sqrt(1.0 - p0**2) / 2.0,
                      -p0 / 2.0 if below else p0 / 2.0),
        },
        extracted=analyze_conic(coeffs),
    ))
    return out


# --------------------------------------------------------------------------
# Hypersphere shell
# --------------------------------------------------------------------------

class ShellViolationError(RuntimeError):
    """The sum of squared concurrences left the configured shell."""


@dataclass(frozen=True)
class ShellBounds:
    family: str
    alpha: float
    lower: float
    upper: float
    observed_min: float
    observed_max: float

    def margins(self) -> tuple[float, float]:
        """(observed_min - lower, upper - observed_max): negative means violated."""
        return (self.observed_min - self.lower, self.upper - self.observed_max)


def shell_bounds(trace: Trace, tol: float = 1e-9) -> ShellBounds:
    """Configured shell bounds and the observed extent of sum(C_ij^2).

    psi family: C0^2 <= sum <= 1 + C0^2/2.  phi family: 0 <= sum <=
    1 + C0^2/2 + P0 below pi/4 and 1 + C0^2/2 - P0 at or above.  A violation
    beyond tol raises ShellViolationError.
    """
    c0sq = trace.initial_concurrence ** 2
    if trace.family == "psi":
        lower, upper = c0sq, 1.0 + c0sq / 2.0
    elif trace.family == "phi":
        pred = analytic.predictability("phi", trace.alpha)
        lower, upper = 0.0, 1.0 + c0sq / 2.0 + pred.sign * pred.p0
    else:
        raise ValueError(f"unknown family {trace.family!r}")
    total = trace.sum_of_squares()
    bounds = ShellBounds(
        family=trace.family, alpha=trace.alpha, lower=lower, upper=upper,
        observed_min=float(np.min(total)), observed_max=float(np.max(total)),
    )
    lo_margin, hi_margin = bounds.margins()
    if lo_margin < -tol or hi_margin < -tol:
        raise ShellViolationError(
            f"shell violated for {trace.family} at alpha={trace.alpha!r}: "
            f"margins ({lo_margin:.3e}, {hi_margin:.3e})"
        )
    return bounds


# --------------------------------------------------------------------------
# Sudden death / birth
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DeathReport:
    """First zero interval of one pair's concurrence along a trace.

    death_time is None when the interval begins before the trace does;
    birth_time is None when it runs past the end.  delta_tau is the interval
    length in gt when both endpoints are known.
    """

    pair: str
    death_time: float | None
    birth_time: float | None
    delta_tau: float | None


@dataclass(frozen=True)
class SuddenDeathWindow:
    """Interval where AB, ab, Ab and aB are all simultaneously dead."""

    start: float
    end: float

    @property
    def delta(self) -> float:
        return self.end - self.start


def _bisect_root(fn, lo, hi, flo, fhi, tol=1e-13, max_iter=200):
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ValueError("bisection bracket does not straddle a sign change")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol:
            return mid
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return 0.5 * (lo + hi)


def _dead_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs [i, j) of True entries."""
    runs = []
    i = 0
    n = len(mask)
    while i < n:
        if mask[i]:
            j = i
            while j < n and mask[j]:
                j += 1
            runs.append((i, j))
            i = j
        else:
            i += 1
    return runs


def detect_death_birth(trace: Trace, pair: str) -> DeathReport:
    """Locate the first zero interval of one pair's concurrence.

    The interval is bracketed on the sampled trace (sample densely: at least
    1024 points per period) and the endpoints are refined by bisection on the
    pre-clamp closed form, whose sign changes are clean where the clamped
    value just sits at zero.
    """
    if pair not in PAIR_NAMES:
        raise ValueError(f"unknown pair {pair!r}")
    raw = trace.raw[pair]
    gts = trace.gt
    dead = raw < 0.0
    runs = _dead_runs(dead)
    if not runs:
        return DeathReport(pair=pair, death_time=None, birth_time=None, delta_tau=None)
    start, stop = runs[0]

    def fn(x):
        return float(analytic.raw_pair_value(trace.family, pair, trace.alpha, x))

    if start == 0:
        death = float(gts[0]) if raw[0] == 0.0 else None
    else:
        death = _bisect_root(fn, float(gts[start - 1]), float(gts[start]),
                             float(raw[start - 1]), float(raw[start]))
    if stop == len(gts):
        birth = None
    else:
        birth = _bisect_root(fn, float(gts[stop - 1]), float(gts[stop]),
                             float(raw[stop - 1]), float(raw[stop]))
    delta = birth - death if (death is not None and birth is not None) else None
    return DeathReport(pair=pair, death_time=death, birth_time=birth, delta_tau=delta)


_WINDOW_PAIRS = ("AB", "ab", "Ab", "aB")


def sudden_death_window(trace: Trace) -> SuddenDeathWindow | None:
    """First interval where all four clampable concurrences vanish together."""
    if trace.family != "phi":
        return None
    masks = [trace.raw[p] < 0.0 for p in _WINDOW_PAIRS]
    all_dead = np.logical_and.reduce(masks)
    runs = _dead_runs(all_dead)
    if not runs:
        return None
    start, stop = runs[0]

    def fn(x):
        return float(max(
            analytic.raw_pair_value(trace.family, p, trace.alpha, x)
            for p in _WINDOW_PAIRS
        ))

    gts = trace.gt
    if start == 0:
        left = float(gts[0])
    else:
        left = _bisect_root(fn, float(gts[start - 1]), float(gts[start]),
                            fn(float(gts[start - 1])), fn(float(gts[start])))
    if stop == len(gts):
        right = float(gts[-1])
    else:
        right = _bisect_root(fn, float(gts[stop - 1]), float(gts[stop]),
                             fn(float(gts[stop - 1])), fn(float(gts[stop])))
    return SuddenDeathWindow(start=left, end=right)


def death_window_formula(alpha: float) -> float:
    """Length (in gt) of the all-dead window: arccos(sqrt(tan a)) - arcsin(sqrt(tan a)).

    Defined for 0 < alpha < arctan(1/2); returns 0 at the threshold.
    """
    t = math.tan(alpha)
    if t < 0 or t > 0.5 + 1e-12:
        raise ValueError("formula applies for 0 < alpha <= arctan(1/2)")
    root = math.sqrt(min(t, 1.0))
    return math.acos(root) - math.asin(root)


def find_death_birth_coincidence(lo: float = 0.35, hi: float = 0.72,
                                 tol: float = 1e-4, samples: int = 4097) -> float:
    """Angle where atom-atom death coincides with cavity-cavity birth.

    Bisection on the sign of (AB death time - ab birth time), both detected
    from dense phi-family traces; no closed-form threshold is consulted.
    """
    gts = np.linspace(0.0, math.pi / 2, samples)

    def gap(alpha: float) -> float:
        trace = Trace.generate("phi", alpha, gts)
        death = detect_death_birth(trace, "AB").death_time
        birth = detect_death_birth(trace, "ab").birth_time
        if death is None or birth is None:
            raise RuntimeError(f"no death/birth transition detected at alpha={alpha}")
        return death - birth

    flo, fhi = gap(lo), gap(hi)
    if flo * fhi > 0:
        raise ValueError("bracket does not contain the coincidence angle")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = gap(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return 0.5 * (lo + hi)


# --------------------------------------------------------------------------
# Entanglement surfaces
# --------------------------------------------------------------------------

# Pair triple shown for each qubit: same-species partner first, then the
# qubit's own cavity/atom, then the crossed partner.
QUBIT_TRIPLES = {
    "A": ("AB", "Aa", "Ab"),
    "B": ("AB", "Bb", "aB"),
    "a": ("ab", "Aa", "aB"),
    "b": ("ab", "Bb", "Ab"),
}

# Which 2-D relation each coordinate-plane projection of a psi surface obeys:
# (relation, (x pair, y pair)) per qubit.
_PSI_PROJECTIONS = {
    "A": (("ellipse_atoms_aa", ("AB", "Aa")), ("circle_cross", ("AB", "Ab")),
          ("slope_line_aa", ("Aa", "Ab"))),
    "B": (("ellipse_atoms_bb", ("AB", "Bb")), ("circle_cross", ("AB", "aB")),
          ("slope_line_bb", ("Bb", "aB"))),
    "a": (("ellipse_atoms_aa", ("ab", "Aa")), ("circle_cross", ("ab", "aB")),
          ("slope_line_aa", ("Aa", "aB"))),
    "b": (("ellipse_atoms_bb", ("ab", "Bb")), ("circle_cross", ("ab", "Ab")),
          ("slope_line_bb", ("Bb", "Ab"))),
}


def surface_sample(family: str, qubit: str, alphas, gts) -> np.ndarray:
    """Mesh of concurrence triples for one qubit, shape (n_alpha, n_gt, 3).

    Row i holds the trajectory at alphas[i]; the last axis follows
    QUBIT_TRIPLES[qubit].  Row-major over (alpha, gt).
    """
    if qubit not in QUBIT_TRIPLES:
        raise ValueError(f"unknown qubit {qubit!r}")
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    gts = np.atleast_1d(np.asarray(gts, dtype=float))
    if alphas.size < 1 or gts.size < 1:
        raise ValueError("grids must be non-empty")
    triple = QUBIT_TRIPLES[qubit]
    mesh = np.empty((alphas.size, gts.size, 3), dtype=float)
    for i, alpha in enumerate(alphas):
        values = Trace.generate(family, float(alpha), gts).values
        for k, pair in enumerate(triple):
            mesh[i, :, k] = values[pair]
    return mesh


def projection_residuals(family: str, qubit: str, alphas, gts,
                         mask_tol: float = CLAMP_MASK_TOL) -> list[RelationCheck]:
    """Do the coordinate-plane projections of a surface obey the 2-D relations?

    For the psi family each of the three projections has its own conic; the
    residuals are evaluated directly from the mesh columns.  For the phi
    family the cross parabola is checked from the mesh, and the remaining
    masked relations (which involve pairs outside the triple) are evaluated on
    the per-alpha traces the mesh rows were built from.
    """
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    gts = np.atleast_1d(np.asarray(gts, dtype=float))
    checks: list[RelationCheck] = []
    if family == "psi":
        mesh = surface_sample("psi", qubit, alphas, gts)
        triple = QUBIT_TRIPLES[qubit]
        for relation, (xp, yp) in _PSI_PROJECTIONS[qubit]:
            xi, yi = triple.index(xp), triple.index(yp)
            for i, alpha in enumerate(alphas):
                x = mesh[i, :, xi]
                y = mesh[i, :, yi]
                checks.append(_projection_check(relation, float(alpha), x, y))
    elif family == "phi":
        for alpha in alphas:
            trace = Trace.generate("phi", float(alpha), gts)
            checks.extend(phi_relation_residuals(trace, mask_tol=mask_tol))
    else:
        raise ValueError(f"unknown family {family!r}")
    return checks


def _projection_check(relation: str, alpha: float, x: np.ndarray,
                      y: np.ndarray) -> RelationCheck:
    c0 = analytic.initial_concurrence(alpha)
    sa2 = math.sin(alpha) ** 2
    ca2 = math.cos(alpha) ** 2
    tol = PSI_RELATIONS[relation]
    full = np.ones(x.shape, dtype=bool)
    if relation == "ellipse_atoms_bb":
        if c0 ** 2 / 4 < _DEGENERATE or sa2 ** 2 < _DEGENERATE:
            return _degenerate(relation, "psi", alpha, x.size, tol)
        res = (x - c0 / 2) ** 2 / (c0 ** 2 / 4) + y ** 2 / sa2 ** 2 - 1.0
    elif relation == "ellipse_atoms_aa":
        if c0 ** 2 / 4 < _DEGENERATE or ca2 ** 2 < _DEGENERATE:
            return _degenerate(relation, "psi", alpha, x.size, tol)
        res = (x - c0 / 2) ** 2 / (c0 ** 2 / 4) + y ** 2 / ca2 ** 2 - 1.0
    elif relation == "circle_cross":
        res = (x - c0 / 2) ** 2 + y ** 2 - c0 ** 2 / 4
    elif relation == "slope_line_aa":
        if ca2 < _DEGENERATE:
            return _degenerate(relation, "psi", alpha, x.size, tol)
        res = y - c0 / (2 * ca2) * x
    elif relation == "slope_line_bb":
        if sa2 < _DEGENERATE:
            return _degenerate(relation, "psi", alpha, x.size, tol)
        res = y - c0 / (2 * sa2) * x
    else:
        raise ValueError(f"unknown projection relation {relation!r}")
    return _check(relation, "psi", alpha, res, full, tol)


def limiting_circle_residual(trace: Trace) -> float:
    """How far the cross diagrams stray outside the bounding semicircle.

    The (C_AB(ab), C_aB(Ab)) trajectories stay inside x^2 + y^2 = C0^2; the
    returned value is max(0, max(x^2 + y^2 - C0^2)) over all four pairings.
    """
    c = trace.values
    c0sq = trace.initial_concurrence ** 2
    worst = -math.inf
    for x in ("AB", "ab"):
        for y in ("aB", "Ab"):
            worst = max(worst, float(np.max(c[x] ** 2 + c[y] ** 2 - c0sq)))
    return max(0.0, worst)

"""Command-line front end: trajectory export, verification, surfaces, conics.

Subcommands
-----------
trace    concurrence trajectory of one family at fixed alpha -> CSV/JSON
verify   run the full invariant battery over an alpha grid -> JSON report,
         exit status 0 iff every hard check passes
surface  3-D entanglement-surface mesh for one qubit -> CSV/JSON
conics   printed vs extracted conic parameters per alpha -> CSV/JSON

Angles are radians; the tokens ``pi``, ``3pi/10``, ``atan(1/2)`` etc. are
accepted literally so branch points do not suffer decimal transcription.
Floats in CSV output are printed with 17 significant digits, which
round-trips binary64 exactly.  Identical configurations (including --seed)
produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import analytic, entanglement, geometry
from .analytic import PAIR_NAMES, Trace
from .hilbert import SpaceConfig, SpectralPropagator, build_hamiltonian

__all__ = [
    "RunConfig",
    "TraceTable",
    "parse_angle",
    "run_verification",
    "main",
    "entrypoint",
]

TRACE_COLUMNS = ("gt", "c_AB", "c_ab", "c_Aa", "c_Bb", "c_Ab", "c_aB", "p0", "sum_sq")

# Default hard-check tolerances, overridable wholesale via --tol.
DEFAULT_TOLS = {
    "oracle_equivalence": 1e-8,
    "sum_line": 1e-12,
    "relations_psi": 1e-10,
    "relations_phi": 1e-10,
    "limiting_circle": 1e-12,
    "shell_psi": 1e-12,
    "shell_phi": 1e-9,
    "shell_attainment": 1e-12,
    "conic_two_route": 1e-9,
    "focus_ratio": 1e-12,
    "branch_focus": 1e-9,
    "branch_predictability": 1e-12,
    "death_window": 1e-6,
    "death_birth_threshold": 1e-3,
    "invariance_omega": 1e-12,
    "invariance_nmax": 1e-10,
    "invariance_local_unitary": 1e-9,
    "projection": 1e-10,
}

_ANGLE_RE = re.compile(r"^\s*(?P<num>\d+(?:\.\d+)?)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+(?:\.\d+)?))?\s*$")
_ATAN_RE = re.compile(r"^\s*atan\(\s*(?P<p>\d+(?:\.\d+)?)\s*(?:/\s*(?P<q>\d+(?:\.\d+)?))?\s*\)\s*$")


def parse_angle(text: str) -> float:
    """Radians from a float literal or a pi/atan token."""
    text = str(text).strip()
    m = _ANGLE_RE.match(text)
    if m:
        num = float(m.group("num")) if m.group("num") else 1.0
        den = float(m.group("den")) if m.group("den") else 1.0
        return num * math.pi / den
    m = _ATAN_RE.match(text)
    if m:
        p = float(m.group("p"))
        q = float(m.group("q")) if m.group("q") else 1.0
        return math.atan(p / q)
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None


@dataclass(frozen=True)
class RunConfig:
    """Everything one command run depends on."""

    family: str = "psi"
    alpha: float | None = None
    alpha_grid: int = 65
    gt_max: float = 2.0 * math.pi
    gt_steps: int = 257
    g: float = 1.0
    omega: float = 1.0
    n_max: int = 1
    tol: float | None = None
    seed: int = 20230405
    fmt: str = "csv"
    out: str | None = None
    qubit: str = "A"

    def __post_init__(self):
        if self.family not in ("psi", "phi"):
            raise ValueError(f"family must be psi or phi, got {self.family!r}")
        if self.alpha_grid < 2:
            raise ValueError("alpha grid needs at least 2 points")
        if self.gt_steps < 2:
            raise ValueError("gt grid needs at least 2 points")
        if not self.gt_max > 0:
            raise ValueError("gt-max must be positive")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tolerance override must be positive")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.fmt!r}")
        if self.qubit not in geometry.QUBIT_TRIPLES:
            raise ValueError(f"qubit must be one of A, B, a, b, got {self.qubit!r}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def space(self) -> SpaceConfig:
        return SpaceConfig(n_max=self.n_max, omega=self.omega, g=self.g)

    def gt_values(self) -> np.ndarray:
        return np.linspace(0.0, self.gt_max, self.gt_steps)

    def alpha_values(self, include_special: bool = False) -> np.ndarray:
        grid = np.linspace(0.0, math.pi / 2, self.alpha_grid)
        if not include_special:
            return grid
        extra = [math.atan(1.0 / 3.0), analytic.ALPHA_DEATH_BIRTH, math.pi / 6]
        merged = np.sort(np.concatenate([grid, extra]))
        keep = np.concatenate([[True], np.diff(merged) > 1e-14])
        return merged[keep]

    def tolerance(self, key: str) -> float:
        return self.tol if self.tol is not None else DEFAULT_TOLS[key]

    def meta(self) -> dict:
        return {
            "family": self.family,
            "alpha": self.alpha,
            "alpha_grid": self.alpha_grid,
            "gt_max": self.gt_max,
            "gt_steps": self.gt_steps,
            "g": self.g,
            "omega": self.omega,
            "n_max": self.n_max,
            "tol": self.tol,
            "seed": self.seed,
            "qubit": self.qubit,
        }


def _fmt(x) -> str:
    return f"{float(x):.17g}"


@dataclass(frozen=True, eq=False)
class TraceTable:
    """Time-indexed concurrence record of one trajectory."""

    family: str
    alpha: float
    meta: dict
    gt: np.ndarray
    data: np.ndarray  # (n, len(TRACE_COLUMNS))

    @classmethod
    def from_trace(cls, trace: Trace, meta: dict | None = None) -> "TraceTable":
        p0 = analytic.predictability(trace.family, trace.alpha).p0
        cols = [trace.gt]
        cols += [trace.values[name] for name in PAIR_NAMES]
        cols += [np.full_like(trace.gt, p0), trace.sum_of_squares()]
        return cls(
            family=trace.family,
            alpha=trace.alpha,
            meta=dict(meta or {}),
            gt=trace.gt,
            data=np.column_stack(cols),
        )

    def to_csv(self) -> str:
        lines = [f"# {key}={value}" for key, value in self.meta.items()]
        lines.append(",".join(TRACE_COLUMNS))
        for row in self.data:
            lines.append(",".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "meta": self.meta,
            "columns": list(TRACE_COLUMNS),
            "rows": [[float(v) for v in row] for row in self.data],
        }

    @staticmethod
    def parse_csv(text: str) -> tuple[dict, np.ndarray]:
        """Back-parse to (meta, data); inverse of to_csv up to metadata typing."""
        meta = {}
        rows = []
        header = None
        for line in text.splitlines():
            if not line.strip():
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key.strip()] = value.strip()
            elif header is None:
                header = line.split(",")
            else:
                rows.append([float(v) for v in line.split(",")])
        return meta, np.asarray(rows, dtype=float)


def _write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise SystemExit(f"cannot write {out!r}: {exc}")


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# trace
# ---------------------------------------------------------------------------

def cmd_trace(cfg: RunConfig) -> int:
    if cfg.alpha is None:
        raise SystemExit("trace requires --alpha")
    trace = Trace.generate(cfg.family, cfg.alpha, cfg.gt_values())
    meta = {k: v for k, v in cfg.meta().items() if k not in ("qubit", "alpha_grid")}
    table = TraceTable.from_trace(trace, meta)
    if cfg.fmt == "csv":
        _write_output(table.to_csv(), cfg.out)
    else:
        _write_output(_json_text(table.to_json_obj()), cfg.out)
    return 0


# ---------------------------------------------------------------------------
# surface
# ---------------------------------------------------------------------------

def cmd_surface(cfg: RunConfig) -> int:
    alphas = cfg.alpha_values()
    gts = cfg.gt_values()
    mesh = geometry.surface_sample(cfg.family, cfg.qubit, alphas, gts)
    pairs = geometry.QUBIT_TRIPLES[cfg.qubit]
    if cfg.fmt == "csv":
        lines = [f"# {key}={value}" for key, value in cfg.meta().items() if key != "alpha"]
        lines.append(f"# pairs={','.join(pairs)}")
        lines.append("alpha,gt,c_first,c_second,c_third")
        for i, alpha in enumerate(alphas):
            for j, gt in enumerate(gts):
                vals = mesh[i, j]
                lines.append(",".join(_fmt(v) for v in (alpha, gt, *vals)))
        _write_output("\n".join(lines) + "\n", cfg.out)
    else:
        obj = {
            "meta": {k: v for k, v in cfg.meta().items() if k != "alpha"},
            "pairs": list(pairs),
            "alphas": [float(a) for a in alphas],
            "gts": [float(t) for t in gts],
            "mesh": mesh.tolist(),
        }
        _write_output(_json_text(obj), cfg.out)
    return 0


# ---------------------------------------------------------------------------
# conics
# ---------------------------------------------------------------------------

def _conic_entries(cfg: RunConfig) -> list[dict]:
    if cfg.alpha is not None:
        alphas = [cfg.alpha]
    else:
        alphas = [a for a in cfg.alpha_values(include_special=True)
                  if 0.0 < a < math.pi / 2]
    entries = []
    for alpha in alphas:
        params = (geometry.psi_conic_parameters(alpha) if cfg.family == "psi"
                  else geometry.phi_conic_parameters(alpha))
        entries.append({
            "alpha": float(alpha),
            "conics": [
                {
                    "name": d.name,
                    "kind": d.kind,
                    "plane": list(d.plane),
                    "printed": d.printed,
                    "extracted": d.extracted,
                    "discrepancies": d.discrepancies(),
                }
                for d in params
            ],
        })
    return entries


def cmd_conics(cfg: RunConfig) -> int:
    entries = _conic_entries(cfg)
    if cfg.fmt == "json":
        obj = {"meta": {k: v for k, v in cfg.meta().items() if k != "qubit"},
               "entries": entries}
        _write_output(_json_text(obj), cfg.out)
        return 0
    lines = [f"# {key}={value}" for key, value in cfg.meta().items() if key != "qubit"]
    lines.append("alpha,conic,kind,quantity,printed,extracted,abs_diff")
    for entry in entries:
        for conic in entry["conics"]:
            for key in sorted(conic["printed"]):
                printed = conic["printed"][key]
                extracted = conic["extracted"].get(key)
                values = [(key, printed, extracted)]
                if isinstance(printed, (tuple, list)):
                    values = [
                        (f"{key}_{axis}", printed[i],
                         None if extracted is None else extracted[i])
                        for i, axis in enumerate(("x", "y"))
                    ]
                for name, pv, ev in values:
                    diff = "" if ev is None else _fmt(abs(pv - ev))
                    lines.append(",".join([
                        _fmt(entry["alpha"]), conic["name"], conic["kind"], name,
                        _fmt(pv), "" if ev is None else _fmt(ev), diff,
                    ]))
    _write_output("\n".join(lines) + "\n", cfg.out)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _interior(alphas: np.ndarray) -> np.ndarray:
    return alphas[(alphas > 1e-12) & (alphas < math.pi / 2 - 1e-12)]


def run_verification(cfg: RunConfig) -> dict:
    """Full invariant battery; returns the machine-readable report."""
    checks: list[dict] = []
    warnings: list[dict] = []
    report: dict = {"config": cfg.meta(), "checks": checks, "warnings": warnings}

    def add_check(name, value, tol, extra=None):
        entry = {
            "name": name,
            "value": None if value is None or math.isnan(value) else float(value),
            "tolerance": float(tol),
            "passed": bool(value is not None and not math.isnan(value) and value <= tol),
        }
        if extra:
            entry.update(extra)
        checks.append(entry)

    alphas = cfg.alpha_values(include_special=True)
    interior = _interior(alphas)
    gts = cfg.gt_values()

    # Closed forms vs the numeric Wootters pipeline.
    space = cfg.space()
    propagator = SpectralPropagator(build_hamiltonian(space))
    for family in ("psi", "phi"):
        worst = 0.0
        for alpha in alphas:
            numeric = entanglement.numeric_concurrence_trace(
                family, float(alpha), gts, cfg=space, propagator=propagator)
            closed = Trace.generate(family, float(alpha), gts).values
            for name in PAIR_NAMES:
                worst = max(worst, float(np.max(np.abs(numeric[name] - closed[name]))))
        add_check(f"oracle_equivalence/{family}", worst, cfg.tolerance("oracle_equivalence"))

    # Relation residuals on closed-form trajectories.
    relation_summary: dict = {"psi": {}, "phi": {}}
    report["relations"] = relation_summary
    for family in ("psi", "phi"):
        table: dict[str, dict] = {}
        for alpha in alphas:
            trace = Trace.generate(family, float(alpha), gts)
            for check in geometry.relation_residuals(trace):
                slot = table.setdefault(check.relation, {
                    "max_residual": 0.0, "n_evaluated": 0,
                    "n_degenerate": 0, "n_vacuous": 0, "worst_alpha": None,
                })
                if check.status in ("pass", "fail"):
                    slot["n_evaluated"] += 1
                    if check.max_residual >= slot["max_residual"]:
                        slot["max_residual"] = check.max_residual
                        slot["worst_alpha"] = float(alpha)
                elif check.status == "degenerate":
                    slot["n_degenerate"] += 1
                else:
                    slot["n_vacuous"] += 1
        relation_summary[family] = table
        key = "relations_psi" if family == "psi" else "relations_phi"
        for relation, slot in sorted(table.items()):
            tol = cfg.tol if cfg.tol is not None else min(
                cfg.tolerance(key),
                geometry.PSI_RELATIONS.get(relation, math.inf),
                geometry.PHI_RELATIONS.get(relation, math.inf),
            )
            add_check(f"relations/{family}/{relation}", slot["max_residual"], tol,
                      {"n_evaluated": slot["n_evaluated"],
                       "n_degenerate": slot["n_degenerate"],
                       "n_vacuous": slot["n_vacuous"],
                       "worst_alpha": slot["worst_alpha"]})

    # Bounding semicircle of the cross diagrams (psi).
    worst = max(
        geometry.limiting_circle_residual(Trace.generate("psi", float(a), gts))
        for a in alphas
    )
    add_check("limiting_circle/psi", worst, cfg.tolerance("limiting_circle"))

    # Hypersphere shell.
    for family in ("psi", "phi"):
        key = "shell_psi" if family == "psi" else "shell_phi"
        tol = cfg.tolerance(key)
        worst_violation = 0.0
        worst_attain = 0.0
        has_zero = bool(np.any(np.abs(gts) <= 1e-12))
        quarter = bool(np.any(np.abs(gts - math.pi / 4) <= 1e-12))
        for alpha in alphas:
            trace = Trace.generate(family, float(alpha), gts)
            try:
                bounds = geometry.shell_bounds(trace, tol=tol)
            except geometry.ShellViolationError:
                worst_violation = math.inf
                continue
            lo, hi = bounds.margins()
            worst_violation = max(worst_violation, -min(lo, hi, 0.0))
            if family == "psi" and has_zero and quarter:
                worst_attain = max(worst_attain,
                                   abs(bounds.observed_max - bounds.upper),
                                   abs(bounds.observed_min - bounds.lower))
        add_check(f"shell_containment/{family}", worst_violation, tol)
        if family == "psi" and has_zero and quarter:
            add_check("shell_attainment/psi", worst_attain, cfg.tolerance("shell_attainment"))

    # Conic parameters: two-route agreement (hard for psi, warning for phi).
    conic_report: dict = {"psi": {}, "phi": {}}
    report["conics"] = conic_report
    worst_psi = 0.0
    for alpha in interior:
        for desc in geometry.psi_conic_parameters(float(alpha)):
            for key, diff in desc.discrepancies().items():
                worst_psi = max(worst_psi, diff)
    add_check("conic_two_route/psi", worst_psi, cfg.tolerance("conic_two_route"))
    phi_worst: dict[str, float] = {}
    for alpha in interior:
        for desc in geometry.phi_conic_parameters(float(alpha)):
            for key, diff in desc.discrepancies().items():
                slot = f"{desc.name}.{key}"
                phi_worst[slot] = max(phi_worst.get(slot, 0.0), diff)
    conic_report["phi"]["max_discrepancy"] = {k: float(v) for k, v in sorted(phi_worst.items())}
    for slot, diff in sorted(phi_worst.items()):
        if diff > cfg.tolerance("conic_two_route"):
            warnings.append({
                "kind": "conic_two_route/phi",
                "quantity": slot,
                "max_abs_difference": float(diff),
                "note": "printed formula differs from implicit-conic extraction",
            })
    conic_report["psi"]["max_discrepancy"] = float(worst_psi)

    # Named special points.
    descs = {d.name: d for d in geometry.psi_conic_parameters(math.pi / 6)}
    ratio = (descs["ellipse_atoms_aa"].printed["focal_distance"]
             / descs["ellipse_atoms_bb"].printed["focal_distance"])
    add_check("focus_ratio/psi_pi6", abs(ratio - math.sqrt(3.0)), cfg.tolerance("focus_ratio"),
              {"ratio": float(ratio)})
    descs = {d.name: d for d in geometry.phi_conic_parameters(analytic.ALPHA_DEATH_BIRTH)}
    add_check("branch_point/phi_focus", descs["ellipse_difference"].printed["focal_distance"],
              cfg.tolerance("branch_focus"))
    p0 = analytic.predictability("phi", analytic.ALPHA_DEATH_BIRTH).p0
    add_check("branch_point/phi_predictability", abs(p0 - 0.6),
              cfg.tolerance("branch_predictability"), {"p0": float(p0)})

    # Sudden death / rebirth windows.
    death_rows = []
    report["deaths"] = death_rows
    window_gts = np.linspace(0.0, math.pi, 4097)
    spacing = float(window_gts[1] - window_gts[0])
    worst_window = 0.0
    for alpha in interior:
        alpha = float(alpha)
        if not 0.0 < alpha < analytic.ALPHA_DEATH_BIRTH:
            continue
        expected = geometry.death_window_formula(alpha)
        if expected <= 4.0 * spacing:
            continue  # narrower than the sampling can bracket reliably
        window = geometry.sudden_death_window(Trace.generate("phi", alpha, window_gts))
        if window is None:
            worst_window = math.inf
            death_rows.append({"alpha": alpha, "detected": None, "formula": expected})
            continue
        worst_window = max(worst_window, abs(window.delta - expected))
        death_rows.append({
            "alpha": alpha,
            "window_start": window.start,
            "window_end": window.end,
            "detected": window.delta,
            "formula": expected,
            "abs_difference": abs(window.delta - expected),
        })
    if death_rows:
        add_check("death_window/phi", worst_window, cfg.tolerance("death_window"),
                  {"n_alphas": len(death_rows)})

    threshold = geometry.find_death_birth_coincidence(tol=min(1e-4, cfg.tolerance("death_birth_threshold")))
    add_check("death_birth_threshold/phi",
              abs(threshold - analytic.ALPHA_DEATH_BIRTH),
              cfg.tolerance("death_birth_threshold"),
              {"detected_alpha": float(threshold)})

    # Invariances, on the compact oracle grid.
    inv_alphas = np.linspace(0.0, math.pi / 2, 33)
    inv_gts = np.linspace(0.0, 2.0 * math.pi, 65)
    base: dict[str, dict[str, np.ndarray]] = {}
    worst = 0.0
    for omega in (0.0, 1.3, 7.9):
        sp = SpaceConfig(n_max=cfg.n_max, omega=omega, g=cfg.g)
        prop = SpectralPropagator(build_hamiltonian(sp))
        for family in ("psi", "phi"):
            for alpha in inv_alphas:
                numeric = entanglement.numeric_concurrence_trace(
                    family, float(alpha), inv_gts, cfg=sp, propagator=prop)
                key = f"{family}/{alpha!r}"
                if key not in base:
                    base[key] = numeric
                else:
                    for name in PAIR_NAMES:
                        worst = max(worst, float(np.max(np.abs(numeric[name] - base[key][name]))))
    add_check("invariance/omega", worst, cfg.tolerance("invariance_omega"))

    base.clear()
    worst = 0.0
    for n_max in (1, 2, 3):
        sp = SpaceConfig(n_max=n_max, omega=cfg.omega, g=cfg.g)
        prop = SpectralPropagator(build_hamiltonian(sp))
        for family in ("psi", "phi"):
            for alpha in inv_alphas:
                numeric = entanglement.numeric_concurrence_trace(
                    family, float(alpha), inv_gts, cfg=sp, propagator=prop)
                key = f"{family}/{alpha!r}"
                if key not in base:
                    base[key] = numeric
                else:
                    for name in PAIR_NAMES:
                        worst = max(worst, float(np.max(np.abs(numeric[name] - base[key][name]))))
    add_check("invariance/nmax", worst, cfg.tolerance("invariance_nmax"))

    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    sample_points = [(f, a, t) for f in ("psi", "phi")
                     for a in (math.pi / 5, math.pi / 7, 1.0)
                     for t in (0.7, 1.9)]
    for family, alpha, gt in sample_points:
        state = (analytic.psi_state(alpha, gt, cfg=space) if family == "psi"
                 else analytic.phi_state(alpha, gt, cfg=space))
        for pair in ("AB", "Aa", "Ab"):
            rho = entanglement.reduce_to_pair(state, entanglement.PAIRS[pair], space)
            c_ref = entanglement.wootters_concurrence(rho)
            for _ in range(10):
                u = entanglement.haar_local_unitary(rng)
                c_rot = entanglement.wootters_concurrence(u @ rho @ u.conj().T)
                worst = max(worst, abs(c_rot - c_ref))
    add_check("invariance/local_unitary", worst, cfg.tolerance("invariance_local_unitary"))

    # Surface projections.
    proj_alphas = interior[:: max(1, len(interior) // 16)]
    for family in ("psi", "phi"):
        worst = 0.0
        qubits = ("A", "B", "a", "b") if family == "psi" else ("A",)
        for qubit in qubits:
            for check in geometry.projection_residuals(family, qubit, proj_alphas, gts):
                if check.status == "fail":
                    worst = math.inf
                elif check.status == "pass":
                    worst = max(worst, check.max_residual)
        add_check(f"projection/{family}", worst, cfg.tolerance("projection"))

    failed = [c["name"] for c in checks if not c["passed"]]
    report["n_checks"] = len(checks)
    report["n_failed"] = len(failed)
    report["failed_checks"] = failed
    report["passed"] = not failed
    return report


def cmd_verify(cfg: RunConfig) -> int:
    started = time.time()
    report = run_verification(cfg)
    _write_output(_json_text(report), cfg.out)
    status = "PASS" if report["passed"] else "FAIL"
    print(
        f"verify: {status} ({report['n_checks'] - report['n_failed']}/{report['n_checks']} "
        f"checks, {time.time() - started:.1f}s)",
        file=sys.stderr,
    )
    for name in report["failed_checks"]:
        print(f"verify: FAILED {name}", file=sys.stderr)
    return 0 if report["passed"] else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="djcm",
        description="Entanglement dynamics of the double Jaynes-Cummings model",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("trace", "export one concurrence trajectory"),
        ("verify", "run the invariant battery and emit a JSON report"),
        ("surface", "export a 3-D entanglement-surface mesh"),
        ("conics", "tabulate printed vs extracted conic parameters"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--family", choices=("psi", "phi"), default="psi")
        p.add_argument("--alpha", type=parse_angle, default=None,
                       help="mixing angle in radians (tokens like pi/4, atan(1/2) accepted)")
        p.add_argument("--alpha-grid", type=int, default=65, dest="alpha_grid")
        p.add_argument("--gt-max", type=parse_angle, default=2.0 * math.pi, dest="gt_max")
        p.add_argument("--gt-steps", type=int, default=257, dest="gt_steps")
        p.add_argument("--g", type=float, default=1.0)
        p.add_argument("--omega", type=float, default=1.0)
        p.add_argument("--nmax", type=int, default=1, dest="n_max")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=20230405)
        p.add_argument("--format", choices=("csv", "json"), default=None, dest="fmt")
        p.add_argument("--out", default=None)
        if name == "surface":
            p.add_argument("--qubit", choices=tuple(geometry.QUBIT_TRIPLES), default="A")
    return parser


_COMMANDS = {
    "trace": cmd_trace,
    "verify": cmd_verify,
    "surface": cmd_surface,
    "conics": cmd_conics,
}

_DEFAULT_FMT = {"trace": "csv", "surface": "csv", "conics": "json", "verify": "json"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.fmt or _DEFAULT_FMT[args.command]
    if args.command == "verify" and fmt != "json":
        raise SystemExit("verify reports are JSON only")
    try:
        cfg = RunConfig(
            family=args.family,
            alpha=args.alpha,
            alpha_grid=args.alpha_grid,
            gt_max=args.gt_max,
            gt_steps=args.gt_steps,
            g=args.g,
            omega=args.omega,
            n_max=args.n_max,
            tol=args.tol,
            seed=args.seed,
            fmt=fmt,
            out=args.out,
            qubit=getattr(args, "qubit", "A"),
        )
    except ValueError as exc:
        raise SystemExit(f"invalid configuration: {exc}")
    return _COMMANDS[args.command](cfg)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

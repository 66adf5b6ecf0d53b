"""Experiment orchestration: clustering runs, reports, and file emission.

A run builds the polynomial family over a list of degrees, finds all zeros,
measures their distances to the admissible arcs of the clustering level
curve, scans for zero-free violations (no zero may sit in the left
half-plane or classify outside the admissible region), and samples the
split-integral diagnostics at a few zeros, where the two contour pieces
must cancel and their n-th root magnitudes approach ``|1 - z|``.

Reports serialize deterministically: fixed seeds, fixed orderings, no
timestamps, so identical configurations produce bit-identical JSON.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, field

from . import quadrature
from .errors import ConfigError, HypzeroError
from .flows import (IN_E, NOT_IN_E, PathTrace, classify_region,
                    separatrices)
from .hyperpoly import Polynomial, coefficients, real_family_coefficients
from .kernel import Alpha, DOUBLE, Precision
from .levelcurve import (LevelCurve, coverage_gap, distance_to_curve,
                         trace_level_curve)
from .roots import ZeroSet, find_roots
from .saddle import descent_integral_estimate

SCHEMA = "hypzero/1"

DEFAULT_TOLERANCES = {
    "residual": 1e-10,
    "corrector": 1e-9,
    "boundary": 1e-6,
    "quadrature": 1e-10,
}


@dataclass(frozen=True)
class GridSpec:
    re0: float
    re1: float
    im0: float
    im1: float
    steps: int

    @staticmethod
    def parse(text: str) -> "GridSpec":
        parts = text.split(":")
        if len(parts) != 5:
            raise ConfigError(f"grid spec needs re0:re1:im0:im1:steps, got {text!r}")
        try:
            return GridSpec(float(parts[0]), float(parts[1]),
                            float(parts[2]), float(parts[3]), int(parts[4]))
        except ValueError as exc:
            raise ConfigError(f"bad grid spec {text!r}: {exc}") from None

    def points(self) -> list[complex]:
        if self.steps < 1:
            raise ConfigError("grid steps must be >= 1")
        out = []
        for i in range(self.steps):
            re = self.re0 + (self.re1 - self.re0) * (i + 0.5) / self.steps
            for j in range(self.steps):
                im = self.im0 + (self.im1 - self.im0) * (j + 0.5) / self.steps
                out.append(complex(re, im))
        return out


@dataclass(frozen=True)
class ExperimentConfig:
    alpha: Alpha
    n_list: tuple[int, ...]
    precision: Precision = DOUBLE
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    out_dir: str | None = None
    formats: tuple[str, ...] = ("json",)
    grid: GridSpec | None = None
    shift: float = 0.0          # l-offset for the real-parameter family
    samples_per_n: int = 3      # zeros receiving split-integral diagnostics

    def __post_init__(self):
        if not self.n_list:
            raise ConfigError("n_list must be nonempty")
        if any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise ConfigError("n_list must be strictly increasing")
        if any(v <= 0 for v in self.tolerances.values()):
            raise ConfigError("all tolerances must be positive")
        for f in self.formats:
            if f not in ("json", "csv", "svg"):
                raise ConfigError(f"unknown output format {f!r}")

    def to_json_dict(self) -> dict:
        return {
            "alpha": [self.alpha.eta, self.alpha.zeta],
            "n_list": list(self.n_list),
            "precision_bits": self.precision.bits,
            "tolerances": {k: self.tolerances[k] for k in sorted(self.tolerances)},
            "formats": list(self.formats),
            "grid": None if self.grid is None else
                [self.grid.re0, self.grid.re1, self.grid.im0, self.grid.im1,
                 self.grid.steps],
            "shift": self.shift,
            "samples_per_n": self.samples_per_n,
        }

    def hash(self) -> str:
        canon = json.dumps(self.to_json_dict(), sort_keys=True,
                           separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class RootSample:
    """Split-integral diagnostics at one zero."""

    z: complex
    descent_log_mod: float
    endpoint_log_mod: float
    descent_nth_root: float
    endpoint_nth_root: float
    one_minus_z_abs: float
    asym_ratio: float
    k_nth_root: float
    split_cancels: bool

    def to_json_dict(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "descent_log_mod": self.descent_log_mod,
            "endpoint_log_mod": self.endpoint_log_mod,
            "descent_nth_root": self.descent_nth_root,
            "endpoint_nth_root": self.endpoint_nth_root,
            "one_minus_z_abs": self.one_minus_z_abs,
            "asym_ratio": self.asym_ratio,
            "k_nth_root": self.k_nth_root,
            "split_cancels": self.split_cancels,
        }


@dataclass(frozen=True)
class DegreeRecord:
    n: int
    zeros: ZeroSet | None
    distances: tuple[float, ...]
    max_distance: float
    mean_distance: float
    coverage_gap: float
    labels: tuple[str, ...]
    margins: tuple[float, ...]
    left_halfplane_violations: int
    region_violations: int
    samples: tuple[RootSample, ...]
    flags: tuple[str, ...]

    def to_json_dict(self, config_hash: str) -> dict:
        return {
            "config_hash": config_hash,
            "n": self.n,
            "zeros": None if self.zeros is None else self.zeros.to_json_dict(),
            "distances": list(self.distances),
            "max_distance": self.max_distance,
            "mean_distance": self.mean_distance,
            "coverage_gap": self.coverage_gap,
            "labels": list(self.labels),
            "margins": list(self.margins),
            "left_halfplane_violations": self.left_halfplane_violations,
            "region_violations": self.region_violations,
            "samples": [s.to_json_dict() for s in self.samples],
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class VerificationReport:
    config: ExperimentConfig
    config_hash: str
    curve: LevelCurve
    separatrix_pair: tuple[PathTrace, PathTrace]
    records: tuple[DegreeRecord, ...]
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "config": self.config.to_json_dict(),
            "config_hash": self.config_hash,
            "passed": self.passed,
            "level_curve": self.curve.to_json_dict(),
            "separatrices": [s.to_json_dict() for s in self.separatrix_pair],
            "records": [r.to_json_dict(self.config_hash) for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _build_polynomial(n: int, config: ExperimentConfig) -> Polynomial:
    if config.shift != 0.0:
        if not config.alpha.is_real_regime:
            raise ConfigError("the shifted family requires a real parameter")
        return real_family_coefficients(n, config.alpha.eta, config.shift)
    return coefficients(n, config.alpha)


def _sample_indices(count: int, wanted: int) -> list[int]:
    if count <= wanted:
        return list(range(count))
    if wanted <= 1:
        return [count // 2] if wanted == 1 else []
    return [round(i * (count - 1) / (wanted - 1)) for i in range(wanted)]


def _diagnose_root(n: int, alpha: Alpha, z: complex) -> RootSample:
    eps = 1e-4 * (1.0 + abs(1.0 / z))
    i1 = quadrature.descent_integral(n, alpha, z, epsilon=eps,
                                     check_region=False)
    i2 = quadrature.endpoint_integral(n, alpha, z, check_region=False)
    est = descent_integral_estimate(n, z, alpha)
    split = abs(i1.value + i2.integral.value) if (
        abs(i1.log_modulus) < 700 and abs(i2.integral.log_modulus) < 700) else None
    budget = math.exp(min(i1.abs_error_bound, 700.0)) + math.exp(
        min(i2.integral.abs_error_bound, 700.0))
    return RootSample(
        z=z,
        descent_log_mod=i1.log_modulus,
        endpoint_log_mod=i2.integral.log_modulus,
        descent_nth_root=math.exp(i1.log_modulus / n),
        endpoint_nth_root=math.exp(i2.integral.log_modulus / n),
        one_minus_z_abs=abs(1.0 - z),
        asym_ratio=math.exp(i1.log_modulus - est.log_modulus),
        k_nth_root=abs(i2.k_value) ** (1.0 / n),
        split_cancels=(split is None or split <= budget),
    )


def _run_pipeline(config: ExperimentConfig) -> VerificationReport:
    curve = trace_level_curve(config.alpha,
                              corrector_tol=config.tolerances["corrector"],
                              boundary_tol=config.tolerances["boundary"])
    seps = separatrices(config.alpha)
    records = []
    boundary_tol = config.tolerances["boundary"]
    for n in config.n_list:
        flags: list[str] = []
        zeros = None
        distances: tuple[float, ...] = ()
        max_d = math.nan
        mean_d = math.nan
        cov = math.nan
        labels: tuple[str, ...] = ()
        margins: tuple[float, ...] = ()
        lhp = 0
        region_bad = 0
        samples: list[RootSample] = []
        try:
            p = _build_polynomial(n, config)
            zeros = find_roots(p, precision=config.precision,
                               residual_tol=config.tolerances["residual"])
            dists, max_d, mean_d = distance_to_curve(zeros.zeros, curve,
                                                     restrict_to_E=True)
            distances = tuple(float(d) for d in dists)
            cov = coverage_gap(zeros.zeros, curve)
            lab_list = []
            marg_list = []
            for z in zeros.zeros:
                if z.real <= 0.0:
                    lhp += 1
                lab = classify_region(z, config.alpha,
                                      boundary_tol=boundary_tol)
                lab_list.append(lab.label)
                marg_list.append(lab.margin)
                if lab.label == NOT_IN_E and lab.margin > boundary_tol:
                    region_bad += 1
            labels = tuple(lab_list)
            margins = tuple(marg_list)
            in_e_idx = [i for i, l in enumerate(labels) if l == IN_E]
            for i in _sample_indices(len(in_e_idx), config.samples_per_n):
                z = zeros.zeros[in_e_idx[i]]
                try:
                    samples.append(_diagnose_root(n, config.alpha, z))
                except HypzeroError as exc:
                    flags.append(f"sample z={z:.6g}: {exc}")
        except HypzeroError as exc:
            flags.append(f"n={n}: {exc}")
        records.append(DegreeRecord(
            n=n, zeros=zeros, distances=distances, max_distance=max_d,
            mean_distance=mean_d, coverage_gap=cov, labels=labels,
            margins=margins, left_halfplane_violations=lhp,
            region_violations=region_bad, samples=tuple(samples),
            flags=tuple(flags)))

    complete = [r for r in records if r.zeros is not None]
    zero_free_ok = all(r.left_halfplane_violations == 0
                       and r.region_violations == 0 for r in complete)
    trend_ok = True
    if len(complete) >= 2:
        trend_ok = complete[-1].max_distance < complete[0].max_distance
    passed = (zero_free_ok and trend_ok
              and len(complete) == len(records)
              and all(not r.flags for r in records))
    return VerificationReport(config=config, config_hash=config.hash(),
                              curve=curve, separatrix_pair=seps,
                              records=tuple(records), passed=passed)


def run_theorem_check(config: ExperimentConfig) -> VerificationReport:
    """Full clustering experiment for a complex (or real) parameter."""
    return _run_pipeline(config)


def run_realcase_crosscheck(k: float, l: float, n_list,
                            precision: Precision = DOUBLE,
                            tolerances: dict | None = None,
                            out_dir: str | None = None,
                            formats=("json",)) -> VerificationReport:
    """Clustering cross-check for the shifted real-parameter family."""
    if k <= 0:
        raise ConfigError("k must be positive")
    if l < 0:
        raise ConfigError("l must be nonnegative")
    config = ExperimentConfig(
        alpha=Alpha(k, 0.0), n_list=tuple(n_list), precision=precision,
        tolerances=dict(tolerances or DEFAULT_TOLERANCES),
        out_dir=out_dir, formats=tuple(formats), shift=l)
    return _run_pipeline(config)


# ---------------------------------------------------------------- emission

def emit_report(report: VerificationReport, out_dir: str,
                formats=None) -> list[str]:
    """Write the report files; returns the created paths."""
    formats = tuple(formats) if formats is not None else report.config.formats
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if "json" in formats:
        path = os.path.join(out_dir, "report.json")
        with open(path, "w") as fh:
            fh.write(report.to_json())
        written.append(path)
    if "csv" in formats:
        for rec in report.records:
            if rec.zeros is None:
                continue
            path = os.path.join(out_dir, f"zeros_n{rec.n}.csv")
            with open(path, "w") as fh:
                fh.write("re,im,residual,distance,label,margin\n")
                for i, z in enumerate(rec.zeros.zeros):
                    fh.write(f"{z.real!r},{z.imag!r},"
                             f"{rec.zeros.residuals[i]!r},"
                             f"{rec.distances[i]!r},{rec.labels[i]},"
                             f"{rec.margins[i]!r}\n")
            written.append(path)
    if "svg" in formats:
        for rec in report.records:
            path = os.path.join(out_dir, f"overlay_n{rec.n}.svg")
            zeros = () if rec.zeros is None else rec.zeros.zeros
            with open(path, "w") as fh:
                fh.write(render_svg(report.curve, report.separatrix_pair,
                                    zeros))
            written.append(path)
    return written


def _svg_coords(points, scale, cx, cy):
    return " ".join(f"{(p.real - cx) * scale:.2f},{-(p.imag - cy) * scale:.2f}"
                    for p in points)


def render_svg(curve: LevelCurve, seps, zeros, size: int = 640) -> str:
    """Curve arcs as path elements, separatrices as polylines, zeros as circles.

    Exactly one ``<path>`` per curve arc and one ``<circle>`` per zero, which
    keeps the document structure checkable.
    """
    pts = [p for arc in curve.arcs for p in arc.points]
    pts += list(zeros) + [curve.crossing_point]
    re0, re1 = min(p.real for p in pts), max(p.real for p in pts)
    im0, im1 = min(p.imag for p in pts), max(p.imag for p in pts)
    span = max(re1 - re0, im1 - im0, 1e-9)
    scale = 0.9 * size / span
    cx, cy = 0.5 * (re0 + re1), 0.5 * (im0 + im1)
    half = size / 2
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" '
           f'viewBox="{-half:.0f} {-half:.0f} {size} {size}">']
    colors = {"InE": "#b03030", "NotInE": "#3050b0", "Boundary": "#808080"}
    for arc in curve.arcs:
        coords = _svg_coords(arc.points, scale, cx, cy).split(" ")
        d = "M " + " L ".join(coords)
        color = colors.get(arc.region, "#808080")
        out.append(f'<path d="{d}" fill="none" '
                   f'stroke="{color}" stroke-width="1.5"/>')
    for sep in seps:
        kept = [p for p in sep.points if abs(p.real - cx) * scale <= half
                and abs(p.imag - cy) * scale <= half]
        if len(kept) >= 2:
            out.append(f'<polyline points="{_svg_coords(kept, scale, cx, cy)}" '
                       f'fill="none" stroke="#30a060" stroke-width="0.8" '
                       f'stroke-dasharray="4 3"/>')
    for z in zeros:
        x = (z.real - cx) * scale
        y = -(z.imag - cy) * scale
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.5" fill="#202020"/>')
    out.append("</svg>")
    return "\n".join(out)


def region_map(alpha: Alpha, grid: GridSpec,
               boundary_tol: float = 1e-6) -> list[dict]:
    """Classify every grid point; deterministic row-major ordering."""
    out = []
    w0 = alpha.saddle_base
    for z in grid.points():
        if z == 0 or z == 1:
            out.append({"z": [z.real, z.imag], "label": "Excluded",
                        "margin": 0.0})
            continue
        try:
            lab = classify_region(z, alpha, boundary_tol=boundary_tol)
            out.append({"z": [z.real, z.imag], "label": lab.label,
                        "margin": lab.margin})
        except HypzeroError as exc:
            out.append({"z": [z.real, z.imag], "label": f"Error:{exc}",
                        "margin": float(abs(z - w0))})
    return out

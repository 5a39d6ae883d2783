"""Experiment harness: seeded, reproducible sweeps emitting CSV and SVG.

Each experiment kind reproduces one of the qualitative studies at desk
scale: recovery rates over chorded-cycle graph families and Erdos-Renyi
graphs, partial-DFT recovery versus the certified support fraction, and
sampled maximum-recoverable-sparsity-level (MRSL) sweeps with the coherence
bound and the naive sampling estimate.

Outputs are byte-deterministic given the config: all randomness is seeded,
every CSV row carries the seed that produced it, and a provenance header
(config hash) is written as `#` comment lines.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .dft import coherence_lower_bound, s_max_sampled, symmetrize_omega
from .errors import BudgetExceededError, InputError
from .graphs import DirectedSimpleGraph, erdos_renyi, incidence_matrix
from .linalg import parse_matrix_text
from .recovery import TrialConfig, mrsl_naive, realify, recovery_rate

__all__ = ["ExperimentConfig", "run_experiment", "emit_plot"]

KINDS = (
    "fig3-cycles",
    "fig4-erdos-renyi",
    "fig5-dft-recovery",
    "fig6-mrsl-large",
    "fig7-mrsl-small",
    "custom",
)

DEFAULTS = {
    "fig3-cycles": {
        "cycle_lengths": [3, 5, 7, 9, 11],
        "sparsities": [1, 2, 3],
        "trials": 2000,
        "seed": 0,
    },
    "fig4-erdos-renyi": {
        "vertices": 100,
        "p_exponents": [k / 9 for k in range(1, 11)],
        "sparsities": [1, 2],
        "graphs": 20,
        "trials": 100,
        "seed": 0,
    },
    "fig5-dft-recovery": {
        "n": 19,
        "mbar": 7,
        "sparsities": [1, 2, 3, 4, 5, 6],
        "trials": 1000,
        "seed": 0,
    },
    "fig6-mrsl-large": {
        "n": 1009,
        "omega_sizes": [247 + 20 * j for j in range(14)],
        "sample_size": 1000,
        "seed": 42,
        "mode": "sampled",
    },
    "fig7-mrsl-small": {
        "n": 61,
        "mbar_values": list(range(7, 30)),
        "sample_size": 1000,
        "naive_k": 200,
        "seed": 42,
    },
    "custom": {
        "matrix_file": None,
        "sparsities": [1],
        "trials": 100,
        "seed": 0,
    },
}

FAST_OVERRIDES = {
    "fig3-cycles": {"cycle_lengths": [3, 5], "trials": 100},
    "fig4-erdos-renyi": {
        "graphs": 5,
        "trials": 20,
        "p_exponents": [1 / 9, 5 / 9, 1.0],
    },
    "fig5-dft-recovery": {"trials": 100, "sparsities": [1, 2, 3, 4]},
    "fig6-mrsl-large": {"omega_sizes": [247, 507], "sample_size": 50},
    "fig7-mrsl-small": {
        "mbar_values": [7, 15, 29],
        "sample_size": 100,
        "naive_k": 20,
    },
    "custom": {"trials": 20},
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment run: a kind, its parameter map, and output paths."""

    kind: str
    parameters: dict = field(default_factory=dict)
    output_csv: str = "experiment.csv"
    output_svg: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown experiment kind {self.kind!r}")
        merged = dict(DEFAULTS[self.kind])
        merged.update(self.parameters)
        object.__setattr__(self, "parameters", merged)

    @classmethod
    def from_json(cls, text: str, fast: bool = False) -> "ExperimentConfig":
        d = json.loads(text)
        cfg = cls(
            kind=d["kind"],
            parameters=d.get("parameters", {}),
            output_csv=d.get("output_csv", "experiment.csv"),
            output_svg=d.get("output_svg"),
        )
        if fast:
            params = dict(cfg.parameters)
            params.update(FAST_OVERRIDES[cfg.kind])
            # user-specified values still win over the fast preset
            params.update(d.get("parameters", {}))
            cfg = replace(cfg, parameters=params)
        return cfg

    def digest(self) -> str:
        payload = json.dumps(
            {"kind": self.kind, "parameters": self.parameters}, sort_keys=True
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def chorded_cycle_graph(length: int) -> DirectedSimpleGraph:
    """Cycle on length+1 vertices plus the chord (0, 2): girth 3 for every
    length >= 3, with length+2 edges."""
    if length < 3:
        raise InputError("cycle length must be >= 3")
    verts = length + 1
    edges = [(i, (i + 1) % verts) for i in range(verts)]
    edges.append((0, 2))
    return DirectedSimpleGraph(verts, tuple(edges))


def _rate_row(a, s, trials, seed):
    cfg = TrialConfig(sparsity=s, trials=trials, seed=seed)
    return recovery_rate(np.asarray(a, dtype=float), cfg)


def _run_fig3(p):
    rows = []
    for li, length in enumerate(p["cycle_lengths"]):
        g = chorded_cycle_graph(length)
        a = incidence_matrix(g).to_float_array()
        for s in p["sparsities"]:
            seed = p["seed"] * 10007 + li * 101 + s
            rate = _rate_row(a, s, p["trials"], seed)
            rows.append(
                {
                    "cycle_length": length,
                    "edges": g.edge_count,
                    "sparsity": s,
                    "trials": p["trials"],
                    "seed": seed,
                    "rate": rate,
                }
            )
    return ["cycle_length", "edges", "sparsity", "trials", "seed", "rate"], rows


def _run_fig4(p):
    p_crit = math.log(p["vertices"]) / p["vertices"]
    rows = []
    for e_i, expo in enumerate(p["p_exponents"]):
        prob = p_crit**expo
        for gi in range(p["graphs"]):
            g_seed = p["seed"] * 100003 + e_i * 1009 + gi
            g = erdos_renyi(p["vertices"], prob, g_seed)
            if g.edge_count == 0:
                continue
            a = incidence_matrix(g).to_float_array()
            for s in p["sparsities"]:
                if s > g.edge_count:
                    continue
                t_seed = g_seed * 31 + s
                rate = _rate_row(a, s, p["trials"], t_seed)
                rows.append(
                    {
                        "p_exponent": expo,
                        "p": prob,
                        "graph_seed": g_seed,
                        "edges": g.edge_count,
                        "sparsity": s,
                        "trials": p["trials"],
                        "seed": t_seed,
                        "successes": round(rate * p["trials"]),
                        "rate": rate,
                    }
                )
    header = [
        "p_exponent", "p", "graph_seed", "edges", "sparsity",
        "trials", "seed", "successes", "rate",
    ]
    return header, rows


def _dft_masc_fraction(spec, s: int) -> float:
    """Exact fraction of size-s supports certified always-recoverable."""
    from itertools import combinations

    from .dft import _weight_table

    method = "fcomplement" if spec.mbar is not None else "determinant"
    gammas, weights = _weight_table(spec, method)
    hits = 0
    total = 0
    for sup in combinations(range(spec.n), s):
        mask = np.zeros(spec.n)
        mask[list(sup)] = 1.0
        worst = float((weights * mask[gammas]).sum(axis=1).max())
        hits += worst < 0.5
        total += 1
    return hits / total


def _run_fig5(p):
    n, mbar = p["n"], p["mbar"]
    spec = symmetrize_omega(n, list(range(mbar + 1)) + list(range(n - mbar, n)))
    a = realify(spec.partial_matrix())
    rows = []
    for s in p["sparsities"]:
        seed = p["seed"] * 10007 + s
        rate = _rate_row(a, s, p["trials"], seed)
        frac = _dft_masc_fraction(spec, s)
        rows.append(
            {
                "n": n,
                "mbar": mbar,
                "sparsity": s,
                "trials": p["trials"],
                "seed": seed,
                "rate": rate,
                "masc_fraction": frac,
            }
        )
    header = ["n", "mbar", "sparsity", "trials", "seed", "rate", "masc_fraction"]
    return header, rows


def _run_fig6(p):
    if p.get("mode") == "exact":
        raise BudgetExceededError(
            "exact MRSL enumeration is infeasible at this scale; "
            "use sampled mode"
        )
    n = p["n"]
    rows = []
    for size in p["omega_sizes"]:
        mbar = (size - 1) // 2
        spec = symmetrize_omega(n, list(range(mbar + 1)) + list(range(n - mbar, n)))
        seed = p["seed"] * 10007 + size
        s_hat = s_max_sampled(spec, p["sample_size"], seed)
        bound, s_guar = coherence_lower_bound(spec)
        rows.append(
            {
                "n": n,
                "omega_size": spec.m,
                "mbar": mbar,
                "sample_size": p["sample_size"],
                "seed": seed,
                "s_max_sampled": s_hat,
                "coherence_bound": float(bound),
                "s_guaranteed": s_guar,
            }
        )
    header = [
        "n", "omega_size", "mbar", "sample_size", "seed",
        "s_max_sampled", "coherence_bound", "s_guaranteed",
    ]
    return header, rows


def _run_fig7(p):
    n = p["n"]
    rows = []
    for mbar in p["mbar_values"]:
        spec = symmetrize_omega(n, list(range(mbar + 1)) + list(range(n - mbar, n)))
        seed = p["seed"] * 10007 + mbar
        s_hat = s_max_sampled(spec, p["sample_size"], seed)
        bound, s_guar = coherence_lower_bound(spec)
        naive = mrsl_naive(realify(spec.partial_matrix()), p["naive_k"], seed=seed)
        rows.append(
            {
                "n": n,
                "omega_size": spec.m,
                "mbar": mbar,
                "seed": seed,
                "s_guaranteed": s_guar,
                "coherence_bound": float(bound),
                "s_max_sampled": s_hat,
                "mrsl_naive": naive,
            }
        )
    header = [
        "n", "omega_size", "mbar", "seed", "s_guaranteed",
        "coherence_bound", "s_max_sampled", "mrsl_naive",
    ]
    return header, rows


def _run_custom(p):
    if not p.get("matrix_file"):
        raise InputError("custom experiment requires a matrix_file parameter")
    with open(p["matrix_file"]) as fh:
        m = parse_matrix_text(fh.read())
    a = m.to_float_array()
    rows = []
    for s in p["sparsities"]:
        seed = p["seed"] * 10007 + s
        rate = _rate_row(a, s, p["trials"], seed)
        rows.append(
            {
                "sparsity": s,
                "trials": p["trials"],
                "seed": seed,
                "rate": rate,
            }
        )
    return ["sparsity", "trials", "seed", "rate"], rows


_RUNNERS = {
    "fig3-cycles": _run_fig3,
    "fig4-erdos-renyi": _run_fig4,
    "fig5-dft-recovery": _run_fig5,
    "fig6-mrsl-large": _run_fig6,
    "fig7-mrsl-small": _run_fig7,
    "custom": _run_custom,
}


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Execute the configured sweep, write its CSV, return a summary."""
    header, rows = _RUNNERS[cfg.kind](cfg.parameters)
    lines = [
        f"# kind: {cfg.kind}",
        f"# config-hash: {cfg.digest()}",
        ",".join(header),
    ]
    for row in rows:
        lines.append(",".join(_fmt(row[h]) for h in header))
    with open(cfg.output_csv, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    summary = {"kind": cfg.kind, "rows": len(rows), "csv": cfg.output_csv}
    if cfg.output_svg is not None:
        emit_plot(cfg.output_csv, _default_plot_spec(cfg.kind), cfg.output_svg)
        summary["svg"] = cfg.output_svg
    return summary


def _default_plot_spec(kind: str) -> dict:
    if kind == "fig4-erdos-renyi":
        return {
            "type": "heatmap",
            "x": "p_exponent",
            "y": "sparsity",
            "value": "rate",
            "title": "recovery rate over Erdos-Renyi graphs",
        }
    if kind in ("fig6-mrsl-large", "fig7-mrsl-small"):
        return {
            "type": "line",
            "x": "omega_size",
            "y": ["s_guaranteed", "s_max_sampled"]
            + (["mrsl_naive"] if kind == "fig7-mrsl-small" else []),
            "title": "sparsity bounds versus measurement count",
        }
    if kind == "fig5-dft-recovery":
        return {
            "type": "line",
            "x": "sparsity",
            "y": ["rate", "masc_fraction"],
            "title": "recovery rate and certified support fraction",
        }
    return {"type": "line", "x": "sparsity", "y": ["rate"], "title": "recovery rate"}


def _read_csv(path: str):
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    data_lines = [ln for ln in lines if not ln.startswith("#")]
    if not data_lines:
        raise InputError("CSV has no data rows")
    header = data_lines[0].split(",")
    rows = [dict(zip(header, ln.split(","))) for ln in data_lines[1:]]
    if not rows:
        raise InputError("CSV has no data rows")
    return header, rows


def emit_plot(csv_path: str, plot_spec: dict, svg_path: str) -> None:
    """Render a CSV as a standalone SVG line plot or heatmap.

    Hand-emitted markup, byte-deterministic given the inputs.
    """
    header, rows = _read_csv(csv_path)
    kind = plot_spec.get("type", "line")
    needed = [plot_spec["x"]]
    needed += plot_spec["y"] if kind == "line" else [plot_spec["y"], plot_spec["value"]]
    missing = [c for c in needed if c not in header]
    if missing:
        raise InputError(f"CSV is missing columns: {', '.join(missing)}")
    if kind == "line":
        svg = _line_svg(rows, plot_spec)
    elif kind == "heatmap":
        svg = _heatmap_svg(rows, plot_spec)
    else:
        raise InputError(f"unknown plot type {kind!r}")
    with open(svg_path, "w") as fh:
        fh.write(svg)


_W, _H, _PAD = 640, 420, 56


def _scale(vals, lo_px, hi_px):
    lo, hi = min(vals), max(vals)
    span = (hi - lo) or 1.0
    return lambda v: lo_px + (v - lo) / span * (hi_px - lo_px)


def _svg_open(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W // 2}" y="24" text-anchor="middle" font-size="15" '
        f'font-family="sans-serif">{title}</text>',
    ]


def _axes(parts, xlabel, ylabel):
    parts.append(
        f'<line x1="{_PAD}" y1="{_H - _PAD}" x2="{_W - _PAD}" y2="{_H - _PAD}" '
        'stroke="black"/>'
    )
    parts.append(
        f'<line x1="{_PAD}" y1="{_PAD}" x2="{_PAD}" y2="{_H - _PAD}" stroke="black"/>'
    )
    parts.append(
        f'<text x="{_W // 2}" y="{_H - 12}" text-anchor="middle" font-size="12" '
        f'font-family="sans-serif">{xlabel}</text>'
    )
    parts.append(
        f'<text x="16" y="{_H // 2}" text-anchor="middle" font-size="12" '
        f'font-family="sans-serif" transform="rotate(-90 16 {_H // 2})">{ylabel}</text>'
    )


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _line_svg(rows, spec) -> str:
    xcol, ycols = spec["x"], spec["y"]
    xs = [float(r[xcol]) for r in rows]
    all_y = [float(r[c]) for r in rows for c in ycols]
    sx = _scale(xs, _PAD, _W - _PAD)
    sy = _scale(all_y, _H - _PAD, _PAD)
    parts = _svg_open(spec.get("title", ""))
    _axes(parts, xcol, " / ".join(ycols))
    for ci, col in enumerate(ycols):
        pts = sorted(zip(xs, (float(r[col]) for r in rows)))
        path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        color = _COLORS[ci % len(_COLORS)]
        parts.append(f'<polyline points="{path}" fill="none" stroke="{color}"/>')
        parts.append(
            f'<text x="{_W - _PAD + 4}" y="{_PAD + 16 * ci + 10}" font-size="11" '
            f'font-family="sans-serif" fill="{color}">{col}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _heatmap_svg(rows, spec) -> str:
    xcol, ycol, vcol = spec["x"], spec["y"], spec["value"]
    xs = sorted({float(r[xcol]) for r in rows})
    ys = sorted({float(r[ycol]) for r in rows})
    # mean over rows sharing a cell (e.g. multiple graph seeds)
    acc: dict[tuple[float, float], list[float]] = {}
    for r in rows:
        acc.setdefault((float(r[xcol]), float(r[ycol])), []).append(float(r[vcol]))
    cw = (_W - 2 * _PAD) / len(xs)
    ch = (_H - 2 * _PAD) / len(ys)
    parts = _svg_open(spec.get("title", ""))
    _axes(parts, xcol, ycol)
    for (x, y), vals in sorted(acc.items()):
        v = sum(vals) / len(vals)
        shade = int(round(255 * (1.0 - v)))
        px = _PAD + xs.index(x) * cw
        py = _H - _PAD - (ys.index(y) + 1) * ch
        parts.append(
            f'<rect x="{px:.2f}" y="{py:.2f}" width="{cw:.2f}" height="{ch:.2f}" '
            f'fill="rgb({shade},{shade},255)"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

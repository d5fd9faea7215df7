"""Figure rendering for experiment reports.

One PNG per report, built from the bundle's tables so the figure always
matches the delimited output written next to it.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .manifests import ResultBundle, Table

__all__ = ["render_figures"]


def _table(bundle: ResultBundle, name: str) -> Table | None:
    for t in bundle.tables:
        if t.name == name:
            return t
    return None


def _column(table: Table, name: str) -> list:
    i = table.columns.index(name)
    return [row[i] for row in table.rows]


def _save(fig, out_dir: Path, name: str) -> Path:
    path = out_dir / name
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def _fig_expander(bundle: ResultBundle, out_dir: Path) -> list[Path]:
    table = _table(bundle, "spectra")
    if table is None:
        return []
    qs, g1, g2 = [], [], []
    for row in table.rows:
        d = dict(zip(table.columns, row))
        if d["one_sided_gap"] is None:
            continue
        qs.append(d["q"])
        g1.append(d["one_sided_gap"])
        g2.append(d["two_sided_gap"])
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(qs, g1, "o-", ms=4, label="one-sided gap")
    ax.plot(qs, g2, "s--", ms=4, label="two-sided gap")
    ax.set_xlabel("modulus q")
    ax.set_ylabel("spectral gap")
    ax.set_ylim(bottom=0)
    ax.set_title("Cayley graph spectral gaps of mod-q quotients")
    ax.legend()
    ax.grid(alpha=0.3)
    return [_save(fig, out_dir, "expander_gaps.png")]


def _fig_monodromy(bundle: ResultBundle, out_dir: Path) -> list[Path]:
    atlas = _table(bundle, "atlas")
    if atlas is not None:
        counts: dict[str, int] = {}
        for kind in _column(atlas, "closure"):
            counts[kind] = counts.get(kind, 0) + 1
        labels = sorted(counts)
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.bar(labels, [counts[k] for k in labels], color="tab:blue")
        ax.set_ylabel("families")
        ax.set_title("Closure classes across the atlas")
        ax.grid(alpha=0.3, axis="y")
        return [_save(fig, out_dir, "monodromy_closures.png")]
    alpha = bundle.outputs.get("alpha")
    beta = bundle.outputs.get("beta")
    if not alpha or not beta:
        return []

    def angles(strs: list[str]) -> list[float]:
        out = []
        for s in strs:
            if "/" in s:
                p, q = s.split("/")
                out.append(2 * math.pi * int(p) / int(q))
            else:
                out.append(2 * math.pi * int(s))
        return out

    fig, ax = plt.subplots(figsize=(5, 5))
    circle = [2 * math.pi * k / 400 for k in range(401)]
    ax.plot([math.cos(t) for t in circle], [math.sin(t) for t in circle], color="0.8")
    for t in angles(alpha):
        ax.plot(math.cos(t), math.sin(t), "o", color="tab:blue", ms=9, alpha=0.7)
    for t in angles(beta):
        ax.plot(math.cos(t), math.sin(t), "s", color="tab:red", ms=9, alpha=0.7)
    ax.plot([], [], "o", color="tab:blue", label="numerator eigenvalues")
    ax.plot([], [], "s", color="tab:red", label="denominator eigenvalues")
    ax.set_aspect("equal")
    ax.set_title("Local monodromy eigenvalues on the unit circle")
    ax.legend(loc="upper right", fontsize=8)
    ax.axis("off")
    return [_save(fig, out_dir, "monodromy_eigenvalues.png")]


def _fig_cartan(bundle: ResultBundle, out_dir: Path) -> list[Path]:
    sizes = bundle.outputs.get("component_sizes") or []
    if not sizes:
        return []
    fig, ax = plt.subplots(figsize=(6.5, 4))
    ax.bar(range(len(sizes)), sizes, color="tab:green")
    ax.set_xlabel("component (sorted by size)")
    ax.set_ylabel("vertices")
    ax.set_title(
        f"Root graph components: {bundle.outputs['root_count']} roots, "
        f"{bundle.outputs['edge_count']} edges"
    )
    ax.grid(alpha=0.3, axis="y")
    return [_save(fig, out_dir, "cartan_components.png")]


def _fig_rotation(bundle: ResultBundle, out_dir: Path) -> list[Path]:
    table = _table(bundle, "levels")
    if table is None:
        return []
    ls = _column(table, "l")
    lam = _column(table, "lam_max")
    gaps = _column(table, "gap_after")
    two_t = bundle.outputs["two_t"]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(ls, lam, "o-", ms=4, label="largest eigenvalue")
    ax.axhline(two_t, color="0.5", ls=":", label=f"trivial bound {two_t}")
    pts = [(l, g) for l, g in zip(ls, gaps) if g is not None]
    if pts:
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "s--", ms=4, label="running gap")
    ax.set_xlabel("harmonic level l")
    ax.set_ylabel("value")
    ax.set_title("Averaging operator spectra by level")
    ax.legend()
    ax.grid(alpha=0.3)
    return [_save(fig, out_dir, "rotation_gap.png")]


def _fig_zaremba(bundle: ResultBundle, out_dir: Path) -> list[Path]:
    table = _table(bundle, "denominators")
    if table is None:
        return []
    qs = _column(table, "q")
    achieved = _column(table, "achieved")
    running = []
    hit = 0
    for i, a in enumerate(achieved, start=1):
        hit += 1 if a else 0
        running.append(hit / i)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(qs, running, color="tab:blue", label="running density")
    misses = [q for q, a in zip(qs, achieved) if not a]
    if misses:
        ax.plot(misses, [0.0] * len(misses), "|", color="tab:red", ms=12, label="exceptions")
    ax.set_xlabel("denominator q")
    ax.set_ylabel("fraction achieved")
    ax.set_ylim(-0.05, 1.05)
    ax.set_title(f"Denominators with quotients bounded by {bundle.outputs['bound']}")
    ax.legend()
    ax.grid(alpha=0.3)
    return [_save(fig, out_dir, "zaremba_density.png")]


def _fig_apollonian(bundle: ResultBundle, out_dir: Path) -> list[Path]:
    curv = _table(bundle, "curvatures")
    res = _table(bundle, "residues")
    if curv is None or res is None:
        return []
    bound = bundle.outputs["bound"]
    values = [c for c in _column(curv, "curvature") if 0 < c <= bound]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    xs = sorted(values)
    ax1.plot(xs, range(1, len(xs) + 1), color="tab:blue")
    ax1.set_xlabel("curvature bound x")
    ax1.set_ylabel("distinct curvatures <= x")
    ax1.set_title("Curvature counting")
    ax1.grid(alpha=0.3)
    residues = _column(res, "residue_mod_24")
    counts = _column(res, "count")
    ax2.bar(residues, counts, color="tab:orange")
    ax2.set_xlabel("curvature mod 24")
    ax2.set_ylabel("count")
    ax2.set_xticks(range(0, 24, 2))
    ax2.set_title("Residue classes mod 24")
    ax2.grid(alpha=0.3, axis="y")
    fig.tight_layout()
    return [_save(fig, out_dir, "apollonian_orbit.png")]


def _fig_walk(bundle: ResultBundle, out_dir: Path) -> list[Path]:
    table = _table(bundle, "reducibility")
    if table is None:
        return []
    lengths = _column(table, "length")
    trials = _column(table, "trials")
    irr = [a / b for a, b in zip(_column(table, "irreducible"), trials)]
    red = [a / b for a, b in zip(_column(table, "reducible"), trials)]
    und = [a / b for a, b in zip(_column(table, "undetermined"), trials)]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(lengths, irr, "o-", label="irreducible")
    ax.plot(lengths, red, "s--", label="reducible")
    if any(u > 0 for u in und):
        ax.plot(lengths, und, "^:", label="undetermined")
    ax.set_xlabel("word length")
    ax.set_ylabel("fraction of sampled words")
    ax.set_ylim(-0.05, 1.05)
    ax.set_title("Characteristic polynomial reducibility along random walks")
    ax.legend()
    ax.grid(alpha=0.3)
    return [_save(fig, out_dir, "walk_reducibility.png")]


def _fig_ball(bundle: ResultBundle, out_dir: Path) -> list[Path]:
    table = _table(bundle, "growth")
    if table is None:
        return []
    radii = _column(table, "radius")
    cumulative = _column(table, "cumulative")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(radii, cumulative, "o-", color="tab:blue")
    if max(cumulative) > 10 * max(cumulative[0], 1):
        ax.set_yscale("log")
    ax.set_xlabel("word-metric radius")
    ax.set_ylabel("ball size")
    ax.set_title("Growth of the generated group")
    ax.grid(alpha=0.3, which="both")
    return [_save(fig, out_dir, "ball_growth.png")]


_RENDERERS = {
    "expander": _fig_expander,
    "monodromy": _fig_monodromy,
    "cartan": _fig_cartan,
    "rotation": _fig_rotation,
    "zaremba": _fig_zaremba,
    "apollonian": _fig_apollonian,
    "walk": _fig_walk,
    "ball": _fig_ball,
}


def render_figures(bundle: ResultBundle, out_dir: str | Path) -> list[Path]:
    """Render the figure for a bundle; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    renderer = _RENDERERS.get(bundle.kind)
    if renderer is None:
        return []
    return renderer(bundle, out)

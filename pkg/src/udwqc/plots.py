"""Matplotlib rendering of sweep CSVs for the CLI's report path.

Each sweep subcommand can emit a vector figure next to its CSV; the readers
here are also what the figure tests use.  matplotlib is imported lazily so
the numerical paths never depend on it.
"""
from __future__ import annotations

import csv
from pathlib import Path


def read_sweep_csv(path) -> tuple[dict, list[str], list[dict]]:
    """Parse the sweep CSV schema: comment header, column row, data rows."""
    path = Path(path)
    meta: dict = {}
    with path.open() as fh:
        first = fh.readline().strip()
        if not first.startswith("#"):
            raise ValueError(f"{path}: missing '# udw ...' header line")
        for token in first.lstrip("# ").split()[1:]:
            if "=" in token:
                key, val = token.split("=", 1)
                meta[key] = val
            else:
                meta.setdefault("version", token)
        reader = csv.DictReader(fh)
        columns = list(reader.fieldnames or [])
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return meta, columns, rows


def _require(columns, needed, path):
    for col in needed:
        if col not in columns:
            raise ValueError(f"{path}: missing column {col!r}")


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_capacity(csv_path, out_path) -> Path:
    meta, cols, rows = read_sweep_csv(csv_path)
    _require(cols, ["lambda_phi", "capacity"], csv_path)
    plt = _figure()
    lam = [float(r["lambda_phi"]) for r in rows]
    cap = [float(r["capacity"]) for r in rows]
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    ax.plot(lam, cap, "o-", color="tab:blue", ms=4)
    ax.axhline(1.0, color="0.7", lw=0.8, ls="--")
    ax.set_xlabel(r"coupling $\lambda_\varphi$")
    ax.set_ylabel("coherent information (bits)")
    ax.set_title("n=1 capacity of the field-mediated transfer channel")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return Path(out_path)


def render_diamond(csv_path, out_path) -> Path:
    meta, cols, rows = read_sweep_csv(csv_path)
    _require(cols, ["lambda_phi", "diamond"], csv_path)
    plt = _figure()
    lam = [float(r["lambda_phi"]) for r in rows]
    dia = [float(r["diamond"]) for r in rows]
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    ax.plot(lam, dia, "s-", color="tab:red", ms=4)
    ax.set_xlabel(r"coupling $\lambda_\varphi$")
    ax.set_ylabel("diamond distance")
    pair = meta.get("pair", "")
    ax.set_title(f"field vs qubit channel distance{' (' + pair + ')' if pair else ''}")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return Path(out_path)


def render_noise(csv_path, out_path) -> Path:
    meta, cols, rows = read_sweep_csv(csv_path)
    _require(cols, ["lambda_phi", "b", "capacity", "flag"], csv_path)
    plt = _figure()
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    by_b: dict = {}
    for r in rows:
        by_b.setdefault(r["b"], []).append(r)
    for bval, group in sorted(by_b.items(), key=lambda kv: float(kv[0])):
        ok = [r for r in group if r["flag"] == "ok"]
        ax.plot([float(r["lambda_phi"]) for r in ok],
                [float(r["capacity"]) for r in ok],
                "o-", ms=4, label=f"b = {float(bval):g}")
    ax.set_xlabel(r"coupling $\lambda_\varphi$")
    ax.set_ylabel("coherent information (bits)")
    ax.set_title("capacity with cross-talk noise")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return Path(out_path)


def render_overlap(csv_path, out_path) -> Path:
    meta, cols, rows = read_sweep_csv(csv_path)
    _require(cols, ["gamma_phi", "b", "overlap"], csv_path)
    plt = _figure()
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    by_b: dict = {}
    for r in rows:
        by_b.setdefault(r["b"], []).append(r)
    for bval, group in sorted(by_b.items(), key=lambda kv: float(kv[0])):
        ax.plot([float(r["gamma_phi"]) for r in group],
                [float(r["overlap"]) for r in group],
                "-", label=f"b = {float(bval):g}")
    ax.set_xlabel(r"dephasing strength $\gamma_\varphi$")
    ax.set_ylabel("dephased inner product")
    ax.set_title("cross-talk dephasing of the coherent overlap")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return Path(out_path)


RENDERERS = {
    "capacity": render_capacity,
    "diamond": render_diamond,
    "noise": render_noise,
    "overlap": render_overlap,
}

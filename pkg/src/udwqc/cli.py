"""Command-line front end: verification suite, parameter sweeps, CSV emission.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 backend disagreement.  Identical configuration and seed produce
byte-identical CSV output.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__

EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_BACKEND_MISMATCH = 3

BOB_STATES = {
    "+y": np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2.0),
    "-y": np.array([1.0, -1.0j], dtype=complex) / np.sqrt(2.0),
    "0": np.array([1.0, 0.0], dtype=complex),
    "1": np.array([0.0, 1.0], dtype=complex),
    "+": np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
    "-": np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0),
}


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        if np.isnan(x):
            return "nan"
        return f"{x:.12g}"
    return str(x)


def write_csv(path, columns, rows, seed, backend, extra_meta: dict | None = None):
    path = Path(path)
    meta = f"# udw v{__version__} seed={seed} backend={backend}"
    for key, val in (extra_meta or {}).items():
        meta += f" {key}={val}"
    lines = [meta, ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    path.write_text("\n".join(lines) + "\n")
    return path


def _grid(lmin: float, lmax: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if lmin > lmax:
        raise ValueError("grid bounds must satisfy min <= max")
    if steps == 1:
        return np.array([lmin])
    return np.linspace(lmin, lmax, steps)


def _maybe_plot(args, kind: str, csv_path: Path):
    if not getattr(args, "plot", False):
        return
    from .plots import RENDERERS

    out = csv_path.with_suffix(".svg")
    RENDERERS[kind](csv_path, out)
    print(f"wrote {out}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_capacity(args) -> int:
    from .field import make_model
    from .channels import build_channel
    from .metrics import capacity_n1

    grid = _grid(args.lmin, args.lmax, args.steps)
    bob = BOB_STATES[args.bob]
    rows = []
    for lam in grid:
        ch = build_channel("FieldQST", make_model(float(lam), args.gamma,
                                                  warn_constraint=False),
                           bob_init=bob, backend=args.backend)
        rows.append({
            "lambda_phi": float(lam),
            "gamma": args.gamma,
            "capacity": capacity_n1(ch),
            "backend": args.backend,
        })
    csv_path = write_csv(args.out, ["lambda_phi", "gamma", "capacity", "backend"],
                         rows, args.seed, args.backend)
    print(f"wrote {csv_path} ({len(rows)} rows)")
    _maybe_plot(args, "capacity", csv_path)
    return EXIT_OK


def _diamond_point(task):
    lam, gamma, pair, bob, backend, coarse, topk, point_seed = task
    from .field import make_model
    from .metrics import build_diamond_pair, diamond_distance

    params = make_model(lam, gamma, warn_constraint=False)
    ch1, ch2 = build_diamond_pair(pair, params, bob_init=bob, backend=backend)
    res = diamond_distance(ch1, ch2, n_coarse=coarse, top_k=topk, seed=point_seed)
    return {
        "lambda_phi": lam,
        "gamma": gamma,
        "diamond": res.value,
        "starts": res.starts_used,
        "converged": res.converged,
    }


def cmd_diamond(args) -> int:
    grid = _grid(args.lmin, args.lmax, args.steps)
    bob = BOB_STATES[args.bob]
    # Per-point seeds make the result independent of the worker partition.
    tasks = [
        (float(lam), args.gamma, args.pair, bob, args.backend, args.coarse,
         args.topk, (args.seed + 1000003 * k) % (2**63))
        for k, lam in enumerate(grid)
    ]
    if args.workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_diamond_point, tasks))
    else:
        rows = [_diamond_point(t) for t in tasks]
    csv_path = write_csv(args.out, ["lambda_phi", "gamma", "diamond", "starts", "converged"],
                         rows, args.seed, args.backend, {"pair": args.pair})
    print(f"wrote {csv_path} ({len(rows)} rows)")
    _maybe_plot(args, "diamond", csv_path)
    return EXIT_OK


def cmd_noise(args) -> int:
    from .noise import NoiseParams, noisy_capacity

    grid = _grid(args.lmin, args.lmax, args.steps)
    base = NoiseParams(gamma_phi=args.gamma_phi, alpha_sq=args.alpha_sq,
                       smear_norm=(2.0 * np.pi) ** 1.5 * args.sigma)
    rows = []
    for b in args.b:
        sweep = noisy_capacity(grid, b, noise=base, gamma=args.gamma,
                               sign=args.sign, bob_init=BOB_STATES[args.bob],
                               backend=args.backend)
        for r in sweep:
            rows.append({
                "lambda_phi": r.params["lambda_phi"],
                "b": b,
                "lambda_eff": r.extra.get("lambda_eff", float("nan")),
                "capacity": r.value,
                "flag": r.flag,
            })
    csv_path = write_csv(args.out, ["lambda_phi", "b", "lambda_eff", "capacity", "flag"],
                         rows, args.seed, args.backend, {"sign": args.sign})
    print(f"wrote {csv_path} ({len(rows)} rows)")
    _maybe_plot(args, "noise", csv_path)
    return EXIT_OK


def cmd_overlap(args) -> int:
    from .noise import NoiseParams, crosstalk_factor

    grid = _grid(args.gmin, args.gmax, args.steps)
    rows = []
    for b in args.b:
        for g in grid:
            p = NoiseParams(gamma_phi=float(g), alpha_sq=args.alpha_sq, b=b)
            rows.append({
                "gamma_phi": float(g),
                "b": b,
                "overlap": crosstalk_factor(p, method="closed"),
            })
    csv_path = write_csv(args.out, ["gamma_phi", "b", "overlap"],
                         rows, args.seed, "closed-form")
    print(f"wrote {csv_path} ({len(rows)} rows)")
    _maybe_plot(args, "overlap", csv_path)
    return EXIT_OK


def _verify_checks(seed: int):
    """The named checks behind `udw verify`; yields (name, passed, detail)."""
    from .field import displacement_reduce, fock_realize, make_model, overlap
    from .gates import build_gate, verify_truth_table
    from .channels import BackendMismatchError, build_channel
    from .metrics import capacity_n1, diamond_distance, unitary_diamond_oracle

    qst = build_gate("QST")
    eq9 = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 0, 0]], dtype=complex)
    yield ("QST equals the two-CNOT product matrix", np.array_equal(qst.mat, eq9), "")

    c21 = build_gate("CNOT21_Z").mat
    c12 = build_gate("CNOT12").mat
    swap = build_gate("SWAP").mat
    yield ("SWAP equals three chained CNOTs", np.array_equal(swap, c21 @ c12 @ c21), "")
    yield ("CNOT(2,1) x-projector form matches x-powers",
           np.array_equal(build_gate("CNOT21_X").mat, c21), "")

    tables_ok = all(verify_truth_table(k).passed for k in ("X", "Z", "Y", "CNOT12", "CNOT21_Z", "H"))
    yield ("truth tables reproduced up to per-row phase", tables_ok, "")

    params = make_model(1.5, warn_constraint=False)
    rep = fock_realize(params, beta_max=3.2)
    dev = 0.0
    for lam in (0.3, 1.0, 1.7):
        p = make_model(lam, warn_constraint=False)
        r = fock_realize(p, beta_max=2.2 * lam + 0.1)
        plus = r.coherent_vector(p.alpha_phi)
        minus = r.coherent_vector(-p.alpha_phi)
        dev = max(dev, abs(abs(np.vdot(plus, minus)) - p.epsilon))
    yield ("coherent overlap matches the Fock inner product", dev < 1e-10, f"dev {dev:.2e}")

    d1 = displacement_reduce([params.displacement("pi", 1.0), params.displacement("phi", 1.0)])
    yield ("displacement product carries the cross phase",
           abs(d1.phase - np.exp(1j * params.gamma)) < 1e-12, "")

    try:
        build_channel("FieldQST", params, backend="both")
        yield ("symbolic and Fock channel builds agree", True, "")
    except BackendMismatchError as err:
        yield ("symbolic and Fock channel builds agree", False, str(err))

    cap = capacity_n1(build_channel("QubitQST"))
    yield ("ideal qubit transfer channel has unit capacity", abs(cap - 1.0) < 1e-9, f"{cap:.12f}")

    from .channels import unitary_channel
    ident = unitary_channel(np.eye(2))
    xch = unitary_channel(build_gate("X"))
    d = diamond_distance(ident, xch, n_coarse=2000, top_k=5, seed=seed)
    oracle = unitary_diamond_oracle(np.eye(2), build_gate("X").mat)
    yield ("diamond optimizer matches the unitary oracle",
           abs(d.value - oracle) < 1e-6, f"{d.value:.8f} vs {oracle:.8f}")


def cmd_verify(args) -> int:
    failures = 0
    mismatch = False
    for name, ok, detail in _verify_checks(args.seed):
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] {name}"
        if detail and not ok:
            line += f"  ({detail})"
        print(line)
        if not ok:
            failures += 1
            if "backend" in name:
                mismatch = True
    if failures:
        print(f"{failures} check(s) failed")
        return EXIT_BACKEND_MISMATCH if mismatch else EXIT_SUITE_FAILURE
    print("all checks passed")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="udw",
        description="Field-mediated quantum gate and channel simulations",
    )
    parser.add_argument("--config", help="JSON file of defaults; flags override")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_out=True):
        p.add_argument("--gamma", type=float, default=float(np.pi / 4.0),
                       help="constraint phase in radians (default pi/4)")
        p.add_argument("--bob", choices=sorted(BOB_STATES), default="+y",
                       help="receiver initialization")
        p.add_argument("--backend", choices=["symbolic", "fock", "both"],
                       default="symbolic")
        p.add_argument("--seed", type=int, default=0)
        if needs_out:
            p.add_argument("--out", required=True, help="output CSV path")
            p.add_argument("--plot", action="store_true",
                           help="also render an SVG figure next to the CSV")

    p = sub.add_parser("verify", help="run the named verification checks")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("capacity", help="coupling sweep of the transfer capacity")
    p.add_argument("--lmin", type=float, default=0.2)
    p.add_argument("--lmax", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=15)
    common(p)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("diamond", help="coupling sweep of the diamond distance")
    p.add_argument("--pair", choices=["qst", "cnot1", "cnot2q", "hadamard"],
                   default="qst")
    p.add_argument("--lmin", type=float, default=0.5)
    p.add_argument("--lmax", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--coarse", type=int, default=20000,
                   help="Haar-random coarse samples per grid point")
    p.add_argument("--topk", type=int, default=20,
                   help="candidates refined by local search")
    p.add_argument("--workers", type=int, default=1,
                   help="worker processes for grid points (rows stay in grid order)")
    common(p)
    p.set_defaults(func=cmd_diamond)

    p = sub.add_parser("noise", help="cross-talk noise sweep of the capacity")
    p.add_argument("--lmin", type=float, default=0.3)
    p.add_argument("--lmax", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--b", type=float, nargs="+", default=[0.0, 0.5, 1.0],
                   help="cross-talk multiples")
    p.add_argument("--sign", choices=["as-printed", "quadrature-matched"],
                   default="as-printed")
    p.add_argument("--gamma-phi", dest="gamma_phi", type=float, default=1.0)
    p.add_argument("--alpha-sq", dest="alpha_sq", type=float, default=1.0)
    p.add_argument("--sigma", type=float, default=1.0,
                   help="Gaussian smearing width")
    common(p)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("overlap", help="dephased-overlap curves over gamma_phi")
    p.add_argument("--gmin", type=float, default=0.01)
    p.add_argument("--gmax", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=40)
    p.add_argument("--b", type=float, nargs="+", default=[0.0, 0.5, 1.0, 2.0])
    p.add_argument("--alpha-sq", dest="alpha_sq", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_overlap)

    return parser


def _apply_config(parser, argv):
    """Load --config JSON as defaults; explicit flags keep priority."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    try:
        cfg_path = argv[idx + 1]
    except IndexError:
        raise ValueError("--config requires a path") from None
    try:
        cfg = json.loads(Path(cfg_path).read_text())
    except (OSError, json.JSONDecodeError) as err:
        raise ValueError(f"cannot read config {cfg_path}: {err}") from None
    if not isinstance(cfg, dict):
        raise ValueError("config file must hold a JSON object")
    out = list(argv)
    for key, val in cfg.items():
        flag = "--" + key.replace("_", "-")
        if flag in argv:
            continue
        if isinstance(val, bool):
            if val:
                out.append(flag)
        elif isinstance(val, list):
            out.append(flag)
            out.extend(str(v) for v in val)
        else:
            out.extend([flag, str(val)])
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    warnings.filterwarnings("ignore", message="constraint ratio")
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except ValueError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except SystemExit as err:
        return EXIT_CONFIG_ERROR if (err.code or 0) != 0 else EXIT_OK
    try:
        return args.func(args)
    except ValueError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except Exception as err:  # noqa: BLE001 - surfaced as exit code
        from .channels import BackendMismatchError

        if isinstance(err, BackendMismatchError):
            print(f"backend disagreement: {err}", file=sys.stderr)
            return EXIT_BACKEND_MISMATCH
        raise


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end.

Every subcommand resolves its settings as flag > config file > default,
computes deterministically from the resolved settings, and writes CSV
with a comment header carrying the package version and a hash of the
settings, so identical invocations produce identical bytes.

Exit codes: 0 success, 2 bad configuration or arguments, 3 a measured
error exceeded its claimed bound, 4 a capacity limit was hit.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .construct import TARGETS, build_for_target, get_target, measure_suite, reports_to_csv
from .measures import CapacityError, sample_measure
from .network import HypothesisSpaceSpec, forward, in_hypothesis_space, project_M
from .regression import (
    MetaDistribution,
    _TAG_NOISE,
    _TAG_REF,
    _TAG_SPEC,
    _stream,
    decompose_error,
    erm_train,
    generate,
    load_dataset,
    save_dataset,
)
from .theory import covering_bound

_BOUND_SLACK = 1e-9

_DEFAULT_PRIOR = {"kind": "gaussian-family", "center_radius": 0.6, "scale_lo": 0.1, "scale_hi": 0.4}

_DEFAULTS = {
    "gen-data": {
        "target": "radial-d1-id", "prior": _DEFAULT_PRIOR, "noise": 0.0,
        "m": 16, "n": 64, "n_ref": 4096, "seed": 0, "out": "dataset", "jobs": 1,
    },
    "construct": {
        "target": "poly-prod-abs", "N": [2, 4, 8], "seed": 0,
        "out": None, "nets_dir": None, "jobs": 1,
    },
    "approx-rate": {
        "targets": None, "N_grid": [2, 4, 8, 16, 32], "seed": 0,
        "suite_size": 220, "out": None, "jobs": 1,
    },
    "learn-rate": {
        "target": "radial-d1-id", "prior": _DEFAULT_PRIOR, "noise": 0.0,
        "m_grid": [64, 128, 256, 512, 1024], "beta": 1.0,
        "N_multiplier": 1.0, "n_multiplier": None, "n_cap": 256, "n_ref": 1024,
        "epochs": 40, "step": 0.05, "mc_size": 200,
        "seed": 0, "out": None, "jobs": 1,
    },
    "cover-bound": {
        "R": 1.0, "d": 2, "q": 2, "variant": "proof",
        "N_grid": [1, 2, 4, 8], "eps_grid": [0.5, 0.1, 0.02],
        "seed": 0, "out": None, "jobs": 1,
    },
    "decompose": {
        "target": "radial-d1-id", "prior": _DEFAULT_PRIOR, "noise": 0.05,
        "m": 24, "n": 64, "n_ref": 1024, "N": 2, "epochs": 30, "step": 0.05,
        "mc_size": 64, "runs": 1, "seed": 0, "out": None, "jobs": 1,
    },
    "train": {
        "data_dir": "dataset", "N": 2, "epochs": 40, "step": 0.05,
        "seed": 0, "out": "net.json", "jobs": 1,
    },
}


def _resolve(command: str, args) -> dict:
    cfg = json.loads(json.dumps(_DEFAULTS[command]))
    if args.config is not None:
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        if not isinstance(file_cfg, dict):
            raise ValueError("config file must hold a JSON object")
        unknown = sorted(set(file_cfg) - set(cfg))
        if unknown:
            raise ValueError(f"unknown config keys for {command}: {unknown}")
        cfg.update(file_cfg)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.out is not None:
        cfg["out"] = args.out
    if args.jobs is not None:
        cfg["jobs"] = args.jobs
    if cfg.get("jobs", 1) < 1:
        raise ValueError("jobs must be >= 1")
    return cfg


def _config_hash(cfg: dict) -> str:
    hashed = {k: v for k, v in cfg.items() if k != "out"}
    blob = json.dumps(hashed, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _header(cfg: dict) -> str:
    return f"# distreg_version={__version__} config_hash={_config_hash(cfg)}\n"


def _emit(text: str, out) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _csv_text(header_fields, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header_fields)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _cell(x) -> str:
    return repr(float(x))


def _sub_seed(seed: int, *key: int) -> int:
    return int(np.random.SeedSequence([int(seed), *[int(k) for k in key]]).generate_state(1)[0])


def _run_gen_data(cfg: dict) -> int:
    target = get_target(cfg["target"])
    meta = MetaDistribution(target=target, noise=cfg["noise"], prior=cfg["prior"], n_ref=cfg["n_ref"])
    data = generate(meta, cfg["m"], cfg["n"], cfg["seed"])
    save_dataset(data, meta, cfg["out"])
    sys.stdout.write(_header(cfg))
    sys.stdout.write(_csv_text(["dir", "m", "n", "d", "n_ref"],
                               [[cfg["out"], data.m, data.n, data.d, data.n_ref]]))
    return 0


def _run_construct(cfg: dict) -> int:
    Ns = cfg["N"] if isinstance(cfg["N"], list) else [cfg["N"]]
    reports = [build_for_target(cfg["target"], int(N), seed=cfg["seed"]) for N in Ns]
    if cfg["nets_dir"] is not None:
        import os

        os.makedirs(cfg["nets_dir"], exist_ok=True)
        for rep in reports:
            path = os.path.join(cfg["nets_dir"], f"{rep.target_id}-N{rep.N}.json")
            with open(path, "w") as fh:
                fh.write(rep.net.to_json() + "\n")
    _emit(_header(cfg) + reports_to_csv(reports), cfg["out"])
    return 0


def _run_approx_rate(cfg: dict) -> int:
    targets = cfg["targets"] if cfg["targets"] is not None else sorted(TARGETS)
    if not targets or not cfg["N_grid"]:
        raise ValueError("approx-rate needs nonempty target and N grids")
    grid = [(tid, int(N)) for tid in targets for N in cfg["N_grid"]]
    suites = {}
    for tid in targets:
        d = get_target(tid).d
        if d not in suites:
            suites[d] = measure_suite(d, seed=cfg["seed"], size=cfg["suite_size"])

    def build(cell):
        tid, N = cell
        return build_for_target(tid, N, seed=cfg["seed"], suite=suites[get_target(tid).d])

    if cfg["jobs"] > 1:
        with ThreadPoolExecutor(max_workers=cfg["jobs"]) as ex:
            reports = list(ex.map(build, grid))
    else:
        reports = [build(cell) for cell in grid]
    rows = []
    violated = False
    for rep in reports:
        ratio = rep.measured_error / rep.claimed_bound if rep.claimed_bound > 0 else float("nan")
        if rep.measured_error > rep.claimed_bound + _BOUND_SLACK:
            violated = True
        rows.append([rep.target_id, rep.N, _cell(rep.measured_error), _cell(rep.claimed_bound), _cell(ratio)])
    _emit(_header(cfg) + _csv_text(["target", "N", "measured", "bound", "ratio"], rows), cfg["out"])
    return 3 if violated else 0


def _excess_mc(net, meta: MetaDistribution, mc_size: int, seed: int):
    """Monte Carlo excess risk of the truncated net over fresh meta draws."""
    M = meta.M
    diffs = np.empty(mc_size)
    for j in range(mc_size):
        spec = meta.draw_spec(_stream(seed, j, _TAG_SPEC))
        ref = sample_measure(spec, meta.n_ref, _stream(seed, j, _TAG_REF))
        fr = meta.target.evaluate(ref)
        eps = 0.0
        if meta.noise > 0:
            eps = meta.noise * _stream(seed, j, _TAG_NOISE).uniform(-1.0, 1.0)
        yj = min(max(fr + eps, -M), M)
        p = float(project_M(forward(net, ref), M))
        diffs[j] = (p - yj) ** 2 - (fr - yj) ** 2
    return float(diffs.mean()), float(diffs.std(ddof=1) / math.sqrt(mc_size))


def _fit_slope(ms, values):
    """Least-squares slope of log(value) against log(m) with its 2-se half width."""
    pts = [(math.log(m), math.log(v)) for m, v in zip(ms, values) if v > 0]
    if len(pts) < 2:
        return float("nan"), float("nan"), len(pts)
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    xc = xs - xs.mean()
    denom = float(xc @ xc)
    slope = float(xc @ ys / denom)
    intercept = float(ys.mean() - slope * xs.mean())
    resid = ys - (intercept + slope * xs)
    if len(pts) > 2:
        se = math.sqrt(float(resid @ resid) / (len(pts) - 2) / denom)
    else:
        se = 0.0
    return slope, 2.0 * se, len(pts)


def _warm_start(target_id: str, N: int, seed: int):
    rep = build_for_target(target_id, N, seed=seed)
    if rep.certificate is None or not rep.certificate.ok:
        raise ValueError(f"construction for {target_id} at N={N} failed its own certificate")
    space = HypothesisSpaceSpec(R=rep.certificate.R, N=N)
    if not in_hypothesis_space(rep.net, space):
        raise ValueError("warm-start network left the hypothesis space")
    return rep.net, space


def _run_learn_rate(cfg: dict) -> int:
    target = get_target(cfg["target"])
    if target.kind not in ("poly-composite", "radial"):
        raise ValueError("learn-rate needs a composite target (the trainable architecture)")
    meta = MetaDistribution(target=target, noise=cfg["noise"], prior=cfg["prior"], n_ref=cfg["n_ref"])
    beta = float(cfg["beta"])
    if not (0 < beta <= 1):
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if not cfg["m_grid"]:
        raise ValueError("learn-rate needs a nonempty m grid")
    p = 1.0 / (2.0 * beta + 1.0)
    rows = []
    ms, excesses = [], []
    for idx, m in enumerate(cfg["m_grid"]):
        m = int(m)
        N = max(1, int(math.floor(cfg["N_multiplier"] * m**p)))
        if cfg["n_multiplier"] is not None:
            n = min(int(cfg["n_cap"]), int(math.ceil(cfg["n_multiplier"] * m ** ((4.0 * beta + 17.0) * p))))
            n = max(1, n)
        else:
            n = int(cfg["n_cap"])
        data = generate(meta, m, n, _sub_seed(cfg["seed"], idx, 0))
        init, space = _warm_start(cfg["target"], N, cfg["seed"])
        result = erm_train(data, space, init, epochs=cfg["epochs"], step=cfg["step"])
        excess, se = _excess_mc(result.net, meta, cfg["mc_size"], _sub_seed(cfg["seed"], idx, 1))
        rows.append([m, N, n, _cell(excess), _cell(se)])
        ms.append(m)
        excesses.append(excess)
    text = _header(cfg) + _csv_text(["m", "N", "n", "excess_risk", "stderr"], rows)
    if len(rows) >= 2:
        slope, half, k = _fit_slope(ms, excesses)
        text += f"# slope={_cell(slope)} half_width={_cell(half)} fit_points={k}\n"
    else:
        text += "# single_m=true slope omitted\n"
    _emit(text, cfg["out"])
    return 0


def _run_cover_bound(cfg: dict) -> int:
    if not cfg["N_grid"] or not cfg["eps_grid"]:
        raise ValueError("cover-bound needs nonempty N and eps grids")
    rows = []
    for N in cfg["N_grid"]:
        spec = HypothesisSpaceSpec(R=float(cfg["R"]), N=int(N))
        for eps in cfg["eps_grid"]:
            cb = covering_bound(spec, int(cfg["d"]), int(cfg["q"]), float(eps), variant=cfg["variant"])
            rows.append([int(N), _cell(eps), _cell(cb.value)])
    _emit(_header(cfg) + _csv_text(["N", "eps", "bound"], rows), cfg["out"])
    return 0


def _run_decompose(cfg: dict) -> int:
    target = get_target(cfg["target"])
    if target.kind not in ("poly-composite", "radial"):
        raise ValueError("decompose needs a composite target (the trainable architecture)")
    meta = MetaDistribution(target=target, noise=cfg["noise"], prior=cfg["prior"], n_ref=cfg["n_ref"])
    rows = []
    for r in range(int(cfg["runs"])):
        data = generate(meta, cfg["m"], cfg["n"], _sub_seed(cfg["seed"], r, 0))
        init, space = _warm_start(cfg["target"], int(cfg["N"]), cfg["seed"])
        result = erm_train(data, space, init, epochs=cfg["epochs"], step=cfg["step"])
        dec = decompose_error(result.net, init, data, meta, mc_size=cfg["mc_size"],
                              seed=_sub_seed(cfg["seed"], r, 1), space=space)
        rows.append([
            r, _cell(dec.I1), _cell(dec.I2), _cell(dec.I3), _cell(dec.I4),
            _cell(dec.R_H), _cell(dec.excess), _cell(dec.erm_gap),
            _cell(dec.se_combined), dec.holds(),
        ])
    header = ["run", "I1", "I2", "I3", "I4", "R_H", "excess", "erm_gap", "se_combined", "holds"]
    _emit(_header(cfg) + _csv_text(header, rows), cfg["out"])
    return 0


def _run_train(cfg: dict) -> int:
    meta, data = load_dataset(cfg["data_dir"])
    init, space = _warm_start(data.target_id, int(cfg["N"]), cfg["seed"])
    result = erm_train(data, space, init, epochs=cfg["epochs"], step=cfg["step"])
    with open(cfg["out"], "w") as fh:
        fh.write(result.net.to_json() + "\n")
    sys.stdout.write(_header(cfg))
    sys.stdout.write(_csv_text(
        ["net_file", "initial_loss", "final_loss", "epochs_run"],
        [[cfg["out"], _cell(result.initial_loss), _cell(result.final_loss), result.epochs_run]],
    ))
    return 0


_RUNNERS = {
    "gen-data": _run_gen_data,
    "construct": _run_construct,
    "approx-rate": _run_approx_rate,
    "learn-rate": _run_learn_rate,
    "cover-bound": _run_cover_bound,
    "decompose": _run_decompose,
    "train": _run_train,
}

_HELP = {
    "gen-data": "draw a two-stage dataset and write it to a directory",
    "construct": "build approximating networks for one target across resolutions",
    "approx-rate": "measure approximation error against the claimed bound on a grid",
    "learn-rate": "train on growing first-stage sizes and report the excess-risk slope",
    "cover-bound": "tabulate the log-covering bound over (N, eps)",
    "decompose": "train and split the excess risk into its estimation terms",
    "train": "run projected-gradient ERM on a saved dataset",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="distreg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        sp = sub.add_parser(name, help=_HELP[name])
        sp.add_argument("--config", default=None, help="JSON file with settings for this subcommand")
        sp.add_argument("--seed", type=int, default=None, help="override the seed")
        sp.add_argument("--out", default=None, help="output path ('-' or omitted: stdout)")
        sp.add_argument("--jobs", type=int, default=None, help="worker threads for grid commands")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage and 0 on --help; keep its code
        return int(exc.code or 0)
    try:
        cfg = _resolve(args.command, args)
    except (OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"distreg: config error: {exc}", file=sys.stderr)
        return 2
    try:
        return _RUNNERS[args.command](cfg)
    except CapacityError as exc:
        print(f"distreg: capacity limit: {exc}", file=sys.stderr)
        return 4
    except (ValueError, KeyError, OSError) as exc:
        print(f"distreg: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: schedule | check | simulate | limits | render.

Exit codes: 0 success, 1 a check or verdict failed, 2 bad input,
3 a resource cap (coefficient digits or certifiable precision) was hit.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from . import __version__
from .contfrac import CFSide, CoefficientCapError, cap_digits, twist_signs
from .farey_graph import default_restriction, geodesic_certificates, pivot_separation
from .intervals import PrecisionError, format_interval, format_rational, parse_rational
from .limit_analysis import finest_precision, laminations_of, segment_fit
from .pairing import default_family, kappa_of, pair_delta_gamma, sandwich_check, simplex_point
from .projective import certified_distance, proj_distance, projectivize
from .ray_model import ModelParams, length_of, sweep_time, xy_of
from .schedule import ConfigError, Eta, ModelFunction, generate
from .serialization import (FormatError, LengthRow, dumps, lengths_to_csv,
                            load_family, load_lengths, load_schedule, read_json,
                            save_schedule, write_manifest, write_text)
from .svg import render_scatter, render_tessellation

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

DEFAULTS = {
    "kmax": 12,
    "D": "1/1",
    "floors": [],
    "f1": {"kind": "exp", "params": {}},
    "f2": {"kind": "affine", "params": {}},
    "eta": {"kind": "harmonic", "c": "1/1"},
    "alpha_bound": "1/1",
    "model": {"ell_active": "1/1", "c_O": "1/1", "twist_offset": 0, "interp": "calibrated"},
    "parity": "even",
    "theta": None,
    "depth": 3,
    "viewport": "0,1",
    "side": 0,
    "coeffs": None,
    "overlay": "none",
    "horoballs": False,
    "scatter_ids": None,
    "pivot_upto": 30,
    "geodesic_upto": 7,
    "bfs_budget": 4_000_000,
    "seed": None,
    "schedule": "schedule.json",
    "family": None,
    "lengths": "lengths.csv",
    "limits": None,
}

DEFAULT_OUT = {"schedule": "schedule.json", "check": "check.json", "simulate": "lengths.csv",
               "limits": "limits.json", "render": "farey.svg"}

# thresholds of the verdict blocks
DECAY_FROM_K = 4
ENDPOINT_TOL = Fraction(1, 1000)
RATIO_TOL = Fraction(1, 100)
RATIO_FROM_K = 10
ALPHA_TOL = Fraction(1, 1000)
SEGMENT_TOL = Fraction(1, 100)
SEPARATION_TOL = Fraction(1, 100)


class CheckLog:
    def __init__(self, quiet: bool = False):
        self.entries: list[dict] = []
        self.quiet = quiet

    def add(self, name: str, ok: bool, detail: str) -> bool:
        self.entries.append({"check": name, "ok": bool(ok), "detail": detail})
        if not self.quiet:
            print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        return ok

    @property
    def ok(self) -> bool:
        return all(e["ok"] for e in self.entries)

    def first_failure(self) -> Optional[dict]:
        return next((e for e in self.entries if not e["ok"]), None)


# -- configuration ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with configuration keys")
    common.add_argument("--out", help="output path")
    common.add_argument("--kmax", type=int)
    common.add_argument("--D", dest="D", help="edge length, a rational such as 1/1")
    common.add_argument("--theta", help="comma-separated rationals in [0, 1)")
    common.add_argument("--parity", choices=("even", "odd"))
    common.add_argument("--depth", type=int)
    common.add_argument("--seed", type=int, help="seed for randomized checks")
    common.add_argument("--schedule", help="schedule.json to read")
    common.add_argument("--family", help="family JSON (default: built-in six curves)")
    common.add_argument("--lengths", help="lengths.csv to read")
    common.add_argument("--ell-active", dest="ell_active")
    common.add_argument("--c-o", dest="c_O")
    common.add_argument("--twist-offset", dest="twist_offset", type=int)
    common.add_argument("--interp", choices=("calibrated", "geometric"))
    common.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(prog="fareylab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("schedule", parents=[common], help="generate a coefficient schedule")
    check = sub.add_parser("check", parents=[common], help="verify a schedule")
    check.add_argument("--pivot-upto", dest="pivot_upto", type=int)
    check.add_argument("--geodesic-upto", dest="geodesic_upto", type=int)
    check.add_argument("--bfs-budget", dest="bfs_budget", type=int)
    sub.add_parser("simulate", parents=[common], help="sample model lengths")
    sub.add_parser("limits", parents=[common], help="analyse sampled lengths")
    render = sub.add_parser("render", parents=[common], help="draw SVG figures")
    render.add_argument("--viewport", help="integers x0,x1")
    render.add_argument("--side", type=int, choices=(0, 1))
    render.add_argument("--overlay", choices=("none", "convergents"))
    render.add_argument("--coeffs", help="comma-separated coefficients for the overlay")
    render.add_argument("--horoballs", action="store_true", default=None)
    render.add_argument("--limits", help="limits.json to draw as a ternary scatter")
    render.add_argument("--scatter-ids", dest="scatter_ids", help="three curve ids")
    return parser


_MODEL_KEYS = ("ell_active", "c_O", "twist_offset", "interp")


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = json.loads(json.dumps(DEFAULTS))
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise FormatError(f"config file {path} does not exist")
        loaded = read_json(path)
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        for key, value in loaded.items():
            if key == "model":
                cfg["model"].update(value)
            else:
                cfg[key] = value
    for key, value in vars(args).items():
        if value is None or key in ("config", "command", "out", "quiet"):
            continue
        if key in _MODEL_KEYS:
            cfg["model"][key] = value
        else:
            cfg[key] = value
    cfg["out"] = args.out or DEFAULT_OUT[args.command]
    return cfg


def _require_file(path, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise FormatError(f"{what} {p} does not exist")
    return p


def _require_out(path) -> Path:
    p = Path(path)
    if not p.parent.is_dir():
        raise FormatError(f"output directory {p.parent} does not exist")
    return p


def model_params(cfg: dict) -> ModelParams:
    m = cfg["model"]
    return ModelParams(parse_rational(str(m["ell_active"])), parse_rational(str(m["c_O"])),
                       int(m["twist_offset"]), m["interp"])


def thetas_of(cfg: dict) -> Optional[list[Fraction]]:
    raw = cfg.get("theta")
    if raw is None:
        return None
    items = raw.split(",") if isinstance(raw, str) else raw
    out = [parse_rational(str(t)) for t in items]
    for t in out:
        if not 0 <= t < 1:
            raise ConfigError(f"theta {t} outside [0, 1)")
    return out


def parity_of(cfg: dict) -> int:
    if cfg["parity"] not in ("even", "odd"):
        raise ConfigError("parity must be even or odd")
    return 0 if cfg["parity"] == "even" else 1


def family_of(cfg: dict):
    if cfg.get("family"):
        return load_family(_require_file(cfg["family"], "family file"))
    return default_family()


# -- subcommands ------------------------------------------------------------

def cmd_schedule(cfg: dict, quiet: bool = False) -> int:
    out = _require_out(cfg["out"])
    sched = generate(
        int(cfg["kmax"]), parse_rational(str(cfg["D"])), [int(f) for f in cfg["floors"]],
        ModelFunction.from_json("f1", cfg["f1"]), ModelFunction.from_json("f2", cfg["f2"]),
        Eta.from_json(cfg["eta"]), parse_rational(str(cfg["alpha_bound"])))
    save_schedule(sched, out)
    write_manifest(out, "schedule", cfg, [out])
    if not quiet:
        print(f"wrote {out}: e_0..e_{len(sched.coeffs) - 1}, cap {cap_digits()} digits")
    return EXIT_OK


def _geodesic_prefix(side: CFSide, upto: int, budget: int):
    """Largest prefix ``gamma_{-1}..gamma_i`` (``i <= upto``) whose restricted graph fits."""
    best = None
    for i in range(0, min(upto, len(side)) + 1):
        seq = side.curves(i)
        qmax, window = default_restriction(seq)
        size = qmax * qmax * window.width
        if size > budget:
            break
        best = seq
    return best


def run_checks(sched, family, cfg: dict, log: CheckLog) -> None:
    findings = sched.growth_audit()
    floor_bad = [f for f in findings if f.invariant == "coefficient_floor"]
    if floor_bad:
        for f in floor_bad:
            log.add(f.invariant, False, str(f))
        return
    for f in findings:
        log.add(f.invariant, False, str(f))
    if not findings:
        log.add("growth_invariants", True, f"all bounds hold for k <= {len(sched.coeffs) - 1}")

    for h, side in enumerate(sched.sides):
        signs = twist_signs(side.coeffs)
        alternating = all(s == (-1) ** j for j, s in enumerate(signs))
        log.add("twist_recursion", alternating,
                f"side {h}: {len(signs)} steps, signs {'alternate' if alternating else signs}")

    upto = int(cfg["pivot_upto"])
    for h, side in enumerate(sched.sides):
        seq = side.curves(len(side))
        last = min(upto + 1, len(seq) - 2)
        bad = [i - 1 for i in range(2, last + 1) if not pivot_separation(seq, i)]
        note = "" if last == upto + 1 else f" (schedule stores only gamma_0..gamma_{len(side)})"
        log.add("pivot_separation", not bad,
                f"side {h}: curve indices 1..{last - 1}{note}" + (f"; fails at {bad}" if bad else ""))
    if cfg.get("seed") is not None:
        rng = random.Random(int(cfg["seed"]))
        bad = 0
        for _ in range(100):
            coeffs = [rng.randint(4, 9) for _ in range(upto + 2)]
            seq = CFSide(tuple(coeffs)).curves(len(coeffs))
            bad += not all(pivot_separation(seq, i) for i in range(2, upto + 2))
        log.add("pivot_separation_random", bad == 0,
                f"100 random tuples, indices up to {upto}, seed {cfg['seed']}")

    g_upto, budget = int(cfg["geodesic_upto"]), int(cfg["bfs_budget"])
    for h, side in enumerate(sched.sides):
        seq = _geodesic_prefix(side, g_upto, budget)
        if seq is None:
            log.add("geodesic", True, f"side {h}: no prefix fits the BFS budget; not certified")
            continue
        certs = geodesic_certificates(seq)
        bad = [c.index for c in certs if not c.ok]
        reached = len(seq) - 2
        note = "" if reached >= g_upto else f"; indices {reached + 1}..{g_upto} exceed the BFS budget"
        qmax, window = default_restriction(seq)
        log.add("geodesic", not bad,
                f"side {h}: restricted BFS (q <= {qmax}, window {format_interval(window)}) "
                f"through gamma_{reached}{note}" + (f"; fails at {bad}" if bad else ""))

    lams = laminations_of(sched)
    for delta in family:
        kappa = kappa_of(delta, lams)
        ks = range(4, sched.kmax + 1)
        bad = [k for k in ks if not sandwich_check(delta, k, sched, kappa)]
        log.add("sandwich", not bad,
                f"{delta.id}: kappa in [{float(kappa.lo):.6g}, {float(kappa.hi):.6g}], "
                f"k = 4..{sched.kmax}" + (f"; fails at {bad}" if bad else ""))


def cmd_check(cfg: dict, quiet: bool = False) -> int:
    sched = load_schedule(_require_file(cfg["schedule"], "schedule"))
    family = family_of(cfg)
    out = _require_out(cfg["out"])
    log = CheckLog(quiet)
    run_checks(sched, family, cfg, log)
    first = log.first_failure()
    report = {"ok": log.ok, "first_failure": first, "checks": log.entries,
              "note": "geodesic checks use a finite restriction of the Farey graph"}
    write_text(out, dumps(report))
    write_manifest(out, "check", cfg, [out])
    if first is not None:
        print(f"check failed: {first['check']}: {first['detail']}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def simulation_rows(sched, family, params: ModelParams, parity: int, thetas) -> list[LengthRow]:
    rows = []
    for k in range(2, sched.kmax + 1):
        if k % 2 != parity:
            continue
        times = [sched.tm(k)] if thetas is None else sorted({sweep_time(k, th, sched) for th in thetas})
        for s in times:
            x, y = xy_of(s, sched, params)
            for delta in sorted(family, key=lambda d: d.id):
                rows.append(LengthRow(k, s, delta.id, length_of(delta, s, sched, params), x, y))
    return rows


def cmd_simulate(cfg: dict, quiet: bool = False) -> int:
    sched = load_schedule(_require_file(cfg["schedule"], "schedule"))
    family = family_of(cfg)
    out = _require_out(cfg["out"])
    rows = simulation_rows(sched, family, model_params(cfg), parity_of(cfg), thetas_of(cfg))
    write_text(out, lengths_to_csv(rows))
    write_manifest(out, "simulate", cfg, [out])
    return EXIT_OK


def _group_samples(rows: list[LengthRow], family, sched):
    ids = sorted(d.id for d in family)
    groups: dict = {}
    for r in rows:
        groups.setdefault((r.k, r.s), []).append(r)
    samples = []
    for (k, s), rs in sorted(groups.items()):
        got = sorted(r.delta_id for r in rs)
        if got != ids:
            raise FormatError(f"sample k={k}, s={s} has curves {got}, family has {ids}")
        if k < 2 or k > sched.kmax or not sched.tm(k) <= s < sched.tm(k + 1):
            raise FormatError(f"sample time s={s} is not in interval k={k}")
        if len({(r.x, r.y) for r in rs}) != 1:
            raise FormatError(f"sample k={k}, s={s} has inconsistent x, y")
        by_id = {r.delta_id: r for r in rs}
        theta = (s - sched.tm(k)) / (sched.tm(k + 1) - sched.tm(k))
        samples.append((k, s, theta, by_id))
    return samples


def _sample_json(k, s, theta, by_id, family, sched, c_o):
    ordered = [by_id[d.id] for d in family]
    point = projectivize([r.length for r in ordered], [d.id for d in family])
    ratios, shares = {}, {}
    for d, r in zip(family, ordered):
        i_k, i_k1 = pair_delta_gamma(d, k, sched), pair_delta_gamma(d, k + 1, sched)
        active = r.x * i_k + r.y * i_k1
        ratios[d.id] = r.x * i_k / active
        shares[d.id] = (r.length - active - c_o * (i_k + i_k1)) / r.length
    return point, ratios, shares


def cmd_limits(cfg: dict, quiet: bool = False) -> int:
    sched = load_schedule(_require_file(cfg["schedule"], "schedule"))
    rows = load_lengths(_require_file(cfg["lengths"], "lengths file"))
    family = family_of(cfg)
    out = _require_out(cfg["out"])
    c_o = model_params(cfg).c_O
    samples = _group_samples(rows, family, sched)
    lam0, lam1 = laminations_of(sched)
    sweep = any(theta != 0 for _, _, theta, _ in samples)
    entries, verdict = [], {}
    if not sweep:
        parities = {k % 2 for k, _, _, _ in samples}
        if len(parities) != 1:
            raise FormatError("endpoint samples mix parities")
        parity = parities.pop()
        target = simplex_point(parity, lam0, lam1, family, finest_precision(sched))
        dists, late_ratio, late_share = [], [], []
        for k, s, theta, by_id in samples:
            point, ratios, shares = _sample_json(k, s, theta, by_id, family, sched, c_o)
            dist = certified_distance(point, target)
            dists.append((k, dist))
            if k >= RATIO_FROM_K:
                late_ratio += [abs(r - 1) <= RATIO_TOL for r in ratios.values()]
                late_share += [a < ALPHA_TOL for a in shares.values()]
            entries.append(_entry(k, s, theta, point, dist, ratios, shares))
        tail = [d for k, d in dists if k >= DECAY_FROM_K]
        decreasing = all(b.hi < a.lo for a, b in zip(tail, tail[1:]))
        verdict = {
            f"converges-to-endpoint-{parity}": bool(tail) and decreasing and tail[-1].hi < ENDPOINT_TOL,
            "lemma-ratios-within-tolerance": bool(late_ratio) and all(late_ratio),
            "alpha-share-below-tolerance": bool(late_share) and all(late_share),
        }
    else:
        last: dict = {}
        for k, s, theta, by_id in samples:
            point, ratios, shares = _sample_json(k, s, theta, by_id, family, sched, c_o)
            fit = segment_fit(point, lam0, lam1, family)
            entries.append(_entry(k, s, theta, point, fit.distance, ratios, shares, fit.t))
            last[theta] = (point, fit.distance)
        pts = [p for p, _ in last.values()]
        sep = min((proj_distance(a, b) for i, a in enumerate(pts) for b in pts[i + 1:]),
                  default=None)
        verdict = {
            "on-segment": all(d.hi <= SEGMENT_TOL for _, d in last.values()),
            "limits-separated": sep is None or sep >= SEPARATION_TOL,
        }
        if sep is not None:
            verdict["min-pairwise-distance"] = format_rational(sep)
    data = {"mode": "sweep" if sweep else "endpoint", "family": [d.id for d in family],
            "samples": entries, "verdict": verdict}
    write_text(out, dumps(data))
    write_manifest(out, "limits", cfg, [out])
    failed = [k for k, v in verdict.items() if v is False]
    if not quiet:
        for key, value in verdict.items():
            shown = f"{float(parse_rational(value)):.6g}" if isinstance(value, str) else value
            print(f"{key}: {shown}")
    return EXIT_FAILED if failed else EXIT_OK


def _entry(k, s, theta, point, dist, ratios, shares, fit_t=None) -> dict:
    entry = {"k": k, "s": format_rational(s), "theta": format_rational(theta),
             "point": [format_rational(c) for c in point.coords],
             "distance": format_interval(dist),
             "lemma_ratios": {i: format_rational(r) for i, r in ratios.items()},
             "alpha_shares": {i: format_rational(a) for i, a in shares.items()}}
    if fit_t is not None:
        entry["fit_t"] = format_rational(fit_t)
    return entry


def _viewport(text: str) -> tuple[int, int]:
    try:
        x0, x1 = (int(v) for v in str(text).split(","))
    except ValueError as exc:
        raise ConfigError(f"viewport must be two integers x0,x1, got {text!r}") from exc
    if x0 >= x1:
        raise ConfigError(f"empty viewport [{x0}, {x1}]")
    return x0, x1


def cmd_render(cfg: dict, quiet: bool = False) -> int:
    out = _require_out(cfg["out"])
    if cfg.get("limits"):
        data = read_json(_require_file(cfg["limits"], "limits file"))
        ids = data["family"]
        chosen = cfg.get("scatter_ids")
        chosen = chosen.split(",") if isinstance(chosen, str) else (chosen or ids[:3])
        if len(chosen) != 3 or any(c not in ids for c in chosen):
            raise ConfigError(f"scatter needs three ids out of {ids}")
        cols = [ids.index(c) for c in chosen]
        pts = [(f"k={e['k']} theta={e['theta']}", [parse_rational(e["point"][j]) for j in cols])
               for e in data["samples"]]
        text = render_scatter(pts, chosen)
    else:
        x0, x1 = _viewport(cfg["viewport"])
        depth = int(cfg["depth"])
        if depth < 0 or depth > 16:
            raise ConfigError("depth must be between 0 and 16")
        path = None
        if cfg["overlay"] not in ("none", "convergents"):
            raise ConfigError("overlay must be none or convergents")
        if cfg["overlay"] == "none":
            pass
        elif cfg.get("coeffs"):
            raw = cfg["coeffs"]
            coeffs = [int(c) for c in (raw.split(",") if isinstance(raw, str) else raw)]
            side = CFSide(tuple(coeffs))
            path = side.curves(len(side))
        else:
            side = load_schedule(_require_file(cfg["schedule"], "schedule")).sides[int(cfg["side"])]
            path = side.curves(len(side))
        text = render_tessellation(x0, x1, depth, path, bool(cfg.get("horoballs")))
    write_text(out, text)
    write_manifest(out, "render", cfg, [out])
    return EXIT_OK


COMMANDS: dict[str, Callable[[dict, bool], int]] = {
    "schedule": cmd_schedule, "check": cmd_check, "simulate": cmd_simulate,
    "limits": cmd_limits, "render": cmd_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg, bool(args.quiet))
    except CoefficientCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except PrecisionError as exc:
        print(f"error: precision exhausted: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ConfigError, FormatError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

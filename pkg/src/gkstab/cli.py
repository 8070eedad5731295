"""Command-line entry point: ``gkstab {info,charge,verify,oracle,scan}``.

Every command prints one document (JSON by default, or a plain table).
Rational numbers are written as exact strings such as ``"3/2"``.

Exit status: 0 when all checks pass, 1 on a verification failure (the
witness is included in the output), 2 on configuration or input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Any

from . import __version__
from .charge import central_charge_poly, gk_dimension, hilbert_oracle, leading_coefficient, normalization
from .errors import FitFailure, GKStabError, VerificationFailure
from .ktheory import (
    Block, class_of_parabolic_verma, class_of_simple, get_block, gk_stratify, is_min_coset_rep,
)
from .rootsys import LieType
from .rvsc import verify_all
from .stab import format_braid, parse_scan, scan

log = logging.getLogger("gkstab")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
DEFAULT_CACHE = Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "gkstab"


class ConfigError(GKStabError, ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    lie_type: LieType
    d: int | None  # None means every nonempty stratum
    norm: Fraction | None  # None means automatic
    grid: int = 1000
    oracle_depth: int = 200
    weights: int = 5
    unweighted: bool = False
    cache_dir: str | None = None
    fmt: str = "json"
    seed: int = 0
    combos: int = 100
    script: str | None = None

    def validate(self, n_pos: int):
        if self.d is not None and not 0 <= self.d <= n_pos:
            raise ConfigError(f"--d must be 'all' or in 0..{n_pos}")
        if self.norm is not None and self.norm <= 0:
            raise ConfigError("--norm must be a positive rational or 'auto'")
        if self.grid < 1000:
            raise ConfigError("--grid must be at least 1000 sample points")
        if self.oracle_depth < 1:
            raise ConfigError("--oracle-depth must be positive")
        if self.weights < 1:
            raise ConfigError("--weights must be positive")
        if self.combos < 100:
            raise ConfigError("--combos must be at least 100")

    def echo(self) -> dict:
        return {
            "type": str(self.lie_type),
            "d": "all" if self.d is None else self.d,
            "norm": "auto" if self.norm is None else str(self.norm),
            "grid": self.grid,
            "oracle_depth": self.oracle_depth,
            "weights": self.weights,
            "unweighted": self.unweighted,
            "seed": self.seed,
            "combos": self.combos,
            "format": self.fmt,
        }


def _strata(cfg: RunConfig, block: Block) -> list[int]:
    strat = gk_stratify(block)
    return strat.nonempty() if cfg.d is None else [cfg.d]


def type_data(block: Block) -> dict:
    rd = block.rd
    return {
        "type": str(rd.lie_type),
        "rank": rd.rank,
        "cartan": [list(r) for r in rd.cartan],
        "positive_roots": [list(b) for b in rd.positive_roots],
        "heights": list(rd.heights),
        "n_pos": rd.n_pos,
        "rho_alpha": [str(x) for x in rd.rho.alpha],
        "weyl_order": len(block.group),
    }


def _norm_of(cfg: RunConfig, block: Block, d: int) -> Fraction:
    return normalization(block, d) if cfg.norm is None else cfg.norm


# commands


def cmd_info(cfg: RunConfig, block: Block) -> tuple[dict, int]:
    strat = gk_stratify(block)
    simples = []
    for w in block.group:
        simples.append({
            "simple": str(w),
            "gk": strat.gk_of_simple[w],
            "verma_expansion": class_of_simple(block, w).render(),
        })
    results = {
        "strata": {str(d): [str(w) for w in ws] for d, ws in strat.strata.items()},
        "simples": simples,
    }
    return results, EXIT_OK


def cmd_charge(cfg: RunConfig, block: Block) -> tuple[dict, int]:
    out = {}
    for d in _strata(cfg, block):
        s = _norm_of(cfg, block, d)
        rows = []
        for w in gk_stratify(block).stratum(d):
            z = central_charge_poly(block, class_of_simple(block, w), d, s)
            rows.append({"simple": str(w), "charge": str(z.poly)})
        out[str(d)] = {"normalization": str(s), "charges": rows, "empty": not rows}
    return out, EXIT_OK


def cmd_verify(cfg: RunConfig, block: Block) -> tuple[dict, int]:
    rep = verify_all(block, _strata(cfg, block), cfg.grid, cfg.seed, cfg.combos)
    per = {}
    for d in rep.strata:
        if d not in rep.axiom2:
            continue
        per[str(d)] = {
            "simples": rep.strata[d],
            "normalization": rep.normalization[d],
            "wall_orders": {k: list(v) for k, v in rep.orders[d].items()},
            "axiom1": [asdict(c) for c in rep.axiom1[d]],
            "axiom2": [{"alpha": r.alpha, "ok": r.ok, "order_one": list(r.order_one),
                        "order_zero": list(r.order_zero), "failures": list(r.failures)}
                       for r in rep.axiom2[d]],
            "length_criterion": {str(a): v for a, v in rep.length_criterion[d].items()},
            "no_double_zero": asdict(rep.double_zero[d]),
            "harmonic": rep.harmonic[d],
            "w_equivariance": rep.equivariance[d],
            "wall_transport": rep.transport.get(d),
            "empty": not rep.strata[d],
        }
    results = {"strata": per, "max_wall_order": rep.max_wall_order,
               "verdict": "PASS" if rep.passed else "FAIL"}
    if rep.failure is not None:
        results["failure"] = _jsonable(rep.failure)
    return results, EXIT_OK if rep.passed else EXIT_FAIL


def oracle_weights(rank: int, count: int) -> list[tuple[int, ...]]:
    """The first ``count`` dominant integral weights ordered by (sum, coordinates)."""
    out: list[tuple[int, ...]] = []
    total = 0
    while len(out) < count:
        level = sorted(_compositions(total, rank))
        out.extend(level[: count - len(out)])
        total += 1
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def cmd_oracle(cfg: RunConfig, block: Block) -> tuple[dict, int]:
    rd = block.rd
    rows = []
    mismatches = 0
    lams = [rd.weight(v) for v in oracle_weights(rd.rank, cfg.weights)]
    for size in range(rd.rank + 1):
        for subset in combinations(range(1, rd.rank + 1), size):
            for w in block.group:
                if not is_min_coset_rep(block, subset, w):
                    continue
                c = class_of_parabolic_verma(block, subset, w)
                d = gk_dimension(block, c)
                if cfg.d is not None and d != cfg.d:
                    continue
                for lam in lams:
                    sample = hilbert_oracle(block, subset, w, lam, cfg.oracle_depth)
                    charge = leading_coefficient(block, c, lam, d, cfg.norm)
                    row = {
                        "subset": list(subset), "w": str(w), "lambda": [str(x) for x in lam.omega],
                        "gk": d, "period": sample.fitted.period, "degree": sample.fitted.degree,
                        "oracle_lc": str(sample.lc), "charge_lc": str(charge),
                        "match": sample.lc == charge,
                    }
                    if cfg.unweighted:
                        plain = hilbert_oracle(block, subset, w, lam, cfg.oracle_depth, weighted=False)
                        row["unweighted_lc"] = str(plain.lc)
                    mismatches += not row["match"]
                    rows.append(row)
    results = {"rows": rows, "compared": len(rows), "mismatches": mismatches,
               "verdict": "PASS" if not mismatches else "FAIL"}
    return results, EXIT_OK if not mismatches else EXIT_FAIL


def cmd_scan(cfg: RunConfig, block: Block) -> tuple[dict, int]:
    if cfg.script == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(cfg.script).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read scan script: {exc}") from None
    points = parse_scan(text, block)
    out = []
    for d in _strata(cfg, block):
        for rep in scan(block, points, d):
            lam, mu = rep.projected
            out.append({
                "stratum": d,
                "braid": format_braid(rep.point.braid_word),
                "lambda": [str(x) for x in rep.point.lam.omega],
                "mu": [str(x) for x in rep.point.mu.omega],
                "projected_lambda": [str(x) for x in lam.omega],
                "projected_mu": [str(x) for x in mu.omega],
                "walls": list(rep.walls),
                "phase_one": rep.phase_one(),
                "simples": [{
                    "simple": e.simple,
                    "value": {"re": str(e.value.re), "im": str(e.value.im)},
                    "phase": e.phase.interval,
                    "phase_exact": None if e.phase.exact is None else str(e.phase.exact),
                    "cot": None if e.phase.cot is None else str(e.phase.cot),
                    "approx": round(e.phase.approx, 6),
                } for e in rep.entries],
                "checks": rep.checks,
            })
    return {"points": out}, EXIT_OK


COMMANDS = {
    "info": cmd_info,
    "charge": cmd_charge,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "scan": cmd_scan,
}


# rendering


def _jsonable(x: Any):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def render_table(command: str, results: dict) -> str:
    lines = []
    if command == "info":
        for d, ws in results["strata"].items():
            lines.append(f"stratum {d}: {' '.join(ws)}")
        for s in results["simples"]:
            lines.append(f"L({s['simple']})  gk={s['gk']}  {s['verma_expansion']}")
    elif command == "charge":
        for d, blk in results.items():
            lines.append(f"stratum {d} (normalization {blk['normalization']})")
            for row in blk["charges"]:
                lines.append(f"  L({row['simple']})  {row['charge']}")
    elif command == "verify":
        for d, blk in results["strata"].items():
            tiers = ",".join(sorted({c["tier"] for c in blk["axiom1"]})) or "-"
            ok2 = all(r["ok"] for r in blk["axiom2"])
            lines.append(f"stratum {d}: axiom1 {tiers}  axiom2 {'ok' if ok2 else 'FAIL'}  "
                         f"harmonic {'ok' if all(blk['harmonic'].values()) else 'FAIL'}")
        lines.append(f"max wall order {results['max_wall_order']}")
        lines.append(results["verdict"])
        if "failure" in results:
            lines.append(json.dumps(results["failure"], sort_keys=True))
    elif command == "oracle":
        for r in results["rows"]:
            lines.append(f"I={r['subset']} w={r['w']} lambda={r['lambda']}  "
                         f"{r['oracle_lc']} {'=' if r['match'] else '!='} {r['charge_lc']}")
        lines.append(results["verdict"])
    elif command == "scan":
        for p in results["points"]:
            lines.append(f"{p['braid']} {' '.join(p['lambda'])} | {' '.join(p['mu'])}  (d={p['stratum']})")
            for s in p["simples"]:
                v = s["value"]
                lines.append(f"  L({s['simple']})  {v['re']} + {v['im']}i  phase {s['phase']}")
    return "\n".join(lines)


def _parse_d(text: str):
    if text == "all":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer or 'all'") from None


def _parse_norm(text: str):
    if text == "auto":
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("expected a rational or 'auto'") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", dest="lie_type", required=True,
                        help="Lie type such as A2, or a family letter together with --rank")
    common.add_argument("--rank", type=int, default=None)
    common.add_argument("--d", type=_parse_d, default=None, help="stratum (GK dimension) or 'all'")
    common.add_argument("--norm", type=_parse_norm, default=None,
                        help="charge normalization: positive rational or 'auto'")
    common.add_argument("--grid", type=int, default=1000, help="interior sample points for positivity")
    common.add_argument("--oracle-depth", type=int, default=200, help="number of Hilbert-series layers")
    common.add_argument("--weights", type=int, default=5, help="dominant weights per oracle comparison")
    common.add_argument("--unweighted", action="store_true",
                        help="also report the unweighted-filtration leading coefficient")
    common.add_argument("--combos", type=int, default=100, help="random combinations per wall test")
    common.add_argument("--cache-dir", default=str(DEFAULT_CACHE),
                        help="KL table cache directory ('none' disables caching)")
    common.add_argument("--format", dest="fmt", choices=("json", "table"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="gkstab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"gkstab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common], help="root datum, Weyl group and GK strata")
    sub.add_parser("charge", parents=[common], help="central-charge polynomials per simple")
    sub.add_parser("verify", parents=[common], help="check both axioms on every stratum")
    sub.add_parser("oracle", parents=[common], help="compare Hilbert-series and charge leading coefficients")
    sp = sub.add_parser("scan", parents=[common], help="phases along a scan script")
    sp.add_argument("script", help="scan script path, or '-' for stdin")
    return p


def make_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        lie_type=LieType.parse(args.lie_type, args.rank),
        d=args.d,
        norm=args.norm,
        grid=args.grid,
        oracle_depth=args.oracle_depth,
        weights=args.weights,
        unweighted=args.unweighted,
        cache_dir=None if args.cache_dir == "none" else args.cache_dir,
        fmt=args.fmt,
        seed=args.seed,
        combos=args.combos,
        script=getattr(args, "script", None),
    )


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = make_config(args)
        block = get_block(cfg.lie_type, cfg.cache_dir)
        cfg.validate(block.rd.n_pos)
        results, code = COMMANDS[cfg.command](cfg, block)
    except (VerificationFailure, FitFailure) as exc:
        doc = {"tool_version": __version__, "command": args.command, "verdict": "FAIL",
               "error": str(exc), "witness": _jsonable(getattr(exc, "witness", None))}
        print(json.dumps(doc, indent=2), file=out)
        return EXIT_FAIL
    except GKStabError as exc:
        print(f"gkstab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.fmt == "table":
        text = render_table(cfg.command, results)
        if text:
            print(text, file=out)
    else:
        doc = {
            "tool_version": __version__,
            "command": cfg.command,
            "config": cfg.echo(),
            "type_data": type_data(block),
            "results": _jsonable(results),
        }
        print(json.dumps(doc, indent=2), file=out)
    return code


def main(argv: list[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())

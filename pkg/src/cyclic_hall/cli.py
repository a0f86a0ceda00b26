"""Command-line front end: ``cyclic-hall <command> ...``.

Exit status 0 on success, 2 on malformed input, 3 when a size or window
limit is hit, 4 when an internal consistency check fails.  Output is built
in full before anything is printed, so failing runs write only to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from . import affine_comb, hallalg, hallcount, induction
from .errors import InvariantError, SizeLimitError, WindowError
from .laurent import format_qpoly
from .multiseg import (
    DimensionVector,
    Multisegment,
    PeriodicMultisegment,
    canonical_pair,
    degeneration_leq,
    fold,
    format_multisegment,
    format_pair,
    parse_label,
    parse_pair,
    unfold_fiber,
)

CACHE_ENV = "CYCLIC_HALL_CACHE"
EXIT_PARSE, EXIT_LIMIT, EXIT_INVARIANT = 2, 3, 4


class UsageError(ValueError):
    pass


@dataclass
class Config:
    m: int | None = None
    window: tuple[int, int] | None = None
    max_order: int = hallalg.DEFAULT_ORDER_LIMIT
    max_dim: int = 5
    cache_dir: Path | None = None
    fmt: str = "text"

    def __post_init__(self):
        if self.window is not None and self.window[0] > self.window[1]:
            raise UsageError("window must satisfy lo <= hi")
        if self.max_order < 1 or self.max_dim < 1:
            raise UsageError("limits must be positive")
        if self.m is not None and self.m < 1:
            raise UsageError("--m must be positive")
        if self.cache_dir is not None:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            if not os.access(self.cache_dir, os.W_OK):
                raise UsageError(f"cache directory {self.cache_dir} is not writable")

    def need_window(self) -> tuple[int, int]:
        if self.window is None:
            raise UsageError("this command needs --window lo:hi")
        return self.window

    def need_m(self) -> int:
        if self.m is None:
            raise UsageError("this command needs --m")
        return self.m


class Output:
    """Same data in three renderings; only one is emitted."""

    def __init__(self, text: list[str], data, tsv: list[str] | None = None):
        self.text = text
        self.data = data
        self.tsv = tsv if tsv is not None else text

    def render(self, fmt: str) -> str:
        if fmt == "structured":
            return json.dumps(self.data, sort_keys=True) + "\n"
        lines = self.tsv if fmt == "tsv" else self.text
        return "".join(line + "\n" for line in lines)


def parse_window(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be lo:hi, got {text!r}") from None


def parse_dv(text: str, m: int | None) -> DimensionVector:
    """``1,0,2`` on Q_m (length m) or ``0:1,1:1`` on Q_infinity."""
    text = "".join(text.split())
    parts = [p for p in text.split(",") if p]
    if not parts:
        raise UsageError("empty dimension vector")
    if all(":" in p for p in parts):
        return DimensionVector.linear({int(a): int(b) for a, b in (p.split(":") for p in parts)})
    values = [int(p) for p in parts]
    if m is not None and len(values) != m:
        raise UsageError(f"dimension vector {text} does not have {m} entries")
    return DimensionVector.cyclic(values)


def _periodic(text: str) -> PeriodicMultisegment:
    x = parse_label(text)
    if not isinstance(x, PeriodicMultisegment):
        raise UsageError(f"expected a periodic label, got {text!r}")
    return x


def _linear(text: str) -> Multisegment:
    x = parse_label(text)
    if not isinstance(x, Multisegment):
        raise UsageError(f"expected a linear label, got {text!r}")
    return x


def _canon_cache(cfg: Config):
    if cfg.cache_dir is None:
        return None
    return hallalg.CanonCache(cfg.cache_dir / "canon.cache")


def _hallpoly_cache(cfg: Config):
    if cfg.cache_dir is None:
        return None
    return hallcount.HallPolyCache(cfg.cache_dir / "hallpoly.cache")


def _algebra_for(dv: DimensionVector, cfg: Config) -> hallalg.Algebra:
    if dv.period is not None:
        return hallalg.Algebra.cyclic(dv.period)
    if cfg.window is not None:
        lo, hi = cfg.window
        sup = dv.support()
        if sup and (min(sup) < lo or max(sup) > hi):
            raise WindowError(f"dimension vector {dv} leaves window [{lo},{hi}]")
        return hallalg.Algebra.linear(lo, hi)
    sup = dv.support() or [0]
    return hallalg.Algebra.linear(min(sup), max(sup))


# --- commands ---

def cmd_fold(args, cfg):
    out = format_multisegment(fold(_linear(args.label), cfg.need_m()))
    return Output([out], {"fold": out})


def cmd_unfold(args, cfg):
    lifts = [format_multisegment(y) for y in unfold_fiber(_periodic(args.label), cfg.need_window())]
    return Output(lifts, {"unfold": lifts})


def cmd_order(args, cfg):
    n = parse_label(args.label).order
    return Output([str(n)], {"order": n})


def cmd_closure(args, cfg):
    x, y = parse_label(args.x), parse_label(args.y)
    leq = degeneration_leq(x, y)
    return Output(["yes" if leq else "no"], {"leq": leq})


def cmd_hallpoly(args, cfg):
    module, quot, sub = parse_label(args.module), parse_label(args.quot), parse_label(args.sub)
    cache = _hallpoly_cache(cfg)
    poly = hallcount.hall_polynomial(module, quot, sub, max_dim=cfg.max_dim, cache=cache)
    if cache is not None:
        cache.save()
    text = format_qpoly(poly)
    return Output([text], {"poly": text, "coefficients": poly})


def _conversion(args, cfg):
    dv = parse_dv(args.dv, cfg.m)
    algebra = _algebra_for(dv, cfg)
    cache = _canon_cache(cfg)
    conv = hallalg.canonical_basis(dv, algebra, limit=cfg.max_order, cache=cache)
    if cache is not None:
        cache.save()
    return conv


def cmd_canon(args, cfg):
    conv = _conversion(args, cfg)
    names = [format_multisegment(x) for x in conv.labels]
    text, tsv = [], []
    for name, row in zip(names, conv.to_b):
        terms = [(f"f_{col}" if c == 1 else f"({c}) f_{col}") for col, c in zip(names, row) if c]
        text.append(f"b_{name} = " + " + ".join(terms))
        tsv += [f"{name}\t{col}\t{c.serialize()}" for col, c in zip(names, row) if c]
    data = {"dv": str(conv.dv), "labels": names,
            "to_b": [[c.serialize() for c in row] for row in conv.to_b],
            "to_f": [[c.serialize() for c in row] for row in conv.to_f]}
    return Output(text, data, tsv)


def cmd_decomp(args, cfg):
    conv = _conversion(args, cfg)
    names = [format_multisegment(x) for x in conv.labels]
    mat = conv.at_v1()
    text = [f"# {i}: {name}" for i, name in enumerate(names)]
    text += [" ".join(str(c) for c in row) for row in mat]
    tsv = [f"{name}\t" + "\t".join(str(c) for c in row) for name, row in zip(names, mat)]
    return Output(text, {"labels": names, "matrix": mat}, tsv)


def _report_output(report: induction.MultiplicityReport) -> Output:
    lines = report.to_tsv().splitlines()
    return Output(lines, report.to_structured())


def cmd_delta(args, cfg):
    x = _periodic(args.x)
    report = induction.delta_report(x, cfg.need_window(), limit=cfg.max_order)
    if not report.stable:
        raise WindowError("unstable under window doubling: " + "; ".join(report.diagnostics))
    return _report_output(report)


def cmd_mult(args, cfg):
    x, xbar = _periodic(args.x), _linear(args.xbar)
    value, stable, window = induction.multiplicity_with_report(x, xbar, cfg.window, limit=cfg.max_order)
    if not stable:
        raise WindowError(f"multiplicity changed when window {list(window)} was doubled")
    if value < 0:
        raise InvariantError(f"negative multiplicity {value}")
    lo, hi = window
    return Output([str(value), "stable=yes"],
                  {"multiplicity": value, "stable": True, "window": [lo, hi]},
                  [f"{value}\tstable=yes\twindow=[{lo},{hi}]"])


def cmd_induce(args, cfg):
    report = induction.induce_simple(_linear(args.xbar), cfg.need_m(), cfg.window, limit=cfg.max_order)
    if not report.stable:
        raise WindowError("unstable under window doubling: " + "; ".join(report.diagnostics))
    return _report_output(report)


def cmd_canonical_pair(args, cfg):
    out = format_pair(canonical_pair(parse_pair(args.pair)))
    return Output([out], {"pair": out})


def cmd_pik(args, cfg):
    pk = affine_comb.pi_k(affine_comb.root_system(args.type), args.k)
    lines = pk.format_lines()
    return Output(lines, {"k": pk.k, "a": pk.a, "b": pk.b,
                          "elements": [[list(alpha), lvl] for alpha, lvl in pk.elements]})


def cmd_orbits(args, cfg):
    rs = affine_comb.root_system(args.type)
    n = affine_comb.orbit_count_direct(rs, args.k) if args.direct else affine_comb.orbit_count(rs, args.k)
    return Output([str(n)], {"orbits": n})


def cmd_dim(args, cfg):
    n = affine_comb.dim_simple(affine_comb.root_system(args.type), args.k)
    return Output([str(n)], {"dim": n})


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, default=argparse.SUPPRESS, help="period of the cyclic quiver")
    common.add_argument("--window", type=parse_window, default=argparse.SUPPRESS, help="segment window lo:hi")
    common.add_argument("--limit", type=int, default=argparse.SUPPRESS, help="maximum total order")
    common.add_argument("--max-dim", type=int, default=argparse.SUPPRESS,
                        help="maximum module dimension for finite-field enumeration")
    common.add_argument("--cache-dir", default=argparse.SUPPRESS, help=f"cache directory (overrides ${CACHE_ENV})")
    common.add_argument("--format", choices=["text", "tsv", "structured"], default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="cyclic-hall", parents=[common],
                                     description="Hall algebras of cyclic quivers and induced-module multiplicities.")
    parser.add_argument("--version", action="version", version=f"cyclic-hall {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("fold", cmd_fold, "fold a linear multisegment modulo m").add_argument("label")
    add("unfold", cmd_unfold, "lifts of a periodic multisegment inside a window").add_argument("label")
    add("order", cmd_order, "total order of a label").add_argument("label")
    p = add("closure", cmd_closure, "is x in the orbit closure of y")
    p.add_argument("x")
    p.add_argument("y")
    p = add("hallpoly", cmd_hallpoly, "Hall polynomial #{U <= module : U ~ sub, module/U ~ quot}")
    p.add_argument("--module", required=True)
    p.add_argument("--quot", required=True)
    p.add_argument("--sub", required=True)
    add("canon", cmd_canon, "canonical basis of a graded piece").add_argument("--dv", required=True)
    add("decomp", cmd_decomp, "decomposition matrix at v=1").add_argument("--dv", required=True)
    add("delta", cmd_delta, "coproduct of a canonical element in the linear canonical basis").add_argument(
        "--x", required=True)
    p = add("mult", cmd_mult, "multiplicity m(x, xbar)")
    p.add_argument("--x", required=True)
    p.add_argument("--xbar", required=True)
    add("induce", cmd_induce, "composition factors induced from a linear simple").add_argument(
        "--xbar", required=True)
    add("canonical-pair", cmd_canonical_pair, "normal form of a periodic pair").add_argument("pair")
    for name, func, help_text in [("pik", cmd_pik, "the level-decorated roots Pi_k"),
                                  ("orbits", cmd_orbits, "number of torus orbits"),
                                  ("dim", cmd_dim, "dimension of the simple module")]:
        p = add(name, func, help_text)
        p.add_argument("--type", required=True)
        p.add_argument("--k", type=int, required=True)
        if name == "orbits":
            p.add_argument("--direct", action="store_true", help="enumerate supports instead of transporting")
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Let ``--window -2:3`` through argparse, which reads ``-2:3`` as a flag."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in ("--window", "--k", "--m", "--limit") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def make_config(args, environ=None) -> Config:
    environ = os.environ if environ is None else environ
    cache = getattr(args, "cache_dir", None) or environ.get(CACHE_ENV) or None
    return Config(
        m=getattr(args, "m", None),
        window=getattr(args, "window", None),
        max_order=getattr(args, "limit", hallalg.DEFAULT_ORDER_LIMIT),
        max_dim=getattr(args, "max_dim", 5),
        cache_dir=Path(cache) if cache else None,
        fmt=getattr(args, "format", "text"),
    )


def run(argv=None, stdout=None, stderr=None, environ=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = make_config(args, environ)
        if cfg.cache_dir is not None:
            hallalg.set_default_canon_cache(hallalg.CanonCache(cfg.cache_dir / "canon.cache"))
        try:
            text = args.func(args, cfg).render(cfg.fmt)
        finally:
            default = hallalg._DEFAULT_CACHE
            hallalg.set_default_canon_cache(None)
        if default is not None:
            default.save()
    except SizeLimitError as exc:
        print(f"cyclic-hall: size limit: {exc}", file=stderr)
        return EXIT_LIMIT
    except WindowError as exc:
        print(f"cyclic-hall: window: {exc}", file=stderr)
        return EXIT_LIMIT
    except InvariantError as exc:
        print(f"cyclic-hall: internal check failed: {exc}", file=stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"cyclic-hall: {exc}", file=stderr)
        return EXIT_PARSE
    stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())

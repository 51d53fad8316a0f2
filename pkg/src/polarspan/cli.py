"""Command-line workbench for the diagram/lattice toolkit.

Subcommands mirror the library one to one: counts, enumerate,
lagrangians, lines, closure, mu, rank, verify-basis, express, verify.
Reports are JSON (the counts table also comes as CSV or aligned text);
every verification field carries its expected value and a match flag.
Exit status: 0 on success with all checks matching, 1 when a
verification mismatch was found, 2 on a structured error such as a
resource-cap breach or invalid input.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import os
import sys
import time
from typing import Any, Optional, Sequence

from . import diagrams, homology, lattice, polar, report
from .diagrams import (
    DiagramError,
    enumerate_almost_special,
    enumerate_special,
    format_diagram,
    parse_diagram,
)
from .report import ResourceCaps, RunConfig, SCHEMA_VERSION, checked

THREADS_ENV = "POLARSPAN_THREADS"
LARGE_GENUS = 5


class CapExceeded(RuntimeError):
    pass


class _Deadline:
    def __init__(self, seconds: float):
        self.seconds = seconds
        self.start = time.monotonic()

    def check(self, stage: str) -> None:
        elapsed = time.monotonic() - self.start
        if elapsed > self.seconds:
            raise CapExceeded(
                f"stage {stage!r} exceeded the {self.seconds:.0f}s genus budget"
            )


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", dest="fmt", default=None, choices=["json", "text", "csv"])
    p.add_argument("--output", default=None, help="write the report to a file")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--allow-large", action="store_true", help="permit genus >= 5 lattice work")
    p.add_argument("--max-seconds", type=float, default=600.0, help="per-genus time cap")
    p.add_argument("--max-memory-mb", type=int, default=4096)
    p.add_argument("--max-points", type=int, default=polar.DEFAULT_POINT_CAP)


def _config(args: argparse.Namespace, gmin: int, gmax: int, default_fmt: str = "json") -> RunConfig:
    return RunConfig(
        subcommand=args.command,
        genus_min=gmin,
        genus_max=gmax,
        fmt=args.fmt or default_fmt,
        threads=args.threads,
        allow_large=args.allow_large,
        caps=ResourceCaps(args.max_memory_mb, args.max_seconds, args.max_points),
        output=args.output,
    )


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _read_stdin_value() -> Any:
    raw = sys.stdin.read().strip()
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def _diagram_arg(args: argparse.Namespace) -> diagrams.CrossinglessDiagram:
    text = args.diagram
    if text == "-":
        val = _read_stdin_value()
        if isinstance(val, dict):
            val = val.get("diagram", "")
        text = str(val)
    return parse_diagram(text, args.genus)


def _estimate_memory_mb(genus: int, with_lines: bool) -> float:
    pts = polar.lagrangian_count(genus)
    est = pts * 1500.0
    if with_lines:
        est += polar.line_count(genus) * 150.0
    return est / 1e6


def _space_for(genus: int, cfg: RunConfig, *, with_lines: bool = False) -> polar.DualPolarSpace:
    if polar.lagrangian_count(genus) > cfg.caps.max_points:
        raise polar.ResourceLimitExceeded(
            f"genus {genus} has {polar.lagrangian_count(genus)} points, above the cap "
            f"{cfg.caps.max_points} (raise --max-points)"
        )
    est = _estimate_memory_mb(genus, with_lines)
    if est > cfg.caps.memory_mb:
        raise CapExceeded(
            f"estimated {est:.0f} MB exceeds the {cfg.caps.memory_mb} MB cap"
        )
    if cfg.caps.max_points == polar.DEFAULT_POINT_CAP:
        return polar.space(genus)
    return polar.DualPolarSpace(genus, cfg.caps.max_points)


def _require_large(genus: int, cfg: RunConfig, what: str) -> None:
    if genus >= LARGE_GENUS and not cfg.allow_large:
        raise CapExceeded(
            f"{what} at genus {genus} requires --allow-large"
        )


# ---------------------------------------------------------------- counts

def _cmd_counts(args: argparse.Namespace) -> int:
    cfg = _config(args, 0, args.genus_max, default_fmt="text")
    gs = list(range(args.genus_max + 1))
    big_n = [diagrams.almost_special_count(g) for g in gs]
    small_n = [diagrams.special_count(g) for g in gs]
    if cfg.fmt == "json":
        _emit(
            json.dumps(
                {
                    "schema_version": SCHEMA_VERSION,
                    "genus": gs,
                    "almost_special": big_n,
                    "special": small_n,
                },
                indent=2,
            ),
            cfg,
        )
    elif cfg.fmt == "csv":
        rows = [
            ["g"] + [str(g) for g in gs],
            ["N(g)"] + [str(v) for v in big_n],
            ["n(g)"] + [str(v) for v in small_n],
        ]
        _emit("\n".join(",".join(r) for r in rows), cfg)
    else:
        widths = [
            max(len(str(x)) for x in col)
            for col in zip(["g"] + gs, ["N(g)"] + big_n, ["n(g)"] + small_n)
        ]
        lines = []
        for label, vals in (("g", gs), ("N(g)", big_n), ("n(g)", small_n)):
            cells = [label] + [str(v) for v in vals]
            lines.append("  ".join(c.rjust(w) for c, w in zip(cells, widths)))
        _emit("\n".join(lines), cfg)
    return 0


# ------------------------------------------------------------- enumerate

def _cmd_enumerate(args: argparse.Namespace) -> int:
    cfg = _config(args, args.genus, args.genus)
    if args.set == "almost-special":
        ds = enumerate_almost_special(args.genus)
    elif args.set == "special":
        ds = enumerate_special(args.genus)
    else:
        ds = tuple(d for d in enumerate_special(args.genus) if diagrams.is_irreducible(d))
    symbols = [format_diagram(d) for d in ds]
    if cfg.fmt == "text":
        _emit("\n".join(s if s else '""' for s in symbols), cfg)
    else:
        _emit(
            json.dumps(
                {
                    "schema_version": SCHEMA_VERSION,
                    "genus": args.genus,
                    "set": args.set,
                    "count": len(symbols),
                    "diagrams": symbols,
                },
                indent=2,
            ),
            cfg,
        )
    return 0


# ------------------------------------------------------ lagrangians/lines

def _cmd_lagrangians(args: argparse.Namespace) -> int:
    cfg = _config(args, args.genus, args.genus)
    sp = _space_for(args.genus, cfg)
    if cfg.fmt == "text":
        _emit("\n".join(",".join(p.to_strings()) or "(zero)" for p in sp.points), cfg)
    else:
        _emit(
            json.dumps(
                {
                    "schema_version": SCHEMA_VERSION,
                    "genus": args.genus,
                    "count": len(sp.points),
                    "points": [list(p.to_strings()) for p in sp.points],
                },
                indent=2,
            ),
            cfg,
        )
    return 0


def _cmd_lines(args: argparse.Namespace) -> int:
    cfg = _config(args, args.genus, args.genus)
    sp = _space_for(args.genus, cfg, with_lines=True)
    w = 2 * args.genus
    recs = [
        {
            "axis": [f"{r:0{w}b}"[::-1] for r in axis],
            "points": [int(a), int(b), int(c)],
        }
        for axis, (a, b, c) in zip(sp.line_axes, sp.line_triples)
    ]
    _emit(
        json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "genus": args.genus,
                "count": len(recs),
                "lines": recs,
            },
            indent=2,
        ),
        cfg,
    )
    return 0


# --------------------------------------------------------------- closure

def _seed_points(args: argparse.Namespace, sp: polar.DualPolarSpace) -> list[int]:
    if args.seed_file:
        with open(args.seed_file) as fh:
            val = json.load(fh)
        if isinstance(val, dict):
            val = val.get("seed", [])
        return [int(x) for x in val]
    if args.seed == "special":
        return list(lattice.special_basis_points(sp))
    if args.seed == "-":
        val = _read_stdin_value()
        if isinstance(val, dict):
            val = val.get("seed", [])
        return [int(x) for x in val]
    raise ValueError(f"unknown seed {args.seed!r}; use 'special', '-', or --seed-file")


def _cmd_closure(args: argparse.Namespace) -> int:
    cfg = _config(args, args.genus, args.genus)
    sp = _space_for(args.genus, cfg, with_lines=True)
    seed = _seed_points(args, sp)
    closed = sorted(sp.closure(seed))
    _emit(
        json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "genus": args.genus,
                "seed_size": len(set(seed)),
                "closure_size": len(closed),
                "spans_all": len(closed) == len(sp.points),
                "points": closed,
            },
            indent=2,
        ),
        cfg,
    )
    return 0


# -------------------------------------------------------------------- mu

def _cmd_mu(args: argparse.Namespace) -> int:
    cfg = _config(args, args.genus, args.genus)
    d = _diagram_arg(args)
    wl = homology.lagrangian_of(d)
    closed = homology.lagrangian_closed_form(d)
    rec: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "genus": d.genus,
        "diagram": format_diagram(d),
        "weight": wl.weight,
        "point": list(wl.point.to_strings()),
        "closed_form_agrees": wl.point == closed,
    }
    if args.with_index or d.genus <= 4:
        sp = _space_for(d.genus, cfg)
        rec["point_index"] = sp.index_of(wl.point)
    else:
        rec["point_index"] = None
    _emit(json.dumps(rec, indent=2), cfg)
    return 0 if rec["closed_form_agrees"] else 1


# ------------------------------------------------------------------ rank

def _cmd_rank(args: argparse.Namespace) -> int:
    cfg = _config(args, args.genus, args.genus)
    g = args.genus
    expected_n = diagrams.special_count(g)
    if args.ring == "F2":
        _require_large(g, cfg, "GF(2) relation rank")
        sp = _space_for(g, cfg, with_lines=True)
        rank = lattice.relation_rank_gf2(sp)
        free_rank = len(sp.points) - rank
        rec = {
            "schema_version": SCHEMA_VERSION,
            "genus": g,
            "ring": "F2",
            "points": len(sp.points),
            "lines": int(len(sp.line_triples)),
            "relation_rank": rank,
            "free_rank": free_rank,
            "torsion": [],
            "expected_n": expected_n,
            "match": free_rank == expected_n,
        }
        _emit(json.dumps(rec, indent=2), cfg)
        return 0 if rec["match"] else 1
    _require_large(g, cfg, "integer lattice elimination")
    lat = lattice.cached_lattice(g) if cfg.caps.max_points == polar.DEFAULT_POINT_CAP else lattice.build_lattice(g, cfg.caps.max_points)
    rec = {
        "schema_version": SCHEMA_VERSION,
        "genus": g,
        "ring": "Z",
        "points": lat.n_points,
        "lines": lat.n_lines,
        "free_rank": lat.free_rank,
        "torsion": list(lat.torsion),
        "expected_n": expected_n,
        "match": lat.free_rank == expected_n and not lat.torsion,
    }
    _emit(json.dumps(rec, indent=2), cfg)
    return 0 if rec["match"] else 1


# ---------------------------------------------------------- verify-basis

def _cmd_verify_basis(args: argparse.Namespace) -> int:
    cfg = _config(args, args.genus, args.genus)
    g = args.genus
    expected_n = diagrams.special_count(g)
    sp = _space_for(g, cfg, with_lines=True)
    basis_pts = lattice.special_basis_points(sp)
    extra: dict[str, Any] = {}
    if g < LARGE_GENUS:
        lat = lattice.cached_lattice(g)
        verdict = lattice.verify_basis(basis_pts, lat)
        free_rank: Optional[int] = lat.free_rank
        torsion: Optional[list[int]] = list(lat.torsion)
        method = "smith-normal-form determinant"
    else:
        _require_large(g, cfg, "basis verification")
        span = lattice.cached_span(g)
        if not (span.spans_all and span.certified):
            verdict = "rank-deficient"
            free_rank = None
        elif span.max_denominator == 1:
            verdict = "unimodular"
            free_rank = len(span.basis_points)
        else:
            # unique rational coordinates exist but carry denominators:
            # the images span over Q yet index a proper sublattice
            verdict = "non-integral-inverse"
            free_rank = len(span.basis_points)
            ob = lattice.span_obstruction(span, sp)
            extra["max_denominator"] = span.max_denominator
            extra["points_outside_integer_span"] = int(
                len(ob["points_outside_span"])
            )
        torsion = None
        method = "certified closure coordinates"
    rec = {
        "schema_version": SCHEMA_VERSION,
        "genus": g,
        "points": len(sp.points),
        "lines": int(len(sp.line_triples)),
        "basis_size": len(basis_pts),
        "free_rank": free_rank,
        "torsion": torsion,
        "expected_n": expected_n,
        "verdict": checked("unimodular", verdict),
        "method": method,
        "match": verdict == "unimodular",
        **extra,
    }
    _emit(json.dumps(rec, indent=2), cfg)
    return 0 if rec["match"] else 1


# --------------------------------------------------------------- express

def _cmd_express(args: argparse.Namespace) -> int:
    cfg = _config(args, args.genus, args.genus)
    d = _diagram_arg(args)
    g = d.genus
    if g >= LARGE_GENUS:
        _require_large(g, cfg, "basis expression")
    sp = _space_for(g, cfg, with_lines=True)
    basis = enumerate_special(g)
    lat = lattice.cached_lattice(g) if g < LARGE_GENUS else None
    try:
        coeffs = lattice.express(d, sp=sp, lat=lat)
    except lattice.NotInSpan as exc:
        span = lattice.cached_span(g)
        ob = lattice.span_obstruction(span, sp)
        detail = {
            "genus": g,
            "diagram": format_diagram(d),
            "modulus": ob["modulus"] if ob else None,
            "points_outside_integer_span": int(len(ob["points_outside_span"]))
            if ob
            else None,
        }
        sys.stdout.write(
            report.error_record("NotInSpan", str(exc), **detail) + "\n"
        )
        return 2
    rec = {
        "schema_version": SCHEMA_VERSION,
        "genus": g,
        "points": len(sp.points),
        "lines": int(len(sp.line_triples)),
        "diagram": format_diagram(d),
        "basis": [format_diagram(b) for b in basis],
        "coefficients": list(coeffs),
        "free_rank": len(basis),
        "torsion": list(lat.torsion) if lat is not None else None,
        "expected_n": diagrams.special_count(g),
        "residual_checked": lat is not None,
        "match": True,
    }
    _emit(json.dumps(rec, indent=2), cfg)
    return 0


# ---------------------------------------------------------------- verify

def _mu_pair(d: diagrams.CrossinglessDiagram) -> tuple[tuple[str, ...], tuple[str, ...]]:
    return (
        homology.lagrangian_of(d).point.to_strings(),
        homology.lagrangian_closed_form(d).to_strings(),
    )


def _mu_pairs(ds: Sequence[diagrams.CrossinglessDiagram], threads: int):
    if threads > 1 and len(ds) >= 64:
        with multiprocessing.Pool(threads) as pool:
            return pool.map(_mu_pair, ds, chunksize=32)
    return [_mu_pair(d) for d in ds]


def _verify_genus(g: int, cfg: RunConfig, stretch: bool) -> report.GenusRecord:
    t0 = time.monotonic()
    deadline = _Deadline(cfg.caps.seconds_per_genus)
    checks: dict[str, dict[str, Any]] = {}
    skipped: list[str] = []

    alm = enumerate_almost_special(g)
    specials = enumerate_special(g)
    checks["N"] = checked(diagrams.almost_special_count(g), len(alm))
    checks["n"] = checked(diagrams.special_count(g), len(specials))
    if g >= 1:
        checks["m"] = checked(
            diagrams.irreducible_special_count(g),
            sum(1 for d in specials if diagrams.is_irreducible(d)),
        )
    else:
        skipped.append("m (no closed form at genus 0)")
    deadline.check("diagram enumeration")

    pairs = _mu_pairs(specials, cfg.threads)
    if any(a != b for a, b in pairs):
        raise homology.InternalInvariantViolation(
            "kernel route and closed form disagree on a special diagram"
        )
    checks["mu_injective"] = checked(True, len({a for a, _ in pairs}) == len(specials))
    deadline.check("mu consistency")

    geometry_ok = polar.lagrangian_count(g) <= cfg.caps.max_points and (
        g < LARGE_GENUS or cfg.allow_large
    )
    if geometry_ok:
        sp = _space_for(g, cfg, with_lines=True)
        checks["points"] = checked(polar.lagrangian_count(g), len(sp.points))
        checks["lines"] = checked(polar.line_count(g), int(len(sp.line_triples)))
        deadline.check("geometry")
        basis_pts = lattice.special_basis_points(sp)
        closure = sp.closure(basis_pts)
        checks["closure_spans"] = checked(True, len(closure) == len(sp.points))
        deadline.check("closure")
        if g < LARGE_GENUS:
            lat = lattice.cached_lattice(g)
            checks["z_free_rank"] = checked(diagrams.special_count(g), lat.free_rank)
            checks["torsion"] = checked([], list(lat.torsion))
            checks["basis_unimodular"] = checked(
                "unimodular", lattice.verify_basis(basis_pts, lat)
            )
            checks["f2_rank"] = checked(
                len(sp.points) - diagrams.special_count(g),
                lattice.relation_rank_gf2(sp),
            )
        else:
            # no desk-scale SNF here: rank comes from the certified
            # rational coordinates (a Q-basis certificate), and the
            # unimodularity verdict from their denominators
            span = lattice.cached_span(g)
            rational_basis = span.spans_all and span.certified
            checks["z_free_rank"] = checked(
                diagrams.special_count(g),
                len(span.basis_points) if rational_basis else -1,
            )
            if not rational_basis:
                verdict = "rank-deficient"
            elif span.max_denominator == 1:
                verdict = "unimodular"
            else:
                verdict = "non-integral-inverse"
            checks["basis_unimodular"] = checked("unimodular", verdict)
            skipped.append("torsion (integer elimination beyond desk scale)")
            if stretch:
                checks["f2_rank"] = checked(
                    len(sp.points) - diagrams.special_count(g),
                    lattice.relation_rank_gf2(sp),
                )
            else:
                skipped.append("f2_rank (pass --stretch)")
        deadline.check("lattice")
    else:
        skipped.extend(["points", "lines", "closure_spans", "z_free_rank", "torsion",
                        "basis_unimodular", "f2_rank"])
        if g >= LARGE_GENUS and not cfg.allow_large:
            skipped.append("geometry requires --allow-large")
    return report.GenusRecord(g, checks, skipped, time.monotonic() - t0)


def _cmd_verify(args: argparse.Namespace) -> int:
    gmin, gmax = args.genus_min, args.genus_max
    if args.genus is not None:
        gmin = gmax = args.genus
    cfg = _config_range(args, gmin, gmax)
    t0 = time.monotonic()
    records = [_verify_genus(g, cfg, args.stretch) for g in range(gmin, gmax + 1)]
    rep = report.VerificationReport(
        records,
        {
            "genus_min": gmin,
            "genus_max": gmax,
            "threads": cfg.threads,
            "allow_large": cfg.allow_large,
            "caps": {
                "memory_mb": cfg.caps.memory_mb,
                "seconds_per_genus": cfg.caps.seconds_per_genus,
                "max_points": cfg.caps.max_points,
            },
        },
        time.monotonic() - t0,
    )
    _emit(rep.to_json(), cfg)
    return 0 if rep.all_match else 1


def _config_range(args: argparse.Namespace, gmin: int, gmax: int) -> RunConfig:
    return RunConfig(
        subcommand=args.command,
        genus_min=gmin,
        genus_max=gmax,
        fmt=args.fmt or "json",
        threads=args.threads,
        allow_large=args.allow_large,
        caps=ResourceCaps(args.max_memory_mb, args.max_seconds, args.max_points),
        output=args.output,
    )


# ------------------------------------------------------------------ main

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polarspan",
        description="diagram enumeration, Lagrangian geometry, and exact lattice checks",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("counts", help="almost-special/special counting table")
    p.add_argument("--genus-max", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_counts)

    p = sub.add_parser("enumerate", help="list diagrams of one genus")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--set", default="special",
                   choices=["special", "almost-special", "irreducible"])
    _add_common(p)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("lagrangians", help="all points of the dual polar space")
    p.add_argument("--genus", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_lagrangians)

    p = sub.add_parser("lines", help="all isotropic lines with their axes")
    p.add_argument("--genus", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_lines)

    p = sub.add_parser("closure", help="two-of-three closure of a seed set")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--seed", default="special",
                   help="'special' or '-' for JSON point indices on stdin")
    p.add_argument("--seed-file", default=None,
                   help="JSON file of point indices (overrides --seed)")
    _add_common(p)
    p.set_defaults(func=_cmd_closure)

    p = sub.add_parser("mu", help="kernel Lagrangian and weight of a diagram")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--diagram", required=True, help="symbol such as '(145)(23)', or '-' for stdin")
    p.add_argument("--with-index", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_mu)

    p = sub.add_parser("rank", help="rank of the relation lattice")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--ring", default="Z", choices=["Z", "F2"])
    _add_common(p)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("verify-basis", help="is the special family a lattice basis")
    p.add_argument("--genus", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_verify_basis)

    p = sub.add_parser("express", help="coefficients of a diagram in the special basis")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--diagram", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_express)

    p = sub.add_parser("verify", help="full per-genus verification report")
    p.add_argument("--genus", type=int, default=None)
    p.add_argument("--genus-min", type=int, default=0)
    p.add_argument("--genus-max", type=int, default=4)
    p.add_argument("--stretch", action="store_true",
                   help="include the large GF(2) rank at genus >= 5")
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    return ap


_ERROR_KINDS = (
    DiagramError,
    polar.NotCollinear,
    polar.ResourceLimitExceeded,
    CapExceeded,
    lattice.BasisNotVerified,
    lattice.NotInSpan,
    lattice.TorsionPresent,
    report.SchemaVersionError,
    homology.InternalInvariantViolation,
    ValueError,
    OSError,
)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _ERROR_KINDS as exc:
        sys.stdout.write(report.error_record(type(exc).__name__, str(exc)) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())

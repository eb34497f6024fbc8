"""Command-line front end.

Subcommands: check, count, count-even, construct, encode, decode,
roundtrip, spectrum, bound.  Exit codes: 0 success/pass, 1 property
violation, 2 usage or I/O error, 3 resource limit.  Output is
deterministic for a fixed invocation; the DM_CACHE_DIR environment
variable overrides any --cache-dir setting.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import constructions, encoding, levels, setsystem

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


@dataclass(frozen=True)
class Config:
    cache_dir: str | None
    max_n: int
    threads: int
    seed: int
    output_format: str

    def __post_init__(self) -> None:
        if self.max_n > setsystem.MAX_GROUND_SIZE:
            raise ValueError(f"max_n {self.max_n} exceeds {setsystem.MAX_GROUND_SIZE}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.output_format not in ("text", "json"):
            raise ValueError(f"unknown output format {self.output_format}")


def _resolve_cache_dir(flag_value: str | None) -> str | None:
    return os.environ.get("DM_CACHE_DIR") or flag_value


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        setsystem.atomic_write_text(out_path, text)


def _config_from_args(args: argparse.Namespace) -> Config:
    return Config(
        cache_dir=_resolve_cache_dir(getattr(args, "cache_dir", None)),
        max_n=getattr(args, "max_n", 5),
        threads=getattr(args, "threads", 1),
        seed=getattr(args, "seed", 0),
        output_format=getattr(args, "format", "text"),
    )


# --- subcommand implementations -----------------------------------------------

def cmd_check(args: argparse.Namespace) -> int:
    system = setsystem.load_system(args.path)
    lines = [f"system: n={system.n}, feasible sets: {system.num_feasible}"]
    doc: dict[str, object] = {"n": system.n, "num_feasible": system.num_feasible}
    if not system.is_proper:
        lines.append("verdict: not a delta-matroid (no feasible sets)")
        doc.update({"delta_matroid": False, "reason": "improper"})
        verdict = False
    else:
        witness = setsystem.check_symmetric_exchange(system)
        verdict = witness is None
        even = setsystem.is_even(system)
        parity = "uniform-parity sizes" if even else "mixed-parity sizes"
        if verdict:
            lines.append("verdict: delta-matroid")
            doc["delta_matroid"] = True
            lines.append(f"parity: {parity}")
            doc["even"] = even
        else:
            x = sorted(setsystem.elements_of(witness.x))
            y = sorted(setsystem.elements_of(witness.y))
            lines.append(
                "verdict: not a delta-matroid "
                f"(witness: X={x}, Y={y}, e={witness.e} admits no exchange)"
            )
            lines.append(f"parity: {parity}")
            doc["delta_matroid"] = False
            doc["even"] = even
            doc["witness"] = {"x": witness.x, "y": witness.y, "e": witness.e}
    if args.format == "json":
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", None)
    else:
        _emit("".join(line + "\n" for line in lines), None)
    return EXIT_PASS if verdict else EXIT_VIOLATION


def _level_store(config: Config, n_max: int) -> dict[int, levels.LevelCache]:
    return levels.build_levels(
        min(n_max, levels.MAX_LISTED_LEVEL),
        cache_dir=config.cache_dir,
        threads=config.threads,
    )


def cmd_count(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    store = _level_store(config, args.max_n)
    progress = None
    if args.allow_n6 and args.max_n > levels.MAX_LISTED_LEVEL and args.verbose:
        def progress(done: int, total: int) -> None:
            if done % 50 == 0 or done == total:
                print(f"classes {done}/{total}", file=sys.stderr)
    d6 = None
    if args.max_n > levels.MAX_LISTED_LEVEL:
        if not args.allow_n6:
            raise levels.ResourceLimitError(
                "level 6 counting requires --allow-n6 (long-running)"
            )
        d6 = levels.count_next_level_via_classes(
            store[5], threads=config.threads, progress=progress
        )
    reports = levels.count_report(
        args.max_n, store, with_even=args.with_even, allow_n6=args.allow_n6, d6=d6
    )
    if config.output_format == "json":
        doc = {
            "levels": [
                {"n": r.n, "d": r.d, "gamma": r.gamma}
                | ({"e": r.e} if r.e is not None else {})
                for r in reports
            ]
        }
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", None)
    else:
        header = f"{'n':>2}  {'d_n':>12}  {'gamma':>10}"
        if args.with_even:
            header += f"  {'e_n':>8}"
        rows = [header]
        for r in reports:
            row = f"{r.n:>2}  {r.d:>12}  {r.gamma:>10.6f}"
            if args.with_even:
                row += f"  {r.e if r.e is not None else '-':>8}"
            rows.append(row)
        _emit("".join(row + "\n" for row in rows), None)
    return EXIT_PASS


def cmd_count_even(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    if args.max_n > levels.MAX_LISTED_LEVEL:
        raise levels.ResourceLimitError(
            f"even counts go up to level {levels.MAX_LISTED_LEVEL}"
        )
    store = _level_store(config, args.max_n)
    rows = [(n, levels.count_even(store[n])) for n in range(1, args.max_n + 1)]
    if config.output_format == "json":
        doc = {"levels": [{"n": n, "e": e} for n, e in rows]}
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", None)
    else:
        text = [f"{'n':>2}  {'e_n':>8}"] + [f"{n:>2}  {e:>8}" for n, e in rows]
        _emit("".join(row + "\n" for row in text), None)
    return EXIT_PASS


def _emit_system(system: setsystem.SetSystem, args: argparse.Namespace) -> None:
    _emit(setsystem.dumps_system(system), getattr(args, "out", None))


def cmd_construct(args: argparse.Namespace) -> int:
    if args.kind == "stable-complement":
        vertex_set = constructions.random_stable_set(args.n, args.seed)
        system = constructions.complement_delta_matroid(vertex_set)
        _emit_system(system, args)
    elif args.kind == "cut-sample":
        system = constructions.sample_cut_construction(args.n, args.cut, args.seed)
        _emit_system(system, args)
    elif args.kind == "stacked-even":
        layers = constructions.random_stacked_layers(args.n, args.seed)
        system = constructions.stacked_even_delta_matroid(args.n, layers)
        _emit_system(system, args)
    elif args.kind == "gs-stable":
        vertex_set = constructions.graham_sloane_stable_set(args.n, args.r)
        if args.format == "json":
            doc = {"n": args.n, "r": args.r, "masks": vertex_set.sorted_masks()}
            _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", getattr(args, "out", None))
        else:
            text = "".join(f"{m}\n" for m in vertex_set.sorted_masks())
            _emit(text, getattr(args, "out", None))
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown construction {args.kind}")
    return EXIT_PASS


def cmd_encode(args: argparse.Namespace) -> int:
    system = setsystem.load_system(args.in_path)
    record = encoding.encode_even_system(system)
    _emit(encoding.dumps_record(record), getattr(args, "out", None))
    return EXIT_PASS


def cmd_decode(args: argparse.Namespace) -> int:
    record = encoding.load_record(args.in_path)
    infeasible = encoding.decode_even_system(record)
    if args.format == "json":
        doc = {
            "n": record.n,
            "parity": record.parity.value,
            "infeasible_even": list(infeasible),
        }
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", getattr(args, "out", None))
    else:
        _emit("".join(f"{m}\n" for m in infeasible), getattr(args, "out", None))
    return EXIT_PASS


def cmd_roundtrip(args: argparse.Namespace) -> int:
    system = setsystem.load_system(args.in_path)
    record = encoding.encode_even_system(system)
    restored = encoding.reconstruct_system(encoding.loads_record(encoding.dumps_record(record)))
    ok = restored == system
    s_bound = encoding.s_length_bound(record.n)
    a_bound = record.alpha * (1 << (record.n - 1))
    lines = [
        f"selection size: {len(record.s)} (bound {s_bound})",
        f"residual size: {len(record.residual)} (residue bound {a_bound})",
        f"round trip: {'exact' if ok else 'MISMATCH'}",
    ]
    doc = {
        "s_size": len(record.s),
        "s_bound": s_bound,
        "residual_size": len(record.residual),
        "residue_bound": str(a_bound),
        "roundtrip_exact": ok,
    }
    if args.format == "json":
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", None)
    else:
        _emit("".join(line + "\n" for line in lines), None)
    return EXIT_PASS if ok else EXIT_VIOLATION


def cmd_spectrum(args: argparse.Namespace) -> int:
    values = encoding.halved_cube_spectrum(args.n)
    smallest = encoding.smallest_eigenvalue(args.n)
    if args.format == "json":
        doc = {"n": args.n, "values": values, "min": smallest}
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", None)
    else:
        lines = [
            f"lambda={lam:>3} -> {val}"
            for lam, val in zip(range(-args.n, args.n + 1, 2), values)
        ]
        lines.append(f"smallest: {smallest}")
        _emit("".join(line + "\n" for line in lines), None)
    return EXIT_PASS


def cmd_bound(args: argparse.Namespace) -> int:
    report = encoding.upper_bound_report(args.n)
    if args.format == "json":
        doc = {
            "n": report.n,
            "alpha": str(report.alpha),
            "sigma": report.sigma,
            "sigma_prime": str(report.sigma_prime),
            "bell_bound": report.bell_bound,
            "log_e_n_bound": report.log_e_n_bound,
        }
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", None)
    else:
        lines = [
            f"n: {report.n}",
            f"alpha: {report.alpha}",
            f"sigma: {report.sigma!r}",
            f"sigma_prime: {report.sigma_prime}",
            f"bell_bound: {report.bell_bound}",
            f"log_e_n_bound: {report.log_e_n_bound!r}",
        ]
        _emit("".join(line + "\n" for line in lines), None)
    return EXIT_PASS


# --- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dmtool",
        description="Delta-matroid counting, construction, and encoding toolkit.",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--cache-dir", default=None, help="level cache directory")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--verbose", action="store_true", help="progress on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="test a set-system file for the exchange axiom")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("count", help="exact delta-matroid counts per level")
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--with-even", action="store_true")
    p.add_argument("--allow-n6", action="store_true",
                   help="admit the long-running level-6 class count")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("count-even", help="counts of even delta-matroids")
    p.add_argument("--max-n", type=int, default=5)
    p.set_defaults(func=cmd_count_even)

    p = sub.add_parser("construct", help="emit a constructed system")
    p.add_argument("kind", choices=(
        "stable-complement", "cut-sample", "stacked-even", "gs-stable"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=2, help="rank for gs-stable")
    p.add_argument("--cut", type=int, default=1, help="cut element for cut-sample")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("encode", help="compress an even system to a record")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="expand a record to its infeasible sets")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("roundtrip", help="encode then decode, verify equality")
    p.add_argument("--in", dest="in_path", required=True)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("spectrum", help="distance-2 component eigenvalues")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bound", help="even-count upper bound ingredients")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bound)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except levels.ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (
        setsystem.SystemFormatError,
        levels.CacheFormatError,
        setsystem.ImproperSystemError,
        encoding.EncodingError,
        constructions.ConstructionError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

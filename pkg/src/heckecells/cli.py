"""
Command line interface.

Subcommands: cells, klpoly, jring, duflo, phi, bijection, verify,
cache-info.  Exit codes: 0 success, 1 verification failure, 2 usage
error, 3 a computation left its length ball (the message names the
smallest sufficient bound when known).

Output is deterministic: repeated runs with the same configuration and
cache state produce byte-identical reports.  Laurent polynomials are
rendered as sorted (exponent, coefficient) pairs; there is no floating
point anywhere.  Every report and cache file carries the normalization
convention identifier.

Configuration is flags-only; the single environment variable
HECKECELLS_CACHE_DIR sets the default cache directory.  A ``--jobs N``
flag caps the worker threads used for independent product jobs inside
the verification suites; results are merged deterministically.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import CONVENTION_ID, ISOGENY
from .affine import affine_weyl
from .bernstein import bernstein_central, is_central, phi_cell
from .cells import CellAlgebra, cell_partition
from .dualside import match_cells_to_classes, unipotent_classes
from .errors import BoundExceeded, HeckeCellsError, NoBijection, NonDominant
from .hecke import KLCache, kl_polynomial
from .rootdata import AFFINE_TYPES
from .verify import DEFAULT_BOUNDS, GAMMA_BOUNDS, run_suite

HARD_BOUND_CEILING = 24


@dataclass
class RunConfig:
    type_label: str = ""
    bound: int | None = None
    cache_path: str | None = None
    output_format: str = "text"
    jobs: int = 1
    bound_ceiling: int = HARD_BOUND_CEILING
    cell: int | None = None
    weight: tuple[int, ...] | None = None
    suite: str = ""
    words: list[str] = field(default_factory=list)

    def resolved_bound(self) -> int:
        bound = self.bound
        if bound is None:
            bound = DEFAULT_BOUNDS[self.type_label]
        if bound < 0:
            raise UsageError("bound must be nonnegative")
        if bound > self.bound_ceiling:
            raise UsageError(
                f"bound {bound} exceeds the ceiling {self.bound_ceiling}; "
                f"raise it explicitly with --bound-ceiling"
            )
        return bound


class UsageError(Exception):
    pass


def _metadata() -> dict:
    return {"isogeny": ISOGENY, "gamma_sign": "nonnegative"}


def _resolve_cache_path(config: RunConfig) -> str | None:
    if config.cache_path:
        return config.cache_path
    cache_dir = os.environ.get("HECKECELLS_CACHE_DIR")
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        return os.path.join(cache_dir, f"kl-{config.type_label.rstrip('~')}.jsonl")
    return None


def _load_cache(config: RunConfig) -> tuple[KLCache, str | None]:
    group = affine_weyl(AFFINE_TYPES[config.type_label])
    cache = KLCache(group)
    path = _resolve_cache_path(config)
    if path and os.path.exists(path):
        cache.load(path)
    return cache, path


def _save_cache(cache: KLCache, path: str | None) -> None:
    if path:
        cache.save(path)


def _check_type(label: str) -> str:
    if label not in AFFINE_TYPES:
        raise UsageError(
            f"unknown type {label!r}; expected one of {sorted(AFFINE_TYPES)}"
        )
    return label


# -- report assembly -------------------------------------------------------


def _cells_report(config: RunConfig) -> tuple[dict, list[list[str]]]:
    cache, path = _load_cache(config)
    bound = config.resolved_bound()
    part = cell_partition(cache.group, bound, cache)
    algebra = CellAlgebra(part, cache)
    cells = []
    for i in range(part.num_cells):
        a, exact = algebra.a_function(i)
        duflo = (
            [d.word_str for d in algebra.duflo_involutions(i)] if exact else []
        )
        cells.append(
            {
                "index": i,
                "a_value": a,
                "a_exact": exact,
                "size_in_ball": len(part.two_sided_cells[i]),
                "complete": part.complete[i],
                "duflo": duflo,
                "is_lowest": part.is_lowest(i),
            }
        )
    _save_cache(cache, path)
    report = {
        "type": config.type_label,
        "bound": bound,
        "convention_id": CONVENTION_ID,
        "metadata": _metadata(),
        "cells": cells,
        "order": sorted([i, j] for (i, j) in part.cell_order),
    }
    rows = [
        [
            "index", "a_value", "a_exact", "size_in_ball", "complete",
            "is_lowest", "duflo",
        ]
    ] + [
        [
            str(c["index"]), str(c["a_value"]), str(c["a_exact"]),
            str(c["size_in_ball"]), str(c["complete"]),
            str(c["is_lowest"]), ";".join(c["duflo"]),
        ]
        for c in cells
    ]
    return report, rows


def _klpoly_report(config: RunConfig) -> tuple[dict, list[list[str]]]:
    cache, path = _load_cache(config)
    group = cache.group
    try:
        x = group.parse_word(config.words[0])
        w = group.parse_word(config.words[1])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if w.length > config.bound_ceiling:
        raise UsageError(
            f"element of length {w.length} exceeds the ceiling "
            f"{config.bound_ceiling}"
        )
    p = kl_polynomial(x, w, cache)
    _save_cache(cache, path)
    report = {
        "type": config.type_label,
        "convention_id": CONVENTION_ID,
        "metadata": _metadata(),
        "x": x.word_str,
        "w": w.word_str,
        "p": [list(pair) for pair in p.pairs()],
    }
    rows = [["exponent", "coefficient"]] + [
        [str(e), str(c)] for e, c in p.pairs()
    ]
    return report, rows


def _jring_report(config: RunConfig) -> tuple[dict, list[list[str]]]:
    cache, path = _load_cache(config)
    bound = config.bound if config.bound is not None else GAMMA_BOUNDS[config.type_label]
    if bound > config.bound_ceiling:
        raise UsageError(f"bound {bound} exceeds the ceiling")
    part = cell_partition(cache.group, bound, cache)
    algebra = CellAlgebra(part, cache)
    cell = config.cell if config.cell is not None else part.num_cells - 1
    if not 0 <= cell < part.num_cells:
        raise UsageError(
            f"cell index {cell} out of range 0..{part.num_cells - 1}"
        )
    a, exact = algebra.a_function(cell)
    members = part.two_sided_cells[cell]
    gamma_rows = []
    for x in members:
        for y in members:
            for z in members:
                g = algebra.gamma(x, y, z)
                if g:
                    gamma_rows.append(
                        [x.word_str, y.word_str, z.word_str, g]
                    )
    _save_cache(cache, path)
    report = {
        "type": config.type_label,
        "bound": bound,
        "convention_id": CONVENTION_ID,
        "metadata": _metadata(),
        "cell": cell,
        "a_value": a,
        "a_exact": exact,
        "basis": [x.word_str for x in members],
        "gamma": gamma_rows,
    }
    rows = [["x", "y", "z", "gamma"]] + [
        [r[0], r[1], r[2], str(r[3])] for r in gamma_rows
    ]
    return report, rows


def _duflo_report(config: RunConfig) -> tuple[dict, list[list[str]]]:
    cache, path = _load_cache(config)
    bound = config.resolved_bound()
    part = cell_partition(cache.group, bound, cache)
    algebra = CellAlgebra(part, cache)
    cells = []
    for i in range(part.num_cells):
        a, exact = algebra.a_function(i)
        cells.append(
            {
                "index": i,
                "a_value": a,
                "a_exact": exact,
                "duflo": [d.word_str for d in algebra.duflo_involutions(i)]
                if exact
                else [],
            }
        )
    _save_cache(cache, path)
    report = {
        "type": config.type_label,
        "bound": bound,
        "convention_id": CONVENTION_ID,
        "metadata": _metadata(),
        "cells": cells,
    }
    rows = [["cell", "a_value", "word"]] + [
        [str(c["index"]), str(c["a_value"]), w]
        for c in cells
        for w in c["duflo"]
    ]
    return report, rows


def _phi_report(config: RunConfig) -> tuple[dict, list[list[str]]]:
    cache, path = _load_cache(config)
    group = cache.group
    bound = config.resolved_bound()
    if config.weight is None:
        raise UsageError("phi needs --weight, e.g. --weight 1,1")
    lam = config.weight
    part = cell_partition(group, bound, cache)
    algebra = CellAlgebra(part, cache)
    cell = config.cell if config.cell is not None else part.num_cells - 1
    if not 0 <= cell < part.num_cells:
        raise UsageError(
            f"cell index {cell} out of range 0..{part.num_cells - 1}"
        )
    try:
        z = bernstein_central(group, lam)
    except NonDominant as exc:
        raise UsageError(str(exc)) from exc
    central = is_central(z.expansion)
    image = phi_cell(z.expansion, algebra, cell)

    spart = cell_partition(group, bound + 2, cache)
    salgebra = CellAlgebra(spart, cache)
    scell = spart.cell_of[part.two_sided_cells[cell][0]]
    stable = phi_cell(z.expansion, salgebra, scell) == image
    _save_cache(cache, path)

    result = [
        {
            "t_word": x.word_str,
            "coefficient": [list(pair) for pair in p.pairs()],
        }
        for x, p in sorted(image.items(), key=lambda kv: kv[0].sort_key())
    ]
    report = {
        "type": config.type_label,
        "convention_id": CONVENTION_ID,
        "metadata": _metadata(),
        "cell": cell,
        "lambda": list(lam),
        "result": result,
        "checks": {"central": central, "stable": stable},
    }
    rows = [["t_word", "exponent", "coefficient"]] + [
        [r["t_word"], str(e), str(c)]
        for r in result
        for e, c in r["coefficient"]
    ]
    return report, rows


def _bijection_report(config: RunConfig) -> tuple[dict, list[list[str]]]:
    cache, path = _load_cache(config)
    bound = config.resolved_bound()
    part = cell_partition(cache.group, bound, cache)
    algebra = CellAlgebra(part, cache)
    classes = unipotent_classes(cache.group.datum)
    matching = match_cells_to_classes(algebra, classes)
    cells = []
    for i in range(part.num_cells):
        a, exact = algebra.a_function(i)
        cells.append(
            {
                "index": i,
                "a_value": a,
                "size_in_ball": len(part.two_sided_cells[i]),
                "complete": part.complete[i],
            }
        )
    _save_cache(cache, path)
    report = {
        "type": config.type_label,
        "bound": bound,
        "convention_id": CONVENTION_ID,
        "metadata": _metadata(),
        "cells": cells,
        "classes": [
            {
                "label": c.label,
                "marks": list(c.dynkin_marks),
                "dim_orbit": c.dim_orbit,
                "springer_dim": c.springer_dim,
            }
            for c in classes
        ],
        "matching": [[i, label] for i, label in matching],
    }
    rows = [["cell", "a_value", "class", "springer_dim"]]
    springer = {c.label: c.springer_dim for c in classes}
    for i, label in matching:
        rows.append(
            [str(i), str(cells[i]["a_value"]), label, str(springer[label])]
        )
    return report, rows


def _cache_info_report(config: RunConfig) -> tuple[dict, list[list[str]]]:
    path = config.cache_path
    if not path:
        raise UsageError("cache-info needs --cache PATH")
    if not os.path.exists(path):
        raise UsageError(f"no cache file at {path}")
    with open(path, encoding="ascii") as fh:
        header = json.loads(fh.readline())
        records = sum(1 for line in fh if line.strip())
    columns = 0
    label = header.get("type_label", "")
    if label in AFFINE_TYPES:
        cache = KLCache(affine_weyl(AFFINE_TYPES[label]))
        columns = cache.load(path)
    report = {
        "path": path,
        "header": header,
        "records": records,
        "complete_columns": columns,
    }
    rows = [["key", "value"]] + [
        ["path", path],
        ["records", str(records)],
        ["complete_columns", str(columns)],
    ] + [[f"header.{k}", str(v)] for k, v in sorted(header.items())]
    return report, rows


def _verify_report(config: RunConfig) -> tuple[dict, list[list[str]], bool]:
    cache, path = _load_cache(config)
    checks = run_suite(
        config.suite,
        config.type_label,
        cache,
        bound=config.bound,
        jobs=config.jobs,
    )
    _save_cache(cache, path)
    ok = all(passed for _, passed, _ in checks)
    report = {
        "type": config.type_label,
        "suite": config.suite,
        "convention_id": CONVENTION_ID,
        "metadata": _metadata(),
        "checks": [
            {"name": name, "passed": passed, "detail": detail}
            for name, passed, detail in checks
        ],
        "passed": ok,
    }
    rows = [["check", "status", "detail"]] + [
        [name, "PASS" if passed else "FAIL", detail]
        for name, passed, detail in checks
    ]
    return report, rows, ok


# -- rendering ----------------------------------------------------------------


def _emit(report: dict, rows: list[list[str]], fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(
            json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
        )
    elif fmt == "csv":
        for row in rows:
            sys.stdout.write(
                ",".join(str(c).replace(",", ";") for c in row) + "\n"
            )
    else:
        header = rows[0]
        for row in rows[1:]:
            sys.stdout.write(
                "  ".join(f"{h}={c}" for h, c in zip(header, row)) + "\n"
            )


# -- argument parsing ------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heckecells",
        description=(
            "Exact Kazhdan-Lusztig cell machinery for affine Weyl groups "
            "of rank <= 2"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_type=True):
        if needs_type:
            p.add_argument("type", help="affine type: A1~ A2~ C2~ G2~")
        p.add_argument("--bound", type=int, default=None)
        p.add_argument("--cache", default=None, help="KL cache file path")
        p.add_argument(
            "--out",
            choices=["json", "csv", "text"],
            default="text",
            dest="out",
        )
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument(
            "--bound-ceiling", type=int, default=HARD_BOUND_CEILING
        )

    common(sub.add_parser("cells", help="cell partition and a-values"))
    p = sub.add_parser("klpoly", help="one Kazhdan-Lusztig polynomial")
    p.add_argument("type")
    p.add_argument("x", help="word like 1.2.1, or e")
    p.add_argument("w")
    p.add_argument("--cache", default=None)
    p.add_argument("--out", choices=["json", "csv", "text"], default="text")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--bound-ceiling", type=int, default=HARD_BOUND_CEILING)

    p = sub.add_parser("jring", help="gamma structure constants of a cell")
    common(p)
    p.add_argument("--cell", type=int, default=None)

    common(sub.add_parser("duflo", help="distinguished involutions"))

    p = sub.add_parser("phi", help="central element image in a cell")
    common(p)
    p.add_argument("--cell", type=int, default=None)
    p.add_argument("--weight", default=None, help="dominant weight, e.g. 1,1")

    common(sub.add_parser("bijection", help="cells vs unipotent classes"))

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", help="kl-suite, cells-suite or paper-suite")
    p.add_argument("--type", required=True, dest="type")
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--cache", default=None)
    p.add_argument("--out", choices=["json", "csv", "text"], default="text")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--bound-ceiling", type=int, default=HARD_BOUND_CEILING)

    p = sub.add_parser("cache-info", help="inspect a cache file")
    p.add_argument("--cache", required=True)
    p.add_argument("--out", choices=["json", "csv", "text"], default="text")

    return parser


def _config_from_args(args) -> RunConfig:
    config = RunConfig()
    config.output_format = getattr(args, "out", "text")
    config.cache_path = getattr(args, "cache", None)
    config.jobs = max(1, getattr(args, "jobs", 1))
    config.bound = getattr(args, "bound", None)
    config.bound_ceiling = getattr(
        args, "bound_ceiling", HARD_BOUND_CEILING
    )
    config.cell = getattr(args, "cell", None)
    if getattr(args, "type", None) is not None:
        config.type_label = _check_type(args.type)
    weight = getattr(args, "weight", None)
    if weight is not None:
        try:
            config.weight = tuple(int(part) for part in weight.split(","))
        except ValueError as exc:
            raise UsageError(f"malformed weight {weight!r}") from exc
    if getattr(args, "suite", None) is not None:
        config.suite = args.suite
    if args.command == "klpoly":
        config.words = [args.x, args.w]
    return config


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        config = _config_from_args(args)
        if args.command == "cells":
            report, rows = _cells_report(config)
        elif args.command == "klpoly":
            report, rows = _klpoly_report(config)
        elif args.command == "jring":
            report, rows = _jring_report(config)
        elif args.command == "duflo":
            report, rows = _duflo_report(config)
        elif args.command == "phi":
            report, rows = _phi_report(config)
        elif args.command == "bijection":
            report, rows = _bijection_report(config)
        elif args.command == "cache-info":
            report, rows = _cache_info_report(config)
        elif args.command == "verify":
            report, rows, ok = _verify_report(config)
            _emit(report, rows, config.output_format)
            return 0 if ok else 1
        else:  # pragma: no cover
            raise UsageError(f"unknown command {args.command}")
        _emit(report, rows, config.output_format)
        return 0
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except BoundExceeded as exc:
        hint = f"; smallest sufficient bound: {exc.needed}" if exc.needed else ""
        sys.stderr.write(f"bound exceeded: {exc}{hint}\n")
        return 3
    except NoBijection as exc:
        sys.stderr.write(f"verification failure: {exc}\n")
        return 1
    except HeckeCellsError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

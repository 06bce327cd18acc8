"""Command-line front end with machine-readable output and a result cache.

Subcommands: ``homology`` prints a bigraded table as text, JSON or CSV;
``jones`` prints the Jones polynomial through the bracket state sum, the
graded Euler characteristic of homology, or both (exiting nonzero if they
ever disagree); ``verify`` runs one of the named torus-knot checks and emits
JSON-line reports.

Exit codes: 0 success, 1 failed verification or polynomial mismatch,
2 argument errors, 3 crossing-budget refusals.

Computed tables can be cached on disk, keyed by a content hash of the
canonical word encoding, the engine version and the computation mode; cache
writes go through a temporary file and an atomic rename, and unreadable
entries are silently recomputed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from typing import Optional

from . import __version__
from .diagram import CrossingLimitError, Word, parse_word, torus_word
from .homology import AbGroup, BigradedTable, homology, homology_unnormalized
from .invariants import graded_euler, jones_from_bracket
from .verify import (
    FAIL,
    check_conjecture1,
    check_e_vanishing,
    check_f1,
    check_f2,
    check_f3,
    check_les,
    check_low_degree_table,
    check_rem2,
    check_t1,
    check_width_lower_bound,
    stable_poly_report,
)

CACHE_ENV = "KHOMA_CACHE_DIR"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


# -- table serialization ------------------------------------------------------


def table_to_json(table: BigradedTable, diagram: dict) -> dict:
    return {
        "diagram": diagram,
        "normalized": table.normalized,
        "n_plus": table.n_plus,
        "n_minus": table.n_minus,
        "groups": [
            {"i": i, "j": j, "rank": g.rank, "torsion": list(g.torsion)}
            for (i, j), g in sorted(table.groups.items())
        ],
    }


def table_from_json(payload: dict) -> BigradedTable:
    groups = {
        (entry["i"], entry["j"]): AbGroup(entry["rank"], tuple(entry["torsion"]))
        for entry in payload["groups"]
    }
    return BigradedTable(
        groups=groups,
        normalized=payload["normalized"],
        n_plus=payload["n_plus"],
        n_minus=payload["n_minus"],
    )


def render_text(table: BigradedTable) -> str:
    lines = []
    for (i, j), g in sorted(table.groups.items()):
        lines.append(f"{i:>4} {j:>5}   {g}")
    if not lines:
        return "(trivial table)"
    header = f"{'i':>4} {'j':>5}   group"
    return "\n".join([header] + lines)


def render_csv(table: BigradedTable) -> str:
    lines = ["i,j,rank,torsion"]
    for (i, j), g in sorted(table.groups.items()):
        lines.append(f"{i},{j},{g.rank},{';'.join(str(d) for d in g.torsion)}")
    return "\n".join(lines)


# -- result cache -------------------------------------------------------------


def word_cache_key(word: Word, mode: str) -> str:
    """Stable content hash of (canonical word encoding, engine version, mode)."""
    encoding = f"{word.strands}:" + ",".join(str(k) for k in word.signed_letters())
    payload = f"{encoding}|khoma-{__version__}|{mode}"
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def cache_get(cache_dir: str, key: str) -> Optional[dict]:
    path = os.path.join(cache_dir, f"{key}.json")
    try:
        with open(path, "r", encoding="utf-8") as handle:
            record = json.load(handle)
    except (OSError, ValueError):
        return None
    if record.get("key") != key:
        return None
    return record


def cache_put(cache_dir: str, key: str, record: dict) -> bool:
    """Atomic write: temporary file in the same directory, then rename."""
    try:
        os.makedirs(cache_dir, exist_ok=True)
        fd, tmp_path = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(record, handle, sort_keys=True)
            os.replace(tmp_path, os.path.join(cache_dir, f"{key}.json"))
        finally:
            if os.path.exists(tmp_path):
                os.unlink(tmp_path)
    except OSError as err:
        print(f"warning: cache disabled ({err})", file=sys.stderr)
        return False
    return True


# -- argument plumbing --------------------------------------------------------


def _add_diagram_arguments(parser: argparse.ArgumentParser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--torus",
        nargs=2,
        type=int,
        metavar=("P", "Q"),
        help="standard (p, q) torus diagram",
    )
    group.add_argument("--braid", help="whitespace-separated nonzero generator indices")
    parser.add_argument("--strands", type=int, help="strand count for --braid")


def _add_engine_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--jobs", type=int, default=1, help="worker processes")
    parser.add_argument(
        "--max-crossings",
        type=int,
        default=16,
        help="crossing budget; larger words are refused (exit 3)",
    )


def _select_word(args) -> tuple[Word, dict]:
    if args.torus is not None:
        p, q = args.torus
        word = torus_word(p, q)
        diagram = {"kind": "torus", "p": p, "q": q}
    else:
        word = parse_word(args.braid, strands=args.strands)
        diagram = {
            "kind": "braid",
            "word": list(word.signed_letters()),
            "strands": word.strands,
        }
    return word, diagram


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="khoma",
        description="Exact Khovanov homology of braid-word closures.",
    )
    parser.add_argument("--version", action="version", version=f"khoma {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    hom = sub.add_parser("homology", help="bigraded homology table of a closure")
    _add_diagram_arguments(hom)
    hom.add_argument("--unnormalized", action="store_true", help="skip writhe shifts")
    hom.add_argument("--max-i", type=int, default=None, help="compute slices i <= N only")
    hom.add_argument("--format", choices=("text", "json", "csv"), default="text")
    hom.add_argument("--cache-dir", default=None, help=f"result cache (default ${CACHE_ENV})")
    _add_engine_arguments(hom)

    jon = sub.add_parser("jones", help="Jones polynomial of a closure")
    _add_diagram_arguments(jon)
    jon.add_argument(
        "--via",
        choices=("bracket", "euler", "both"),
        default="bracket",
        help="state sum, homology Euler characteristic, or cross-check",
    )
    _add_engine_arguments(jon)

    ver = sub.add_parser("verify", help="run one torus-knot check")
    ver.add_argument(
        "claim",
        choices=(
            "t1",
            "f1",
            "f2",
            "f3",
            "rem2",
            "table",
            "e-vanishing",
            "les",
            "conj1",
            "stable-poly",
            "width",
        ),
    )
    ver.add_argument("--p", type=int)
    ver.add_argument("--q", type=int)
    ver.add_argument("--i", type=int, help="resolution step (e-vanishing)")
    ver.add_argument("--m", type=int, help="strand count (stable-poly)")
    ver.add_argument("--n-max", type=int, help="largest twist count (stable-poly)")
    ver.add_argument("--torus", nargs=2, type=int, metavar=("P", "Q"))
    ver.add_argument("--braid")
    ver.add_argument("--strands", type=int)
    ver.add_argument("--crossing", type=int, help="flat crossing index (les)")
    _add_engine_arguments(ver)

    return parser


# -- subcommands --------------------------------------------------------------


def cmd_homology(args) -> int:
    word, diagram = _select_word(args)
    mode = f"{'unnorm' if args.unnormalized else 'norm'}|max_i={args.max_i}"
    cache_dir = args.cache_dir or os.environ.get(CACHE_ENV)

    payload = None
    if cache_dir:
        key = word_cache_key(word, mode)
        record = cache_get(cache_dir, key)
        if record is not None:
            payload = record["table"]

    if payload is None:
        started = time.monotonic()
        if args.unnormalized:
            table = homology_unnormalized(
                word, max_i=args.max_i, jobs=args.jobs, max_crossings=args.max_crossings
            )
        else:
            table = homology(
                word, max_i=args.max_i, jobs=args.jobs, max_crossings=args.max_crossings
            )
        elapsed = time.monotonic() - started
        payload = table_to_json(table, diagram)
        if cache_dir:
            record = {
                "key": key,
                "engine": {"name": "khoma", "version": __version__},
                "mode": mode,
                "timings": {"seconds": elapsed},
                "table": payload,
            }
            cache_put(cache_dir, key, record)

    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    elif args.format == "csv":
        print(render_csv(table_from_json(payload)))
    else:
        print(render_text(table_from_json(payload)))
    return EXIT_OK


def cmd_jones(args) -> int:
    word, _ = _select_word(args)
    if args.via in ("bracket", "both"):
        via_bracket = jones_from_bracket(word, max_crossings=args.max_crossings)
    if args.via in ("euler", "both"):
        table = homology(word, jobs=args.jobs, max_crossings=args.max_crossings)
        via_euler = graded_euler(table)
    if args.via == "bracket":
        print(via_bracket)
    elif args.via == "euler":
        print(via_euler)
    else:
        print(f"bracket: {via_bracket}")
        print(f"euler:   {via_euler}")
        if via_bracket != via_euler:
            print("MISMATCH", file=sys.stderr)
            return EXIT_FAIL
    return EXIT_OK


class SystemExit2(Exception):
    """Argument error raised past argparse; mapped to exit code 2."""


def _require(args, names) -> list:
    values = []
    for name in names:
        value = getattr(args, name.replace("-", "_"))
        if value is None:
            raise SystemExit2(f"verify: missing --{name}")
        values.append(value)
    return values


def cmd_verify(args) -> int:
    kwargs = {"max_crossings": args.max_crossings, "jobs": args.jobs}
    claim = args.claim
    if claim == "t1":
        p, q = _require(args, ["p", "q"])
        reports = [check_t1(p, q, **kwargs)]
    elif claim == "f1":
        p, q = _require(args, ["p", "q"])
        reports = [check_f1(p, q, **kwargs)]
    elif claim == "f2":
        p, q = _require(args, ["p", "q"])
        reports = [check_f2(p, q, **kwargs)]
    elif claim == "f3":
        (p,) = _require(args, ["p"])
        reports = [check_f3(p, **kwargs)]
    elif claim == "rem2":
        p, q = _require(args, ["p", "q"])
        reports = [check_rem2(p, q, **kwargs)]
    elif claim == "table":
        p, q = _require(args, ["p", "q"])
        reports = [check_low_degree_table(p, q, **kwargs)]
    elif claim == "e-vanishing":
        p, q, i = _require(args, ["p", "q", "i"])
        reports = [check_e_vanishing(p, q, i, **kwargs)]
    elif claim == "les":
        if args.torus is None and args.braid is None:
            raise SystemExit2("verify les: need --torus or --braid")
        word, _ = _select_word(args)
        (crossing,) = _require(args, ["crossing"])
        reports = [check_les(word, crossing, **kwargs)]
    elif claim == "conj1":
        (p,) = _require(args, ["p"])
        reports = [check_conjecture1(p, **kwargs)]
    elif claim == "stable-poly":
        m, n_max = _require(args, ["m", "n-max"])
        reports = [stable_poly_report(m, n_max, **kwargs)]
    else:  # width
        p, q = _require(args, ["p", "q"])
        reports = [check_width_lower_bound(p, q, **kwargs)]

    failed = False
    for report in reports:
        print(json.dumps(report.to_json(), sort_keys=True))
        failed = failed or report.verdict == FAIL
    return EXIT_FAIL if failed else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "homology":
            return cmd_homology(args)
        if args.command == "jones":
            return cmd_jones(args)
        return cmd_verify(args)
    except CrossingLimitError as err:
        print(f"refused: {err}", file=sys.stderr)
        return EXIT_LIMIT
    except SystemExit2 as err:
        print(str(err), file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, IndexError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""``ofm`` command line.

Exit codes: 0 when every check passes, 1 when a mathematical claim fails
(the witness is printed), 2 on input or feasibility errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ofm import config
from ofm.algebra import (
    algebra_from_entries,
    candidate_count,
    check_algebra,
    check_theorem_suite,
    lattice_from_algebra,
    r_from_lattice,
    roundtrip_check,
    structure_search,
)
from ofm.catalog import (
    catalog_posets,
    catalog_spaces,
    count_by_size,
    poset_counts_brute_force,
    space_counts_brute_force,
)
from ofm.filters import FilterTower, check_monad_laws, filter_space
from ofm.io import (
    InputError,
    algebra_to_dict,
    filter_report,
    filters_dot,
    hasse_dot,
    load_algebra_entries,
    load_map,
    load_poset,
    load_space,
    load_structure,
    poset_to_dict,
    space_to_dict,
    topology_dot,
)
from ofm.order import FinitePoset, NotCompleteLattice, PosetError
from ofm.report import FAIL, PASS, SKIPPED, Check, Report, dumps
from ofm.suite import run_suite
from ofm.topology import (
    FeasibilityExceeded,
    NotT0,
    TopologyError,
    is_continuous_map,
    is_T0,
    specialization_order,
)

log = logging.getLogger("ofm")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class Output:
    def __init__(self, args):
        self.format = getattr(args, "format", "json")
        self.out = getattr(args, "out", None)

    def write(self, text: str) -> None:
        if self.out:
            Path(self.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)

    def emit(self, data: dict, text: str | None = None) -> None:
        if self.format == "text" and text is not None:
            self.write(text.rstrip("\n") + "\n")
        else:
            self.write(dumps(data))


def _require_t0(X, allow: bool = False) -> None:
    if not allow and not is_T0(X):
        raise NotT0("space is not T0 (pass --allow-non-t0 for exploratory use)")


def cmd_filters(args) -> int:
    X = load_space(args.space)
    _require_t0(X, args.allow_non_t0)
    fs = filter_space(X, with_topology=args.topology, topology_limit=config.max_phi2())
    out = Output(args)
    data = filter_report(X, fs, topology=args.topology, admit_empty=args.admit_empty_filter)
    if args.count:
        out.write(f"{data['count']}\n")
        return EXIT_OK
    lines = [f"{data['count']} filters"]
    for f in data["filters"]:
        lines.append(f"  [{f['index']}] " + " ".join("{" + ",".join(m) + "}" for m in f["members"]))
    if args.admit_empty_filter:
        lines.append("  [empty] (admitted by --admit-empty-filter)")
    if args.topology:
        lines.append(f"{len(fs.topology.opens)} opens on the filter space")
    out.emit(data, "\n".join(lines))
    return EXIT_OK


def cmd_check_monad(args) -> int:
    X = load_space(args.space)
    _require_t0(X)
    maps = [load_map(m, X) for m in args.maps]
    for path, f in zip(args.maps, maps):
        if f.domain != X:
            raise InputError(f"{path}: map domain is not the checked space")
        if not is_continuous_map(f):
            raise InputError(f"{path}: map is not continuous")
    report = check_monad_laws(X, maps, max_phi2=config.max_phi2(), max_phi3=config.max_phi3())
    report.meta["maps"] = [str(m) for m in args.maps]
    Output(args).emit(report.to_dict(), report.to_text())
    return EXIT_OK if report.all_passed else EXIT_FAIL


def cmd_algebra(args) -> int:
    out = Output(args)
    if args.algebra_cmd == "from-lattice":
        P = load_poset(args.poset)
        alg = r_from_lattice(P)
        data = algebra_to_dict(alg)
        text = "\n".join(
            f"{e['filter']} -> {e['point']}" for e in data["r"]
        )
        out.emit(data, text)
        return EXIT_OK

    if args.algebra_cmd == "verify":
        X = load_space(args.space)
        _require_t0(X)
        X, entries = load_algebra_entries(args.map, X)
        T = FilterTower(X, config.max_phi2(), None)
        alg = algebra_from_entries(X, entries, tower=T)
        laws = check_algebra(X, alg.r, tower=T)
        report = Report(meta={"space": space_to_dict(X)})
        report.extend(laws, prefix="algebra: ")
        if laws.all_passed:
            report.extend(check_theorem_suite(alg, tower=T), prefix="suite: ")
            _, lat = lattice_from_algebra(alg)
            report.extend(lat, prefix="lattice: ")
        else:
            report.add(Check("suite", SKIPPED, reason="r is not an algebra"))
        out.emit(report.to_dict(), report.to_text())
        return EXIT_OK if report.ok else EXIT_FAIL

    if args.algebra_cmd == "search":
        X = load_space(args.space)
        _require_t0(X)
        T = FilterTower(X, config.max_phi2(), None)
        algs = structure_search(X, jobs=args.jobs, tower=T)
        data = {
            "space": space_to_dict(X),
            "candidates": candidate_count(X, T),
            "count": len(algs),
            "algebras": [algebra_to_dict(a)["r"] for a in algs],
        }
        out.emit(data, f"{len(algs)} algebras found ({data['candidates']} candidate maps)")
        return EXIT_OK

    if args.algebra_cmd == "roundtrip":
        P = load_poset(args.poset)
        ok = roundtrip_check(P)
        data = {"poset": poset_to_dict(P), "status": PASS if ok else FAIL}
        out.emit(data, f"roundtrip {'pass' if ok else 'FAIL'}")
        return EXIT_OK if ok else EXIT_FAIL
    raise AssertionError(args.algebra_cmd)


def cmd_catalog(args) -> int:
    ceiling = config.MAX_POSET_SIZE if args.kind == "poset" else config.MAX_SPACE_SIZE
    if args.max_size < 1:
        raise InputError("--max-size must be positive")
    if args.max_size > ceiling:
        raise FeasibilityExceeded(f"{args.kind} catalog size", args.max_size, ceiling)
    if args.kind == "poset":
        if args.t0:
            log.info("--t0 has no effect on posets")
        items = catalog_posets(args.max_size, complete_lattice=args.complete_lattice, up_to_iso=args.up_to_iso)
        independent = poset_counts_brute_force(args.max_size, complete_lattice=args.complete_lattice,
                                               up_to_iso=args.up_to_iso)
        to_dict = poset_to_dict
    else:
        if args.complete_lattice:
            raise InputError("--complete-lattice applies to posets only")
        items = catalog_spaces(args.max_size, t0=args.t0, up_to_iso=args.up_to_iso)
        independent = space_counts_brute_force(args.max_size, t0=args.t0, up_to_iso=args.up_to_iso)
        to_dict = space_to_dict
    counts = count_by_size(items)
    counts = {n: counts.get(n, 0) for n in range(1, args.max_size + 1)}
    agree = counts == independent
    data = {
        "kind": args.kind,
        "max_size": args.max_size,
        "flags": {"t0": args.t0, "complete_lattice": args.complete_lattice, "up_to_iso": args.up_to_iso},
        "counts": {str(n): c for n, c in counts.items()},
        "total": len(items),
        "self_check": {
            "independent_counts": {str(n): c for n, c in independent.items()},
            "status": PASS if agree else FAIL,
        },
    }
    if args.out_dir:
        outdir = Path(args.out_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        files, seen = [], {}
        for item in items:
            seen[len(item)] = seen.get(len(item), 0) + 1
            path = outdir / f"{args.kind}-{len(item)}-{seen[len(item)]:03d}.json"
            path.write_text(dumps(to_dict(item)), encoding="utf-8")
            files.append(path.name)
        data["files"] = files
    else:
        data["instances"] = [to_dict(i) for i in items]
    text = "\n".join(
        [f"{args.kind} catalog up to size {args.max_size}: {len(items)} total"]
        + [f"  size {n}: {c}" for n, c in counts.items()]
        + [f"  independent count check: {data['self_check']['status']}"]
    )
    Output(args).emit(data, text)
    return EXIT_OK if agree else EXIT_FAIL


def cmd_export_dot(args) -> int:
    obj = load_structure(args.file)
    out = Output(args)
    if args.what == "hasse":
        if isinstance(obj, FinitePoset):
            P = obj
        else:
            _require_t0(obj)
            P = specialization_order(obj)
        out.write(hasse_dot(P))
        return EXIT_OK
    if isinstance(obj, FinitePoset):
        raise InputError(f"--what {args.what} needs a space file")
    _require_t0(obj, args.allow_non_t0)
    if args.what == "filters":
        out.write(filters_dot(obj, filter_space(obj, with_topology=False)))
    else:
        out.write(topology_dot(obj))
    return EXIT_OK


def cmd_suite(args) -> int:
    report = run_suite(jobs=args.jobs)
    Output(args).emit(report.to_dict(), report.to_text())
    return EXIT_OK if report.all_passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--out", help="write the report to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="ofm", description="Open filter monad laboratory")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filters", parents=[common], help="list the open filters of a space")
    p.add_argument("space")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--count", action="store_true")
    g.add_argument("--topology", action="store_true")
    p.add_argument("--allow-non-t0", action="store_true")
    p.add_argument("--admit-empty-filter", action="store_true",
                   help="also count the empty family of opens as a filter")
    p.set_defaults(func=cmd_filters)

    p = sub.add_parser("check-monad", parents=[common], help="check the monad laws on a space")
    p.add_argument("space")
    p.add_argument("maps", nargs="*", help="map files for naturality squares")
    p.set_defaults(func=cmd_check_monad)

    p = sub.add_parser("algebra", help="structure maps and the lattice correspondence")
    asub = p.add_subparsers(dest="algebra_cmd", required=True)
    q = asub.add_parser("from-lattice", parents=[common])
    q.add_argument("poset")
    q = asub.add_parser("verify", parents=[common])
    q.add_argument("space")
    q.add_argument("map")
    q = asub.add_parser("search", parents=[common])
    q.add_argument("space")
    q.add_argument("--jobs", type=int, default=1)
    q = asub.add_parser("roundtrip", parents=[common])
    q.add_argument("poset")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("catalog", parents=[common], help="generate small posets or spaces")
    p.add_argument("--kind", choices=["poset", "space"], required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--t0", action="store_true")
    p.add_argument("--complete-lattice", action="store_true")
    p.add_argument("--up-to-iso", action="store_true")
    p.add_argument("--out-dir", help="write one JSON file per instance here")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("export-dot", parents=[common], help="emit a DOT graph")
    p.add_argument("file")
    p.add_argument("--what", choices=["hasse", "filters", "topology"], required=True)
    p.add_argument("--allow-non-t0", action="store_true")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("suite", parents=[common], help="run the full exhaustive verification")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except FeasibilityExceeded as e:
        sys.stdout.write(dumps({"error": "FeasibilityExceeded", "what": e.what,
                                "size": e.size, "bound": e.bound}))
        print(f"ofm: {e}", file=sys.stderr)
        return EXIT_INPUT
    except TopologyError as e:
        sys.stdout.write(dumps({"error": "TopologyError", "violations": e.kinds}))
        print(f"ofm: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, NotT0, NotCompleteLattice, PosetError, ValueError) as e:
        sys.stdout.write(dumps({"error": type(e).__name__, "message": str(e)}))
        print(f"ofm: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

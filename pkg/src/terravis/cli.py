"""Command-line interface: validate, map, rstar, verify, gen."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from . import tolerance
from .errors import (
    ConstructionFailedError,
    InvalidKError,
    InvalidViewpointError,
    NoViewpointsError,
    ParseError,
    TerravisError,
)
from .fileio import (
    map_labels_from_payload,
    read_instance,
    read_map,
    write_instance,
    map_to_text,
)
from .generators import InstanceSpec, gen_fig4b, gen_random_terrain
from .geometry import check_general_position
from .intervals import IntervalMap
from .oracle import (
    check_theorem_bound,
    count_complexities,
    verify_against_oracle,
)
from .svgrender import render_svg
from .viewshed import compute_colvis, compute_vis
from .vorvis import compute_kvorvis, compute_rstar_info, compute_vorvis, op_counters

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="terravis",
        description="Visibility and Voronoi-visibility maps of 1.5D terrains. "
                    "Set TERRAVIS_EPS to override the comparison tolerance.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate an instance file")
    p.add_argument("path")

    p = sub.add_parser("map", help="compute a map and write it out")
    p.add_argument("path")
    p.add_argument("--map", dest="kind", required=True,
                   choices=["vis", "colvis", "vorvis", "kvorvis"])
    p.add_argument("--metric", default="euclidean",
                   choices=["euclidean", "geodesic", "link"])
    p.add_argument("--mode", default="both", choices=["both", "left", "right"])
    p.add_argument("-k", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--svg", default=None)

    p = sub.add_parser("rstar", help="minimum visibility range r*")
    p.add_argument("path")

    p = sub.add_parser("verify", help="oracle and bound checks for an instance, "
                                      "a map file, or a random batch")
    p.add_argument("path", nargs="?", default=None)
    p.add_argument("--random", nargs=2, type=int, metavar=("SEED", "COUNT"))
    p.add_argument("--metric", default="euclidean",
                   choices=["euclidean", "geodesic", "link"])
    p.add_argument("--mode", default="both", choices=["both", "left", "right"])
    p.add_argument("-k", type=int, default=None)

    p = sub.add_parser("gen", help="generate an instance file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--random", nargs=3, type=int, metavar=("N", "M", "SEED"))
    group.add_argument("--fig4b", type=int, metavar="M")
    p.add_argument("--out", required=True)
    return parser


def _print_general_position(terrain, viewpoints) -> None:
    report = check_general_position(terrain, viewpoints)
    if report.is_clean():
        print("general position: ok")
        return
    if report.collinear_triples:
        print(f"warning: {len(report.collinear_triples)} collinear vertex "
              f"triple(s), e.g. {report.collinear_triples[0]}")
    if report.edge_on_bisector:
        print(f"warning: {len(report.edge_on_bisector)} edge(s) lying on a "
              f"viewpoint bisector, e.g. {report.edge_on_bisector[0]}")
    if report.triple_equidistant:
        p, *trio = report.triple_equidistant[0]
        print(f"warning: {len(report.triple_equidistant)} point(s) equidistant "
              f"from 3+ viewpoints, e.g. x={p.x!r} viewpoints {tuple(trio)}")


def _cmd_validate(args) -> int:
    terrain, viewpoints, meta = read_instance(args.path)
    name = meta.get("name", args.path)
    print(f"instance {name}: n={terrain.n} vertices, m={len(viewpoints)} "
          f"viewpoints, x in [{terrain.x_min!r}, {terrain.x_max!r}]")
    _print_general_position(terrain, viewpoints)
    print("terrain valid")
    return EXIT_OK


def _compute_map(terrain, viewpoints, kind: str, metric: str, mode: str,
                 k: Optional[int]) -> IntervalMap:
    if kind == "kvorvis":
        if k is None:
            raise InvalidKError("-k is required for kvorvis maps")
        return compute_kvorvis(terrain, viewpoints, k, metric, mode)
    if k is not None:
        raise InvalidKError("-k only applies to kvorvis maps")
    if kind == "vis":
        return compute_vis(terrain, viewpoints, mode)
    if kind == "colvis":
        return compute_colvis(terrain, viewpoints, mode)
    return compute_vorvis(terrain, viewpoints, metric, mode)


def _cmd_map(args) -> int:
    terrain, viewpoints, _ = read_instance(args.path)
    imap = _compute_map(terrain, viewpoints, args.kind, args.metric, args.mode,
                        args.k)
    text = map_to_text(imap, args.kind, args.path, args.metric, args.mode, args.k)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out} ({len(imap.labels)} intervals)")
    else:
        sys.stdout.write(text)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(terrain, viewpoints, imap))
        print(f"wrote {args.svg}")
    return EXIT_OK


def _cmd_rstar(args) -> int:
    terrain, viewpoints, _ = read_instance(args.path)
    r, owner, point = compute_rstar_info(terrain, viewpoints)
    print(f"r* = {r!r}")
    print(f"attained by viewpoint {owner} at x={point.x!r}, y={point.y!r}")
    return EXIT_OK


def _verify_instance(terrain, viewpoints, metric: str, mode: str,
                     k: Optional[int], label: str) -> List[str]:
    """Run all checks for one instance; returns failure descriptions."""
    failures: List[str] = []
    vor = compute_vorvis(terrain, viewpoints, metric, mode)
    vor.check_partition(terrain)
    mismatches = verify_against_oracle(terrain, viewpoints, vor, "vorvis",
                                       metric, mode)
    if mismatches:
        failures.append(f"{label}: vorvis oracle mismatches: {len(mismatches)} "
                        f"(first at x={mismatches[0].x!r})")
    if k is not None:
        kmap = compute_kvorvis(terrain, viewpoints, k, metric, mode)
        kmap.check_partition(terrain)
        mismatches = verify_against_oracle(terrain, viewpoints, kmap, "kvorvis",
                                           metric, mode, k=k)
        if mismatches:
            failures.append(f"{label}: kvorvis oracle mismatches: {len(mismatches)}")
    counts = count_complexities(terrain, viewpoints)
    print(f"{label}: n={counts.n} m={counts.m} k_c={counts.k_c} k_v={counts.k_v} "
          f"counters={op_counters()}")
    if not check_theorem_bound(counts):
        failures.append(f"{label}: complexity bound violated: {counts}")
    return failures


def _verify_map_file(path: str) -> List[str]:
    payload = read_map(path)
    ref = payload["instance"]
    if not os.path.isabs(ref):
        candidate = os.path.join(os.path.dirname(os.path.abspath(path)), ref)
        ref = candidate if os.path.exists(candidate) else ref
    terrain, viewpoints, _ = read_instance(ref)
    imap = _compute_map(terrain, viewpoints, payload["map"], payload["metric"],
                        payload["mode"], payload.get("k"))
    eps = tolerance.get_epsilon()
    stored = map_labels_from_payload(payload)
    fresh = [(l.x, r.x, lab) for l, r, lab in imap.intervals()]
    failures: List[str] = []
    if len(stored) != len(fresh):
        failures.append(f"interval count differs: file {len(stored)}, "
                        f"recomputed {len(fresh)}")
    else:
        for (sl, sr, slab), (fl, fr, flab) in zip(stored, fresh):
            if abs(sl - fl) > eps or abs(sr - fr) > eps or slab != flab:
                failures.append(f"interval differs near x={sl!r}: "
                                f"file ({sl!r}, {sr!r}, {slab!r}) vs "
                                f"recomputed ({fl!r}, {fr!r}, {flab!r})")
                break
    mismatches = verify_against_oracle(terrain, viewpoints, imap, payload["map"],
                                       payload["metric"], payload["mode"],
                                       k=payload.get("k"))
    if mismatches:
        failures.append(f"oracle mismatches: {len(mismatches)}")
    return failures


def _random_spec(seed: int) -> InstanceSpec:
    return InstanceSpec(seed=seed, n=10 + (seed * 7) % 51, m=2 + (seed * 3) % 7)


def _cmd_verify(args) -> int:
    failures: List[str] = []
    if args.random is not None:
        seed0, count = args.random
        for s in range(seed0, seed0 + count):
            terrain, viewpoints = gen_random_terrain(_random_spec(s))
            fails = _verify_instance(terrain, viewpoints, args.metric, args.mode,
                                     args.k, f"seed {s}")
            if fails:
                failures.extend(fails)
                print(f"reproducer: terravis verify --random {s} 1")
    elif args.path is not None:
        with open(args.path) as fh:
            try:
                peek = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(f"cannot parse {args.path}: {exc}") from exc
        if isinstance(peek, dict) and "intervals" in peek:
            failures = _verify_map_file(args.path)
        else:
            terrain, viewpoints, _ = read_instance(args.path)
            failures = _verify_instance(terrain, viewpoints, args.metric,
                                        args.mode, args.k, args.path)
    else:
        print("nothing to verify: give a file or --random SEED COUNT")
        return EXIT_PARSE
    if failures:
        for f in failures:
            print(f"FAIL {f}")
        return EXIT_FAIL
    print("verify: all checks passed")
    return EXIT_OK


def _cmd_gen(args) -> int:
    if args.random is not None:
        n, m, seed = args.random
        terrain, viewpoints = gen_random_terrain(InstanceSpec(seed=seed, n=n, m=m))
        meta = {"name": f"random-n{n}-m{m}", "seed": seed}
    else:
        m = args.fig4b
        terrain, viewpoints = gen_fig4b(m)
        meta = {"name": f"fig4b-m{m}"}
    write_instance(args.out, terrain, viewpoints, meta)
    print(f"wrote {args.out} (n={terrain.n}, m={len(viewpoints)})")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    tolerance.epsilon_from_env()
    args = _build_parser().parse_args(argv)
    handlers = {
        "validate": _cmd_validate,
        "map": _cmd_map,
        "rstar": _cmd_rstar,
        "verify": _cmd_verify,
        "gen": _cmd_gen,
    }
    try:
        return handlers[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvalidKError, InvalidViewpointError, NoViewpointsError,
            ConstructionFailedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except TerravisError as exc:
        print(f"invalid instance: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

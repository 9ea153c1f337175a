"""Command-line experiments with JSON-lines reports.

Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 usage error.
"""
from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .core import (UNBOUNDED, CoarseMap, CoarseSpace, DomainError, GroupScale, MetricScale,
                   is_selector, modulus_estimate, scale_contains)
from .graphs import (Graph, classify_shape, make_complete, make_grid, make_interval, make_line,
                     make_ray, make_tripod, parse_edge_list)
from .groups import (CosetTower, FiniteGroup, GroupWindow, IntLine, VirtuallyZ, dinf,
                     finite_tower, load_group_spec, sum_z2_tower, sym_tower, z_cross_zk)
from .refuter import replay_refutation, tripod_refute, z_global_refute
from .selectors import (LinearOrder, is_compatible_order, is_interval_entourage, max_selector,
                        natural_order, order_selector, tower_order, tower_selector,
                        virtually_z_order, zigzag_order)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
EXIT = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
USAGE_ERROR = 3
EXHAUSTIVE_LIMIT = 12


@dataclass
class Report:
    command: str
    inputs: dict
    result: str
    evidence: dict = field(default_factory=dict)
    timing: float | None = None

    def to_json(self) -> str:
        ev = {k: v for k, v in self.evidence.items() if not k.startswith("_")}
        rec = {"command": self.command, "inputs": self.inputs, "result": self.result,
               "evidence": ev}
        if self.timing is not None:
            rec["timing"] = round(self.timing, 4)
        return json.dumps(rec, sort_keys=True, default=_encode)

    def to_text(self) -> str:
        lines = [f"{self.command}: {self.result.upper()}"]
        for k, v in sorted(self.inputs.items()):
            lines.append(f"  input {k} = {v}")
        for k, v in sorted(self.evidence.items()):
            if k == "certificates" or k.startswith("_"):
                continue
            lines.append(f"  {k} = {json.dumps(v, sort_keys=True, default=_encode)}")
        for text in self.evidence.get("_text", []):
            lines.extend("  " + ln for ln in text.splitlines())
        if self.timing is not None:
            lines.append(f"  time {self.timing:.3f}s")
        return "\n".join(lines)


def _encode(x):
    if isinstance(x, MetricScale):
        return {"radius": x.radius}
    if isinstance(x, GroupScale):
        return {"elements": [_encode(e) if not isinstance(e, (int, str)) else e
                             for e in x.sorted_elements()]}
    if isinstance(x, (frozenset, set)):
        return sorted((_encode(e) for e in x), key=repr)
    if isinstance(x, tuple):
        return [_encode(e) for e in x]
    if x is UNBOUNDED:
        return "unbounded"
    return x


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# group setups


@dataclass
class Setup:
    """A window of a catalog group together with its scale ladder and order."""

    name: str
    space: CoarseSpace
    scale: Callable[[int], object]
    order: LinearOrder
    tower: CosetTower | None = None
    group: object = None
    max_scale: int = 0


def _load_group(name: str):
    if name.startswith("table:"):
        path = Path(name[len("table:"):])
        try:
            return load_group_spec(path.read_text())
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"{path}: {exc}") from None
    table = {"z": IntLine, "dinf": dinf, "z-cross-zk": z_cross_zk,
             "sum-z2": lambda: sum_z2_tower(4), "sym-tower": lambda: sym_tower(3)}
    if name not in table:
        raise UsageError(f"unknown group {name!r}")
    return table[name]()


def setup_group(name: str, window: int | None, margin: int | None) -> Setup:
    obj = _load_group(name)
    if isinstance(obj, FiniteGroup):
        obj = finite_tower(obj)
    if isinstance(obj, IntLine):
        W = window or 5
        space = make_interval(-W, W)
        return Setup("z", space, MetricScale, natural_order(space.points), group=obj, max_scale=W)
    if isinstance(obj, VirtuallyZ):
        W = window or 6
        M = W // 2 if margin is None else margin
        space = GroupWindow(obj, obj.window_points(-W, W), M, obj.level_scale,
                            generators=[(0, 1), (0, -1)] + [(i, 0) for i in range(1, obj.m + 1)]
                            + [obj.inverse((i, 0)) for i in range(1, obj.m + 1)])
        return Setup(obj.name, space, obj.level_scale, virtually_z_order(space.points),
                     group=obj, max_scale=M)
    if isinstance(obj, CosetTower):
        if window is not None and window != obj.levels:
            obj = _retower(name, obj, window)
        space = obj.window()
        return Setup(obj.name, space, obj.level_scale, tower_order(obj), tower=obj,
                     group=obj.group, max_scale=obj.levels)
    raise UsageError(f"unsupported group object {obj!r}")


def _retower(name: str, tower: CosetTower, levels: int) -> CosetTower:
    if "sym" in tower.name:
        return sym_tower(levels)
    if "sum-Z2" in tower.name:
        return sum_z2_tower(levels)
    raise UsageError(f"--window cannot resize {name!r}")


def _family(points, rng: random.Random, samples: int) -> list[frozenset]:
    pts = list(points)
    if len(pts) <= EXHAUSTIVE_LIMIT:
        return [frozenset(c) for k in range(1, len(pts) + 1) for c in itertools.combinations(pts, k)]
    fam = set()
    while len(fam) < samples:
        k = rng.randint(1, min(6, len(pts)))
        fam.add(frozenset(rng.sample(pts, k)))
    return sorted(fam, key=lambda A: sorted(map(repr, A)))


def _transfer_maps(setup: Setup):
    """Selector on a virtually-Z window pulled back from max on an integer interval."""
    from .core import transfer_selector

    grp: VirtuallyZ = setup.group
    m1 = grp.m + 1
    pts = setup.space.points
    ks = [k for _, k in pts]
    line = make_interval(min(ks) * m1, max(ks) * m1 + grp.m)
    phi = CoarseMap(lambda g: m1 * g[1] + g[0], setup.space, line, "flatten")
    phi_inv = CoarseMap(lambda n: (n % m1, n // m1), line, setup.space, "unflatten")
    return transfer_selector(phi, phi_inv, max_selector)


def _selector(setup: Setup, name: str):
    if name == "max":
        if isinstance(setup.group, IntLine):
            return max_selector
        return order_selector(setup.order, "max")
    if name == "tower":
        if setup.tower is None:
            raise UsageError(f"selector 'tower' needs a coset tower, not {setup.name}")
        return tower_selector(setup.tower)
    if name == "transfer":
        if not isinstance(setup.group, VirtuallyZ):
            raise UsageError("selector 'transfer' needs a virtually-Z group")
        return _transfer_maps(setup)
    raise UsageError(f"unknown selector {name!r}")


def _level_of(setup: Setup, modulus) -> int | None:
    """Least ladder index whose scale contains ``modulus``."""
    if modulus is UNBOUNDED:
        return None
    for n in range(setup.max_scale + 1):
        if scale_contains(setup.scale(n), modulus):
            return n
    return None


# --------------------------------------------------------------------------
# commands


def _graph_source(args) -> Graph:
    if args.edges:
        try:
            return parse_edge_list(Path(args.edges).read_text(), Path(args.edges).name)
        except OSError as exc:
            raise UsageError(f"cannot read {args.edges}: {exc.strerror}") from None
        except ValueError as exc:
            raise UsageError(f"{args.edges}: {exc}") from None
    margin = args.margin
    if args.line:
        return make_line(args.line, margin)
    if args.ray:
        return make_ray(args.ray, margin)
    if args.tripod:
        return make_tripod(args.tripod, margin)
    if args.grid:
        return make_grid(args.grid, margin)
    if args.complete:
        return make_complete(args.complete)
    if args.group:
        setup = setup_group(args.group, args.window, margin)
        space = setup.space
        if not isinstance(space, GroupWindow) or space.generators is None:
            raise UsageError(f"group {args.group!r} has no Cayley graph here")
        return space._cayley()
    raise UsageError("classify needs a graph source")


def cmd_classify(args) -> list[Report]:
    g = _graph_source(args)
    shape = classify_shape(g)
    ev = dict(shape.evidence)
    ev["class"] = shape.kind
    result = INCONCLUSIVE if ev.get("inconclusive") else PASS
    return [Report("classify", {"graph": g.name, "vertices": len(g.vertices)}, result, ev)]


def cmd_verify_selector(args) -> list[Report]:
    setup = setup_group(args.group, args.window, args.margin)
    f = _selector(setup, args.selector)
    rng = random.Random(args.seed)
    safe = setup.space.safe_region(setup.scale(args.scale))
    fam = _family(safe, rng, args.samples)
    ok = is_selector(f, fam)
    fmap = CoarseMap(f, setup.space, setup.space, args.selector)
    inputs = {"group": args.group, "selector": args.selector, "scale": args.scale,
              "family": len(fam), "exhaustive": len(safe) <= EXHAUSTIVE_LIMIT}
    try:
        modulus = modulus_estimate(fmap, fam, setup.scale(args.scale))
    except DomainError as exc:
        return [Report("verify-selector", inputs, INCONCLUSIVE, {"reason": str(exc)})]
    level = _level_of(setup, modulus)
    ev = {"is_selector": ok, "modulus": modulus, "modulus_level": level}
    if isinstance(setup.group, IntLine) or setup.tower is not None:
        # the proven bound: modulus within the input scale itself
        passed = ok and level is not None and level <= args.scale
    else:
        passed = ok and level is not None
    return [Report("verify-selector", inputs, PASS if passed else FAIL, ev)]


def _read_order(path: str, setup: Setup) -> LinearOrder:
    try:
        seq = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    seq = [tuple(x) if isinstance(x, list) else x for x in seq]
    if set(seq) != set(setup.space.points) or len(seq) != len(setup.space.points):
        raise UsageError(f"{path}: order must list every window point exactly once")
    return LinearOrder(tuple(seq), f"file:{path}")


def cmd_check_order(args) -> list[Report]:
    setup = setup_group(args.group, args.window, args.margin)
    if args.order:
        order = _read_order(args.order, setup)
    elif args.order_kind == "zigzag":
        order = zigzag_order(setup.space.points)
    else:
        order = setup.order
    top = args.scale if args.scale is not None else max(1, setup.max_scale // 2)
    scales = [setup.scale(n) for n in range(1, top + 1)]
    inputs = {"group": args.group, "order": order.provenance, "scales": top}
    if args.compatible:
        cands = [setup.scale(n) for n in range(1, setup.max_scale + 1)]
        chk = is_compatible_order(setup.space, scales, order, cands)
        inputs["mode"] = "compatible"
        levels = {repr(s): n for n, s in enumerate(cands, 1)}
        ev = {"witness": chk.witness,
              "f_level": {f"E_{n}": levels[repr(chk.certificate[s])]
                          for n, s in enumerate(scales, 1) if s in chk.certificate}}
        return [Report("check-order", inputs, PASS if chk else FAIL, ev)]
    reports = []
    for n, s in enumerate(scales, 1):
        chk = is_interval_entourage(setup.space, s, order)
        reports.append(Report("check-order", {**inputs, "mode": "interval", "level": n},
                              PASS if chk else FAIL, {"witness": chk.witness, **chk.certificate}))
    return reports


def cmd_refute(args) -> list[Report]:
    if args.target == "tripod":
        arm = args.arm if args.arm is not None else 6 * args.r + 6
        ref = tripod_refute(args.r, arm)
        inputs = {"target": "tripod", "r": args.r, "arm": arm}
    else:
        ref = z_global_refute(args.n)
        inputs = {"target": "z-global", "n": args.n}
    if not ref.refuted:
        return [Report("refute", inputs, INCONCLUSIVE, {"notes": ref.notes})]
    ok = replay_refutation(ref)
    ev = {"cases": len(ref.certificates), "replayed": ok,
          "certificates": [c.to_lines() for c in ref.certificates],
          "_text": [c.to_text() for c in ref.certificates]}
    return [Report("refute", inputs, PASS if ok else FAIL, ev)]


# --------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", type=int, help="window radius (or tower height)")
    common.add_argument("--margin", type=int, help="safe margin inside the window")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--timing", action="store_true", help="add wall-clock time to reports")

    p = _Parser(prog="coarsesel", description="Selectors and coarse structure on finite windows.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", parents=[common], help="bounded / half-line / line / other")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--line", type=int, metavar="N")
    src.add_argument("--ray", type=int, metavar="N")
    src.add_argument("--tripod", type=int, metavar="ARM")
    src.add_argument("--grid", type=int, metavar="N")
    src.add_argument("--complete", type=int, metavar="N")
    src.add_argument("--edges", metavar="FILE")
    src.add_argument("--group", metavar="GROUP", help="Cayley graph window of a catalog group")
    c.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify-selector", parents=[common], help="selector property and modulus")
    v.add_argument("--group", default="z")
    v.add_argument("--selector", choices=("max", "tower", "transfer"), default="max")
    v.add_argument("--scale", type=int, default=1, metavar="K")
    v.add_argument("--samples", type=int, default=2000)
    v.set_defaults(func=cmd_verify_selector)

    o = sub.add_parser("check-order", parents=[common], help="interval / compatible order checks")
    o.add_argument("--group", default="z")
    o.add_argument("--order", metavar="FILE", help="JSON list enumerating the window")
    o.add_argument("--order-kind", choices=("default", "zigzag"), default="default")
    o.add_argument("--scale", type=int, metavar="K")
    mode = o.add_mutually_exclusive_group(required=True)
    mode.add_argument("--interval", action="store_true")
    mode.add_argument("--compatible", action="store_true")
    o.set_defaults(func=cmd_check_order)

    r = sub.add_parser("refute", help="impossibility certificates")
    rsub = r.add_subparsers(dest="target", required=True, parser_class=_Parser)
    t = rsub.add_parser("tripod", parents=[common])
    t.add_argument("--r", type=int, default=1)
    t.add_argument("--arm", type=int)
    z = rsub.add_parser("z-global", parents=[common])
    z.add_argument("--n", type=int, default=1)
    r.set_defaults(func=cmd_refute)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        start = time.perf_counter()
        reports = args.func(args)
        elapsed = time.perf_counter() - start
    except UsageError as exc:
        print(f"coarsesel: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, TypeError) as exc:
        print(f"coarsesel: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    for rep in reports:
        if args.timing:
            rep.timing = elapsed / len(reports)
        print(rep.to_json() if args.format == "json" else rep.to_text())
    results = {rep.result for rep in reports}
    if FAIL in results:
        return EXIT[FAIL]
    if INCONCLUSIVE in results:
        return EXIT[INCONCLUSIVE]
    return EXIT[PASS]


if __name__ == "__main__":
    sys.exit(main())

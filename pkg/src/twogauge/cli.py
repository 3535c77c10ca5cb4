"""Single command-line entry point with JSON reports.

Reports are deterministic: identical inputs and seed produce identical
bytes.  Wall-clock timing is only included when --timing is passed, since
it would break that guarantee.  Exit codes: 0 success, 1 check failure,
2 input error.
"""

import argparse
import hashlib
import json
import os
import sys
import time

from . import category as cat
from . import complexes, connections, groups, model, statesum, toric
from .cochains import omega_from_json


class InputError(ValueError):
    pass


def _hash_file(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        digest.update(fh.read())
    return digest.hexdigest()[:16]


def _load_two_group(spec_text, inputs):
    builders = groups.shipped_two_groups()
    if spec_text in builders:
        inputs["two_group"] = spec_text
        return builders[spec_text]()
    if not os.path.exists(spec_text):
        raise InputError(
            "unknown two-group %r (not a shipped name or a file)" % spec_text
        )
    inputs["two_group"] = _hash_file(spec_text)
    with open(spec_text) as fh:
        data = json.load(fh)
    try:
        return groups.two_group_from_json(data)
    except groups.GroupError as exc:
        raise InputError("invalid two-group file: %s" % exc)


def _load_complex(spec_text, inputs):
    inputs["complex"] = spec_text if not os.path.exists(spec_text) else _hash_file(spec_text)
    try:
        return complexes.resolve_complex(spec_text)
    except (complexes.ComplexError, FileNotFoundError, KeyError, ValueError) as exc:
        raise InputError("invalid complex %r: %s" % (spec_text, exc))


def _cap_from_env(args_cap):
    if args_cap:
        return args_cap
    env = os.environ.get("TQFT_CAP_MB")
    if env:
        # a connection key costs on the order of a hundred bytes
        return int(env) * (1 << 20) // 128
    return None


def cmd_verify(args, inputs):
    builders = groups.shipped_two_groups()
    if args.two_group in builders:
        inputs["two_group"] = args.two_group
        report = groups.verify_two_group(builders[args.two_group]())
    else:
        inputs["two_group"] = _hash_file(args.two_group)
        with open(args.two_group) as fh:
            data = json.load(fh)
        tg = groups.two_group_from_json(data, validate=False)
        report = groups.verify_two_group(tg)
    return {"violations": report, "valid": not report}, (0 if not report else 1)

def cmd_partition(args, inputs):
    tg = _load_two_group(args.two_group, inputs)
    m = _load_complex(args.complex, inputs)
    if args.omega:
        inputs["omega"] = _hash_file(args.omega)
        with open(args.omega) as fh:
            omega = omega_from_json(tg, json.load(fh))
        cfg = statesum.StateSumConfig(tg, omega=omega, cap=_cap_from_env(args.cap_states))
    else:
        cfg = statesum.StateSumConfig(tg, degree=m.dim, cap=_cap_from_env(args.cap_states))
    value = statesum.partition(cfg, m)
    return value.to_json(), 0


def cmd_pachner_check(args, inputs):
    tg = _load_two_group(args.two_group, inputs)
    m = _load_complex(args.complex, inputs)
    cfg = statesum.StateSumConfig(tg, degree=m.dim, cap=_cap_from_env(args.cap_states))
    report = statesum.pachner_harness(cfg, m, seed=args.seed, moves=args.moves)
    return report, (0 if report["invariant"] else 1)


def cmd_gsd(args, inputs):
    tg = _load_two_group(args.two_group, inputs)
    m = _load_complex(args.space, inputs)
    space = model.ModelSpace(tg, m)
    value = model.gsd(space)
    classes = len(connections.gauge_classes(tg, m, cap=_cap_from_env(args.cap_states)))
    return {"gsd": value, "gauge_classes": classes, "agree": value == classes}, (
        0 if value == classes else 1
    )


def cmd_commute(args, inputs):
    tg = _load_two_group(args.two_group, inputs)
    m = _load_complex(args.space, inputs)
    space = model.ModelSpace(tg, m)
    report = model.commuting_check(space)
    ok = not report["failures"]
    report["failures"] = [repr(f) for f in report["failures"]]
    return report, (0 if ok else 1)


def cmd_string_fusion(args, inputs):
    tg = _load_two_group(args.two_group, inputs)
    m = _load_complex(args.space, inputs)
    space = model.ModelSpace(tg, m)
    if args.ribbon:
        inputs["ribbon"] = _hash_file(args.ribbon)
        with open(args.ribbon) as fh:
            data = json.load(fh)
        ribbon = model.Ribbon(data["s"], data["pairs"], data["dual"])
    else:
        ribbon = model.smallest_ribbon(space)
    problems = ribbon.validate(space)
    if problems:
        raise InputError("; ".join(problems))
    from . import bitops

    if not bitops.eligible(tg):
        raise InputError("string fusion checks need two-element label groups")
    kernel = bitops.BitKernel(space)
    failures = kernel.string_relation_report(ribbon)
    return {"relations_checked": True, "failures": failures}, (0 if not failures else 1)


def cmd_fusion_table(args, inputs):
    tg = _load_two_group(args.two_group, inputs)
    ft, ct = cat.quantum_double_data(tg)
    fusion = {}
    for (a, b), target in sorted(ft.fuse_map().items()):
        fusion["%s * %s" % (_simple_name(tg, a), _simple_name(tg, b))] = _simple_name(tg, target)
    return {"simples": [_simple_name(tg, s) for s in ft.simples], "fusion": fusion}, 0


def cmd_category_check(args, inputs):
    names = sorted(groups.shipped_two_groups()) if args.all else [args.two_group]
    report = {}
    bad = False
    for name in names:
        tg = _load_two_group(name, inputs)
        ft, ct = cat.quantum_double_data(tg)
        failures = cat.check_all(ft, ct)
        report[name] = [repr(f) for f in failures]
        bad = bad or bool(failures)
    return {"checks": report, "valid": not bad}, (0 if not bad else 1)


def cmd_modules(args, inputs):
    tables = cat.dz2_modules()
    report = {name: cat.check_module(table) or "OK" for name, table in tables.items()}
    return {"modules": tables, "checks": report}, 0


def cmd_toric_gsd(args, inputs):
    _, sg = toric.toric_code(args.L)
    _, dual = toric.dual_toric_code(args.L)
    return {"gsd": sg.gsd(), "dual_gsd": dual.gsd()}, 0


def cmd_toric_defect(args, inputs):
    lat = toric.CubicLattice(args.L)
    if args.loop:
        inputs["loop"] = _hash_file(args.loop)
        with open(args.loop) as fh:
            verts = json.load(fh)
        edges = []
        for i, v in enumerate(verts):
            w = verts[(i + 1) % len(verts)]
            edge = _edge_between(lat, v, w)
            if edge is None:
                raise InputError("vertices %r, %r are not adjacent" % (v, w))
            edges.append(edge)
    else:
        edges = lat.square_loop(0, 0, 1)
    result = toric.defect_subspace(args.L, edges)
    result["anchored"] = True
    return result, 0


def cmd_toric_modules(args, inputs):
    tables = toric.string_action_tables(args.L)
    agree = tables == cat.dz2_modules()
    return {"tables": tables, "match_categorical": agree}, (0 if agree else 1)


def _edge_between(lat, v, w):
    for axis in range(3):
        if lat.shift(v, axis) == w:
            return lat.edge(v, axis)
        if lat.shift(w, axis) == v:
            return lat.edge(w, axis)
    return None


def _simple_name(tg, s):
    return "Phi(%s,%s)x(%s,%s)" % (tg.g.names[s.x], s.phi, tg.g.names[s.g], s.rho)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="twogauge", description="finite 2-group gauge theory workbench"
    )
    parser.add_argument("--pretty", action="store_true", help="indent the JSON report")
    parser.add_argument("--timing", action="store_true", help="include elapsed time")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="validate a two-group table")
    p.add_argument("--two-group", required=True)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("partition", help="partition value of a closed complex")
    p.add_argument("--two-group", required=True)
    p.add_argument("--complex", required=True)
    p.add_argument("--omega")
    p.add_argument("--cap-states", type=int)
    p.set_defaults(fn=cmd_partition)

    p = sub.add_parser("pachner-check", help="seeded retriangulation invariance")
    p.add_argument("--two-group", required=True)
    p.add_argument("--complex", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--moves", type=int, default=3)
    p.add_argument("--cap-states", type=int)
    p.set_defaults(fn=cmd_pachner_check)

    p = sub.add_parser("gsd", help="ground-space dimension on a 3-complex")
    p.add_argument("--two-group", required=True)
    p.add_argument("--space", required=True)
    p.add_argument("--cap-states", type=int)
    p.set_defaults(fn=cmd_gsd)

    p = sub.add_parser("commute", help="pairwise projector checks")
    p.add_argument("--two-group", required=True)
    p.add_argument("--space", required=True)
    p.set_defaults(fn=cmd_commute)

    p = sub.add_parser("string-fusion", help="string operator relations on a ribbon")
    p.add_argument("--two-group", required=True)
    p.add_argument("--space", required=True)
    p.add_argument("--ribbon")
    p.set_defaults(fn=cmd_string_fusion)

    p = sub.add_parser("fusion-table", help="emit the double's fusion table")
    p.add_argument("--two-group", required=True)
    p.set_defaults(fn=cmd_fusion_table)

    p = sub.add_parser("category-check", help="axiom checks of the double")
    p.add_argument("--two-group", default="Z2")
    p.add_argument("--all", action="store_true")
    p.set_defaults(fn=cmd_category_check)

    p = sub.add_parser("modules", help="module tables of the two-element double")
    p.set_defaults(fn=cmd_modules)

    toric_parser = sub.add_parser("toric", help="cubic-lattice stabilizer path")
    toric_sub = toric_parser.add_subparsers(dest="toric_command", required=True)
    p = toric_sub.add_parser("gsd")
    p.add_argument("--L", type=int, required=True)
    p.set_defaults(fn=cmd_toric_gsd)
    p = toric_sub.add_parser("defect")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--loop", help="JSON list of loop vertices")
    p.set_defaults(fn=cmd_toric_defect)
    p = toric_sub.add_parser("modules")
    p.add_argument("--L", type=int, required=True)
    p.set_defaults(fn=cmd_toric_modules)
    return parser


def dispatch(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    inputs = {}
    started = time.monotonic()
    try:
        result, code = args.fn(args, inputs)
    except InputError as exc:
        report = {"command": args.command, "error": str(exc)}
        return report, 2
    report = {"command": args.command, "inputs": inputs, "result": result}
    if args.timing:
        report["elapsed_s"] = round(time.monotonic() - started, 3)
    return report, code


def main(argv=None):
    report, code = dispatch(sys.argv[1:] if argv is None else argv)
    if report.get("error"):
        json.dump(report, sys.stdout, sort_keys=True)
        sys.stdout.write("\n")
        return code
    indent = 2 if "--pretty" in (argv or sys.argv) else None
    json.dump(report, sys.stdout, sort_keys=True, indent=indent)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands chain into pipelines: generate a network, validate or inspect
it, repartition it, export it, simulate it, and compare filesets.  Exit
codes: 0 success, 1 data/validation failure (including unequal diff), 2
command-line usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import codec
from .export import export_edgelist, export_metis
from .fileset import load_network, save_network
from .generate import generate, parse_config, spec_from_mapping
from .model import Network
from .partition import (
    assignment_from_file,
    metrics,
    redistribute,
    voxel_partition,
)
from .simulate import SimConfig, Simulation, checkpoint, embed, spikes_text
from .textio import FormatError
from .validate import validate


def _coords_global(net: Network):
    import numpy as np

    return np.concatenate([block.coords for block in net.partitions]) \
        if net.partitions else np.zeros((0, 3))


def _violation_json(v, prefix: str) -> dict:
    return {"code": v.code, "file": v.where(prefix).rsplit(":", 1)[0],
            "line": v.line, "message": v.message}


def _cmd_generate(args) -> int:
    mapping: dict[str, str] = {}
    if args.config:
        mapping.update(parse_config(Path(args.config).read_text()))
    for key in ("kind", "n", "p", "sigma", "k", "seed"):
        val = getattr(args, key)
        if val is not None:
            mapping[key] = str(val)
    if "seed" not in mapping:
        print("error: generate requires an explicit --seed", file=sys.stderr)
        return 2
    try:
        spec = spec_from_mapping(mapping)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    net = generate(spec)
    save_network(net, args.out)
    print(f"generated kind={spec.kind} n={net.n} m={net.m} k={net.k} "
          f"seed={spec.seed} -> {args.out}")
    return 0


def _cmd_validate(args) -> int:
    try:
        net = load_network(args.prefix, check=False)
    except FormatError as exc:
        if args.json:
            payload = {"ok": False, "violations": [
                {"code": exc.code, "file": exc.path or exc.kind,
                 "line": exc.line, "message": exc.message}]}
            print(json.dumps(payload, indent=2))
        else:
            print(f"INVALID {exc}")
        return 1
    report = validate(net)
    if args.json:
        payload = {"ok": report.ok,
                   "violations": [_violation_json(v, args.prefix)
                                  for v in report.violations]}
        print(json.dumps(payload, indent=2))
    elif report.ok:
        print(f"OK n={net.n} k={net.k} m={net.m} no violations")
    else:
        for v in report.violations:
            print(f"{v.code} {v.where(args.prefix)} {v.message}")
    return 0 if report.ok else 1


def _info_payload(net: Network) -> dict:
    from .model import in_csr

    row_ptr, _col = in_csr(net)
    in_deg = [int(row_ptr[g + 1] - row_ptr[g]) for g in range(net.n)]
    return {
        "n": net.n,
        "k": net.k,
        "m": net.m,
        "dist": list(net.distribution.dist),
        "models": [
            {"name": e.name, "kind": e.kind, "state_size": e.state_size,
             "params": [[key, val] for key, val in e.params]}
            for e in net.models.entries
        ],
        "partitions": [
            {"vertices": block.n_local,
             "edges": int(sum(int(m.sum()) for m in block.incoming_masks)),
             "events": len(block.events)}
            for block in net.partitions
        ],
        "in_degree_sequence": in_deg,
    }


def _cmd_info(args) -> int:
    net = load_network(args.prefix)
    payload = _info_payload(net)
    if args.json:
        print(json.dumps(payload, indent=2))
        return 0
    print(f"n {payload['n']}")
    print(f"k {payload['k']}")
    print(f"m {payload['m']}")
    print("dist " + " ".join(str(x) for x in payload["dist"]))
    for line in codec.serialize_model(net.models).splitlines():
        print(f"model {line}")
    for p, part in enumerate(payload["partitions"]):
        print(f"partition {p}: vertices {part['vertices']} "
              f"edges {part['edges']} events {part['events']}")
    return 0


def _cmd_partition(args) -> int:
    net = load_network(args.prefix)
    if args.method == "voxel":
        try:
            grid = tuple(int(tok) for tok in args.grid.split(","))
            if len(grid) != 3:
                raise ValueError(f"grid needs three dimensions, got {args.grid!r}")
            assignment = voxel_partition(_coords_global(net), grid, args.k)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    else:
        if not args.parts:
            print("error: --method file requires --parts", file=sys.stderr)
            return 2
        assignment = assignment_from_file(Path(args.parts).read_text(),
                                          net.n, args.k)
    out_net = redistribute(net, assignment)
    save_network(out_net, args.out)
    quality = metrics(out_net)
    print(f"partitioned k={out_net.k} edge_cut={quality.edge_cut} "
          f"balance={quality.balance:.4f} -> {args.out}")
    return 0


def _cmd_export(args) -> int:
    net = load_network(args.prefix)
    text = export_metis(net) if args.format == "metis" else export_edgelist(net)
    Path(args.out).write_bytes(text.encode("ascii"))
    print(f"exported format={args.format} -> {args.out}")
    return 0


def _cmd_simulate(args) -> int:
    net = load_network(args.prefix)
    cfg = SimConfig(dt=args.dt, steps=args.steps)
    sim = Simulation(net, cfg)
    done = 0
    while done < args.steps:
        if args.checkpoint_every:
            chunk = min(args.checkpoint_every, args.steps - done)
        else:
            chunk = args.steps - done
        sim.run_steps(chunk)
        done += chunk
        if args.checkpoint_every and done < args.steps:
            checkpoint(sim.state(), net, f"{args.out}.ck{sim.step}")
    final = embed(sim.state(), net)
    save_network(final, args.out)
    if args.spikes:
        Path(args.spikes).write_bytes(spikes_text(sim.spikes).encode("ascii"))
    print(f"simulated steps={args.steps} dt={args.dt} spikes={len(sim.spikes)} "
          f"-> {args.out}")
    return 0


_DIFF_ORDER = ("dist", "model", "adjcy", "coord", "state", "event")


def _canonical_texts(net: Network) -> dict[tuple, str]:
    texts = {("dist", None): codec.serialize_dist(net.distribution),
             ("model", None): codec.serialize_model(net.models)}
    for p, block in enumerate(net.partitions):
        orders = codec.neighbor_orders(block)
        texts[("adjcy", p)] = codec.serialize_adjacency(block, orders)
        texts[("coord", p)] = codec.serialize_coord(block)
        texts[("state", p)] = codec.serialize_state(block, orders)
        texts[("event", p)] = codec.serialize_event(block.events)
    return texts


def _first_difference(net_a: Network, net_b: Network):
    texts_a = _canonical_texts(net_a)
    texts_b = _canonical_texts(net_b)
    for kind in _DIFF_ORDER:
        parts = sorted({p for k, p in set(texts_a) | set(texts_b)
                        if k == kind}, key=lambda x: (x is not None, x))
        for p in parts:
            a = texts_a.get((kind, p), "")
            b = texts_b.get((kind, p), "")
            if a == b:
                continue
            a_lines, b_lines = a.splitlines(), b.splitlines()
            for idx in range(max(len(a_lines), len(b_lines))):
                la = a_lines[idx] if idx < len(a_lines) else None
                lb = b_lines[idx] if idx < len(b_lines) else None
                if la != lb:
                    return {"kind": kind, "partition": p, "line": idx + 1,
                            "a": la, "b": lb}
    return None


def _cmd_diff(args) -> int:
    net_a = load_network(args.prefix_a)
    net_b = load_network(args.prefix_b)
    difference = _first_difference(net_a, net_b)
    if args.json:
        payload = {"equal": difference is None}
        if difference:
            payload["first_difference"] = difference
        print(json.dumps(payload, indent=2))
    elif difference is None:
        print("equal")
    else:
        where = difference["kind"]
        if difference["partition"] is not None:
            where += f".{difference['partition']}"
        print(f"differ at {where}:{difference['line']}")
        print(f"  a: {difference['a']}")
        print(f"  b: {difference['b']}")
    return 0 if difference is None else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcsrnet",
        description="Partitioned spiking-network fileset toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a synthetic network fileset")
    p.add_argument("--kind", choices=["er", "spatial", "populations"])
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--config", help="key=value file; explicit flags override")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("validate", help="check a fileset against all invariants")
    p.add_argument("prefix")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("info", help="summarize a fileset")
    p.add_argument("prefix")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_info)

    p = sub.add_parser("partition", help="redistribute into k parts")
    p.add_argument("prefix")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=["voxel", "file"], required=True)
    p.add_argument("--grid", default="2,2,2", help="voxel grid as X,Y,Z")
    p.add_argument("--parts", help="part-vector file for --method file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_partition)

    p = sub.add_parser("export", help="write an external graph format")
    p.add_argument("prefix")
    p.add_argument("--format", choices=["metis", "edgelist"], required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("simulate", help="advance the network in time")
    p.add_argument("prefix")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--checkpoint-every", type=int, dest="checkpoint_every")
    p.add_argument("--out", required=True)
    p.add_argument("--spikes", help="write the spike record to this file")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("diff", help="compare two filesets semantically")
    p.add_argument("prefix_a")
    p.add_argument("prefix_b")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_diff)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run_cli(argv) -> int:
    """main() that folds argparse's SystemExit into a return code."""
    try:
        return main(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 0 if code is None else 2


if __name__ == "__main__":
    sys.exit(main())

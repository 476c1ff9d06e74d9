"""Check that an exported edge list matches its network's summary JSON.

The edge list has one ``source target model values...`` line per directed
edge; the JSON comes from ``dcsrnet info --json`` and carries ``n``,
``m``, and ``in_degree_sequence``. The comparison rebuilds the graph in
networkx, so agreement means the export really does describe the same
structure to an independent toolkit, not merely that two of our own
code paths agree with each other.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field

import networkx as nx


@dataclass
class InteropReport:
    node_count_match: bool = False
    edge_count_match: bool = False
    in_degree_sequence_match: bool = False
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def lines(self):
        yield f"node_count_match {self.node_count_match}"
        yield f"edge_count_match {self.edge_count_match}"
        yield f"in_degree_sequence_match {self.in_degree_sequence_match}"
        for item in self.mismatches:
            yield f"mismatch: {item}"


def _load_graph(edgelist_file: str, mismatches: list) -> nx.DiGraph | None:
    try:
        text = open(edgelist_file, encoding="ascii").read()
    except OSError as exc:
        mismatches.append(f"cannot read edge list: {exc}")
        return None
    except UnicodeDecodeError as exc:
        mismatches.append(f"edge list is not ASCII: {exc}")
        return None
    graph = nx.DiGraph()
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            continue
        try:
            source, target = int(tokens[0]), int(tokens[1])
        except (IndexError, ValueError):
            mismatches.append(
                f"edge list line {lineno}: expected 'source target ...', "
                f"got {line!r}")
            continue
        if graph.has_edge(source, target):
            mismatches.append(
                f"edge list line {lineno}: duplicate edge "
                f"{source} -> {target}")
            continue
        graph.add_edge(source, target)
    return graph


def _load_info(info_json_file: str, mismatches: list) -> dict | None:
    try:
        with open(info_json_file, encoding="utf-8") as fh:
            info = json.load(fh)
    except (OSError, ValueError) as exc:
        mismatches.append(f"cannot read info JSON: {exc}")
        return None
    missing = [key for key in ("n", "m", "in_degree_sequence")
               if key not in info]
    if missing:
        mismatches.append(f"info JSON lacks keys: {', '.join(missing)}")
        return None
    return info


def verify_export(edgelist_file: str, info_json_file: str) -> InteropReport:
    """Compare an exported edge list against the source network's summary.

    Returns a report whose three flags are all true exactly when the
    mismatch list is empty.
    """
    report = InteropReport()
    graph = _load_graph(edgelist_file, report.mismatches)
    info = _load_info(info_json_file, report.mismatches)
    if graph is None or info is None or report.mismatches:
        return report

    n, m = int(info["n"]), int(info["m"])
    claimed_degrees = [int(d) for d in info["in_degree_sequence"]]

    # The edge list cannot mention isolated vertices, so materialize the
    # declared id range; stray endpoints outside it then surface as extra
    # nodes.
    graph.add_nodes_from(range(n))
    report.node_count_match = graph.number_of_nodes() == n
    if not report.node_count_match:
        outside = sorted(v for v in graph.nodes if not 0 <= v < n)
        report.mismatches.append(
            f"edge endpoints outside [0, {n}): {outside}")

    report.edge_count_match = graph.number_of_edges() == m
    if not report.edge_count_match:
        report.mismatches.append(
            f"info JSON declares m={m}, edge list builds "
            f"{graph.number_of_edges()} edges")

    if len(claimed_degrees) != n:
        report.mismatches.append(
            f"in_degree_sequence has {len(claimed_degrees)} entries "
            f"for n={n}")
    else:
        built = sorted(d for _, d in graph.in_degree())
        report.in_degree_sequence_match = built == sorted(claimed_degrees)
        if not report.in_degree_sequence_match:
            report.mismatches.append(
                "sorted in-degree sequences differ between the rebuilt "
                "graph and the info JSON")
    return report


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="verify-export",
        description="Rebuild an exported edge list in networkx and compare "
                    "its structure to the companion info JSON.")
    parser.add_argument("edgelist", help="file from 'export --format edgelist'")
    parser.add_argument("info_json", help="file from 'info --json'")
    args = parser.parse_args(argv)
    report = verify_export(args.edgelist, args.info_json)
    for line in report.lines():
        print(line)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())

"""Load and save whole networks in the on-disk fileset layout.

A fileset is addressed by a path prefix; the network lives in
``<prefix>.dist``, ``<prefix>.model`` and, per partition p, in
``<prefix>.adjcy.<p>``, ``<prefix>.coord.<p>``, ``<prefix>.state.<p>`` and
``<prefix>.event.<p>``.  Event files may be absent on load (no pending
events); every kind is written on save.  Saved bytes are canonical, so
save(load(fileset)) reproduces a canonical fileset exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from . import codec
from .model import Network, PartitionBlock
from .textio import FormatError, decode_text
from .validate import validate

PART_KINDS = ("adjcy", "coord", "state", "event")


@dataclass(frozen=True)
class FilesetPath:
    """Derives the on-disk names of every file kind from one prefix."""

    prefix: str

    def dist(self) -> Path:
        return Path(f"{self.prefix}.dist")

    def model(self) -> Path:
        return Path(f"{self.prefix}.model")

    def part(self, kind: str, p: int) -> Path:
        return Path(f"{self.prefix}.{kind}.{p}")

    def all_files(self, k: int) -> list[Path]:
        files = [self.dist(), self.model()]
        for p in range(k):
            files.extend(self.part(kind, p) for kind in PART_KINDS)
        return files


def _read(path: Path, kind: str, partition=None) -> str:
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise FormatError("file not found", code="MISSING", kind=kind,
                          partition=partition, path=str(path)) from None
    try:
        return decode_text(data, kind=kind, partition=partition)
    except FormatError as exc:
        exc.path = str(path)
        raise


def _tagged(path: Path, fn, *args, **kwargs):
    # Parsers only know the file kind; stamp the on-disk name onto errors.
    try:
        return fn(*args, **kwargs)
    except FormatError as exc:
        if exc.path is None:
            exc.path = str(path)
        raise


def load_network(prefix: str, *, check: bool = True) -> Network:
    """Read a fileset into a Network.

    Any malformed file raises :class:`FormatError` carrying the file path and
    1-based line.  With ``check`` (the default) the loaded network is also
    validated; the first violation is raised as a FormatError whose
    ``report`` attribute holds the complete list.
    """
    fs = FilesetPath(str(prefix))
    dist = _tagged(fs.dist(), codec.parse_dist, _read(fs.dist(), "dist"))
    models = _tagged(fs.model(), codec.parse_model, _read(fs.model(), "model"))
    blocks = []
    for p in range(dist.k):
        apath = fs.part("adjcy", p)
        adjacency = _tagged(apath, codec.parse_adjacency,
                            _read(apath, "adjcy", p), dist, p)
        cpath = fs.part("coord", p)
        coords = _tagged(cpath, codec.parse_coord, _read(cpath, "coord", p),
                         len(adjacency), partition=p)
        spath = fs.part("state", p)
        vertex_state, edge_state = _tagged(
            spath, codec.parse_state, _read(spath, "state", p), adjacency,
            models, partition=p)
        epath = fs.part("event", p)
        if epath.exists():
            events = _tagged(epath, codec.parse_event,
                             _read(epath, "event", p), dist, p)
        else:
            events = []
        blocks.append(PartitionBlock.from_lists(
            p, adjacency, coords, vertex_state, edge_state, events))
    net = Network(dist, models, tuple(blocks))
    if check:
        report = validate(net)
        if not report.ok:
            first = report.violations[0]
            extra = len(report.violations) - 1
            msg = first.message + (f" (+{extra} more violations)" if extra else "")
            exc = FormatError(msg, code=first.code, kind=first.kind,
                              partition=first.partition, line=first.line,
                              path=str(fs.part(first.kind, first.partition))
                              if first.partition is not None
                              else f"{prefix}.{first.kind}")
            exc.report = report
            raise exc
    return net


def save_network(net: Network, prefix: str, *, check: bool = True) -> list[Path]:
    """Write a network as a canonical fileset; returns the files written.

    With ``check`` (the default) an invalid network is refused with a
    ValueError naming the violations.
    """
    if check:
        report = validate(net)
        if not report.ok:
            raise ValueError(f"refusing to save invalid network: {report}")
    fs = FilesetPath(str(prefix))
    written = []

    def _write(path: Path, text: str) -> None:
        path.write_bytes(text.encode("ascii"))
        written.append(path)

    _write(fs.dist(), codec.serialize_dist(net.distribution))
    _write(fs.model(), codec.serialize_model(net.models))
    for p, block in enumerate(net.partitions):
        orders = codec.neighbor_orders(block)
        _write(fs.part("adjcy", p), codec.serialize_adjacency(block, orders))
        _write(fs.part("coord", p), codec.serialize_coord(block))
        _write(fs.part("state", p), codec.serialize_state(block, orders))
        _write(fs.part("event", p), codec.serialize_event(block.events))
    return written


def fileset_bytes(prefix: str, k: int) -> int:
    """Total on-disk size of the fileset's existing files, in bytes."""
    fs = FilesetPath(str(prefix))
    return sum(path.stat().st_size for path in fs.all_files(k)
               if path.exists())

"""Token-level codec shared by every file kind.

Canonical text is ASCII, one record per LF-terminated line, tokens joined by
single spaces, no trailing whitespace.  Integers are plain base-10.  Floats are
rendered as the shortest decimal string that parses back to the identical
binary64 value; when the fixed and scientific notations tie in length the
fixed form wins, and exponents carry no '+' sign or leading zeros.  This makes
serialization a pure function of the in-memory value, so equal networks always
produce byte-equal files.

Readers are deliberately more liberal than writers: runs of blanks or tabs
separate tokens, and a trailing CR per line is tolerated.
"""

from __future__ import annotations

import math
import re

_INT_RE = re.compile(r"^-?[0-9]+$")


class FormatError(ValueError):
    """A structural problem in an input file.

    Carries enough locus information (file kind, partition, 1-based line) for
    callers to point at the offending spot, plus a stable ``code`` naming the
    violated rule with the same vocabulary the post-load validator uses.
    ``path`` is filled in by the fileset loader once the on-disk name is
    known.
    """

    def __init__(self, message, *, code=None, kind=None, partition=None,
                 line=None, path=None):
        super().__init__(message)
        self.message = message
        self.code = code
        self.kind = kind
        self.partition = partition
        self.line = line
        self.path = path

    def locus(self) -> str:
        where = self.path if self.path is not None else (self.kind or "<input>")
        if self.line is not None:
            return f"{where}:{self.line}"
        return str(where)

    def __str__(self) -> str:
        return f"{self.locus()}: {self.message}"


def split_lines(text: str) -> list[str]:
    """Split file content into lines, tolerating CRLF and a final newline.

    A canonical file ends with exactly one LF, so the empty tail produced by
    ``split`` is dropped; any further blank tail line is real content and is
    preserved (adjacency rows of isolated vertices are empty lines).
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [ln[:-1] if ln.endswith("\r") else ln for ln in lines]


def parse_int(token: str, what: str = "integer") -> int:
    if not _INT_RE.match(token):
        raise FormatError(f"expected {what}, got {token!r}")
    return int(token)


def parse_float(token: str, what: str = "number") -> float:
    # float() is too permissive for a file format: it takes underscores,
    # surrounding blanks and unicode digits.  Restrict to ASCII without '_'.
    if (not token or "_" in token or not token.isascii()
            or token.strip() != token):
        raise FormatError(f"expected {what}, got {token!r}")
    try:
        return float(token)
    except ValueError:
        raise FormatError(f"expected {what}, got {token!r}") from None


def format_int(value: int) -> str:
    return str(int(value))


def format_float(x: float) -> str:
    """Shortest decimal rendering of ``x`` that round-trips binary64."""
    x = float(x)
    if x != x:
        return "nan"
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    if x == 0.0:
        return "-0" if math.copysign(1.0, x) < 0.0 else "0"
    neg = x < 0.0
    ax = -x if neg else x
    # Fast path: small integral values render as plain integers, which is
    # always shortest for up to three digits.
    if ax == int(ax) and ax < 1000.0:
        out = str(int(ax))
        return "-" + out if neg else out
    # repr() yields the shortest digit string that round-trips; re-arrange it
    # into whichever of fixed/scientific notation is shorter.
    r = repr(ax)
    if "e" in r:
        mant, _, es = r.partition("e")
        e10 = int(es)
    else:
        mant, e10 = r, 0
    ip, _, fp = mant.partition(".")
    digits = (ip + fp).lstrip("0")
    q = e10 - len(fp)
    stripped = digits.rstrip("0")
    q += len(digits) - len(stripped)
    digits = stripped
    nd = len(digits)
    if q >= 0:
        fixed = digits + "0" * q
    elif -q < nd:
        fixed = digits[: nd + q] + "." + digits[nd + q :]
    else:
        fixed = "0." + "0" * (-q - nd) + digits
    sexp = q + nd - 1
    sci = (digits if nd == 1 else digits[0] + "." + digits[1:]) + "e" + str(sexp)
    out = fixed if len(fixed) <= len(sci) else sci
    return "-" + out if neg else out


def is_token(s: str) -> bool:
    """True when ``s`` may appear as a bare token: non-empty printable ASCII
    with no blanks."""
    if not s or not s.isascii():
        return False
    return not any(c.isspace() or not c.isprintable() for c in s)


def decode_text(data: bytes, *, kind=None, partition=None) -> str:
    try:
        return data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise FormatError(
            f"non-ASCII byte at offset {exc.start}", kind=kind, partition=partition
        ) from None

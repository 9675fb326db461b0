"""Random instances and the HDEC text formats.

Instance file (1-based vertices)::

    HDEC v1
    kind undirected
    n 6
    x 1 2 3 4 5 6
    y 1 4 6 2 3 5

Certificate file::

    HDEC-CERT v1
    z 1 4 5 3 2 6
    w 1 2 3 4 6 5
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .multigraph import (
    KINDS,
    Certificate,
    HamCycle,
    HamDecompError,
    UnionMultigraph,
    build_union,
)
from .rng import Xorshift64Star

INSTANCE_HEADER = "HDEC v1"
CERT_HEADER = "HDEC-CERT v1"


class FormatError(HamDecompError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class TooSmall(HamDecompError):
    pass


@dataclass
class Instance:
    kind: str
    n: int
    x: HamCycle
    y: HamCycle
    union: UnionMultigraph = field(repr=False, compare=False)

    @classmethod
    def from_cycles(cls, x: HamCycle, y: HamCycle) -> "Instance":
        g = build_union(x, y)
        return cls(x.kind, x.n, x, y, g)

    @classmethod
    def from_orders(cls, x, y, kind: str, one_based: bool = False) -> "Instance":
        shift = 1 if one_based else 0
        return cls.from_cycles(
            HamCycle(tuple(v - shift for v in x), kind),
            HamCycle(tuple(v - shift for v in y), kind),
        )


def random_hamiltonian_cycle(n: int, rng: Xorshift64Star, kind: str = "undirected") -> HamCycle:
    if n < 3:
        raise TooSmall(f"n must be at least 3, got {n}")
    perm = list(range(n))
    rng.shuffle(perm)
    return HamCycle(tuple(perm), kind)


def generate_instance(n: int, kind: str, rng: Xorshift64Star) -> Instance:
    x = random_hamiltonian_cycle(n, rng, kind)
    y = random_hamiltonian_cycle(n, rng, kind)
    return Instance.from_cycles(x, y)


def instance_for_seed(n: int, kind: str, seed: int) -> Instance:
    return generate_instance(n, kind, Xorshift64Star(seed))


def _fmt(order) -> str:
    return " ".join(str(v + 1) for v in order)


def serialize_instance(inst: Instance) -> str:
    return (
        f"{INSTANCE_HEADER}\nkind {inst.kind}\nn {inst.n}\n"
        f"x {_fmt(inst.x.order)}\ny {_fmt(inst.y.order)}\n"
    )


def serialize_certificate(cert: Certificate) -> str:
    return f"{CERT_HEADER}\nz {_fmt(cert.z.order)}\nw {_fmt(cert.w.order)}\n"


def _lines(text: str) -> list[str]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _expect_header(lines: list[str], header: str) -> None:
    if not lines:
        raise FormatError("empty input", 1)
    if lines[0].strip() != header:
        raise FormatError(f"expected {header!r}, got {lines[0]!r}", 1)


def _keyed(lines: list[str], idx: int, key: str) -> list[str]:
    if idx >= len(lines):
        raise FormatError(f"missing '{key}' line", idx + 1)
    parts = lines[idx].split()
    if not parts or parts[0] != key:
        raise FormatError(f"expected '{key}' line, got {lines[idx]!r}", idx + 1)
    return parts[1:]


def _vertices(tokens: list[str], lineno: int) -> tuple[int, ...]:
    try:
        vs = tuple(int(t) for t in tokens)
    except ValueError:
        raise FormatError("vertices must be integers", lineno) from None
    if any(v < 1 for v in vs):
        raise FormatError("vertices are 1-based", lineno)
    return tuple(v - 1 for v in vs)


def _check_trailing(lines: list[str], used: int) -> None:
    for i in range(used, len(lines)):
        if lines[i].strip():
            raise FormatError("unexpected trailing content", i + 1)


def parse_instance(text: str) -> Instance:
    lines = _lines(text)
    _expect_header(lines, INSTANCE_HEADER)
    kind_tok = _keyed(lines, 1, "kind")
    if len(kind_tok) != 1 or kind_tok[0] not in KINDS:
        raise FormatError("kind must be 'directed' or 'undirected'", 2)
    kind = kind_tok[0]
    n_tok = _keyed(lines, 2, "n")
    try:
        (n,) = (int(t) for t in n_tok)
    except ValueError:
        raise FormatError("n must be a single integer", 3) from None
    if n < 3:
        raise FormatError("n must be at least 3", 3)
    cycles = []
    for idx, key in ((3, "x"), (4, "y")):
        vs = _vertices(_keyed(lines, idx, key), idx + 1)
        if len(vs) != n:
            raise FormatError(f"line '{key}' has {len(vs)} vertices, expected {n}", idx + 1)
        cycles.append(HamCycle(vs, kind))
    _check_trailing(lines, 5)
    return Instance.from_cycles(*cycles)


def parse_certificate(text: str, kind: str = "undirected") -> Certificate:
    """Parse a certificate; its kind is not stored in the file, so the caller
    supplies it (normally the kind of the instance it certifies)."""
    lines = _lines(text)
    _expect_header(lines, CERT_HEADER)
    z = _vertices(_keyed(lines, 1, "z"), 2)
    w = _vertices(_keyed(lines, 2, "w"), 3)
    _check_trailing(lines, 3)
    return Certificate(HamCycle(z, kind), HamCycle(w, kind))

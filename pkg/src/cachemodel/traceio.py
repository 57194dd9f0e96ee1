"""Memory-access trace formats and synthetic trace generation.

Two on-disk formats are supported:

Text (``.trc`` by convention), one record per line::

    <kind> <hex-address> [core]

where ``kind`` is ``I`` (instruction fetch), ``R`` (data read) or ``W``
(data write), the address is hexadecimal with an optional ``0x`` prefix, and
the core index defaults to 0. ``#`` starts a comment (anywhere on a line);
blank lines are ignored.

Binary (``.ctrc`` by convention): an 8-byte magic header ``CTRC\\x00\\x01\\x00\\x00``
followed by fixed 16-byte little-endian records: 1 byte kind (0=I, 1=R, 2=W),
1 byte core, 6 reserved zero bytes, 8 bytes address. The writer and parser
round-trip bit-exactly.

Both parsers are streaming: they read record by record and hold O(1) state.

Synthetic generation is deterministic; the ``random`` pattern draws from
Python's Mersenne Twister (`random.Random`), which produces identical
sequences for a given seed on every platform.
"""

from __future__ import annotations

import enum
import struct
from typing import BinaryIO, Iterable, Iterator, NamedTuple, TextIO

from .errors import TraceFormatError, ValidationError

MAGIC = b"CTRC\x00\x01\x00\x00"
FORMAT_VERSION = 1
_RECORD = struct.Struct("<BB6sQ")
_MAX_ADDRESS = 2**64 - 1


class AccessKind(enum.Enum):
    IFETCH = "I"
    READ = "R"
    WRITE = "W"


_KIND_FROM_LETTER = {k.value: k for k in AccessKind}
_KIND_TO_BYTE = {AccessKind.IFETCH: 0, AccessKind.READ: 1, AccessKind.WRITE: 2}
_KIND_FROM_BYTE = {v: k for k, v in _KIND_TO_BYTE.items()}


class TraceRecord(NamedTuple):
    kind: AccessKind
    address: int
    core: int = 0


class TraceFileHeader(NamedTuple):
    """Metadata of a trace stream; only the binary format carries one on disk."""

    version: int = FORMAT_VERSION
    record_count: int | None = None
    core_count_hint: int | None = None


def parse_text_trace(stream: TextIO) -> Iterator[TraceRecord]:
    """Yield records from a text trace; raises `TraceFormatError` with the
    1-based line number on the first malformed line."""
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise TraceFormatError(f"expected '<kind> <hex-address> [core]', got {line!r}",
                                   line=lineno)
        kind_token, addr_token = tokens[0], tokens[1]
        kind = _KIND_FROM_LETTER.get(kind_token)
        if kind is None:
            raise TraceFormatError(f"unknown kind {kind_token!r}", line=lineno)
        try:
            address = int(addr_token, 16)
        except ValueError:
            raise TraceFormatError(f"non-hex address {addr_token!r}", line=lineno) from None
        if not 0 <= address <= _MAX_ADDRESS:
            raise TraceFormatError(f"address out of range: {addr_token!r}", line=lineno)
        core = 0
        if len(tokens) == 3:
            try:
                core = int(tokens[2], 10)
            except ValueError:
                raise TraceFormatError(f"non-integer core {tokens[2]!r}", line=lineno) from None
            if core < 0:
                raise TraceFormatError(f"negative core {tokens[2]!r}", line=lineno)
        yield TraceRecord(kind, address, core)


def write_text_trace(records: Iterable[TraceRecord], stream: TextIO) -> int:
    """Write records in the text grammar; returns the number written."""
    n = 0
    for record in records:
        stream.write(f"{record.kind.value} 0x{record.address:x} {record.core}\n")
        n += 1
    return n


def read_binary_header(stream: BinaryIO) -> TraceFileHeader:
    """Consume and check the binary magic; returns the stream header."""
    magic = stream.read(len(MAGIC))
    if len(magic) < len(MAGIC) or magic[:4] != MAGIC[:4]:
        raise TraceFormatError(f"bad magic {magic!r}", offset=0)
    if magic != MAGIC:
        raise TraceFormatError(f"unsupported format version in magic {magic!r}", offset=4)
    return TraceFileHeader(version=FORMAT_VERSION)


def parse_binary_trace(stream: BinaryIO, strict: bool = False) -> Iterator[TraceRecord]:
    """Yield records from a binary trace.

    `strict` additionally rejects nonzero reserved bytes. Truncation errors
    name the byte offset where the partial record starts.
    """
    read_binary_header(stream)
    offset = len(MAGIC)
    while True:
        chunk = stream.read(_RECORD.size)
        if not chunk:
            return
        if len(chunk) < _RECORD.size:
            raise TraceFormatError(
                f"truncated record ({len(chunk)} of {_RECORD.size} bytes)", offset=offset)
        kind_byte, core, reserved, address = _RECORD.unpack(chunk)
        kind = _KIND_FROM_BYTE.get(kind_byte)
        if kind is None:
            raise TraceFormatError(f"unknown kind byte {kind_byte}", offset=offset)
        if strict and reserved != b"\x00" * 6:
            raise TraceFormatError(f"nonzero reserved bytes {reserved!r}", offset=offset)
        yield TraceRecord(kind, address, core)
        offset += _RECORD.size


def write_binary_trace(records: Iterable[TraceRecord], stream: BinaryIO) -> int:
    """Write the magic plus fixed-size records; returns the number written."""
    stream.write(MAGIC)
    n = 0
    for record in records:
        if not 0 <= record.core <= 255:
            raise ValidationError("core", f"binary format carries cores 0..255, got {record.core}")
        if not 0 <= record.address <= _MAX_ADDRESS:
            raise ValidationError("address", f"must fit in 64 bits, got {record.address:#x}")
        stream.write(_RECORD.pack(_KIND_TO_BYTE[record.kind], record.core, b"\x00" * 6,
                                  record.address))
        n += 1
    return n


def _parse_pattern(pattern: str) -> tuple[str, int | None]:
    name, _, arg = pattern.partition(":")
    if name not in ("sequential", "strided", "random", "loop"):
        raise ValidationError("pattern", f"unknown pattern {pattern!r}")
    if name in ("strided", "loop"):
        if not arg:
            raise ValidationError("pattern", f"{name} needs a parameter, e.g. {name}:8")
        try:
            value = int(arg, 10)
        except ValueError:
            raise ValidationError("pattern", f"non-integer {name} parameter {arg!r}") from None
        if value <= 0:
            raise ValidationError("pattern", f"{name} parameter must be > 0, got {value}")
        return name, value
    if arg:
        raise ValidationError("pattern", f"{name} takes no parameter, got {pattern!r}")
    return name, None


def generate_synthetic(pattern: str, length: int, core_count: int = 1, *,
                       seed: int = 0, ifetch_per_data: int = 3, write_every: int = 4,
                       line_size: int = 64, address_space_lines: int = 1024,
                       code_base: int = 0x400000, data_base: int = 0x0) -> Iterator[TraceRecord]:
    """Generate a deterministic synthetic trace.

    `length` counts data records; each is preceded by `ifetch_per_data`
    sequential instruction fetches (4-byte granularity from `code_base`), so
    the stream totals ``length * (1 + ifetch_per_data)`` records. Every
    `write_every`-th data record is a WRITE (0 disables writes). Data
    addresses follow the pattern:

    * ``sequential``      -- one line per record: 0, line_size, 2*line_size, ...
    * ``strided:K``       -- advance K bytes per record
    * ``random``          -- uniform line within `address_space_lines`, seeded
    * ``loop:K``          -- cycle over the first K lines

    When `core_count` > 1, whole ifetch+data bundles rotate across cores.
    """
    if length < 0:
        raise ValidationError("length", f"must be >= 0, got {length}")
    if core_count < 1:
        raise ValidationError("core_count", f"must be >= 1, got {core_count}")
    if ifetch_per_data < 0:
        raise ValidationError("ifetch_per_data", f"must be >= 0, got {ifetch_per_data}")
    if write_every < 0:
        raise ValidationError("write_every", f"must be >= 0, got {write_every}")
    if line_size <= 0:
        raise ValidationError("line_size", f"must be > 0, got {line_size}")
    if address_space_lines <= 0:
        raise ValidationError("address_space_lines", f"must be > 0, got {address_space_lines}")
    name, arg = _parse_pattern(pattern)

    import random as _random
    rng = _random.Random(seed)
    ifetch_cursor = 0
    for i in range(length):
        core = i % core_count
        for _ in range(ifetch_per_data):
            yield TraceRecord(AccessKind.IFETCH, code_base + 4 * ifetch_cursor, core)
            ifetch_cursor += 1
        if name == "sequential":
            address = data_base + i * line_size
        elif name == "strided":
            address = data_base + i * arg
        elif name == "loop":
            address = data_base + (i % arg) * line_size
        else:
            address = data_base + rng.randrange(address_space_lines) * line_size
        kind = AccessKind.WRITE if write_every and (i + 1) % write_every == 0 else AccessKind.READ
        yield TraceRecord(kind, address, core)


def load_trace(path: str) -> list[TraceRecord]:
    """Read a whole trace file, picking the format by magic sniffing with the
    file extension as a fallback (``.ctrc`` binary, anything else text)."""
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == MAGIC[:4]:
        with open(path, "rb") as fh:
            return list(parse_binary_trace(fh))
    with open(path, "r", encoding="utf-8") as fh:
        return list(parse_text_trace(fh))

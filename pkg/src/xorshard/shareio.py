"""Bit-exact share files and their dispersal to per-server directories.

A share file is a fixed 62-byte header followed by the raw slot
payloads.  The header ends in a SHA-256 digest over everything else in
the file (the 30 header bytes before the digest, then the payload), so
any single corrupted byte is caught on read.  Integers are
little-endian; the layout is frozen by the magic/version pair.
"""

from __future__ import annotations

import hashlib
import os
import struct
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .codec import ShareBlob
from .errors import (
    BadMagicError,
    DecodeError,
    DigestMismatchError,
    DispersalError,
    MissingShareError,
    ShareFormatError,
    TruncatedShareError,
    UnsupportedVersionError,
)
from .params import LayoutCase

__all__ = [
    "MAGIC",
    "FORMAT_VERSION",
    "HEADER_SIZE",
    "SHARE_FILENAME",
    "ShareHeader",
    "Dispersal",
    "serialize_share",
    "deserialize_share",
    "disperse",
    "collect",
]

MAGIC = b"XRSH"
FORMAT_VERSION = 1

# magic, version, servers, server_index, leak, parts, case,
# part_len, original_len, slot_count -- digest packed separately.
_PREFIX = struct.Struct("<4sBBBHHBQQH")
_DIGEST_SIZE = 32
HEADER_SIZE = _PREFIX.size + _DIGEST_SIZE  # 62

SHARE_FILENAME = "share_{server}.xrsh"


@dataclass(frozen=True)
class ShareHeader:
    """Parsed header fields; all but server_index agree across one job."""

    version: int
    servers: int
    server_index: int
    leak: int
    parts: int
    case: LayoutCase
    part_len: int
    original_len: int
    slot_count: int
    digest: bytes


@dataclass(frozen=True)
class Dispersal:
    """One root directory per server; share t lives in roots[t-1]."""

    roots: tuple[Path, ...]

    @classmethod
    def from_dirs(cls, dirs) -> "Dispersal":
        return cls(tuple(Path(d) for d in dirs))

    def share_path(self, server: int) -> Path:
        return self.roots[server - 1] / SHARE_FILENAME.format(server=server)


def _digest(prefix: bytes, payload: bytes) -> bytes:
    return hashlib.sha256(prefix + payload).digest()


def serialize_share(blob: ShareBlob) -> bytes:
    """Canonical byte encoding: equal blobs give byte-identical files."""
    if any(len(piece) != blob.part_len for piece in blob.payload):
        raise ValueError("payload pieces must all be part_len bytes")
    payload = b"".join(blob.payload)
    prefix = _PREFIX.pack(
        MAGIC,
        FORMAT_VERSION,
        blob.servers,
        blob.server_index,
        blob.leak,
        blob.parts,
        int(blob.case),
        blob.part_len,
        blob.original_len,
        len(blob.payload),
    )
    return prefix + _digest(prefix, payload) + payload


def deserialize_share(data: bytes) -> ShareBlob:
    """Parse and validate one share file's bytes.

    Raises a distinct error per failure: BadMagicError,
    UnsupportedVersionError, TruncatedShareError (too short),
    DigestMismatchError, or ShareFormatError for anything else
    (unknown case tag, nonsense field values, trailing bytes).
    """
    if len(data) < HEADER_SIZE:
        raise TruncatedShareError(
            f"{len(data)} bytes is shorter than the {HEADER_SIZE}-byte header")
    (magic, version, servers, server_index, leak, parts, case_tag,
     part_len, original_len, slot_count) = _PREFIX.unpack(data[:_PREFIX.size])
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(f"unsupported version {version}")
    try:
        case = LayoutCase(case_tag)
    except ValueError:
        raise ShareFormatError(f"unknown case tag {case_tag}") from None

    expected = HEADER_SIZE + slot_count * part_len
    if len(data) < expected:
        raise TruncatedShareError(
            f"file is {len(data)} bytes, header promises {expected}")
    if len(data) > expected:
        raise ShareFormatError(f"{len(data) - expected} trailing bytes")

    stored = data[_PREFIX.size:HEADER_SIZE]
    payload = data[HEADER_SIZE:]
    if _digest(data[:_PREFIX.size], payload) != stored:
        raise DigestMismatchError("share digest does not match contents")

    if servers < 2:
        raise ShareFormatError(f"server count {servers} below minimum")
    if not 1 <= server_index <= servers:
        raise ShareFormatError(
            f"server index {server_index} outside 1..{servers}")
    if parts < 1 or leak > parts:
        raise ShareFormatError(f"impossible budget {leak}/{parts}")

    pieces = tuple(
        payload[i * part_len:(i + 1) * part_len] for i in range(slot_count))
    return ShareBlob(
        server_index=server_index,
        servers=servers,
        leak=leak,
        parts=parts,
        case=case,
        part_len=part_len,
        original_len=original_len,
        payload=pieces,
    )


def disperse(blobs: list[ShareBlob], dispersal: Dispersal) -> list[Path]:
    """Write each share atomically into its server directory.

    Creates directories as needed; each file lands via temp-file plus
    rename so a reader never sees a half-written share.  On any failure
    the shares already placed by this call are removed again, and the
    error names the server that failed.  Returns the written paths in
    blob order.
    """
    for blob in blobs:
        if not 1 <= blob.server_index <= len(dispersal.roots):
            raise DispersalError(blob.server_index, "no directory configured")
    placed: list[Path] = []
    for blob in blobs:
        server = blob.server_index
        root = dispersal.roots[server - 1]
        target = dispersal.share_path(server)
        tmp_path: Path | None = None
        try:
            os.makedirs(root, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(dir=root, suffix=".xrsh.tmp")
            tmp_path = Path(tmp_name)
            with os.fdopen(fd, "wb") as handle:
                handle.write(serialize_share(blob))
            os.replace(tmp_path, target)
            tmp_path = None
            placed.append(target)
        except OSError as exc:
            for path in [tmp_path, *placed]:
                if path is not None:
                    try:
                        path.unlink()
                    except OSError:
                        pass
            raise DispersalError(server, str(exc)) from exc
    return placed


def collect(dispersal: Dispersal) -> list[ShareBlob]:
    """Read one share from every server directory."""
    blobs = []
    for position, root in enumerate(dispersal.roots, start=1):
        found = sorted(Path(root).glob("share_*.xrsh"))
        if not found:
            raise MissingShareError(f"no share file in {root} (server {position})")
        if len(found) > 1:
            raise DecodeError(
                f"{len(found)} share files in {root}, expected exactly one")
        blobs.append(deserialize_share(found[0].read_bytes()))
    return blobs

"""Materialize a share plan against real bytes, and invert it.

``encode`` cuts the file into equal parts (zero-padding the tail),
draws fresh uniform pad keys, and fills every slot of every server per
the plan.  ``decode`` needs all T shares: keys travel in clear inside
the shares, so each padded part is recovered by XORing its pads back
off, and the padding is stripped by the recorded original length.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    HeaderMismatchError,
    MissingShareError,
    PayloadLengthError,
    RandomnessError,
)
from .layout import Encrypted, Key, Plain, SharePlan
from .params import LayoutCase, SchemeParams

__all__ = [
    "PaddedFile",
    "KeyPool",
    "ShareBlob",
    "pad",
    "generate_keys",
    "encode",
    "decode",
]


@dataclass(frozen=True)
class PaddedFile:
    """The file cut into equal byte-string parts plus zero padding."""

    parts: tuple[bytes, ...]
    original_len_bytes: int
    beta_bytes: int  # zero bytes appended, in [0, len(parts) - 1]

    @property
    def part_len(self) -> int:
        return len(self.parts[0]) if self.parts else 0


@dataclass(frozen=True)
class KeyPool:
    """Uniform part-sized pad keys, one per key index."""

    keys: tuple[bytes, ...]
    source: str  # "system" (cryptographic) or "seeded" (reproducible test mode)


@dataclass(frozen=True)
class ShareBlob:
    """One server's concrete share: metadata plus slot payloads in order.

    The metadata mirrors what every share's file header records; all
    fields except server_index agree across the shares of one encode.
    """

    server_index: int
    servers: int
    leak: int
    parts: int
    case: LayoutCase
    part_len: int
    original_len: int
    payload: tuple[bytes, ...]


class _SystemRandomness:
    """os.urandom behind the same randbytes interface random.Random has."""

    def randbytes(self, n: int) -> bytes:
        return os.urandom(n)


def _xor_parts(base: bytes, pads: tuple[bytes, ...]) -> bytes:
    if not pads:
        return base
    acc = np.frombuffer(base, dtype=np.uint8).copy()
    for chunk in pads:
        acc ^= np.frombuffer(chunk, dtype=np.uint8)
    return acc.tobytes()


def pad(data: bytes, parts: int) -> PaddedFile:
    """Split ``data`` into ``parts`` equal pieces, zero-padding the tail.

    No padding is added when the length already divides evenly; an empty
    input yields ``parts`` empty pieces.
    """
    if parts < 1:
        raise ValueError(f"parts must be >= 1, got {parts}")
    data = bytes(data)
    beta = (parts - len(data) % parts) % parts
    padded = data + b"\x00" * beta
    part_len = len(padded) // parts
    pieces = tuple(
        padded[i * part_len:(i + 1) * part_len] for i in range(parts))
    return PaddedFile(pieces, len(data), beta)


def generate_keys(params: SchemeParams, part_len: int, rng=None) -> KeyPool:
    """Draw the scheme's pad keys as consecutive part-sized blocks.

    ``rng`` is anything with ``randbytes(n)`` (``random.Random`` with a
    seed for reproducible tests); None uses the operating system source.
    Pad security rests on fresh uniform keys, so seeding is test-only.
    """
    if part_len < 0:
        raise ValueError(f"part_len must be >= 0, got {part_len}")
    source = "system" if rng is None else "seeded"
    rand = _SystemRandomness() if rng is None else rng
    keys = []
    for i in range(params.n_keys):
        try:
            chunk = rand.randbytes(part_len)
        except OSError as exc:
            raise RandomnessError(f"randomness source failed at key {i + 1}: {exc}") from exc
        if not isinstance(chunk, bytes) or len(chunk) != part_len:
            raise RandomnessError(
                f"randomness source returned {len(chunk)} bytes for key {i + 1}, wanted {part_len}")
        keys.append(chunk)
    return KeyPool(tuple(keys), source)


def encode(data: bytes, plan: SharePlan, rng=None) -> list[ShareBlob]:
    """Produce all T shares for ``data`` under ``plan``."""
    params = plan.params
    padded = pad(data, params.parts)
    pool = generate_keys(params, padded.part_len, rng)
    blobs = []
    for t in range(1, params.servers + 1):
        payload = []
        for spec in plan.server_slots(t):
            if isinstance(spec, Plain):
                payload.append(padded.parts[spec.part_index - 1])
            elif isinstance(spec, Key):
                payload.append(pool.keys[spec.key_index - 1])
            else:
                pads = tuple(pool.keys[a - 1] for a in spec.key_indices)
                payload.append(_xor_parts(padded.parts[spec.part_index - 1], pads))
        blobs.append(ShareBlob(
            server_index=t,
            servers=params.servers,
            leak=params.leak,
            parts=params.parts,
            case=params.case,
            part_len=padded.part_len,
            original_len=padded.original_len_bytes,
            payload=tuple(payload),
        ))
    return blobs


def _check_headers(blobs: dict[int, ShareBlob], params: SchemeParams) -> None:
    reference = {
        "servers": params.servers,
        "leak": params.leak,
        "parts": params.parts,
        "case": params.case,
    }
    first = blobs[min(blobs)]
    for blob in blobs.values():
        for name, wanted in reference.items():
            got = getattr(blob, name)
            if got != wanted:
                raise HeaderMismatchError(
                    f"share {blob.server_index}: {name}={got}, plan has {wanted}")
        for name in ("part_len", "original_len"):
            if getattr(blob, name) != getattr(first, name):
                raise HeaderMismatchError(
                    f"share {blob.server_index} disagrees on {name}")
    padded_len = params.parts * first.part_len
    if not 0 <= padded_len - first.original_len <= max(params.parts - 1, 0):
        raise HeaderMismatchError(
            f"original_len={first.original_len} impossible for "
            f"{params.parts} parts of {first.part_len} bytes")


def decode(shares: list[ShareBlob], plan: SharePlan) -> bytes:
    """Reconstruct the original bytes from all T shares.

    Raises:
        MissingShareError: not exactly one share per server.
        HeaderMismatchError: share metadata disagrees with the plan or
            across shares.
        PayloadLengthError: a payload does not match the plan's slot
            count or part length.
    """
    params = plan.params
    by_server: dict[int, ShareBlob] = {}
    for blob in shares:
        if blob.server_index in by_server:
            raise MissingShareError(
                f"two shares claim server {blob.server_index}")
        by_server[blob.server_index] = blob
    absent = [t for t in range(1, params.servers + 1) if t not in by_server]
    if absent:
        raise MissingShareError(
            f"need shares for all {params.servers} servers; missing {absent}")
    stray = sorted(set(by_server) - set(range(1, params.servers + 1)))
    if stray:
        raise HeaderMismatchError(f"share indexes out of range: {stray}")

    _check_headers(by_server, params)
    part_len = by_server[1].part_len
    for t in range(1, params.servers + 1):
        blob = by_server[t]
        want = len(plan.server_slots(t))
        if len(blob.payload) != want:
            raise PayloadLengthError(
                f"share {t} holds {len(blob.payload)} slots, plan says {want}")
        for z, piece in enumerate(blob.payload, start=1):
            if len(piece) != part_len:
                raise PayloadLengthError(
                    f"share {t} slot {z} is {len(piece)} bytes, expected {part_len}")

    keys: dict[int, bytes] = {}
    for server, slot, spec in plan.iter_slots():
        if isinstance(spec, Key):
            keys[spec.key_index] = by_server[server].payload[slot - 1]

    parts: list[bytes] = [b""] * params.parts
    for server, slot, spec in plan.iter_slots():
        if isinstance(spec, Plain):
            parts[spec.part_index - 1] = by_server[server].payload[slot - 1]
        elif isinstance(spec, Encrypted):
            pads = tuple(keys[a] for a in spec.key_indices)
            parts[spec.part_index - 1] = _xor_parts(
                by_server[server].payload[slot - 1], pads)

    blob0 = by_server[1]
    return b"".join(parts)[:blob0.original_len]

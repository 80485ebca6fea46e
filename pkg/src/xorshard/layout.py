"""Symbolic share layout: which slot on which server holds what.

Given a :class:`~xorshard.params.SchemeParams`, build the full plan
assigning every file part and every pad key to exactly one slot of one
server.  The plan is purely symbolic (indices, no bytes); the codec
materializes it against real data.

Indices are 1-based throughout: parts ``F_1..F_k``, keys
``K_1..K_n``, servers ``1..T``, slots ``1..k-l``.  Python containers
convert at the boundary (``slots[t-1][z-1]``).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LayoutError
from .params import LayoutCase, SchemeParams

__all__ = [
    "Plain",
    "Key",
    "Encrypted",
    "SlotSpec",
    "SharePlan",
    "assign_plain",
    "assign_keys",
    "assign_encrypted",
    "build_layout",
    "format_plan",
    "slot_label",
]


@dataclass(frozen=True)
class Plain:
    """A file part stored in clear."""

    part_index: int  # 1..parts


@dataclass(frozen=True)
class Key:
    """A pad key stored in clear (key material is share content)."""

    key_index: int  # 1..n_keys


@dataclass(frozen=True)
class Encrypted:
    """A file part XOR-padded with one key from each listed foreign server.

    ``key_indices`` is ascending and may be empty: late slots can find
    every foreign pool already consumed, in which case the part is stored
    bare and counts as leaked to any coalition.
    """

    part_index: int
    key_indices: tuple[int, ...]


SlotSpec = Plain | Key | Encrypted

# Partial plans produced by the three assignment passes carry None holes;
# build_layout fills every hole before handing the plan out.
_Grid = list[list["SlotSpec | None"]]


@dataclass(frozen=True)
class SharePlan:
    """Immutable slot map for all servers plus per-server key ownership.

    ``slots[t-1]`` is server t's ordered slot tuple: exactly
    ``parts - leak`` entries on the XOR path, a plain-only run of
    near-arbitrary length on the fallback paths.  ``key_ownership[t-1]``
    is the index set of keys server t stores (empty on fallbacks).
    Partial plans (internal) may contain None entries.
    """

    params: SchemeParams
    slots: tuple[tuple[SlotSpec, ...], ...]
    key_ownership: tuple[frozenset[int], ...]

    def server_slots(self, server: int) -> tuple[SlotSpec, ...]:
        return self.slots[server - 1]

    def key_locations(self) -> dict[int, tuple[int, int]]:
        """Map each key index to its (server, slot) home."""
        where: dict[int, tuple[int, int]] = {}
        for server, slot, spec in self.iter_slots():
            if isinstance(spec, Key):
                where[spec.key_index] = (server, slot)
        return where

    def iter_slots(self):
        """Yield (server, slot, spec) for every slot, both 1-based."""
        for ti, row in enumerate(self.slots):
            for zi, spec in enumerate(row):
                yield ti + 1, zi + 1, spec


def _new_grid(params: SchemeParams) -> _Grid:
    width = params.slots_per_server
    return [[None] * width for _ in range(params.servers)]


def _place(grid: _Grid, server: int, slot: int, spec: SlotSpec) -> None:
    row = grid[server - 1]
    if not 1 <= slot <= len(row):
        raise LayoutError(f"slot {slot} out of range on server {server}")
    if row[slot - 1] is not None:
        raise LayoutError(f"slot {slot} on server {server} assigned twice")
    row[slot - 1] = spec


def _freeze(params: SchemeParams, grid: _Grid,
            ownership: list[frozenset[int]]) -> SharePlan:
    return SharePlan(
        params=params,
        slots=tuple(tuple(row) for row in grid),
        key_ownership=tuple(ownership),
    )


def _require_xor_path(params: SchemeParams, op: str) -> None:
    if params.case not in (LayoutCase.CASE1, LayoutCase.CASE2):
        raise LayoutError(f"{op} applies only to the XOR layout cases")


def assign_plain(params: SchemeParams) -> SharePlan:
    """Place the parts stored in clear (partial plan, XOR path only).

    Server t gets parts ``(t-1)q+1 .. tq`` in slots ``1..q``; the first
    r servers each get one extra, part ``Tq+t``, in slot ``q+1``.
    """
    _require_xor_path(params, "assign_plain")
    q, r, servers = params.q, params.r, params.servers
    grid = _new_grid(params)
    for t in range(1, servers + 1):
        for i in range(1, q + 1):
            _place(grid, t, i, Plain((t - 1) * q + i))
        if t <= r:
            _place(grid, t, q + 1, Plain(servers * q + t))
    return _freeze(params, grid, [frozenset()] * servers)


def assign_keys(params: SchemeParams) -> SharePlan:
    """Place the pad keys and record per-server ownership (partial plan).

    The two cases hand out the same total (u per server plus one extra on
    v of them) but stagger slot offsets differently around the plain
    parts; both number keys contiguously server by server.
    """
    _require_xor_path(params, "assign_keys")
    q, r, u, v = params.q, params.r, params.u, params.v
    servers = params.servers
    grid = _new_grid(params)
    ownership: list[frozenset[int]] = []

    for t in range(1, servers + 1):
        if params.case is LayoutCase.CASE1:
            keys = list(range(u * (t - 1) + 1, u * t + 1))
            # servers t <= r spent slot q+1 on their extra plain part
            base = q + 2 if t <= r else q + 1
            if t > servers - v:
                keys.append(servers * u + t - (servers - v))
        else:
            if t <= servers - v:
                keys = list(range(u * (t - 1) + 1, u * t + 1))
                base = q + 2
            else:
                first = u * (servers - v) + (u + 1) * (t - (servers - v) - 1)
                keys = list(range(first + 1, first + u + 2))
                base = q + 2 if t <= r else q + 1
        for offset, key_index in enumerate(keys):
            _place(grid, t, base + offset, Key(key_index))
        ownership.append(frozenset(keys))

    return _freeze(params, grid, ownership)


class _KeyPools:
    """Per-server ascending key pools, consumed smallest-first."""

    def __init__(self, ownership: tuple[frozenset[int], ...]):
        self.pools = [sorted(owned) for owned in ownership]
        self.next = [0] * len(self.pools)

    def take(self, server: int) -> int | None:
        i = self.next[server - 1]
        pool = self.pools[server - 1]
        if i >= len(pool):
            return None  # pool exhausted: this part gets no key from here
        self.next[server - 1] = i + 1
        return pool[i]


def assign_encrypted(params: SchemeParams, partial: SharePlan) -> SharePlan:
    """Fill the remaining slots with XOR-padded parts, completing the plan.

    The loop order is normative: outer over the within-server position i,
    inner over servers t.  Each emitted slot consumes, from every foreign
    server in ascending order, the smallest key index not yet used
    anywhere; the position formulas below make the consumption pattern
    line up so a coalition excluding any one server is always missing a
    pad key for all but at most one of its encrypted slots.
    """
    _require_xor_path(params, "assign_encrypted")
    q, r, u, v, x = params.q, params.r, params.u, params.v, params.x
    servers, n_plain = params.servers, params.n_plain
    grid: _Grid = [list(row) for row in partial.slots]
    pools = _KeyPools(partial.key_ownership)

    def emit(t: int, j: int, z: int) -> None:
        pads = []
        for other in range(1, servers + 1):
            if other == t:
                continue
            key_index = pools.take(other)
            if key_index is not None:
                pads.append(key_index)
        # consumption order is normative; the recorded tuple is canonical
        _place(grid, t, z, Encrypted(j, tuple(sorted(pads))))

    if params.case is LayoutCase.CASE1:
        for i in range(1, x + 2):
            for t in range(1, servers + 1):
                if t <= r:
                    if i == x + 1:
                        continue  # these servers hold only x encrypted parts
                    emit(t, n_plain + (t - 1) * x + i, q + u + 1 + i)
                elif t <= servers - v:
                    emit(t, n_plain + r * x + (t - r - 1) * (x + 1) + i,
                         q + u + i)
                else:
                    if i == x + 1:
                        continue
                    emit(t, n_plain + r * x + (x + 1) * (servers - v - r)
                         + (t - (servers - v) - 1) * x + i, q + u + 1 + i)
    else:
        for i in range(1, x + 1):
            for t in range(1, servers + 1):
                if t <= servers - v:
                    emit(t, n_plain + (t - 1) * x + i, q + u + 1 + i)
                elif t <= r:
                    if i == x:
                        continue  # only x-1 encrypted parts in this band
                    emit(t, n_plain + (servers - v) * x
                         + (t - (servers - v) - 1) * (x - 1) + i,
                         q + u + 2 + i)
                else:
                    emit(t, n_plain + (servers - v) * x
                         + (r - (servers - v)) * (x - 1)
                         + (t - r - 1) * x + i, q + u + 1 + i)

    plan = _freeze(params, grid, list(partial.key_ownership))
    _check_complete(plan)
    return plan


def _check_complete(plan: SharePlan) -> None:
    """Construction-bug guard: every part placed exactly once, no holes."""
    seen: list[int] = []
    for _, _, spec in plan.iter_slots():
        if spec is None:
            raise LayoutError("plan has an unassigned slot")
        if isinstance(spec, (Plain, Encrypted)):
            seen.append(spec.part_index)
    expected = plan.params.parts
    if sorted(seen) != list(range(1, expected + 1)):
        raise LayoutError("plan does not cover every part exactly once")


def _merge(a: SharePlan, b: SharePlan) -> SharePlan:
    grid: _Grid = [list(row) for row in a.slots]
    for server, slot, spec in b.iter_slots():
        if spec is not None:
            _place(grid, server, slot, spec)
    ownership = [oa | ob for oa, ob in zip(a.key_ownership, b.key_ownership)]
    return _freeze(a.params, grid, ownership)


def _plain_split_rows(sizes: list[int], parts: int) -> list[list[SlotSpec]]:
    rows: list[list[SlotSpec]] = []
    next_part = 1
    for size in sizes:
        stop = min(next_part + size, parts + 1)
        rows.append([Plain(j) for j in range(next_part, stop)])
        next_part = stop
    return rows


def build_layout(params: SchemeParams) -> SharePlan:
    """Build the complete plan for any derived parameter set.

    XOR cases compose the three assignment passes.  The fallback cases
    store every part in clear: the near-trivial budget spreads the k
    parts in T near-equal runs, and the plain-split regime gives the
    first r servers q+1 parts and the rest q, truncating once all k
    parts are handed out (a coalition then sees at most
    ``q(T-1) + r = leak`` parts either way).
    """
    servers, parts = params.servers, params.parts
    if params.case in (LayoutCase.CASE1, LayoutCase.CASE2):
        return assign_encrypted(
            params, _merge(assign_plain(params), assign_keys(params)))

    if params.case is LayoutCase.TRIVIAL_SPLIT:
        base, extra = divmod(parts, servers)
        sizes = [base + 1 if t <= extra else base
                 for t in range(1, servers + 1)]
    else:
        sizes = [params.q + 1 if t <= params.r else params.q
                 for t in range(1, servers + 1)]
    rows = _plain_split_rows(sizes, parts)
    plan = _freeze(params, rows, [frozenset()] * servers)
    _check_complete(plan)
    return plan


def slot_label(spec: SlotSpec) -> str:
    """Render one slot the way the plan dump prints it, e.g. F2^K2^K4."""
    if isinstance(spec, Plain):
        return f"F{spec.part_index}"
    if isinstance(spec, Key):
        return f"K{spec.key_index}"
    pads = "".join(f"^K{a}" for a in spec.key_indices)
    return f"F{spec.part_index}{pads}"


def format_plan(plan: SharePlan) -> str:
    """Stable line-oriented dump: one ``server=, slot=, kind, label`` line per slot."""
    kind = {Plain: "plain", Key: "key", Encrypted: "encrypted"}
    lines = [
        f"server={server} slot={slot} {kind[type(spec)]} {slot_label(spec)}"
        for server, slot, spec in plan.iter_slots()
    ]
    return "\n".join(lines)

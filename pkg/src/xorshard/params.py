"""Leakage budget validation and derivation of all layout integers.

The codec has exactly three knobs: the server count, and a reduced fraction
``leak/parts`` bounding how much any ``servers - 1`` colluding machines may
learn about the stored file.  Everything else (how many parts each server
stores in clear, how many one-time-pad keys exist, where encrypted parts
land) is a pure function of those three integers, computed here once and
carried around as an immutable :class:`SchemeParams`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction

from .errors import BudgetError

__all__ = [
    "LayoutCase",
    "PrivacyBudget",
    "SchemeParams",
    "normalize_alpha",
    "derive_params",
]


class LayoutCase(IntEnum):
    """The four layout regimes a parameter set can fall into."""

    CASE1 = 1  # main XOR path, r + v < servers
    CASE2 = 2  # main XOR path, r + v >= servers
    PLAIN_SPLIT = 3  # q*servers + r >= parts: store parts in clear, q or q+1 each
    TRIVIAL_SPLIT = 4  # budget >= 1 - 1/servers: near-equal plain split


@dataclass(frozen=True)
class PrivacyBudget:
    """A reduced leakage fraction ``leak/parts`` in [0, 1].

    ``leak`` and ``parts`` are kept coprime so that equal budgets compare
    equal and the derived layout is canonical.  Zero leakage is always
    spelled ``(0, 1)``.
    """

    leak: int
    parts: int

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.leak, self.parts)

    def __str__(self) -> str:
        return f"{self.leak}/{self.parts}"


@dataclass(frozen=True)
class SchemeParams:
    """Every integer the layout, codec, and audits need.

    The two Euclidean divisions below pin down all fields:

    * ``leak = q * (servers - 1) + r`` with ``0 <= r <= servers - 2``,
    * ``servers * (parts - leak) - parts = u * servers + v`` with
      ``0 <= v <= servers - 1``.
    """

    servers: int  # number of storage servers, >= 2
    leak: int  # a coalition of servers-1 machines may learn at most this many parts
    parts: int  # the padded file is cut into this many equal parts
    q: int  # base count of plain parts per server
    r: int  # servers 1..r store one extra plain part
    u: int  # base count of keys per server on the main path
    v: int  # count of servers storing one extra key
    x: int  # base count of encrypted slots per server (parts - leak - q - 1 - u)
    n_keys: int  # one-time-pad keys generated per encode
    n_plain: int  # parts stored in clear
    n_encrypted: int  # parts stored XOR-padded
    case: LayoutCase

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.leak, self.parts)

    @property
    def slots_per_server(self) -> int:
        """Slot count of every share on the main path (``parts - leak``)."""
        return self.parts - self.leak

    def describe(self) -> str:
        """One stable key=value line, used by the CLI."""
        return (
            f"T={self.servers} alpha={self.leak}/{self.parts} case={int(self.case)} "
            f"q={self.q} r={self.r} u={self.u} v={self.v} x={self.x} "
            f"n_keys={self.n_keys} n_plain={self.n_plain} n_encrypted={self.n_encrypted}"
        )


def normalize_alpha(leak_raw: int, parts_raw: int) -> PrivacyBudget:
    """Reduce a raw fraction to a canonical :class:`PrivacyBudget`.

    Accepts any non-negative numerator up to the denominator; a zero
    numerator normalizes to ``(0, 1)``.

    Raises:
        BudgetError: if ``parts_raw < 1``, either value is negative, or
            ``leak_raw > parts_raw`` (a budget above 1 is meaningless).
    """
    if parts_raw < 1:
        raise BudgetError(f"budget denominator must be >= 1, got {parts_raw}")
    if leak_raw < 0:
        raise BudgetError(f"budget numerator must be >= 0, got {leak_raw}")
    if leak_raw > parts_raw:
        raise BudgetError(
            f"budget {leak_raw}/{parts_raw} exceeds 1; cannot leak more than the file"
        )
    if leak_raw == 0:
        return PrivacyBudget(0, 1)
    g = math.gcd(leak_raw, parts_raw)
    return PrivacyBudget(leak_raw // g, parts_raw // g)


def derive_params(servers: int, budget: PrivacyBudget) -> SchemeParams:
    """Derive the full parameter set for ``servers`` machines and a budget.

    Pure: equal inputs yield identical outputs.  Every valid input maps to
    exactly one :class:`LayoutCase`:

    * budgets at or above ``1 - 1/servers`` take the trivial near-equal
      plain split (any coalition is then allowed to see almost everything);
    * below that threshold the XOR construction applies, split into CASE1
      and CASE2 by the sign of ``r + v - servers``.

    The PLAIN_SPLIT regime (``q*servers + r >= parts``) is kept for
    completeness but is unreachable from here: the strict budget threshold
    forces ``q*servers + r < parts``.

    Raises:
        BudgetError: if ``servers < 2`` or the budget is not reduced.
    """
    if servers < 2:
        raise BudgetError(f"need at least 2 servers, got {servers}")
    leak, parts = budget.leak, budget.parts
    if math.gcd(leak, parts) != 1 or (leak == 0 and parts != 1):
        raise BudgetError(f"budget {leak}/{parts} is not in reduced form")
    if not 0 <= leak <= parts:
        raise BudgetError(f"budget {leak}/{parts} outside [0, 1]")

    q, r = divmod(leak, servers - 1)
    u, v = divmod(servers * (parts - leak) - parts, servers)

    if leak * servers >= parts * (servers - 1):
        # Trivial region: store all parts in clear, split near-equally.
        return SchemeParams(
            servers=servers, leak=leak, parts=parts, q=q, r=r, u=u, v=v, x=0,
            n_keys=0, n_plain=parts, n_encrypted=0, case=LayoutCase.TRIVIAL_SPLIT,
        )

    if q * servers + r >= parts:
        return SchemeParams(
            servers=servers, leak=leak, parts=parts, q=q, r=r, u=u, v=v, x=0,
            n_keys=0, n_plain=parts, n_encrypted=0, case=LayoutCase.PLAIN_SPLIT,
        )

    n_keys = servers * (parts - leak) - parts
    n_plain = q * servers + r
    n_encrypted = parts - r - servers * q
    x = parts - leak - q - 1 - u
    case = LayoutCase.CASE1 if r + v < servers else LayoutCase.CASE2

    # Internal consistency guard; both sides count the encrypted slots a
    # coalition holds, so a failure here means a broken derivation.
    if (servers - 1) * x + servers - v - r != u + 1:
        raise BudgetError(
            f"derivation inconsistency for servers={servers}, budget={budget}"
        )
    if x < 0 or n_keys <= 0 or n_encrypted <= 0:
        raise BudgetError(
            f"derivation out of range for servers={servers}, budget={budget}"
        )

    return SchemeParams(
        servers=servers, leak=leak, parts=parts, q=q, r=r, u=u, v=v, x=x,
        n_keys=n_keys, n_plain=n_plain, n_encrypted=n_encrypted, case=case,
    )

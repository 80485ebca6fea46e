"""Independent checks of what the shares actually reveal.

Three verifiers, in increasing strength:

* ``structural_audit`` counts, for every coalition of all-but-one
  servers, the parts it can read outright: plain slots it holds plus
  encrypted slots whose pad keys it holds in full.  Because every key is
  used at most once and lives in clear on exactly one server, a missing
  pad key makes the slot a one-time pad and reveals nothing.
* ``entropy_oracle`` brute-forces small instances at 1-bit (or n-bit)
  part granularity and measures the exact mutual information between
  the file and each coalition's view, with no structural shortcuts.
* ``rate_report`` states the achieved storage and randomness ratios as
  exact rationals next to their theoretical floors; this construction
  meets both with equality.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import LayoutError, StateSpaceError
from .layout import Encrypted, Key, Plain, SharePlan, build_layout
from .params import LayoutCase, SchemeParams

__all__ = [
    "MI_TOLERANCE_BITS",
    "ENUMERATION_BIT_LIMIT",
    "AdversarySet",
    "CoalitionLeak",
    "AuditReport",
    "RateReport",
    "structural_audit",
    "entropy_oracle",
    "coalition_mutual_information",
    "rate_report",
]

# Numeric slack for the float log-sum; all probabilities are dyadic, so
# this covers accumulation error only.
MI_TOLERANCE_BITS = 1e-9

# The oracle enumerates 2^(part_bits * (parts + n_keys)) joint states.
ENUMERATION_BIT_LIMIT = 26


@dataclass(frozen=True)
class AdversarySet:
    """The coalition holding every share except one server's."""

    servers: int
    excluded_server: int

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(t for t in range(1, self.servers + 1)
                     if t != self.excluded_server)


@dataclass(frozen=True)
class CoalitionLeak:
    """What one coalition can read, against its allowance."""

    excluded_server: int
    plain_visible: int  # plain slots the coalition holds
    unprotected_encrypted: int  # its encrypted slots with no pad key missing
    leaked_parts: int
    bound: int  # the leak budget numerator
    ok: bool
    mi_bits: float | None = None  # exact I(file; coalition view), oracle mode


@dataclass(frozen=True)
class AuditReport:
    coalitions: tuple[CoalitionLeak, ...]
    key_single_use: bool
    part_bits: int | None = None  # oracle granularity, when it ran
    residual_entropy_bits: float | None = None  # H(file | all T shares)
    decodable: bool | None = None  # file is a function of the full share set

    @property
    def passed(self) -> bool:
        return self.key_single_use and all(c.ok for c in self.coalitions)

    @property
    def max_mi_bits(self) -> float | None:
        values = [c.mi_bits for c in self.coalitions if c.mi_bits is not None]
        return max(values) if values else None

    def as_text(self) -> list[str]:
        lines = []
        for c in self.coalitions:
            line = (f"coalition excluding server {c.excluded_server}: "
                    f"plain={c.plain_visible} unprotected={c.unprotected_encrypted} "
                    f"leaked={c.leaked_parts} bound={c.bound}")
            if c.mi_bits is not None:
                line += f" mi_bits={c.mi_bits:.9f}"
            lines.append(line + (" PASS" if c.ok else " FAIL"))
        lines.append("key single-use: " + ("yes" if self.key_single_use else "VIOLATED"))
        if self.max_mi_bits is not None:
            lines.append(
                f"entropy oracle (part_bits={self.part_bits}): "
                f"max mi = {self.max_mi_bits:.9f} bits, "
                f"bound {self.coalitions[0].bound * (self.part_bits or 1)} bits")
        if self.residual_entropy_bits is not None:
            lines.append(
                f"residual entropy given all shares: {self.residual_entropy_bits:.9f} bits "
                f"(decodable: {'yes' if self.decodable else 'NO'})")
        lines.append("audit: " + ("PASS" if self.passed else "FAIL"))
        return lines

    def as_kv(self) -> list[str]:
        lines = []
        for c in self.coalitions:
            prefix = f"coalition.{c.excluded_server}."
            lines.append(f"{prefix}plain_visible={c.plain_visible}")
            lines.append(f"{prefix}unprotected={c.unprotected_encrypted}")
            lines.append(f"{prefix}leaked={c.leaked_parts}")
            lines.append(f"{prefix}bound={c.bound}")
            if c.mi_bits is not None:
                lines.append(f"{prefix}mi_bits={c.mi_bits!r}")
            lines.append(f"{prefix}pass={str(c.ok).lower()}")
        lines.append(f"key_single_use={str(self.key_single_use).lower()}")
        if self.residual_entropy_bits is not None:
            lines.append(f"residual_entropy_bits={self.residual_entropy_bits!r}")
            lines.append(f"decodable={str(self.decodable).lower()}")
        lines.append(f"pass={str(self.passed).lower()}")
        return lines


@dataclass(frozen=True)
class RateReport:
    """Achieved rates as exact rationals, next to the theoretical floors."""

    lambda_bits: int  # share length per server
    rho_bits: int  # encoder randomness drawn
    h_f_bits: int  # file entropy at uniform-bytes granularity
    beta_bits: int  # zero padding
    storage_ratio: Fraction
    storage_bound: Fraction
    randomness_ratio: Fraction
    randomness_bound: Fraction

    @property
    def tight(self) -> bool:
        return (self.storage_ratio == self.storage_bound
                and self.randomness_ratio == self.randomness_bound)

    def as_text(self) -> list[str]:
        return [
            f"share size: {self.lambda_bits} bits per server, "
            f"{self.storage_ratio} of the {self.h_f_bits + self.beta_bits} padded file bits "
            f"(floor {self.storage_bound})",
            f"randomness: {self.rho_bits} bits per encode, "
            f"ratio {self.randomness_ratio} (floor {self.randomness_bound})",
            "both floors met with equality" if self.tight else "RATES OFF THE FLOOR",
        ]

    def as_kv(self) -> list[str]:
        return [
            f"lambda_bits={self.lambda_bits}",
            f"rho_bits={self.rho_bits}",
            f"h_f_bits={self.h_f_bits}",
            f"beta_bits={self.beta_bits}",
            f"storage_ratio={self.storage_ratio}",
            f"storage_bound={self.storage_bound}",
            f"randomness_ratio={self.randomness_ratio}",
            f"randomness_bound={self.randomness_bound}",
            f"tight={str(self.tight).lower()}",
        ]


def structural_audit(plan: SharePlan) -> AuditReport:
    """Count worst-case readable parts per coalition; verify key single-use.

    A coalition excluding server t reads a part when it holds the part in
    clear, or holds its encrypted slot and the full pad (no key index in
    the excluded server's set).  Violated bounds are reported, not raised.
    """
    params = plan.params
    pad_uses: list[int] = []
    coalitions = []
    for t in range(1, params.servers + 1):
        owned = plan.key_ownership[t - 1]
        plain = 0
        unprotected = 0
        for server, _, spec in plan.iter_slots():
            if server == t:
                continue
            if isinstance(spec, Plain):
                plain += 1
            elif isinstance(spec, Encrypted) and not owned.intersection(spec.key_indices):
                unprotected += 1
        leaked = plain + unprotected
        coalitions.append(CoalitionLeak(
            excluded_server=t,
            plain_visible=plain,
            unprotected_encrypted=unprotected,
            leaked_parts=leaked,
            bound=params.leak,
            ok=leaked <= params.leak,
        ))
    for _, _, spec in plan.iter_slots():
        if isinstance(spec, Encrypted):
            pad_uses.extend(spec.key_indices)
    single_use = len(pad_uses) == len(set(pad_uses))
    return AuditReport(tuple(coalitions), key_single_use=single_use)


def _packed_views(plan: SharePlan, members: tuple[int, ...], part_bits: int):
    """Split every member slot into file-side and key-side bit packings.

    Each slot value is (file contribution) XOR (key contribution), so the
    coalition view over all (file, keyvec) pairs factors as A[f] ^ B[kv]
    with A indexed by the packed file value and B by the packed key
    vector.  Returns (A, B, view_width_bits).
    """
    params = plan.params
    file_values = np.arange(1 << (params.parts * part_bits), dtype=np.int64)
    key_values = np.arange(1 << (params.n_keys * part_bits), dtype=np.int64)
    mask = (1 << part_bits) - 1
    file_side = np.zeros_like(file_values)
    key_side = np.zeros_like(key_values)
    offset = 0
    for t in sorted(members):
        for spec in plan.server_slots(t):
            if isinstance(spec, (Plain, Encrypted)):
                shift = (spec.part_index - 1) * part_bits
                file_side ^= ((file_values >> shift) & mask) << offset
            if isinstance(spec, Key):
                shift = (spec.key_index - 1) * part_bits
                key_side ^= ((key_values >> shift) & mask) << offset
            elif isinstance(spec, Encrypted):
                acc = np.zeros_like(key_values)
                for a in spec.key_indices:
                    acc ^= (key_values >> ((a - 1) * part_bits)) & mask
                key_side ^= acc << offset
            offset += part_bits
    return file_side, key_side, offset


def _log_sum(counts: np.ndarray) -> float:
    positive = counts[counts > 0].astype(np.float64)
    return float(np.sum(positive * np.log2(positive)))


def coalition_mutual_information(
        plan: SharePlan, members: tuple[int, ...],
        part_bits: int) -> tuple[float, bool]:
    """Exact I(file; members' slots) in bits, by full enumeration.

    Also reports whether the file is a function of the members' view
    (true decodability, not an entropy approximation).  The file and
    every key symbol are enumerated uniformly; XOR-separability keeps
    the work at |files| x |keyvecs| histogram updates.
    """
    file_side, key_side, width = _packed_views(plan, members, part_bits)
    n_files, n_keyvecs = len(file_side), len(key_side)
    total = n_files * n_keyvecs

    hist = np.zeros(1 << width, dtype=np.int64)
    chunk = max(1, (1 << 22) // n_keyvecs)
    for start in range(0, n_files, chunk):
        block = file_side[start:start + chunk, None] ^ key_side[None, :]
        hist += np.bincount(block.ravel(), minlength=1 << width)

    # Conditioned on a file value, the view is the key-side histogram
    # XOR-shifted by a constant, so per-file counts equal B's counts.
    _, key_counts = np.unique(key_side, return_counts=True)
    s_view = _log_sum(hist)
    s_joint = n_files * _log_sum(key_counts)
    h_file = float(np.log2(n_files))
    mi = h_file + (s_joint - s_view) / total
    functional = int(np.count_nonzero(hist)) == n_files * len(key_counts)
    return mi, functional


def entropy_oracle(params: SchemeParams, part_bits: int) -> AuditReport:
    """Measure exact per-coalition leakage by brute-force enumeration.

    Builds the plan, enumerates every file and key assignment at
    ``part_bits`` per part, and returns the structural report augmented
    with exact mutual information per coalition, the residual file
    entropy given all T shares, and the decodability verdict.
    """
    if params.case not in (LayoutCase.CASE1, LayoutCase.CASE2):
        raise LayoutError("entropy oracle applies only to the XOR layout cases")
    if part_bits < 1:
        raise ValueError(f"part_bits must be >= 1, got {part_bits}")
    state_bits = part_bits * (params.parts + params.n_keys)
    if state_bits > ENUMERATION_BIT_LIMIT:
        raise StateSpaceError(
            f"{state_bits}-bit state space exceeds the "
            f"{ENUMERATION_BIT_LIMIT}-bit enumeration limit")

    plan = build_layout(params)
    report = structural_audit(plan)
    bound_bits = params.leak * part_bits

    coalitions = []
    for leak in report.coalitions:
        members = AdversarySet(params.servers, leak.excluded_server).members
        mi, _ = coalition_mutual_information(plan, members, part_bits)
        coalitions.append(replace(
            leak,
            mi_bits=mi,
            ok=leak.ok and mi <= bound_bits + MI_TOLERANCE_BITS,
        ))

    everyone = tuple(range(1, params.servers + 1))
    mi_all, functional = coalition_mutual_information(plan, everyone, part_bits)
    residual = params.parts * part_bits - mi_all
    return AuditReport(
        coalitions=tuple(coalitions),
        key_single_use=report.key_single_use,
        part_bits=part_bits,
        residual_entropy_bits=residual,
        decodable=functional,
    )


def rate_report(plan: SharePlan, part_len: int,
                original_len: int | None = None) -> RateReport:
    """Exact storage and randomness ratios for a concrete part length.

    ``original_len`` (bytes) splits the padded size into file and padding
    bits for the report; omitted means a perfectly aligned file.  Ratios
    are taken against the padded size either way, so they are exact
    rationals independent of that split.
    """
    params = plan.params
    if params.case not in (LayoutCase.CASE1, LayoutCase.CASE2):
        raise LayoutError("rate report applies only to the XOR layout cases")
    if part_len < 1:
        raise ValueError(f"part_len must be >= 1, got {part_len}")
    padded_bits = params.parts * part_len * 8
    if original_len is None:
        original_len = params.parts * part_len
    beta_bits = padded_bits - original_len * 8
    if not 0 <= beta_bits <= padded_bits:
        raise ValueError(
            f"original_len={original_len} impossible for {params.parts} parts "
            f"of {part_len} bytes")

    alpha = params.alpha
    lambda_bits = (params.parts - params.leak) * part_len * 8
    rho_bits = params.n_keys * part_len * 8
    return RateReport(
        lambda_bits=lambda_bits,
        rho_bits=rho_bits,
        h_f_bits=original_len * 8,
        beta_bits=beta_bits,
        storage_ratio=Fraction(lambda_bits, padded_bits),
        storage_bound=1 - alpha,
        randomness_ratio=Fraction(rho_bits, padded_bits),
        randomness_bound=max(Fraction(0), params.servers * (1 - alpha) - 1),
    )

"""xorshard: leakage-tunable XOR secret sharing across T servers.

A file is cut into k equal parts and spread over T server directories
so that all T shares reconstruct it exactly, while any T-1 of them
reveal at most an l/k fraction of its content.  The trade-off is
tunable: alpha = 0 is a perfect one-time-pad split, larger budgets
shrink the shares toward plain striping.  Ships with its own verifiers:
a structural leakage counter, an exact brute-force mutual-information
oracle for small instances, and an exact-rational rate report.
"""

from .audit import (
    MI_TOLERANCE_BITS,
    AdversarySet,
    AuditReport,
    CoalitionLeak,
    RateReport,
    coalition_mutual_information,
    entropy_oracle,
    rate_report,
    structural_audit,
)
from .codec import KeyPool, PaddedFile, ShareBlob, decode, encode, generate_keys, pad
from .errors import (
    BadMagicError,
    BudgetError,
    DecodeError,
    DigestMismatchError,
    DispersalError,
    HeaderMismatchError,
    LayoutError,
    MissingShareError,
    PayloadLengthError,
    RandomnessError,
    ShareFormatError,
    StateSpaceError,
    TruncatedShareError,
    UnsupportedVersionError,
    XorshardError,
)
from .layout import (
    Encrypted,
    Key,
    Plain,
    SharePlan,
    SlotSpec,
    assign_encrypted,
    assign_keys,
    assign_plain,
    build_layout,
    format_plan,
    slot_label,
)
from .params import (
    LayoutCase,
    PrivacyBudget,
    SchemeParams,
    derive_params,
    normalize_alpha,
)
from .shareio import (
    FORMAT_VERSION,
    HEADER_SIZE,
    MAGIC,
    SHARE_FILENAME,
    Dispersal,
    ShareHeader,
    collect,
    deserialize_share,
    disperse,
    serialize_share,
)

__version__ = "0.1.0"

__all__ = [
    "AdversarySet",
    "AuditReport",
    "BadMagicError",
    "BudgetError",
    "CoalitionLeak",
    "DecodeError",
    "DigestMismatchError",
    "Dispersal",
    "DispersalError",
    "Encrypted",
    "FORMAT_VERSION",
    "HEADER_SIZE",
    "HeaderMismatchError",
    "Key",
    "KeyPool",
    "LayoutCase",
    "LayoutError",
    "MAGIC",
    "MI_TOLERANCE_BITS",
    "MissingShareError",
    "PaddedFile",
    "PayloadLengthError",
    "Plain",
    "PrivacyBudget",
    "RandomnessError",
    "RateReport",
    "SHARE_FILENAME",
    "SchemeParams",
    "ShareBlob",
    "ShareFormatError",
    "ShareHeader",
    "SharePlan",
    "SlotSpec",
    "StateSpaceError",
    "TruncatedShareError",
    "UnsupportedVersionError",
    "XorshardError",
    "assign_encrypted",
    "assign_keys",
    "assign_plain",
    "build_layout",
    "coalition_mutual_information",
    "collect",
    "decode",
    "derive_params",
    "deserialize_share",
    "disperse",
    "encode",
    "entropy_oracle",
    "format_plan",
    "generate_keys",
    "normalize_alpha",
    "pad",
    "rate_report",
    "serialize_share",
    "slot_label",
    "structural_audit",
]

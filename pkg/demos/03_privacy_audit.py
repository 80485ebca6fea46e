"""Check the privacy claim two ways: count, then enumerate.

The structural audit counts what each coalition of T-1 servers can
read directly.  The entropy oracle brute-forces the exact mutual
information between the file and the coalition's view over every
possible file and key assignment, so the leakage bound is certified,
not just argued.
"""

from xorshard import (
    PrivacyBudget,
    build_layout,
    derive_params,
    entropy_oracle,
    structural_audit,
)

params = derive_params(3, PrivacyBudget(1, 4))
plan = build_layout(params)

print("structural count")
for line in structural_audit(plan).as_text():
    print(" ", line)

# 4 parts + 5 keys of one bit each: 512 states, exact in microseconds
print()
print("exact enumeration, 1-bit parts")
report = entropy_oracle(params, 1)
for line in report.as_text():
    print(" ", line)

# each coalition's mutual information lands exactly on l = 1 bit,
# the residual entropy given all T shares is exactly zero, and the
# view is a bijection of the file given the keys: decodable
assert report.max_mi_bits <= params.leak + 1e-9
assert report.decodable
print()
print("certified: leakage <=", params.leak, "part(s), full recovery exact")

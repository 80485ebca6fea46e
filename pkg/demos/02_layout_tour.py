"""Walk through the slot layouts behind a few leakage budgets.

Every share is a column of part-sized slots.  A slot holds a plain
file part, a pad key, or a part XORed with keys that live on the
other servers.  Watch how the mix shifts as the budget moves.
"""

from xorshard import PrivacyBudget, build_layout, derive_params, format_plan

for servers, leak, parts in [(3, 1, 4), (3, 3, 10), (3, 0, 1), (3, 1, 2)]:
    params = derive_params(servers, PrivacyBudget(leak, parts))
    print(params.describe())
    print(format_plan(build_layout(params)))
    print()

# alpha = 0 above is the classic one-time-pad split: one server holds
# ciphertext, the rest hold the pads.  At the other end, once
# alpha >= 1 - 1/T the XOR machinery stops paying for itself and the
# scheme degenerates to plain striping.  For T=3 that line is 2/3:
params = derive_params(3, PrivacyBudget(2, 3))
print("2/3 with T=3 falls back:", params.case.name)
print(format_plan(build_layout(params)))

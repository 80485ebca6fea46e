"""Storage and randomness cost as the leakage budget slides.

Both ratios are exact rationals and both sit on their converse
bounds: shares shrink linearly in alpha, and the encoder's appetite
for fresh random bits falls T times as fast.
"""

from fractions import Fraction

from xorshard import PrivacyBudget, build_layout, derive_params, rate_report

T = 3
budgets = [(0, 1), (1, 10), (1, 4), (3, 10), (2, 5), (5, 11), (3, 5)]

print(f"T = {T}")
print(f"{'alpha':>8} {'storage':>10} {'randomness':>12}  tight")
for leak, parts in budgets:
    params = derive_params(T, PrivacyBudget(leak, parts))
    report = rate_report(build_layout(params), 1)
    alpha = Fraction(leak, parts)
    print(f"{str(alpha):>8} {str(report.storage_ratio):>10} "
          f"{str(report.randomness_ratio):>12}  {report.tight}")

# at alpha = 3/5 the randomness ratio hits T(1-alpha)-1 = 1/5: almost
# free.  Push alpha to 2/3 = 1 - 1/T and the scheme degenerates to
# plain striping, which needs no randomness at all.

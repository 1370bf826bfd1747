"""The sampling-cost model: counts, the ~68x asymptote and regime map.

Prints closed-form stabilizer-state budgets on a small (t, delta) grid,
verifies the delta -> 0 behavior of the correlated count, and scans the
regime map for the t below which exact simulation overtakes weak
simulation before strong simulation does.
"""

import math

from stabsparse import costmodel, magic

XI1 = magic.magic_model(math.pi / 4, 1).xi_t

print("counts for the T-type magic state (phi = pi/4):")
print(f"{'t':>4} {'delta':>7} {'xi_t':>10} {'xi/d^2':>12} {'(2+s2)xi/d':>12} "
      f"{'s2 xi/d':>10} {'correlated':>10} {'f_t':>5}")
for t in (8, 16, 24, 40):
    for delta in (0.1, 0.01):
        p = costmodel.cost_point(t, delta, XI1)
        print(f"{t:>4} {delta:>7} {p.xi_t:>10.2f} {p.k_iid_quadratic:>12} "
              f"{p.k_sota:>12} {p.k_iid_tight:>10} {p.k_correlated:>10} {p.f_t:>5}")

print("\nsmall-delta limit of the correlated count (t = 100):")
xi = XI1**100
for delta in (1e-2, 1e-3, 1e-4):
    f_t = costmodel.f_t_optimal(delta, xi)
    k = costmodel.k_correlated(xi, delta, f_t)
    print(f"  delta = {delta:7.0e}: k * delta / xi = {k * delta / xi:.6f} "
          f"(limit sqrt(402) - 20 = {math.sqrt(402) - 20:.6f}), "
          f"ratio vs (2+sqrt2) law = {costmodel.k_sota(xi, delta) / k:.2f}")

print(f"\nequivalent magic gates removed by the asymptotic reduction: "
      f"ln(68.28)/ln(xi_1) = {math.log(68.28) / math.log(XI1):.1f}")

print("\nregime map (chi_t = 2^0.396t):")
cross = costmodel.exact_vs_strong_crossover(XI1)
print(f"  exact-vs-weak threshold sits above strong-vs-weak for t <= {cross}")
for t, delta in [(8, 0.24), (8, 0.05), (16, 0.15), (160, 0.01)]:
    point = costmodel.regime(t, delta, XI1)
    flags = point.flags
    print(f"  t = {t:3d}, delta = {delta:5.2f}: cheapest = {point.cheapest:15s} "
          f"(strong fewer states: {flags.strong_fewer_states}, "
          f"exact fewer states: {flags.exact_fewer_states})")

print("\npublished stabilizer-rank overrides at the benchmark sizes:")
for t in (4, 8, 16):
    print(f"  chi_{t} = {costmodel.chi_t(t, table=costmodel.CHI_TABLE):.0f} "
          f"(model 2^0.396t = {costmodel.chi_t(t):.1f})")

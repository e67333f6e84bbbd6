"""Hiding alone can distort beliefs almost arbitrarily as networks grow.

On the all-parents family every stage-1 node believes 1 exactly when no
stage-0 variable fired.  With priors ln(n)/n and full hiding budget, the
case-optimal adversary (hide the ones if few enough, otherwise do nothing,
hide anything if all are zero) earns an expected per-node disagreement of

    (1 - eps)^n ((1 + eps)^n - (1 - eps)^n),   eps = ln(n)/n,

which climbs toward 1: in the limit the observer can be driven fully wrong
while every value it sees is true.  The Monte Carlo runs here track the
closed form within sampling error.
"""

from halftruth import SimConfig, gen_theorem1, oracle_policy, run_expectation, theorem1_closed_form

TRIALS = 400

print(f"{'n':>5s} {'closed form':>12s} {'monte carlo':>12s} {'3 x SE':>9s}")
for n in (25, 50, 100, 200, 400):
    model = gen_theorem1(n)
    config = SimConfig(
        model=model, policy=oracle_policy, budget=n, p=1, trials=TRIALS, seed=2024
    )
    rep = run_expectation(config)
    mean, band = rep.mean / n, 3 * rep.se / n
    print(f"{n:5d} {theorem1_closed_form(n):12.5f} {mean:12.5f} {band:9.5f}")

print("\nThe sequence increases toward 1: more variables make the half-truth")
print("strictly more powerful, because a thin prior keeps the observer willing")
print("to believe that some hidden variable fired.")

"""Inside the fuzzy controller: terms, rules, inference, and the surface.

The controller maps one crisp input (a phase's total load, 0..300 kW) to
one crisp output (a suggested change, -150..+150 kW). Eight triangular
terms partition each universe, and eight rules pair them off: lighter
load terms map to additions, heavier ones to reductions.
"""

from phasebal import default_controller, infer_change, membership_at, response_samples

ctrl = default_controller()

print("input terms:")
for mf in ctrl.input.terms:
    print(f"  {mf.label:>4}: rises from {mf.left:g}, peaks at {mf.apex:g}, gone by {mf.right:g}")
print("rules:")
for antecedent, consequent in ctrl.rules:
    print(f"  {antecedent:>4} -> {consequent}")
print()

# a load can belong to two terms at once; that is the point of fuzziness
load = 140.0
print(f"memberships at {load:g} kW:")
for mf in ctrl.input.terms:
    mu = membership_at(mf, load)
    if mu > 0:
        print(f"  {mf.label}: {mu:.3f}")
print()

# where exactly one rule fires, the output sits on that rule's consequent
# peak; between plateaus the two active rules blend
for load in [90.0, 105.0, 120.0, 140.0, 160.0]:
    print(f"load {load:6.1f} kW -> suggested change {infer_change(ctrl, load):8.3f} kW")
print()

# the whole control surface, coarsely: monotone non-increasing from
# "add a lot" at light load to "shed a lot" at heavy load
print("load sweep (every 25 kW):")
for load, change in response_samples(ctrl, 25.0):
    bar = "#" * int(round(abs(change) / 5))
    sign = "+" if change >= 0 else "-"
    print(f"  {load:5g} kW  {change:8.2f}  {sign}{bar}")

"""Why raw fuzzy suggestions need repair, and how the zero-sum fix works.

Each phase is evaluated independently, so the three suggested changes
rarely cancel out. But balancing only moves load between phases; it can
neither create nor destroy power. The correction subtracts the rounded
mean from the first two components and leaves the remainder to the
third, forcing the sum to exactly zero in integer arithmetic.
"""

from phasebal import default_controller, error_correct, suggest_changes

ctrl = default_controller()

cases = [
    (245.0, 120.0, 82.0),
    (157.0, 134.0, 120.0),
    (117.0, 74.0, 42.0),
]

for totals in cases:
    raw = suggest_changes(ctrl, totals)
    ae, error, corrected = error_correct(raw)
    print(f"totals {tuple(int(t) for t in totals)}")
    print(f"  raw suggestion : {raw}  (sums to {sum(raw)})")
    print(f"  average error  : {ae}")
    print(f"  error vector   : {error}")
    print(f"  corrected      : {corrected}  (sums to {sum(corrected)})")
    print()

# the third component absorbs whatever integer division leaves behind
print("remainder handling when the sum is not divisible by 3:")
for raw in [(10, 10, 11), (-7, -7, -8), (1, 0, 0)]:
    ae, error, corrected = error_correct(raw)
    print(f"  raw {raw}: error {error}, corrected {corrected}, sum {sum(corrected)}")

"""Tour of exact cohomology computations on the bundled finite spaces.

Runs the flasque-resolution computation for every fixture space with
integer and mod-m constant coefficients, and prints the invariant
factors.  Everything is exact integer linear algebra; there are no
floats anywhere.
"""

from finsheaf.abgrp import cyclic_group, free_group
from finsheaf.cochain import sheaf_cohomology
from finsheaf.finsite import load_space
from finsheaf.sheaf import constant_sheaf


def describe(rank, torsion):
    parts = ["Z"] * rank + ["Z/%d" % t for t in torsion]
    return " + ".join(parts) if parts else "0"


def main():
    plan = [
        ("SIERP", free_group(1), "Z", 2),
        ("C4", free_group(1), "Z", 3),
        ("C4", cyclic_group(2), "Z/2", 3),
        ("S2F", free_group(1), "Z", 3),
        ("RP2F", free_group(1), "Z", 3),
        ("RP2F", cyclic_group(2), "Z/2", 3),
        ("S3F", cyclic_group(2), "Z/2", 4),
    ]
    for name, coeff, label, top in plan:
        x = load_space(name)
        sheaf = constant_sheaf(x, coeff)
        print("%s with %s coefficients (%d points)" % (name, label, len(x.points)))
        for n in range(top + 1):
            sq = sheaf_cohomology(sheaf, n)
            rank, torsion = sq.group.invariants()
            print("  H^%d = %s" % (n, describe(rank, torsion)))
        print()


if __name__ == "__main__":
    main()

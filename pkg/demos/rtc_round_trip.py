"""Round trip between cohomology classes and rigidified torsor cocycles.

Takes the pseudo-circle with integer coefficients, builds the three-term
comparison complex on a two-open covering, realizes the generator of H^1
as a rigidified torsor cocycle, and checks that the comparison map sends
it back to the same class.  The witness is then written out as a JSON
file that the command line front end can validate:

    python -m finsheaf.cli rtc validate /tmp/c4_generator.json
    python -m finsheaf.cli rtc class /tmp/c4_generator.json
"""

import json

from finsheaf.abgrp import SubQuot, free_group
from finsheaf.cochain import ThreeTermComplex, cech_diff
from finsheaf.finsite import SiteMorphism, SiteObject, load_space
from finsheaf.rtc import RTC, comparison, from_three_term, neutral_rtc, rtc_class
from finsheaf.semisimp import cech_covering
from finsheaf.sheaf import constant_sheaf


def main():
    x = load_space("C4")
    F = constant_sheaf(x, free_group(1))

    # two contractible opens whose intersection is the two minimal points
    u = [frozenset(x.down("c")), frozenset(x.down("d"))]
    w = SiteObject(x, u)
    cover = SiteMorphism(w, x.whole(), [0, 0])
    h = cech_covering(cover, depth=3)

    tt = ThreeTermComplex(h, F, 1)
    rank, torsion = tt.cohomology.group.invariants()
    print("three-term cohomology in degree 1:", (rank, torsion))

    gen = next(g for g in tt.cohomology.group.gens() if not g.is_zero())
    a = from_three_term(tt, tt.cohomology.lift(gen))
    print("generator realized as a torsor cocycle, class nonzero:",
          not rtc_class(a, tt).is_zero())

    _, el = comparison(a, tt)
    print("comparison returns the same class:",
          tt.cohomology.project(el) == gen)

    # degree-1 torsors on the disjoint cone components trivialize, so the
    # whole witness can be carried by a rigidification cochain phi that is
    # just a Cech 1-cocycle over the covering
    cech = SubQuot(cech_diff(h, F, 1), cech_diff(h, F, 0))
    cgen = next(g for g in cech.group.gens() if not g.is_zero())
    neu = neutral_rtc(h, 1, F)
    b = RTC(h, 1, neu.torsor, neu.phi.group.element(cech.lift(cgen).reduced()))
    print("cocycle witness has nonzero class:", not rtc_class(b).is_zero())

    data = {
        "space": "C4",
        "sheaf": "Z",
        "degree": 1,
        "cover": [sorted(c) for c in u],
        "depth": 3,
        "torsor": None,
        "phi": b.phi.reduced(),
    }
    path = "/tmp/c4_generator.json"
    with open(path, "w") as fh:
        json.dump(data, fh, sort_keys=True, indent=2)
    print("witness written to", path)


if __name__ == "__main__":
    main()

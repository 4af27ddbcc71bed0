"""Search for chiral extensions (Q-systems) sector by sector.

A Q-system (theta, w, x) encodes one finite-index extension of the chiral
theory.  The multiplicity bound n_s <= d_s makes the candidate list finite;
for each candidate theta the solver looks for coefficient tensors satisfying
the unit and associativity constraints, deduplicating up to gauge.
"""

import itertools
import math

from bcft import catalog, is_local, search_qsystems

for name, level in [("ising", None), ("fibonacci", None)]:
    data = catalog(name, level)
    cat = data.presentation
    dims = data.ring.fp_dims
    print(f"== {data.name}")
    bounds = [int(math.floor(d + 1e-9)) for d in dims]
    bounds[0] = 1
    for theta in itertools.product(*[range(b + 1) for b in bounds]):
        if theta[0] != 1:
            continue
        result = search_qsystems(cat, theta, n_starts=16, seed=1)
        if not result.solutions and result.status == "ok":
            verdict = "no Q-system"
        elif result.status != "ok":
            verdict = f"status {result.status}"
        else:
            locality = [
                "local" if is_local(q, cat)[0] else "non-local"
                for q in result.solutions
            ]
            verdict = f"{len(result.solutions)} class(es): {', '.join(locality)}"
        print(f"   theta = {theta}: {verdict}")
    print()

# the su2 level-4 simple current j=2 has integer spin: a local extension
s4 = catalog("su2", 4)
res = search_qsystems(s4.presentation, [1, 0, 0, 0, 1], n_starts=12, seed=3)
q = res.solutions[0]
local, resid = is_local(q, s4.presentation)
print(f"su2_4 theta = 1 (+) j2: {len(res.solutions)} class, local={local} (residual {resid:.1e})")

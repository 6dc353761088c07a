"""How one language's utility reshapes the steady state.

Holding the Singapore whole-country biases fixed, each sweep raises one
language's utility
(rescaling the others proportionally so they still sum to 1) and records
the converged outcome.  Low target utility leaves the strongest
competitor dominant; a mid-range window yields coexistence; high utility
makes the target dominant.  Writes one CSV per swept language.
"""

from pathlib import Path

import numpy as np

import langcompete as lc

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

sg = lc.bundled_fixtures()["singapore-whole"]
params, x0 = sg.fitted, sg.dataset.fractions[0]
values = np.round(np.arange(0.01, 0.605, 0.01), 10)


def describe(points):
    prev = None
    for p in points:
        label = (p.outcome.kind,
                 p.params.language_names[p.outcome.most_popular])
        if label != prev:
            print(f"    from s = {p.swept_value:.2f}: {label[0]} "
                  f"with {label[1]} leading")
            prev = label


for target_name in params.language_names:
    target = params.index_of(target_name)
    points = lc.utility_sweep(params, x0, target, values, jobs=4)
    dest = OUT / f"utility_sweep_{target_name.lower()}.csv"
    lc.export(points, "csv", dest)
    print(f"sweeping utility of {target_name} -> {dest.name}")
    describe(points)

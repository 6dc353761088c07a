"""Sensitivity to the two bias exponents, one axis at a time.

With utilities and the census starting point fixed, sweeping minority
aversion (beta held at its fitted value) walks the system from
coexistence through Mandarin dominance into Dialect dominance; sweeping
majority preference (minority aversion held near its fitted value) shows
the same progression.  Low bias favors the high-utility language,
high bias favors the language that started largest.
"""

from pathlib import Path

import numpy as np

import langcompete as lc

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

sg = lc.bundled_fixtures()["singapore-whole"]
x0 = sg.dataset.fractions[0]
grid = np.round(np.linspace(0.0, 1.0, 101), 10)


def describe(points):
    prev = None
    for p in points:
        if p.outcome is None:
            label = ("unresolved", "-")
        else:
            label = (p.outcome.kind,
                     p.params.language_names[p.outcome.most_popular])
        if label != prev:
            print(f"    from {p.swept_value:.2f}: {label[0]} "
                  f"with {label[1]} leading")
            prev = label


print(f"minority aversion 0..1 at beta = {sg.fitted.beta}")
points = lc.bias_sweep(sg.fitted, x0, "minority_aversion", grid, jobs=4)
lc.export(points, "csv", OUT / "bias_sweep_minority_aversion.csv")
describe(points)

base = lc.ModelParams(beta=sg.fitted.beta, minority_aversion=0.28,
                      utilities=sg.fitted.utilities,
                      language_names=sg.fitted.language_names)
print("majority preference 0..1 at minority aversion = 0.28")
points = lc.bias_sweep(base, x0, "beta", grid, jobs=4)
lc.export(points, "csv", OUT / "bias_sweep_beta.csv")
describe(points)

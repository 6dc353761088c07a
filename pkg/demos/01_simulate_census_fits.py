"""Simulate the four bundled census scenarios and report overtaking events.

Each bundled fixture pairs a census reconstruction with the bias/utility
parameters estimated for it.  Integrating from the first census row
reproduces the qualitative history: dialects lose their majority, English
and Mandarin overtake, and in Hong Kong Sze Yap collapses to extinction.

Writes one trajectory CSV per scenario into demos/output/.
"""

from pathlib import Path

import numpy as np

import langcompete as lc

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)


def yearly(fixture):
    span = float(fixture.dataset.years[-1] - fixture.dataset.years[0])
    return lc.integrate(fixture.fitted, fixture.dataset.fractions[0],
                        t_end=span, step=0.01, record_every=100)


def report_crossings(fixture, traj):
    names = fixture.fitted.language_names
    y0 = int(fixture.dataset.years[0])
    states = traj.states
    for i in range(len(names)):
        for j in range(len(names)):
            if i == j:
                continue
            # language i overtakes j somewhere inside the span
            above = states[:, i] > states[:, j]
            if above.any() and not above[0]:
                year = y0 + int(np.argmax(above))
                print(f"    {names[i]} overtakes {names[j]} in {year}")
    floor = lc.DEFAULT_EXTINCTION_THRESHOLD
    for i, name in enumerate(names):
        below = states[:, i] < floor
        if below.any() and not below[0]:
            print(f"    {name} falls below {floor:g} in {y0 + int(np.argmax(below))}")


for name, fx in lc.bundled_fixtures().items():
    traj = yearly(fx)
    dest = OUT / f"trajectory_{name}.csv"
    lc.export(traj, "csv", dest)
    pred = lc.predict_at_observations(fx.fitted, fx.dataset)
    d = lc.objective_d(pred, fx.dataset.fractions)
    print(f"{name}: D = {d:.4f} over {len(fx.dataset.years)} census rows "
          f"-> {dest.name}")
    report_crossings(fx, traj)
    final = dict(zip(fx.fitted.language_names, np.round(traj.states[-1], 3)))
    print(f"    state at {int(fx.dataset.years[-1])}: {final}")

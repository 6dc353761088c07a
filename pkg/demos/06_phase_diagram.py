"""Phase diagram of the Singapore whole-country scenario.

For every (majority preference, minority aversion) pair on a grid, the
system is run to its steady state from the 1957 census row with the
fitted utilities, and the cell records which language ends up largest
and whether it dominates outright.  Small biases give coexistence led by
the highest-utility language (Mandarin); raising minority aversion hands
the board to Dialect, the language that started largest; a narrow
English-dominance band appears near beta = 1 at small minority aversion.

A 101x101 grid takes a few minutes; pass a smaller count as argv[1]
(e.g. 41) for a quick look.  Writes CSV and, when matplotlib is
importable, a PNG map.
"""

import sys
from pathlib import Path

import numpy as np

import langcompete as lc

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

count = int(sys.argv[1]) if len(sys.argv) > 1 else 101
sg = lc.bundled_fixtures()["singapore-whole"]
bgrid = np.linspace(0.0, 2.0, count)
mgrid = np.linspace(0.0, 2.0, count)

cells = lc.phase_diagram(sg.fitted, sg.dataset.fractions[0], bgrid, mgrid,
                         jobs=4)
dest = OUT / "phase_singapore_whole.csv"
lc.export(cells, "csv", dest, language_names=sg.fitted.language_names)

names = sg.fitted.language_names
counts = {}
for row in cells:
    for c in row:
        key = (c.kind if c.kind == "unresolved"
               else f"{c.kind}/{names[c.most_popular]}")
        counts[key] = counts.get(key, 0) + 1
print(f"{count}x{count} phase diagram -> {dest.name}")
for key in sorted(counts):
    print(f"  {counts[key]:6d}  {key}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    # encode (most popular, kind): 2*idx + (1 if dominance)
    img = np.zeros((count, count))
    for i, row in enumerate(cells):
        for j, c in enumerate(row):
            img[j, i] = (2 * c.most_popular + (c.kind == "dominance")
                         if c.most_popular is not None else -1)
    fig, ax = plt.subplots(figsize=(6, 5))
    im = ax.imshow(img, origin="lower", extent=(0, 2, 0, 2), aspect="auto",
                   cmap="tab10", vmin=-1, vmax=8)
    ax.set_xlabel("majority preference")
    ax.set_ylabel("minority aversion")
    ax.set_title("largest language at the steady state (dark = dominance)")
    fig.tight_layout()
    fig.savefig(OUT / "phase_singapore_whole.png", dpi=150)
    print(f"plot -> {OUT / 'phase_singapore_whole.png'}")

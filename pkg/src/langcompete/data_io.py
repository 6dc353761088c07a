"""Census dataset loading, bundled fixtures, and plot-ready exports.

Dataset CSVs are UTF-8, comma-separated: a ``year`` column followed by
one column per language, rows holding fractions or raw counts (each row
is normalized to sum 1 on load).  ``#``-prefixed comment lines may
precede the header.

The four bundled fixtures pair an anchor-point reconstruction of a
published census series with the parameter values estimated for it.
The full historical tables are not redistributable here; the bundled
rows are the values stated in public census summaries plus documented
reconstructions (see the comments inside each CSV), so tests against
them use loose tolerances for error magnitudes and tight ones only for
qualitative events such as overtaking years.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .analysis import PhaseCell, SweepPoint
from .integrators import Trajectory
from .model import ModelParams

__all__ = [
    "Dataset",
    "Fixture",
    "ParseError",
    "normalize_rows",
    "load_dataset",
    "bundled_fixtures",
    "export",
]


class ParseError(ValueError):
    """A dataset file violated the CSV contract."""


@dataclass(frozen=True)
class Dataset:
    """Named census series: years x languages matrix of fractions."""

    name: str
    language_names: tuple[str, ...]
    years: np.ndarray
    fractions: np.ndarray


@dataclass(frozen=True)
class Fixture:
    """A bundled dataset with its published parameter estimates."""

    dataset: Dataset
    fitted: ModelParams
    reported_d: float


def normalize_rows(fractions) -> np.ndarray:
    """Divide each row by its sum (idempotent on already-normalized data)."""
    f = np.asarray(fractions, dtype=np.float64)
    sums = f.sum(axis=1, keepdims=True)
    if (sums <= 0).any():
        bad = int(np.nonzero(sums.ravel() <= 0)[0][0])
        raise ParseError(f"row {bad} sums to {float(sums.ravel()[bad])!r}")
    return f / sums


def load_dataset(source, name: str | None = None) -> Dataset:
    """Load and validate a census CSV, normalizing each row to sum 1."""
    path = Path(source)
    text = path.read_text(encoding="utf-8")
    lines = [
        (i + 1, ln.strip())
        for i, ln in enumerate(text.splitlines())
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise ParseError(f"{path}: no header line found")
    header_no, header = lines[0]
    cols = [c.strip() for c in header.split(",")]
    if len(cols) < 3 or cols[0] != "year":
        raise ParseError(
            f"{path}:{header_no}: header must be 'year,<lang1>,<lang2>,...', "
            f"got {header!r}"
        )
    languages = tuple(cols[1:])

    years = []
    rows = []
    for line_no, ln in lines[1:]:
        cells = [c.strip() for c in ln.split(",")]
        if len(cells) != len(cols):
            raise ParseError(
                f"{path}:{line_no}: expected {len(cols)} columns, got {len(cells)}"
            )
        try:
            year = int(cells[0])
        except ValueError:
            raise ParseError(
                f"{path}:{line_no}: year column is not an integer: {cells[0]!r}"
            ) from None
        values = []
        for colname, cell in zip(languages, cells[1:]):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(
                    f"{path}:{line_no}: non-numeric value in column "
                    f"{colname!r}: {cell!r}"
                ) from None
            if not np.isfinite(v) or v < 0:
                raise ParseError(
                    f"{path}:{line_no}: column {colname!r} must be a finite "
                    f"nonnegative number, got {cell!r}"
                )
            values.append(v)
        years.append(year)
        rows.append(values)

    if len(rows) < 2:
        raise ParseError(f"{path}: need at least 2 observation rows")
    years_arr = np.asarray(years, dtype=np.int64)
    if not (np.diff(years_arr) > 0).all():
        raise ParseError(f"{path}: years must be strictly increasing")
    try:
        fractions = normalize_rows(np.asarray(rows))
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return Dataset(
        name=name if name is not None else path.stem,
        language_names=languages,
        years=years_arr,
        fractions=fractions,
    )


# (fixture name, csv file, beta, minority aversion, utilities, reported D)
_FIXTURE_SPECS = (
    ("singapore-whole", "singapore_whole.csv", 0.726, 0.283,
     (0.35, 0.29, 0.36), 0.1388),
    ("chinese-community", "chinese_community.csv", 0.63, 0.36,
     (0.33, 0.30, 0.37), 0.1199),
    ("indian-community", "indian_community.csv", 0.21, 0.82,
     (0.40, 0.39, 0.21), 0.1323),
    ("hong-kong", "hong_kong.csv", 0.987, 0.095,
     (0.307, 0.252, 0.263, 0.178), 0.2663),
)


def bundled_fixtures() -> dict[str, Fixture]:
    """The four bundled census fixtures, keyed by name."""
    out = {}
    data_dir = resources.files("langcompete").joinpath("data")
    for name, fname, beta, ma, utilities, reported_d in _FIXTURE_SPECS:
        with resources.as_file(data_dir.joinpath(fname)) as p:
            ds = load_dataset(p, name=name)
        params = ModelParams(
            beta=beta,
            minority_aversion=ma,
            utilities=np.asarray(utilities),
            language_names=ds.language_names,
        )
        out[name] = Fixture(dataset=ds, fitted=params, reported_d=reported_d)
    return out


def _fmt(v) -> str:
    return repr(float(v))


def _trajectory_rows(traj: Trajectory):
    names = traj.params.language_names
    yield ["t", *names]
    for t, x in zip(traj.times, traj.states):
        yield [_fmt(t), *(_fmt(v) for v in x)]


def _sweep_rows(points: list[SweepPoint], names: tuple[str, ...] = ()):
    if points:
        names = points[0].params.language_names
    yield ["swept_value", *(f"{n}_star" for n in names), "kind",
           "most_popular", "convergence_time"]
    for p in points:
        if p.outcome is not None:
            kind = p.outcome.kind
            pop = p.params.language_names[p.outcome.most_popular]
        else:
            kind = "unresolved"
            pop = ""
        tau = _fmt(p.convergence_time) if p.convergence_time is not None else ""
        yield [_fmt(p.swept_value), *(_fmt(v) for v in p.final_state),
               kind, pop, tau]


def _phase_rows(cells, names: tuple[str, ...]):
    yield ["beta", "minority_aversion", "most_popular", "kind"]
    for row in cells:
        for c in row:
            pop = names[c.most_popular] if c.most_popular is not None else ""
            yield [_fmt(c.beta), _fmt(c.minority_aversion), pop, c.kind]


def _sweep_json(points: list[SweepPoint]):
    names = points[0].params.language_names if points else ()
    return {
        "schema_version": 1,
        "kind": "sweep",
        "languages": list(names),
        "points": [
            {
                "swept_value": float(p.swept_value),
                "final_state": [float(v) for v in p.final_state],
                "kind": p.outcome.kind if p.outcome is not None else "unresolved",
                "most_popular": (
                    names[p.outcome.most_popular] if p.outcome is not None else None
                ),
                "convergence_time": (
                    float(p.convergence_time)
                    if p.convergence_time is not None else None
                ),
            }
            for p in points
        ],
    }


def _phase_json(cells, names: tuple[str, ...]):
    return {
        "schema_version": 1,
        "kind": "phase",
        "languages": list(names),
        "cells": [
            {
                "beta": float(c.beta),
                "minority_aversion": float(c.minority_aversion),
                "most_popular": (
                    names[c.most_popular] if c.most_popular is not None else None
                ),
                "kind": c.kind,
            }
            for row in cells
            for c in row
        ],
    }


def _trajectory_json(traj: Trajectory):
    return {
        "schema_version": 1,
        "kind": "trajectory",
        "languages": list(traj.params.language_names),
        "times": [float(t) for t in traj.times],
        "states": [[float(v) for v in x] for x in traj.states],
    }


def _classify_payload(results, language_names):
    """Map an export payload to (csv row iterator, json object)."""
    if isinstance(results, Trajectory):
        return _trajectory_rows(results), lambda: _trajectory_json(results)
    if isinstance(results, (list, tuple)):
        flat = list(results)
        if all(isinstance(p, SweepPoint) for p in flat):
            names = tuple(language_names) if language_names is not None else ()
            return _sweep_rows(flat, names), lambda: _sweep_json(flat)
        if flat and all(
            isinstance(row, (list, tuple))
            and all(isinstance(c, PhaseCell) for c in row)
            for row in flat
        ):
            if language_names is None:
                raise ValueError(
                    "phase-diagram export needs language_names= for labels"
                )
            return (
                _phase_rows(flat, tuple(language_names)),
                lambda: _phase_json(flat, tuple(language_names)),
            )
    raise TypeError(f"cannot export object of type {type(results).__name__}")


def export(results, fmt: str, destination, language_names=None) -> None:
    """Write a Trajectory, sweep-point list, or phase-cell matrix to disk.

    Output is deterministic byte-for-byte for identical inputs; numbers
    use the shortest round-trip decimal representation.
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f'format must be "csv" or "json", got {fmt!r}')
    rows, make_json = _classify_payload(results, language_names)
    path = Path(destination)
    try:
        if fmt == "csv":
            text = "\n".join(",".join(r) for r in rows) + "\n"
        else:
            text = json.dumps(make_json(), indent=2) + "\n"
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc

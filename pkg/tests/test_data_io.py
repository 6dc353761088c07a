import json

import numpy as np
import pytest

import langcompete as lc


def write(tmp_path, text, name="data.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


GOOD = """# comment line
year,English,Dialect,Mandarin
1957,1.8,74.1,0.1
1980,11.6,59.5,10.2
2010,32.3,14.3,35.6
"""


# ---------------------------------------------------------------- loading

def test_load_well_formed(tmp_path):
    ds = lc.load_dataset(write(tmp_path, GOOD))
    assert ds.language_names == ("English", "Dialect", "Mandarin")
    assert ds.years.tolist() == [1957, 1980, 2010]
    assert np.abs(ds.fractions.sum(axis=1) - 1.0).max() < 1e-12
    assert ds.name == "data"


def test_load_accepts_fractions_or_counts(tmp_path):
    a = lc.load_dataset(write(tmp_path, GOOD, "a.csv"))
    scaled = GOOD.replace("1.8,74.1,0.1", "18,741,1")
    b = lc.load_dataset(write(tmp_path, scaled, "b.csv"))
    assert a.fractions[0] == pytest.approx(b.fractions[0], abs=1e-12)


@pytest.mark.parametrize("text,fragment", [
    ("x,y\n1,2\n2,3\n", "header"),
    ("year,A,B\n1990,0.5,oops\n1991,0.5,0.5\n", "non-numeric"),
    ("year,A,B\n1990,0.5,-0.1\n1991,0.5,0.5\n", "nonnegative"),
    ("year,A,B\n1990,0.5,0.5\n1990,0.4,0.6\n", "increasing"),
    ("year,A,B\n1990,0.0,0.0\n1991,0.5,0.5\n", "sums to"),
    ("year,A,B\n1990,0.5,0.5\n", "at least 2"),
    ("year,A,B\n1990,0.5\n1991,0.5,0.5\n", "columns"),
    ("year,A,B\nabc,0.5,0.5\n1991,0.5,0.5\n", "integer"),
])
def test_load_parse_errors(tmp_path, text, fragment):
    with pytest.raises(lc.ParseError, match=fragment):
        lc.load_dataset(write(tmp_path, text))


def test_normalize_rows_idempotent(rng):
    for _ in range(50):
        raw = rng.uniform(0.0, 5.0, size=(6, 4)) + 0.01
        once = lc.normalize_rows(raw)
        twice = lc.normalize_rows(once)
        assert np.abs(twice - once).max() <= 1e-15


def test_load_export_roundtrip_values(tmp_path, singapore):
    traj = lc.integrate(singapore.fitted, singapore.dataset.fractions[0],
                        t_end=10.0, step=0.01, record_every=100)
    out = tmp_path / "traj.csv"
    lc.export(traj, "csv", out)
    lines = out.read_text().strip().splitlines()
    header = lines[0].split(",")
    assert header == ["t", "English", "Dialect", "Mandarin"]
    got = np.array([[float(c) for c in ln.split(",")] for ln in lines[1:]])
    assert np.abs(got[:, 0] - traj.times).max() <= 1e-12
    assert np.abs(got[:, 1:] - traj.states).max() <= 1e-12


# ---------------------------------------------------------------- fixtures

def test_bundled_fixture_constants(fixtures):
    sg = fixtures["singapore-whole"]
    assert sg.fitted.beta == 0.726
    assert sg.fitted.minority_aversion == 0.283
    assert np.array_equal(sg.fitted.utilities, [0.35, 0.29, 0.36])
    assert sg.reported_d == 0.1388

    cn = fixtures["chinese-community"]
    assert (cn.fitted.beta, cn.fitted.minority_aversion) == (0.63, 0.36)
    assert np.array_equal(cn.fitted.utilities, [0.33, 0.30, 0.37])
    assert cn.reported_d == 0.1199

    ind = fixtures["indian-community"]
    assert (ind.fitted.beta, ind.fitted.minority_aversion) == (0.21, 0.82)
    assert np.array_equal(ind.fitted.utilities, [0.40, 0.39, 0.21])
    assert ind.reported_d == 0.1323

    hk = fixtures["hong-kong"]
    assert (hk.fitted.beta, hk.fitted.minority_aversion) == (0.987, 0.095)
    assert np.array_equal(hk.fitted.utilities, [0.307, 0.252, 0.263, 0.178])
    assert hk.fitted.language_names == ("English", "Hakka", "Hoklo", "SzeYap")
    assert hk.reported_d == 0.2663


def test_fixture_anchor_rows(fixtures):
    sg = fixtures["singapore-whole"].dataset
    assert sg.years[0] == 1957
    assert sg.fractions[0][sg.language_names.index("Dialect")] == \
        pytest.approx(0.975, abs=1e-3)

    cn = fixtures["chinese-community"].dataset
    assert cn.fractions[0][cn.language_names.index("Dialect")] == \
        pytest.approx(0.766, abs=1e-3)

    ind = fixtures["indian-community"].dataset
    assert ind.fractions[0][ind.language_names.index("Tamil")] == \
        pytest.approx(0.613, abs=1e-3)

    hk = fixtures["hong-kong"].dataset
    assert hk.years[0] == 1949
    assert hk.fractions[0][hk.language_names.index("SzeYap")] == \
        pytest.approx(0.578, abs=1e-3)


def test_fixture_params_satisfy_invariants(fixtures):
    for fx in fixtures.values():
        u = fx.fitted.utilities
        assert abs(u.sum() - 1.0) <= 1e-9
        assert (u > 0).all()
        assert fx.fitted.beta >= 0 and fx.fitted.minority_aversion >= 0
        assert len(fx.fitted.language_names) == fx.fitted.n
        assert fx.dataset.fractions.shape[1] == fx.fitted.n


# ------------------------------------------------------------------ export

def test_export_empty_sweep_header_only(tmp_path):
    out = tmp_path / "empty.csv"
    lc.export([], "csv", out, language_names=("A", "B"))
    lines = out.read_text().strip().splitlines()
    assert lines == ["swept_value,A_star,B_star,kind,most_popular,convergence_time"]


def test_export_sweep_schema(tmp_path, singapore, fast_opts):
    pts = lc.utility_sweep(singapore.fitted, singapore.dataset.fractions[0],
                           0, [0.2, 0.5], fast_opts)
    out = tmp_path / "sweep.csv"
    lc.export(pts, "csv", out)
    lines = out.read_text().strip().splitlines()
    assert lines[0] == ("swept_value,English_star,Dialect_star,Mandarin_star,"
                        "kind,most_popular,convergence_time")
    assert len(lines) == 3
    cells = lines[1].split(",")
    assert float(cells[0]) == 0.2
    assert cells[4] in ("dominance", "coexistence")
    assert cells[5] in singapore.fitted.language_names

    jout = tmp_path / "sweep.json"
    lc.export(pts, "json", jout)
    payload = json.loads(jout.read_text())
    assert payload["schema_version"] == 1
    assert payload["kind"] == "sweep"
    assert len(payload["points"]) == 2


def test_export_phase_schema_reader(tmp_path, singapore, fast_opts):
    cells = lc.phase_diagram(singapore.fitted, singapore.dataset.fractions[0],
                             [0.3, 0.726], [0.1, 0.3], fast_opts)
    out = tmp_path / "phase.csv"
    lc.export(cells, "csv", out,
              language_names=singapore.fitted.language_names)
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "beta,minority_aversion,most_popular,kind"
    assert len(lines) == 1 + 4          # one row per cell
    for ln in lines[1:]:
        b, ma, pop, kind = ln.split(",")
        float(b), float(ma)
        assert kind in ("dominance", "coexistence", "unresolved")
        assert pop in singapore.fitted.language_names or pop == ""

    jout = tmp_path / "phase.json"
    lc.export(cells, "json", jout,
              language_names=singapore.fitted.language_names)
    payload = json.loads(jout.read_text())
    assert payload["schema_version"] == 1
    assert len(payload["cells"]) == 4


def test_export_deterministic_bytes(tmp_path, singapore):
    traj = lc.integrate(singapore.fitted, singapore.dataset.fractions[0],
                        t_end=5.0, step=0.01, record_every=50)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    lc.export(traj, "csv", a)
    lc.export(traj, "csv", b)
    assert a.read_bytes() == b.read_bytes()


def test_export_errors(tmp_path, singapore):
    traj = lc.integrate(singapore.fitted, singapore.dataset.fractions[0],
                        t_end=1.0, step=0.01)
    with pytest.raises(ValueError):
        lc.export(traj, "xml", tmp_path / "t.xml")
    with pytest.raises(TypeError):
        lc.export(object(), "csv", tmp_path / "t.csv")
    with pytest.raises(OSError, match="no/such"):
        lc.export(traj, "csv", tmp_path / "no" / "such" / "dir.csv")

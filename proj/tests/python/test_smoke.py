"""Smoke tests for the python bindings (and one cross-check against the CLI)."""

import json
import os
import subprocess

import pytest

import frobsurf

FERMAT_CUBIC_P2 = """
name = "fermat-cubic"
kind = "hypersurface"
p = 2
K2 = 3
forms = ["x^3+y^3+z^3+w^3"]
"""


def test_version():
    assert frobsurf.__version__ == "0.1.0"


def test_fsplit_fermat_cubic():
    split, witness, coeff = frobsurf.fsplit("P3", 2, ["x^3+y^3+z^3+w^3"])
    assert split is False and witness == "" and coeff == 0
    split, witness, coeff = frobsurf.fsplit("P3", 7, ["x^3+y^3+z^3+w^3"])
    assert split is True
    assert witness == "x^6*y^6*z^6"
    assert coeff == 6


def test_check_text_roundtrip():
    rep = frobsurf.check(text=FERMAT_CUBIC_P2)
    assert rep["schema"] == "frobsurf-report/1"
    assert rep["f_split"] is False
    assert rep["gfr"]["status"] == "counterexample_possible_cell"
    # identical inputs give byte-identical reports
    assert frobsurf.check_text(FERMAT_CUBIC_P2) == frobsurf.check_text(FERMAT_CUBIC_P2)


def test_lattice_counts():
    assert frobsurf.lattice_counts(6) == (27, 72, "E6")
    assert frobsurf.lattice_counts(8, weyl=True) == (240, 240, "E8")


def test_exceptional_cells():
    cells = set(map(tuple, frobsurf.exceptional_cells("canonical")))
    assert (4, 2) in cells and (3, 3) in cells
    smooth = set(map(tuple, frobsurf.exceptional_cells("smooth")))
    assert (4, 2) not in smooth and (3, 2) in smooth


def test_sample_small_cell():
    s = frobsurf.sample_cell(3, 3, n=3, seed=11)
    assert s["screened"] == 3
    assert s["f_split"] == 3 and s["not_f_split"] == 0


def test_gfr_search_quadric_pencil():
    established, level, element, witness = frobsurf.gfr_search(
        "P4", 7, ["x*y+z^2", "x*v+w^2"], emax=2
    )
    assert established
    assert level >= 1 and witness


def test_parse_error_maps_to_value_error():
    assert issubclass(frobsurf.ParseError, ValueError)
    with pytest.raises(frobsurf.ParseError):
        frobsurf.check(text='kind = "nope"\np = 2\n')
    with pytest.raises(ValueError):
        frobsurf.check(text=FERMAT_CUBIC_P2, path="also-a-path.toml")


@pytest.mark.skipif(not os.environ.get("FROBSURF_CLI"), reason="CLI path not provided")
def test_cli_table_matches_module():
    out = subprocess.run(
        [os.environ["FROBSURF_CLI"], "table", "--oracle-only", "--format", "json"],
        capture_output=True,
        text=True,
        check=True,
    )
    doc = json.loads(out.stdout)
    marked = {(c["K2"], c["p"]) for c in doc["cells"] if c["exceptional"]}
    assert marked == set(map(tuple, frobsurf.exceptional_cells("canonical")))

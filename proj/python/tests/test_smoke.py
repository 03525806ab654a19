import os
from pathlib import Path

import pytest

import npi_synth

BENCHMARKS = Path(os.environ.get("NPI_BENCHMARK_DIR", Path(__file__).resolve().parents[2] / "benchmarks"))

COUNTER = """
var i, N: Int;
procedure count()
  requires i == 0 && N > 0;
  ensures i == N;
{
  while (i < N)
    invariant ?H;
  {
    i := i + 1;
  }
}
"""


def test_houdini_keeps_atoms_true_on_all_positives():
    result = npi_synth.houdini(
        positives=[("H", [True, False, True])],
        negatives=[("H", [True, False, False])],
        implications=[],
        universes={"H": 3},
    )
    assert result == {"H": [0, 2]}


def test_houdini_reports_inconsistency():
    assert (
        npi_synth.houdini(
            positives=[("H", [True, False, True])],
            negatives=[("H", [True, True, True])],
            implications=[],
            universes={"H": 3},
        )
        is None
    )


def test_to_ice_inductivity_pair():
    ice = npi_synth.to_ice("I L p0 -> R p1\n", {"L": 3, "R": 3})
    assert ice["implications"] == [(("L", [True, False, False]), ("R", [True, False, True]))]
    assert ice["positives"] == [] and ice["negatives"] == []


def test_is_consistent():
    sample = "I L p0 -> R p1\n"
    assert not npi_synth.is_consistent({"L": [0], "R": [1]}, sample)
    assert npi_synth.is_consistent({"L": [0], "R": [2]}, sample)


def test_parse_and_predicates():
    prog = npi_synth.parse(COUNTER)
    assert prog.holes == ["H"]
    assert "procedure count" in str(prog)
    preds = npi_synth.gen_predicates(prog)
    texts = [text for _, text in preds["H"]]
    assert "i - N <= 0" in texts
    assert "i == N" in texts


def test_parse_error_is_raised():
    with pytest.raises(npi_synth.ParseError):
        npi_synth.parse("procedure p( {")


def test_synthesize_counter():
    report = npi_synth.synthesize(npi_synth.parse(COUNTER), name="counter", check_normality=True)
    assert report["outcome"] == "Invariant"
    assert report["exit_code"] == 0
    assert report["rounds"] <= report["predicates"] + 1
    assert "i - N <= 0" in report["invariant"]["H"]
    assert report["normality_violations"] == []


def test_synthesize_inverse_file():
    report = npi_synth.synthesize_file(BENCHMARKS / "inverse.npl")
    assert report["name"] == "inverse"
    assert report["outcome"] == "Invariant"
    assert report["constraints"][2] == "I L p0 -> R p1"

import json
import math
import os
import tempfile

import pandas as pd
import pytest

from sclic.report import SurveyReport

ROWS = [
    (0, "kernel_trivial", 0.5, True),
    (1, "kernel_trivial", math.inf, None),
    (2, "kernel_trivial", 1.5, None),
    (3, "relint_kernel", 0.2, False),
    (4, "kernel_touches_boundary", math.nan, None),
]

def _report(rows=ROWS, persistence=(1.0, 0.5)):
    return SurveyReport({"type": "soc", "dim": 3}, 2, 3, 7, rows, list(persistence), 0.1)

def test_counts_and_fractions():
    report = _report()
    assert(report["samples"] == 5)
    assert(report["counts"]["kernel_trivial"] == 3)
    assert(report["counts"]["rank_deficient"] == 0)
    assert(report.fractions["relint_kernel"] == pytest.approx(0.2))
    assert(sum(report.fractions.values()) == pytest.approx(1))
    assert(report.uncertified_fraction == pytest.approx(0.2))

def test_radius_stats_skip_infinite():
    stats = _report()["radius_stats"]
    assert(stats == {"min": 0.5, "median": 1.0, "max": 1.5})

def test_persistence():
    report = _report()
    assert(report["rechecked"] == 2)
    assert(report["persistence_rate"] == pytest.approx(0.75))
    assert(_report(persistence=())["persistence_rate"] is None)

def test_empty():
    report = _report(rows=[], persistence=())
    assert(report["samples"] == 0)
    assert(report.uncertified_fraction == 0)
    assert(report["radius_stats"] is None)

def test_write():
    with tempfile.TemporaryDirectory() as tempdir:
        fname = os.path.join(tempdir, "survey.csv")
        files = _report().write(fname)
        assert(files == [fname, fname + ".json", os.path.join(tempdir, "survey_fractions.csv")])
        for f in files:
            assert(os.path.isfile(f))

        rows = pd.read_csv(fname)
        assert(list(rows.columns) == ["sample_index", "certificate_class", "radius_or_delta", "recheck_pass"])
        assert(len(rows) == 5)

        with open(files[1]) as f:
            summary = json.load(f)
        assert(summary["m"] == 2)
        assert(summary["counts"]["kernel_trivial"] == 3)

        fractions = pd.read_csv(files[2])
        assert(fractions["count"].sum() == 5)
        assert(fractions.set_index("certificate_class").loc["relint_kernel", "fraction"] == pytest.approx(0.2))

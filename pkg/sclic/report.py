"""
SCLIC: Survey report

One row per sampled map plus a summary. Rows are written as CSV, the summary
as JSON alongside. Fractions per class are also written as a small CSV table
for external plotting.
"""
import logging
import os

import numpy as np
import pandas as pd

from .certify.certificates import LABELS
from .data import write_json

LOG = logging.getLogger(__name__)

COLUMNS = ["sample_index", "certificate_class", "radius_or_delta", "recheck_pass"]

class SurveyReport(dict):
    """
    Summary of a genericity survey

    :ivar rows: pandas DataFrame with one row per sample
    """

    def __init__(self, set_desc, m, n, seed, rows, persistence, wall_time, **kwargs):
        """
        :param set_desc: JSON form of the surveyed set
        :param rows: Sequence of (sample_index, certificate_class, radius_or_delta, recheck_pass)
        :param persistence: Sequence of neighbourhood check fractions for rechecked samples
        :param wall_time: Elapsed time in seconds
        """
        dict.__init__(self, **kwargs)
        self.rows = pd.DataFrame(list(rows), columns=COLUMNS)
        samples = len(self.rows)
        counts = self.rows["certificate_class"].value_counts()
        self["set"] = set_desc
        self["m"] = m
        self["n"] = n
        self["samples"] = samples
        self["seed"] = seed
        self["counts"] = {label: int(counts.get(label, 0)) for label in LABELS}
        self["fractions"] = {label: self["counts"][label] / samples if samples else 0.0 for label in LABELS}
        self["radius_stats"] = self._radius_stats()
        self["rechecked"] = len(persistence)
        self["persistence_rate"] = float(np.mean(persistence)) if len(persistence) else None
        self["wall_time"] = wall_time

    def _radius_stats(self):
        radii = self.rows.loc[self.rows["certificate_class"] == "kernel_trivial", "radius_or_delta"]
        radii = radii[np.isfinite(radii.astype(float))]
        if radii.empty:
            return None
        return {"min": float(radii.min()), "median": float(radii.median()), "max": float(radii.max())}

    @property
    def fractions(self):
        return self["fractions"]

    @property
    def uncertified_fraction(self):
        return self.fractions["rank_deficient"] + self.fractions["kernel_touches_boundary"]

    def write(self, fname):
        """
        Write survey rows as CSV to fname, the summary as JSON to <fname>.json and the
        class fractions as CSV to <stem>_fractions.csv

        :return: List of files written
        """
        self.rows.to_csv(fname, index=False)
        summary_fname = fname + ".json"
        write_json(self, summary_fname)
        stem, _ = os.path.splitext(fname)
        fractions_fname = stem + "_fractions.csv"
        pd.DataFrame({
            "certificate_class": LABELS,
            "count": [self["counts"][label] for label in LABELS],
            "fraction": [self.fractions[label] for label in LABELS],
        }).to_csv(fractions_fname, index=False)
        LOG.info(f"Survey written to {fname}, {summary_fname} and {fractions_fname}")
        return [fname, summary_fname, fractions_fname]

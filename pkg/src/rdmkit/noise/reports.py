"""Bias/variance bookkeeping and CSV emission for the noise experiments."""
import csv
from dataclasses import dataclass, field

import numpy as np

CSV_FIELDS = ('system', 'method', 'parameter', 'value', 'observable', 'mse', 'bias2',
              'variance', 'trace_distance', 'samples', 'failures')


def mse_decomposition(estimates, truth):
    """
    (mse, bias^2, variance) of ``estimates`` about ``truth``; the variance uses
    the 1/N normalization so that mse = bias^2 + variance exactly.
    """
    x = np.asarray(estimates, dtype=float)
    if x.size == 0:
        return np.nan, np.nan, np.nan
    dev = x - truth
    mse = float(np.mean(dev ** 2))
    bias = float(np.mean(dev))
    var = float(np.mean((x - x.mean()) ** 2))
    return mse, bias * bias, var


def standard_error(estimates):
    x = np.asarray(estimates, dtype=float)
    return float(x.std(ddof=1) / np.sqrt(len(x))) if len(x) > 1 else np.inf


@dataclass
class ExperimentReport:
    """
    Long-format rows, one per (method, parameter value, observable), plus the
    per-sample estimates the rows were computed from.
    """
    system: str
    parameter: str
    rows: list = field(default_factory=list)
    samples: dict = field(default_factory=dict, repr=False)
    truth: dict = field(default_factory=dict)
    seeds: list = field(default_factory=list, repr=False)
    failures: list = field(default_factory=list, repr=False)

    def row(self, method, value, observable):
        for r in self.rows:
            if r['method'] == method and r['value'] == value and r['observable'] == observable:
                return r
        raise KeyError((method, value, observable))

    def estimates(self, method, value, observable):
        return np.array(self.samples[(method, value)][observable])

    def write_csv(self, path):
        with open(path, 'w', newline='') as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
            writer.writeheader()
            for r in self.rows:
                writer.writerow({k: r.get(k, '') for k in CSV_FIELDS})

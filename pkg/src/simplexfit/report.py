"""Experiment reports: per-trial records, aggregates, deterministic output.

Serialization rules that make reruns byte-identical: floats print with 17
significant digits (exact double round trip), dict keys are sorted, rows are
sorted before writing, and provenance carries a timestamp only when
explicitly requested.
"""

import csv
import datetime
import json

import numpy as np

from . import __version__
from . import kernels

SCHEMA_TRIALS = "simplexfit-trials-v1"
SCHEMA_SWEEP = "simplexfit-sweep-v1"
QUANTILE_GRID = (0.5, 0.9, 0.99, 0.999)
FLOAT_FMT = "%.17g"

SWEEP_COLUMNS = ("n", "body", "success_rate", "c1_quantile", "c2_quantile",
                 "normalized_ratio", "eqb_residual")

RECORD_COLUMNS = ("u_norm", "raw_volume", "lam", "inside", "degenerate")


def format_float(x):
    return FLOAT_FMT % float(x)


def trial_aggregates(records, l_hat, dim):
    """Aggregate statistics, recomputable exactly from the records."""
    n = dim
    inside = np.asarray(records["inside"], dtype=bool)
    degen = np.asarray(records["degenerate"], dtype=bool)
    u_norm = np.asarray(records["u_norm"], dtype=np.float64)
    raw_vol = np.asarray(records["raw_volume"], dtype=np.float64)
    lam = np.asarray(records["lam"], dtype=np.float64)

    u_stat = u_norm / l_hat
    raw_stat = raw_vol ** (1.0 / n) * np.sqrt(n) / l_hat
    result_stat = (raw_vol * lam ** n) ** (1.0 / n) * np.sqrt(n) / l_hat

    def quantiles(x):
        return {str(q): float(np.quantile(x, q)) for q in QUANTILE_GRID}

    return {
        "trials": int(len(inside)),
        "success_rate": float(np.mean(inside)),
        "degenerate_count": int(np.sum(degen)),
        "u_over_l": quantiles(u_stat),
        "raw_vol_stat": quantiles(raw_stat),
        "result_vol_stat": quantiles(result_stat),
    }


def _provenance(stamp):
    prov = {"version": __version__, "backend": kernels.BACKEND, "schema": SCHEMA_TRIALS}
    if stamp:
        prov["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return prov


class ExperimentReport:
    """Per-trial records plus aggregates; optionally sweep rows."""

    def __init__(self, config, records=None, aggregates=None, rows=None,
                 provenance=None, stamp=False):
        self.config = dict(config)
        self.records = records
        self.aggregates = aggregates
        self.rows = rows
        self.provenance = provenance if provenance is not None else _provenance(stamp)
        self.best = None

    # -- JSON ----------------------------------------------------------------

    def to_json_dict(self):
        doc = {
            "config": self.config,
            "provenance": self.provenance,
        }
        if self.records is not None:
            doc["records"] = {k: np.asarray(v).tolist() for k, v in self.records.items()}
        if self.aggregates is not None:
            doc["aggregates"] = self.aggregates
        if self.rows is not None:
            doc["rows"] = self.rows
        return doc

    def json_str(self):
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=1) + "\n"

    def save_json(self, path):
        with open(path, "w") as fh:
            fh.write(self.json_str())

    @classmethod
    def from_json(cls, path, verify=True):
        """Load a report; verify recomputes the aggregates from the per-trial
        records and requires exact equality (self-consistency contract)."""
        with open(path) as fh:
            doc = json.load(fh)
        records = doc.get("records")
        if records is not None:
            records = {
                k: np.asarray(v, dtype=bool if k in ("inside", "degenerate") else np.float64)
                for k, v in records.items()
            }
        rep = cls(config=doc["config"], records=records,
                  aggregates=doc.get("aggregates"), rows=doc.get("rows"),
                  provenance=doc.get("provenance"))
        if verify and rep.records is not None and rep.aggregates is not None:
            fresh = trial_aggregates(rep.records, l_hat=rep.config["l_hat"],
                                     dim=rep.config["dim"])
            if fresh != rep.aggregates:
                raise ValueError("report aggregates do not match per-trial records")
        return rep

    # -- CSV -----------------------------------------------------------------

    def save_trials_csv(self, path):
        if self.records is None:
            raise ValueError("report has no per-trial records")
        cols = [self.records[name] for name in RECORD_COLUMNS]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(("trial",) + RECORD_COLUMNS)
            for i in range(len(cols[0])):
                row = [str(i)]
                for name, col in zip(RECORD_COLUMNS, cols):
                    if name in ("inside", "degenerate"):
                        row.append("1" if col[i] else "0")
                    else:
                        row.append(format_float(col[i]))
                writer.writerow(row)

    def save_sweep_csv(self, path):
        if self.rows is None:
            raise ValueError("report has no sweep rows")
        rows = sorted(self.rows, key=lambda r: (r["n"], r["body"]))
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(SWEEP_COLUMNS)
            for r in rows:
                out = []
                for col in SWEEP_COLUMNS:
                    v = r[col]
                    if isinstance(v, str):
                        out.append(v)
                    elif isinstance(v, (int, np.integer)):
                        out.append(str(int(v)))
                    else:
                        out.append(format_float(v))
                writer.writerow(out)


def write_csv_table(path, names, columns):
    """Small helper for fixed-schema tables (reference values, samples)."""
    columns = [np.asarray(c) for c in columns]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for i in range(len(columns[0])):
            writer.writerow([
                format_float(c[i]) if np.issubdtype(c.dtype, np.floating) else str(c[i])
                for c in columns
            ])

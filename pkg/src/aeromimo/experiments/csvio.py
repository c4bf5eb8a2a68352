"""Result rows and the CSV contract.

Header (frozen): axis,scheme,environment,sum_se,se_stderr,per_ue_se_json,
trials,seed,config_hash,solver_iters,solver_residual. Floats are written in
full-precision scientific notation and the per-UE list as JSON (quoted by the
csv module), so emitted files are byte-stable and round-trip exactly.
"""

import csv
import io
import json
from dataclasses import dataclass

__all__ = ["ResultRow", "CSV_HEADER", "emit_csv", "render_csv", "parse_csv", "parse_csv_text"]

CSV_HEADER = [
    "axis", "scheme", "environment", "sum_se", "se_stderr", "per_ue_se_json",
    "trials", "seed", "config_hash", "solver_iters", "solver_residual",
]


@dataclass
class ResultRow:
    axis_value: float
    scheme: str
    environment: str
    sum_se: float
    se_stderr: float
    per_ue_se: list
    trials: int
    seed: int
    config_hash: str
    solver_iters: int = 0
    solver_residual: float = 0.0

    def key(self):
        return (self.axis_value, self.scheme)


def _fmt(x: float) -> str:
    return f"{float(x):.17e}"


def render_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in sorted(rows, key=ResultRow.key):
        writer.writerow([
            _fmt(row.axis_value),
            row.scheme,
            row.environment,
            _fmt(row.sum_se),
            _fmt(row.se_stderr),
            json.dumps([float(v) for v in row.per_ue_se], separators=(",", ":")),
            str(row.trials),
            str(row.seed),
            row.config_hash,
            str(row.solver_iters),
            _fmt(row.solver_residual),
        ])
    return buf.getvalue()


def emit_csv(rows, path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(render_csv(rows))
    except OSError as exc:
        raise OSError(f"failed to write CSV {path}: {exc}") from exc


def parse_csv_text(text: str) -> list:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_HEADER:
        raise ValueError(f"CSV header mismatch: {header}")
    rows = []
    for rec in reader:
        rows.append(ResultRow(
            axis_value=float(rec[0]),
            scheme=rec[1],
            environment=rec[2],
            sum_se=float(rec[3]),
            se_stderr=float(rec[4]),
            per_ue_se=json.loads(rec[5]),
            trials=int(rec[6]),
            seed=int(rec[7]),
            config_hash=rec[8],
            solver_iters=int(rec[9]),
            solver_residual=float(rec[10]),
        ))
    return rows


def parse_csv(path) -> list:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return parse_csv_text(fh.read())

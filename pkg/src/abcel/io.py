"""CSV and JSON output with atomic writes.

Floats are written with ``repr`` so that reruns produce byte-identical
files.  Non-finite values (the ``-inf`` sentinel, NaN) become empty CSV
fields and JSON ``null``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np


def format_value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return repr(x) if math.isfinite(x) else ""
    return str(x)


def atomic_write_text(path, text: str) -> Path:
    """Write via a temporary file in the target directory plus rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.",
                               suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows) -> Path:
    return atomic_write_text(path, csv_text(header, rows))


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def jsonable(obj):
    """Recursively convert numpy values and non-finite floats for JSON."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def write_json(path, obj) -> Path:
    text = json.dumps(jsonable(obj), indent=2, sort_keys=True,
                      allow_nan=False)
    return atomic_write_text(path, text + "\n")


def sidecar_path(path) -> Path:
    """``results.csv`` -> ``results.json``."""
    return Path(path).with_suffix(".json")


def write_chain(path, chain, param_names=None, metadata=None) -> Path:
    """Chain CSV (``theta_1..theta_d, log_post``) plus JSON sidecar."""
    d = chain.draws.shape[1]
    header = [f"theta_{j + 1}" for j in range(d)] + ["log_post"]
    rows = (list(row) + [lp] for row, lp in zip(chain.draws,
                                                 chain.log_post_trace))
    write_csv(path, header, rows)
    meta = dict(metadata or {})
    meta.update(acceptance_rate=chain.acceptance_rate,
                burn_in_acceptance_rate=chain.burn_in_acceptance_rate,
                n_infeasible_proposals=chain.n_infeasible_proposals,
                n_nonconverged=chain.n_nonconverged,
                n_init_draws=chain.n_init_draws,
                init=chain.init)
    if param_names is not None:
        meta["param_names"] = list(param_names)
    write_json(sidecar_path(path), meta)
    return Path(path)


def read_chain(path) -> tuple[np.ndarray, np.ndarray]:
    """``(draws, log_post)`` from a chain CSV."""
    _, rows = read_csv(path)
    arr = np.array([[float(v) if v else -math.inf for v in r] for r in rows])
    return arr[:, :-1], arr[:, -1]

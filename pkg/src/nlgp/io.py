"""Solution and branch files: JSON header with a compact binary payload.

Arrays are embedded as base64-encoded little-endian float64 blocks so a
solution file round-trips bit-exactly.  All writes are atomic (temp file
plus rename).
"""

from __future__ import annotations

import base64
import json
import os
import tempfile

import numpy as np

from .potentials import make_potential
from .spectral import Grid

SOLUTION_FORMAT = "nlgp-solution-v1"


def atomic_write_text(path, text: str):
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _encode(a: np.ndarray) -> str:
    return base64.b64encode(np.asarray(a, dtype="<f8").tobytes()).decode("ascii")


def _decode(s: str) -> np.ndarray:
    return np.frombuffer(base64.b64decode(s.encode("ascii")), dtype="<f8").copy()


def solution_to_dict(sol, seed=None, extra=None) -> dict:
    f = sol.fields
    doc = {
        "format": SOLUTION_FORMAT,
        "spec": {"kind": sol.spec.kind, "params": dict(sol.spec.params)},
        "c": f.c,
        "grid": {"half_length": f.grid.half_length, "size": f.grid.size},
        "converged": sol.converged,
        "status": sol.status,
        "newton_iters": sol.newton_iters,
        "residuals": {"sup": sol.residual_sup, "l2": sol.residual_l2},
        "E": sol.E,
        "p": sol.p,
        "J": sol.J,
        "identity": sol.identity_report.as_dict() if sol.identity_report else None,
        "payload": {
            "encoding": "base64/float64-le",
            "rho": _encode(f.rho),
            "theta": _encode(f.theta),
            "eta": _encode(f.eta),
        },
    }
    if seed is not None:
        doc["seed"] = seed
    if extra:
        doc.update(extra)
    return doc


def write_solution(path, sol, seed=None, extra=None):
    atomic_write_text(path, json.dumps(solution_to_dict(sol, seed, extra), indent=1))


def read_solution(path):
    """Load a solution file: (spec, grid, c, arrays dict, full document)."""
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != SOLUTION_FORMAT:
        raise ValueError(f"not a solution file: {path}")
    spec = make_potential(doc["spec"]["kind"], **doc["spec"]["params"])
    grid = Grid(doc["grid"]["half_length"], doc["grid"]["size"])
    payload = doc["payload"]
    arrays = {k: _decode(payload[k]) for k in ("rho", "theta", "eta")}
    return spec, grid, float(doc["c"]), arrays, doc


BRANCH_COLUMNS = "c,E,p,J,eta_max,min_rho,decay_rate_fit,newton_iters"


def fmt_cell(v) -> str:
    """Full-precision text for one CSV cell (shortest round-trip repr)."""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_csv(path, header: str, rows):
    lines = [header] + [",".join(fmt_cell(v) for v in row) for row in rows]
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_branch_csv(path, branch, decay_rates=None):
    rates = decay_rates or {}
    rows = [(s.c, s.E, s.p, s.J, s.eta_max, s.fields.min_rho,
             rates.get(s.c, float("nan")), s.newton_iters)
            for s in branch.solutions]
    write_csv(path, BRANCH_COLUMNS, rows)

"""Readers and writers for field JSON, invariant CSV/JSON and spectrum CSV."""

from __future__ import annotations

import csv
import json
import re
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .invariants import InvariantRecord
from .matrix_trig import MatrixField


class FormatError(ValueError):
    pass


def field_to_json(U: MatrixField, t: float | None = None) -> dict:
    modes = []
    for n, c in zip(U.modes, U.coeffs):
        if np.any(c != 0):
            modes.append({"n": int(n), "re": c.real.tolist(), "im": c.imag.tolist()})
    out = {"d": U.d, "modes": modes}
    if t is not None:
        out["t"] = float(t)
    return out


def field_from_json(obj: dict) -> MatrixField:
    try:
        d = int(obj["d"])
        if d < 1:
            raise FormatError("d must be >= 1")
        modes = {}
        for m in obj["modes"]:
            re = np.asarray(m["re"], dtype=float)
            im = np.asarray(m.get("im", np.zeros((d, d))), dtype=float)
            if re.shape != (d, d) or im.shape != (d, d):
                raise FormatError(f"mode {m['n']}: expected {d}x{d} matrices")
            n = int(m["n"])
            if n in modes:
                raise FormatError(f"duplicate mode {n}")
            modes[n] = re + 1j * im
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed field JSON: {exc}") from exc
    return MatrixField.from_modes(modes, d)


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def write_field(path, U: MatrixField, t: float | None = None):
    Path(path).write_text(dumps(field_to_json(U, t)))


def read_field(path) -> tuple[MatrixField, float | None]:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    t = obj.get("t")
    return field_from_json(obj), (None if t is None else float(t))


_SNAP = re.compile(r"snap_(\d+)\.json$")


def read_snapshots(directory) -> list[tuple[float, MatrixField]]:
    """Snapshots ``snap_<index>.json`` ordered by index."""
    files = sorted(
        (int(m.group(1)), p) for p in Path(directory).iterdir() if (m := _SNAP.match(p.name))
    )
    if not files:
        raise FormatError(f"no snap_<index>.json files in {directory}")
    out = []
    for idx, p in files:
        U, t = read_field(p)
        out.append((float(idx) if t is None else t, U))
    return out


def read_fields(path) -> list[tuple[float, MatrixField]]:
    """A single field file (at ``t`` or 0) or a directory of snapshots."""
    p = Path(path)
    if p.is_dir():
        return read_snapshots(p)
    U, t = read_field(p)
    return [(0.0 if t is None else t, U)]


def invariants_header(K: int) -> list[str]:
    cols = ["t"]
    for k in range(K + 1):
        cols += [f"E{k}_re", f"E{k}_im"]
    return cols + ["herm_defect"]


def write_invariants_csv(fh, records: Sequence[InvariantRecord]):
    K = len(records[0].E) - 1 if records else 0
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(invariants_header(K))
    for r in records:
        row = [repr(r.t)]
        for e in r.E:
            row += [repr(float(np.real(e))), repr(float(np.imag(e)))]
        w.writerow(row + [repr(r.herm_defect)])


def matrix_sidecar(records: Iterable[InvariantRecord]) -> dict:
    """Matrix invariants keyed by ``repr(t)``; entry ``k`` starts at order -1."""
    return {
        repr(r.t): [
            {"k": k - 1, "re": m.real.tolist(), "im": m.imag.tolist()} for k, m in enumerate(r.M)
        ]
        for r in records
    }


def write_spectrum_csv(fh, times: Sequence[float], spectra: Sequence[np.ndarray]):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", "index", "eigenvalue"])
    for t, ev in zip(times, spectra):
        for i, v in enumerate(ev):
            w.writerow([repr(float(t)), i, repr(float(v))])


def read_spectrum_csv(fh) -> dict[float, np.ndarray]:
    rows: dict[float, list[tuple[int, float]]] = {}
    for row in csv.DictReader(fh):
        rows.setdefault(float(row["t"]), []).append((int(row["index"]), float(row["eigenvalue"])))
    return {t: np.array([v for _, v in sorted(r)]) for t, r in rows.items()}

"""CSV and JSON serialization of sampled functions and spectra.

Numbers are written with :func:`repr` (shortest round-trip decimal) and read
with :func:`float`, which is locale independent. Files are written to a
temporary sibling first and moved into place, so readers never see a
partially written file.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from fracsobolev.errors import GridMismatchError, UsageError
from fracsobolev.grid import GridSpec, SampledFunction, Spectrum

#: Relative tolerance for recognizing a grid from its node coordinates.
GRID_MATCH_TOL = 1e-9

SAMPLE_HEADER = ("x", "value")
SPECTRUM_HEADER = ("xi", "re", "im")


def atomic_write(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _rows_to_text(header: tuple[str, ...], columns: list[np.ndarray]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in zip(*columns):
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def _read_table(text: str, header: tuple[str, ...]) -> np.ndarray:
    reader = csv.reader(io.StringIO(text))
    try:
        first = next(reader)
    except StopIteration:
        raise UsageError("empty CSV input") from None
    if tuple(h.strip() for h in first) != header:
        raise UsageError(f"expected CSV header {','.join(header)!r}, got {','.join(first)!r}")
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise UsageError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            rows.append([float(v) for v in row])
        except ValueError as exc:
            raise UsageError(f"line {lineno}: {exc}") from None
    if not rows:
        raise UsageError("CSV input has no data rows")
    return np.array(rows, dtype=np.float64)


def infer_grid(x: np.ndarray) -> GridSpec:
    """Grid whose nodes are ``x`` (``x_0 = -L``, ``N`` rows)."""
    grid = GridSpec(-float(x[0]), x.size)
    if not np.allclose(x, grid.x, rtol=0.0, atol=GRID_MATCH_TOL * grid.half_width):
        raise GridMismatchError("x column is not a uniform grid x_j = -L + j*2L/N")
    return grid


def infer_spectrum_grid(xi: np.ndarray) -> GridSpec:
    """Grid whose frequency bins are ``xi`` (``xi_0 = -N/(4L)``)."""
    n = xi.size
    if not xi[0] < 0:
        raise GridMismatchError("first frequency bin must be negative")
    grid = GridSpec(-n / (4 * float(xi[0])), n)
    if not np.allclose(xi, grid.xi, rtol=0.0, atol=GRID_MATCH_TOL * abs(float(xi[0]))):
        raise GridMismatchError("xi column is not the frequency grid k/(2L)")
    return grid


def sampled_to_csv(u: SampledFunction) -> str:
    return _rows_to_text(SAMPLE_HEADER, [u.x, u.values])


def sampled_from_csv(text: str) -> SampledFunction:
    table = _read_table(text, SAMPLE_HEADER)
    return SampledFunction(infer_grid(table[:, 0]), table[:, 1])


def spectrum_to_csv(spec: Spectrum) -> str:
    return _rows_to_text(SPECTRUM_HEADER, [spec.xi, spec.coeffs.real, spec.coeffs.imag])


def spectrum_from_csv(text: str) -> Spectrum:
    table = _read_table(text, SPECTRUM_HEADER)
    return Spectrum(infer_spectrum_grid(table[:, 0]), table[:, 1] + 1j * table[:, 2])


def sampled_to_json(u: SampledFunction) -> str:
    doc = {
        "grid": {"half_width": u.grid.half_width, "points": u.grid.points},
        "x": u.x.tolist(),
        "value": u.values.tolist(),
    }
    return json.dumps(doc) + "\n"


def sampled_from_json(text: str) -> SampledFunction:
    try:
        doc = json.loads(text)
        grid = GridSpec(float(doc["grid"]["half_width"]), int(doc["grid"]["points"]))
        values = np.asarray(doc["value"], dtype=np.float64)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed JSON sampled function: {exc}") from None
    return SampledFunction(grid, values)


def spectrum_to_json(spec: Spectrum) -> str:
    doc = {
        "grid": {"half_width": spec.grid.half_width, "points": spec.grid.points},
        "xi": spec.xi.tolist(),
        "re": spec.coeffs.real.tolist(),
        "im": spec.coeffs.imag.tolist(),
    }
    return json.dumps(doc) + "\n"


def spectrum_from_json(text: str) -> Spectrum:
    try:
        doc = json.loads(text)
        grid = GridSpec(float(doc["grid"]["half_width"]), int(doc["grid"]["points"]))
        coeffs = np.asarray(doc["re"], dtype=np.float64) + 1j * np.asarray(doc["im"], dtype=np.float64)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed JSON spectrum: {exc}") from None
    return Spectrum(grid, coeffs)


def _looks_like_json(text: str) -> bool:
    return text.lstrip().startswith("{")


def read_sampled(text: str) -> SampledFunction:
    return sampled_from_json(text) if _looks_like_json(text) else sampled_from_csv(text)


def read_spectrum(text: str) -> Spectrum:
    return spectrum_from_json(text) if _looks_like_json(text) else spectrum_from_csv(text)


def write_sampled(path: str | os.PathLike, u: SampledFunction, fmt: str = "csv") -> None:
    atomic_write(path, sampled_to_json(u) if fmt == "json" else sampled_to_csv(u))


def write_spectrum(path: str | os.PathLike, spec: Spectrum, fmt: str = "csv") -> None:
    atomic_write(path, spectrum_to_json(spec) if fmt == "json" else spectrum_to_csv(spec))

"""File formats: station CSV, graph JSON, signal matrices, coefficient dumps."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import ParameterError
from .graph_core import Graph, StationTable

PathLike = Union[str, Path]

STATION_HEADER = ["station_id", "lat", "lon"]


class InputFormatError(ParameterError):
    """A malformed input file; ``line`` is 1-based when known."""

    def __init__(self, msg: str, path=None, line: Optional[int] = None):
        where = f"{path}" if path is not None else "input"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {msg}")
        self.path = path
        self.line = line


# --- JSON -------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r} to JSON")
    s = format(x, ".17g")
    if not any(ch in s for ch in ".eE"):
        s += ".0"
    return s


def _encode(obj, indent: int, level: int) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," + (pad if indent else " ")
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (json.dumps(str(k)) + ": " + _encode(v, indent, level + 1) for k, v in obj.items())
        return "{" + pad + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # numeric rows stay on one line
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, 0, 0) for v in obj) + "]"
        return "[" + pad + sep.join(_encode(v, indent, level + 1) for v in obj) + end + "]"
    raise TypeError(f"object of type {type(obj).__name__} is not JSON serializable")


def dumps_json(obj, indent: int = 2) -> str:
    """Serialize with floats fixed at 17 significant digits (byte-stable output)."""
    return _encode(obj, indent, 0) + "\n"


def write_json(path: PathLike, obj) -> None:
    Path(path).write_text(dumps_json(obj), encoding="utf-8")


def read_json(path: PathLike):
    p = Path(path)
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputFormatError("file not found", p) from None
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON: {exc.msg}", p, exc.lineno) from None


# --- stations -----------------------------------------------------------------

def read_stations_csv(path: PathLike) -> StationTable:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputFormatError("file not found", p) from None
    rows = list(csv.reader(text.splitlines()))
    if not rows or [c.strip() for c in rows[0]] != STATION_HEADER:
        raise InputFormatError(f"expected header {','.join(STATION_HEADER)}", p, 1)
    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise InputFormatError(f"expected 3 fields, got {len(row)}", p, lineno)
        sid = row[0].strip()
        try:
            lat, lon = float(row[1]), float(row[2])
        except ValueError:
            raise InputFormatError(f"non-numeric coordinate in {row!r}", p, lineno) from None
        if not (-90 <= lat <= 90 and -180 <= lon <= 180):
            raise InputFormatError(f"coordinate out of range: ({lat}, {lon})", p, lineno)
        records.append((sid, lat, lon))
    try:
        return StationTable.from_records(records)
    except ParameterError as exc:
        raise InputFormatError(str(exc), p) from None


def write_stations_csv(path: PathLike, stations: StationTable) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(STATION_HEADER)
        for sid, la, lo in zip(stations.ids, stations.lat, stations.lon):
            w.writerow([sid, _fmt_float(float(la)), _fmt_float(float(lo))])


# --- graphs -------------------------------------------------------------------

def graph_to_dict(g: Graph) -> dict:
    d = {"n": g.n_vertices, "edges": [[i, j, w] for i, j, w in g.edges()]}
    if g.stations is not None:
        d["stations"] = [{"station_id": sid, "lat": float(la), "lon": float(lo)}
                         for sid, la, lo in zip(g.stations.ids, g.stations.lat, g.stations.lon)]
    return d


def graph_from_dict(d: dict, source=None) -> Graph:
    try:
        n = int(d["n"])
        w = np.zeros((n, n))
        for i, j, wij in d["edges"]:
            i, j = int(i), int(j)
            if not (0 <= i < j < n):
                raise InputFormatError(f"edge ({i}, {j}) must satisfy 0 <= i < j < n", source)
            w[i, j] = w[j, i] = float(wij)
        stations = None
        if "stations" in d:
            stations = StationTable.from_records(
                [(s["station_id"], float(s["lat"]), float(s["lon"])) for s in d["stations"]])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise InputFormatError(f"malformed graph JSON ({exc!r})", source) from None
    return Graph(w, stations=stations)


def read_graph_json(path: PathLike) -> Graph:
    return graph_from_dict(read_json(path), Path(path))


# --- signals ------------------------------------------------------------------

def read_signal(path: PathLike) -> np.ndarray:
    """Read an ``(N, T)`` matrix from headerless CSV or ``.bin`` + JSON sidecar."""
    p = Path(path)
    if not p.exists():
        raise InputFormatError("file not found", p)
    if p.suffix == ".bin":
        meta = read_json(p.with_suffix(".json"))
        try:
            n, t = int(meta["n"]), int(meta["t"])
        except (KeyError, TypeError, ValueError):
            raise InputFormatError("sidecar needs integer fields n and t", p.with_suffix(".json"))
        data = np.fromfile(p, dtype="<f8")
        if data.size != n * t:
            raise InputFormatError(f"expected {n * t} float64 values, found {data.size}", p)
        return data.reshape(n, t).astype(float)
    rows = []
    width = None
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            vals = [float(v) for v in line.split(",")]
        except ValueError:
            raise InputFormatError("non-numeric entry", p, lineno) from None
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise InputFormatError(f"expected {width} columns, got {len(vals)}", p, lineno)
        rows.append(vals)
    if not rows:
        raise InputFormatError("empty signal file", p)
    x = np.array(rows, dtype=float)
    if not np.all(np.isfinite(x)):
        raise InputFormatError("non-finite entries", p)
    return x


def write_signal(path: PathLike, x: np.ndarray, fs_hz: Optional[float] = None) -> None:
    p = Path(path)
    x = np.asarray(x, dtype=float)
    if p.suffix == ".bin":
        x.astype("<f8").tofile(p)
        meta = {"n": x.shape[0], "t": x.shape[1], "fs_hz": fs_hz}
        write_json(p.with_suffix(".json"), meta)
    else:
        np.savetxt(p, x, delimiter=",", fmt="%.17g")


# --- coefficients -------------------------------------------------------------

def write_coefficients_csv(path: PathLike, c: np.ndarray, threshold: float = 0.0) -> int:
    """Dump entries with ``|value| > threshold``; returns the number written."""
    c = np.asarray(c, dtype=float)
    idx = np.argwhere(np.abs(c) > threshold)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["scale_index", "vertex", "tau", "value"])
        for si, m, tau in idx:
            w.writerow([int(si), int(m), int(tau), _fmt_float(float(c[si, m, tau]))])
    return len(idx)


def read_coefficients_csv(path: PathLike, shape) -> np.ndarray:
    c = np.zeros(shape)
    with open(path, newline="", encoding="utf-8") as fh:
        r = csv.DictReader(fh)
        for row in r:
            c[int(row["scale_index"]), int(row["vertex"]), int(row["tau"])] = float(row["value"])
    return c


def frame_metadata(frame) -> dict:
    b = frame.bounds()
    return {"scales": [float(s) for s in frame.scales], "beta": frame.beta, "A": b.A, "B": b.B}

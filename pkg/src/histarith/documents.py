"""CSV sample ingestion and JSON documents for histograms and results.

Floats are written with Python's shortest round-trip ``repr`` (what the
``json`` module emits), so reading a document back reproduces every value
bit for bit.
"""

from __future__ import annotations

import io
import json
import math
from pathlib import Path

import numpy as np

from .arithmetic import Op, Rect, ResultDistribution, Provenance
from .core import Bin, CurveKind, DataError, PiecewiseAnalyticCurve, ReliableHistogram, Sample, derivative

FORMAT_VERSION = 1


def _open_text(source):
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8")
    if isinstance(source, io.TextIOBase) or hasattr(source, "read"):
        return source
    raise DataError(f"cannot read from {source!r}")


def _parse_float(text: str):
    try:
        v = float(text)
    except ValueError:
        return None
    return v


def read_sample_csv(source) -> Sample:
    """One value per line; a non-numeric first line is taken as a header."""
    fh = _open_text(source)
    try:
        lines = fh.read().splitlines()
    finally:
        if fh is not source:
            fh.close()
    values = []
    header_checked = False
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            continue
        v = _parse_float(text)
        if v is None and not header_checked:
            header_checked = True
            continue
        header_checked = True
        if v is None or not math.isfinite(v):
            raise DataError(f"line {lineno}: not a number")
        values.append(v)
    if not values:
        raise DataError("empty sample file")
    return Sample(values)


# ---------------------------------------------------------------------------
# histogram documents
# ---------------------------------------------------------------------------


def histogram_to_dict(hist: ReliableHistogram) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "histogram",
        "edges": [float(e) for e in hist.edges],
        "counts": [int(b.count) for b in hist.bins],
        "gammas": [float(b.gamma) for b in hist.bins],
        "n": int(hist.n),
        "config": hist.config,
        "flags": {"degenerate": hist.degenerate, "unreliable": hist.unreliable},
    }
    if all(b.has_stats for b in hist.bins):
        doc["stats"] = {
            name: [float(getattr(b, name)) for b in hist.bins] for name in ("x_min", "x_max", "mean", "s", "delta")
        }
    return doc


def _check_version(doc: dict, kind: str):
    if not isinstance(doc, dict):
        raise DataError("document must be a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise DataError(f"unsupported format_version {doc.get('format_version')!r}, expected {FORMAT_VERSION}")
    if doc.get("kind") != kind:
        raise DataError(f"expected a {kind} document, got kind {doc.get('kind')!r}")


def histogram_from_dict(doc: dict) -> ReliableHistogram:
    _check_version(doc, "histogram")
    try:
        edges = [float(e) for e in doc["edges"]]
        counts = [int(c) for c in doc["counts"]]
        gammas = [float(g) for g in doc["gammas"]]
        n = int(doc["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed histogram document: {exc}") from None
    if any(b <= a for a, b in zip(edges[:-1], edges[1:])):
        raise DataError("edges not increasing")
    if len(edges) != len(counts) + 1 or len(gammas) != len(counts):
        raise DataError("array lengths inconsistent")
    if sum(counts) != n:
        raise DataError("counts do not sum to n")
    stats = doc.get("stats")
    bins = []
    for j, (lo, hi, c, g) in enumerate(zip(edges[:-1], edges[1:], counts, gammas)):
        extra = {}
        if stats:
            extra = {name: float(stats[name][j]) for name in ("x_min", "x_max", "mean", "s", "delta")}
        bins.append(Bin(lo, hi, c, g, **extra))
    flags = doc.get("flags") or {}
    return ReliableHistogram(
        tuple(bins),
        degenerate=bool(flags.get("degenerate", False)),
        unreliable=bool(flags.get("unreliable", False)),
        config=doc.get("config"),
    )


# ---------------------------------------------------------------------------
# result documents
# ---------------------------------------------------------------------------


def _coeff_rows(curve: PiecewiseAnalyticCurve) -> list:
    return [[float(c) for c in row] for row in curve.coeffs]


def result_to_dict(d: ResultDistribution) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "result",
        "op": d.op.value,
        "support": [float(v) for v in d.support],
        "breakpoints": [float(v) for v in d.breakpoints],
        "segments": {"cdf": _coeff_rows(d.cdf), "pdf": _coeff_rows(d.pdf)},
        "provenance": [
            {"interval_index": p.interval_index, "pairs": [list(pr) for pr in p.pairs], "gamma_product": p.gamma_product}
            for p in d.provenance
        ],
        "rects": [
            {"ax": r.ax, "bx": r.bx, "ay": r.ay, "by": r.by, "mass": r.mass, "gamma": r.gamma, "j": r.j, "r": r.r}
            for r in d.rects
        ],
    }


def result_from_dict(doc: dict) -> ResultDistribution:
    _check_version(doc, "result")
    try:
        op = Op(doc["op"])
        bp = np.array(doc["breakpoints"], dtype=np.float64)
        cdf_rows = np.array(doc["segments"]["cdf"], dtype=np.float64)
        pdf_rows = np.array(doc["segments"]["pdf"], dtype=np.float64)
        rects = tuple(
            Rect(
                float(r["ax"]), float(r["bx"]), float(r["ay"]), float(r["by"]),
                float(r["mass"]), float(r["gamma"]), int(r["j"]), int(r["r"]),
            )
            for r in doc["rects"]
        )
        prov = tuple(
            Provenance(int(p["interval_index"]), tuple(tuple(int(v) for v in pr) for pr in p["pairs"]), float(p["gamma_product"]))
            for p in doc["provenance"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed result document: {exc}") from None
    if bp.ndim != 1 or np.any(np.diff(bp) <= 0):
        raise DataError("breakpoints not increasing")
    if cdf_rows.shape != (bp.size - 1, 7) or pdf_rows.shape != cdf_rows.shape:
        raise DataError("segment arrays inconsistent with breakpoints")
    cdf = PiecewiseAnalyticCurve(bp, cdf_rows, CurveKind.CDF)
    pdf = PiecewiseAnalyticCurve(bp, pdf_rows, CurveKind.PDF)
    if derivative(cdf) != pdf:
        raise DataError("pdf segments are not the derivative of the cdf segments")
    if len(prov) != bp.size - 1:
        raise DataError("provenance must have one entry per interval")
    if list(doc.get("support", cdf.support)) != list(cdf.support):
        raise DataError("support does not match breakpoints")
    return ResultDistribution(op, rects, cdf, pdf, prov)


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------


def dumps(obj) -> str:
    if isinstance(obj, ReliableHistogram):
        doc = histogram_to_dict(obj)
    elif isinstance(obj, ResultDistribution):
        doc = result_to_dict(obj)
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON: {exc}") from None
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind == "histogram":
        return histogram_from_dict(doc)
    if kind == "result":
        return result_from_dict(doc)
    raise DataError(f"unknown document kind {kind!r}")


def write_document(obj, path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read_document(path):
    return loads(Path(path).read_text(encoding="utf-8"))

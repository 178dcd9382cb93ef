"""Point-set JSON files (schema ``anglekit/points/v1``)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .census import ArcPoint, PointF
from .exact import PointR, as_rational
from .generators import GenSpec, PlaneCertificate, verify_certificate

SCHEMA = "anglekit/points/v1"
MODELS = ("exact", "arc", "float")


class FormatError(ValueError):
    pass


@dataclass
class PointSet:
    model: str
    points: list
    dimension: int
    labels: dict[int, int] = field(default_factory=dict)
    provenance: dict | None = None
    certificate: PlaneCertificate | None = None


def model_of(points) -> str:
    kinds = {type(p) for p in points}
    for kind, model in ((PointR, "exact"), (ArcPoint, "arc"), (PointF, "float")):
        if kinds == {kind}:
            return model
    raise TypeError("points must all share one coordinate model")


def make_pointset(points, labels=None, spec: GenSpec | None = None,
                  certificate: PlaneCertificate | None = None) -> PointSet:
    model = model_of(points)
    dim = 2 if model == "arc" else len(points[0].coords)
    return PointSet(model, list(points), dim, dict(labels or {}),
                    spec.to_dict() if spec else None, certificate)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def to_json(ps: PointSet) -> dict:
    recs = []
    for p in sorted(ps.points, key=lambda p: p.id):
        if ps.model == "exact":
            recs.append({"id": p.id, "coords": [_frac(c) for c in p.coords]})
        elif ps.model == "arc":
            recs.append({"id": p.id, "t": _frac(p.t)})
        else:
            recs.append({"id": p.id, "coords": list(p.coords)})
    out: dict[str, Any] = {
        "schema": SCHEMA,
        "dimension": ps.dimension,
        "model": ps.model,
        "points": recs,
    }
    if ps.labels:
        out["labels"] = {str(k): v for k, v in sorted(ps.labels.items())}
    if ps.provenance is not None:
        out["provenance"] = ps.provenance
    if ps.certificate is not None:
        out["certificate"] = ps.certificate.to_dict()
    return out


def _rational(s) -> Fraction:
    if not isinstance(s, (str, int)) or isinstance(s, bool):
        raise FormatError(f"expected a 'num/den' string, got {s!r}")
    try:
        return as_rational(s)
    except (ValueError, ZeroDivisionError) as e:
        raise FormatError(f"bad rational {s!r}") from e


def from_json(doc: dict, check_certificate: bool = True) -> PointSet:
    """Parse and validate a point-set document.

    A plane certificate, when present, is re-verified against the points.
    """
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise FormatError(f"not an {SCHEMA} document")
    model = doc.get("model")
    if model not in MODELS:
        raise FormatError(f"unknown model {model!r}")
    dim = doc.get("dimension")
    if not isinstance(dim, int) or dim < 1:
        raise FormatError("dimension must be a positive integer")
    recs = doc.get("points")
    if not isinstance(recs, list) or not recs:
        raise FormatError("points must be a non-empty list")

    pts = []
    try:
        for r in recs:
            pid = r["id"]
            if not isinstance(pid, int) or isinstance(pid, bool):
                raise FormatError(f"point id {pid!r} is not an integer")
            if model == "arc":
                pts.append(ArcPoint(pid, _rational(r["t"])))
                continue
            coords = r["coords"]
            if len(coords) != dim:
                raise FormatError(f"point {pid} has {len(coords)} coords, expected {dim}")
            if model == "exact":
                pts.append(PointR(pid, tuple(_rational(c) for c in coords)))
            else:
                if any(isinstance(c, (str, bool)) for c in coords):
                    raise FormatError(f"float coords of point {pid} must be numbers")
                pts.append(PointF(pid, tuple(coords)))
    except (KeyError, TypeError) as e:
        raise FormatError(f"malformed point record: {e}") from e
    except ValueError as e:
        raise FormatError(str(e)) from e

    ids = sorted(p.id for p in pts)
    if ids != list(range(len(pts))):
        raise FormatError("point ids must be unique and dense from 0")
    pts.sort(key=lambda p: p.id)
    coords = [p.t if model == "arc" else p.coords for p in pts]
    if len(set(coords)) != len(coords):
        raise FormatError("coincident points")

    labels = {}
    for k, v in (doc.get("labels") or {}).items():
        try:
            labels[int(k)] = int(v)
        except (TypeError, ValueError) as e:
            raise FormatError(f"bad label {k!r}: {v!r}") from e
    if labels and set(labels) != set(ids):
        raise FormatError("labels must cover every point id")

    cert = None
    if doc.get("certificate") is not None:
        if model != "exact":
            raise FormatError("plane certificates only apply to exact point sets")
        try:
            cert = PlaneCertificate.from_dict(doc["certificate"])
        except (KeyError, TypeError, ValueError) as e:
            raise FormatError(f"malformed certificate: {e}") from e
        if check_certificate:
            problems = verify_certificate(pts, cert, len(cert.basis[0]))
            if problems:
                raise FormatError("certificate check failed: " + "; ".join(problems))
    return PointSet(model, pts, dim, labels, doc.get("provenance"), cert)


def write_pointset(ps: PointSet, path: str | Path | None = None) -> str:
    text = json.dumps(to_json(ps), indent=1) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def read_pointset(path: str | Path, check_certificate: bool = True) -> PointSet:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e})") from e
    return from_json(doc, check_certificate)

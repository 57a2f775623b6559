"""Body-spec files: JSON objects {"type", "dim", "parameters"}.

Supported types and parameters:

    ball           center (list), radius
    ellipsoid      center, semi_axes, rotation (optional n x n, orthogonal)
    polytope       normals (m x n) and offsets (m), or halfspaces [[normal, offset], ...]
    cube           half_width (default 1), center (optional)
    radial_series  base, coefficients [[degree, index, value], ...]
    mollified      body (nested spec), delta, eta_order (optional)
    reflect        body (nested spec)
"""
import json
from pathlib import Path

import numpy as np

from ..errors import InvalidBody
from .bodies import Ball, Ellipsoid, Polytope, RadialSeries, StarBody, cube
from .mollify import MollifiedBody


def _require(params, key):
    if key not in params:
        raise InvalidBody(f"missing parameter {key!r}")
    return params[key]


def body_from_spec(spec):
    """Build a body from a parsed spec dict."""
    if not isinstance(spec, dict):
        raise InvalidBody("body spec must be a JSON object")
    kind = spec.get("type")
    dim = spec.get("dim")
    params = spec.get("parameters", {})
    if not isinstance(params, dict):
        raise InvalidBody("parameters must be an object")
    try:
        body = _build(kind, dim, params)
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, InvalidBody):
            raise
        raise InvalidBody(f"malformed {kind} spec: {exc}") from exc
    if dim is not None and body.dim != int(dim):
        raise InvalidBody(f"declared dim {dim} does not match parameters (dim {body.dim})")
    return body


def _build(kind, dim, params):
    if kind == "ball":
        center = params.get("center")
        if center is None:
            if dim is None:
                raise InvalidBody("ball needs a center or a dim")
            center = np.zeros(int(dim))
        return Ball(center, float(params.get("radius", 1.0)))
    if kind == "ellipsoid":
        axes = _require(params, "semi_axes")
        return Ellipsoid(params.get("center"), axes, params.get("rotation"))
    if kind == "polytope":
        if "halfspaces" in params:
            hs = params["halfspaces"]
            normals = [h[0] for h in hs]
            offsets = [h[1] for h in hs]
        else:
            normals, offsets = _require(params, "normals"), _require(params, "offsets")
        return Polytope(normals, offsets)
    if kind == "cube":
        if dim is None:
            raise InvalidBody("cube needs dim")
        return cube(int(dim), float(params.get("half_width", 1.0)), params.get("center"))
    if kind == "radial_series":
        if dim is None:
            raise InvalidBody("radial_series needs dim")
        return RadialSeries(int(dim), float(_require(params, "base")), params.get("coefficients", []))
    if kind == "mollified":
        inner = body_from_spec(_require(params, "body"))
        return MollifiedBody(inner, float(_require(params, "delta")), eta_order=params.get("eta_order"))
    if kind == "reflect":
        return body_from_spec(_require(params, "body")).reflected()
    raise InvalidBody(f"unknown body type {kind!r}")


def load_body(path):
    """Read a body-spec JSON file."""
    try:
        spec = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InvalidBody(f"cannot read body spec {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidBody(f"body spec {path} is not valid JSON: {exc}") from exc
    return body_from_spec(spec)


def save_body(body: StarBody, path):
    Path(path).write_text(json.dumps(body.spec(), indent=2) + "\n")

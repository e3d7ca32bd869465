"""
SCLIC: Handle set and map JSON data files

Set descriptions:

    { "type": "polyhedron", "points": [[...], ...], "rays": [[...], ...] }
    { "type": "polyhedral_cone", "generators": [[...], ...], "dim": n }
    { "type": "soc", "dim": n }
    { "type": "rsoc", "dim": n }
    { "type": "translate", "base": { ... }, "offset": [...] }

Linear maps:

    { "rows": m, "cols": n, "entries": [[...], ...] }
"""
import json
import logging
import math

import numpy as np

from .convex.cones import ConeRep
from .convex.sets import (Polyhedron, PolyhedralCone, RotatedSecondOrderCone,
                          SecondOrderCone, Translate)
from .errors import InputError
from .linalg import LinearMap

LOG = logging.getLogger(__name__)

def read_json(fname, desc):
    try:
        with open(fname, 'r') as f:
            return json.load(f)
    except (IOError, json.JSONDecodeError) as exc:
        raise IOError(f"Could not read {desc} data file: {fname} : {exc}")

def _finite(value):
    """Infinite and NaN values are written as null"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    if isinstance(value, np.ndarray):
        return _finite(value.tolist())
    if isinstance(value, np.generic):
        return _finite(value.item())
    return value

def write_json(data, fname):
    """
    Write data to a JSON file
    """
    with open(fname, 'w') as f:
        json.dump(_finite(data), f, sort_keys=True, indent=4, separators=(',', ': '))

def dump_json(data):
    """
    :return: JSON string in the same format as written files
    """
    return json.dumps(_finite(data), sort_keys=True, indent=4, separators=(',', ': '))

def _field(data, key, desc):
    try:
        return data[key]
    except KeyError:
        raise InputError(f"{desc} description is missing field '{key}'")

def _dim(data, desc):
    dim = _field(data, "dim", desc)
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise InputError(f"{desc} dimension must be an integer, got {dim}")
    return dim

def set_from_dict(data):
    """
    Build a set description from its JSON form

    :return: ConvexSet
    """
    if not isinstance(data, dict):
        raise InputError(f"Set description must be a JSON object, got {data}")
    kind = data.get("type", None)
    try:
        if kind == "polyhedron":
            points = _field(data, "points", "Polyhedron")
            rays = data.get("rays", [])
            ambient_dim = data.get("dim", None)
            return Polyhedron(points, rays, ambient_dim)
        elif kind == "polyhedral_cone":
            gens = _field(data, "generators", "Polyhedral cone")
            return PolyhedralCone(ConeRep.from_generators(gens, data.get("dim", None)))
        elif kind == "soc":
            return SecondOrderCone(_dim(data, "Second-order cone"))
        elif kind == "rsoc":
            return RotatedSecondOrderCone(_dim(data, "Rotated second-order cone"))
        elif kind == "translate":
            base = set_from_dict(_field(data, "base", "Translate"))
            return Translate(base, _field(data, "offset", "Translate"))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"Invalid {kind} description: {exc}")
    raise InputError(f"Unknown set type: {kind}")

def set_to_dict(X):
    """
    :return: JSON form of a set description
    """
    if isinstance(X, Polyhedron):
        return {"type": X.kind, "points": X.points.tolist(), "rays": X.rays.tolist(), "dim": X.ambient_dim}
    elif isinstance(X, PolyhedralCone):
        return {"type": X.kind, "generators": X.rep.generators.tolist(), "dim": X.ambient_dim}
    elif isinstance(X, (SecondOrderCone, RotatedSecondOrderCone)):
        return {"type": X.kind, "dim": X.ambient_dim}
    elif isinstance(X, Translate):
        return {"type": X.kind, "base": set_to_dict(X.base), "offset": X.offset.tolist()}
    raise ValueError(f"Not a set description: {X}")

def map_from_dict(data):
    """
    :return: LinearMap
    """
    if not isinstance(data, dict):
        raise InputError(f"Map description must be a JSON object, got {data}")
    entries = _field(data, "entries", "Map")
    try:
        T = LinearMap(entries)
    except (TypeError, ValueError) as exc:
        raise InputError(f"Invalid map entries: {exc}")
    for key, actual in (("rows", T.rows), ("cols", T.cols)):
        if key in data and data[key] != actual:
            raise InputError(f"Map declares {key}={data[key]} but entries give {actual}")
    return T

def map_to_dict(T):
    return {"rows": T.rows, "cols": T.cols, "entries": T.matrix.tolist()}

def read_set(fname):
    return set_from_dict(read_json(fname, "set"))

def read_map(fname):
    return map_from_dict(read_json(fname, "map"))

"""JSON I/O with stable field order and 15-significant-digit floats."""

import json

import numpy as np

from .mubs import MubSet
from .squares import LatinSquare

DIGITS = 15


def round_floats(obj, digits=DIGITS):
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            return None
        return float(f"{x:.{digits}g}")
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return round_floats(obj.tolist(), digits)
    return obj


def dumps(obj, indent=2):
    if hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    return json.dumps(round_floats(obj), indent=indent)


def mubset_to_json(mubset):
    return dumps(mubset.to_dict())


def mubset_from_json(text):
    return MubSet.from_dict(json.loads(text))


def save_mubset(mubset, path):
    with open(path, "w") as fh:
        fh.write(mubset_to_json(mubset) + "\n")


def load_mubset(path):
    with open(path) as fh:
        return mubset_from_json(fh.read())


def square_to_json(square):
    return dumps(square.to_dict())


def square_from_json(text):
    return LatinSquare.from_dict(json.loads(text))

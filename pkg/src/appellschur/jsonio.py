"""JSON encodings for the public data types.

Quaternion: [x0, x1, x2, x3].
QuatMatrix: {"rows": r, "cols": s, "data": [[ [x0,x1,x2,x3], ... ], ...]}.
AxialSeries: {"rows": r, "cols": s, "tail": "finite" | {"bounded": B},
              "coeffs": [QuatMatrix, ...]}.
Colligation: {"A":, "B":, "C":, "D":, "flag":}.
HerglotzGenerator: {"V":, "C":, "a":}.
RationalRealForm: {"H":, "G":, "T":, "F":}.

Geometric and binomial tail models are serialized as {"bounded": sup}; the
schema keeps only the finite/bounded variants.
"""

from __future__ import annotations

import json
import math

from .axseries import AxialSeries, Tail
from .herglotz import HerglotzGenerator
from .quatlin import Quaternion, QuatMatrix
from .realize import Colligation, RationalRealForm


def quaternion_to_json(q):
    return [q.x0, q.x1, q.x2, q.x3]


def quaternion_from_json(data):
    if not isinstance(data, (list, tuple)) or len(data) != 4:
        raise ValueError("quaternion must be a 4-array")
    return Quaternion(*[float(v) for v in data])


def matrix_to_json(M):
    return {
        "rows": M.rows,
        "cols": M.cols,
        "data": [[quaternion_to_json(M.entry(i, j)) for j in range(M.cols)]
                 for i in range(M.rows)],
    }


def matrix_from_json(data):
    rows = int(data["rows"])
    cols = int(data["cols"])
    grid = data["data"]
    if len(grid) != rows or any(len(r) != cols for r in grid):
        raise ValueError("data grid does not match rows x cols")
    return QuatMatrix.from_entries(
        [[quaternion_from_json(grid[i][j]) for j in range(cols)] for i in range(rows)])


def _tail_to_json(tail, n_stored):
    if tail.is_finite:
        return "finite"
    if tail.power > 0:
        raise ValueError("binomially growing tails have no bounded JSON form")
    if not math.isfinite(tail.B):
        raise ValueError("unbounded tail cannot be serialized")
    # sup of the modeled bound over the unstored indices (ratio <= 1)
    return {"bounded": tail.coeff_bound(n_stored)}


def _tail_from_json(data):
    if data == "finite" or data is None:
        return Tail.finite()
    if isinstance(data, dict) and "bounded" in data:
        return Tail.bounded(float(data["bounded"]))
    raise ValueError("tail must be 'finite' or {'bounded': B}")


def series_to_json(f):
    return {
        "rows": f.rows,
        "cols": f.cols,
        "tail": _tail_to_json(f.tail, len(f.coeffs)),
        "coeffs": [matrix_to_json(c) for c in f.coeffs],
    }


def series_from_json(data):
    coeffs = [matrix_from_json(c) for c in data["coeffs"]]
    if not coeffs:
        coeffs = [QuatMatrix.zeros(int(data.get("rows", 1)), int(data.get("cols", 1)))]
    return AxialSeries(coeffs, tail=_tail_from_json(data.get("tail", "finite")))


def scalar_series_from_json(data):
    """Accept either the full schema or a bare list of quaternion 4-arrays."""
    if isinstance(data, list):
        return AxialSeries([QuatMatrix.from_entries([[quaternion_from_json(c)]])
                            for c in data])
    return series_from_json(data)


def colligation_to_json(V):
    return {
        "A": matrix_to_json(V.A),
        "B": matrix_to_json(V.B),
        "C": matrix_to_json(V.C),
        "D": matrix_to_json(V.D),
        "flag": V.flag,
    }


def colligation_from_json(data):
    return Colligation(
        A=matrix_from_json(data["A"]),
        B=matrix_from_json(data["B"]),
        C=matrix_from_json(data["C"]),
        D=matrix_from_json(data["D"]),
        flag=data.get("flag", "none"),
    )


def generator_to_json(G):
    out = {"V": matrix_to_json(G.V), "C": matrix_to_json(G.C)}
    if G.a is not None:
        out["a"] = matrix_to_json(G.a)
    return out


def generator_from_json(data):
    return HerglotzGenerator(
        V=matrix_from_json(data["V"]),
        C=matrix_from_json(data["C"]),
        a=matrix_from_json(data["a"]) if "a" in data else None,
    )


def rational_to_json(Rf):
    return {
        "H": matrix_to_json(Rf.H),
        "G": matrix_to_json(Rf.G),
        "T": matrix_to_json(Rf.T),
        "F": matrix_to_json(Rf.F),
    }


def rational_from_json(data):
    return RationalRealForm(
        H=matrix_from_json(data["H"]),
        G=matrix_from_json(data["G"]),
        T=matrix_from_json(data["T"]),
        F=matrix_from_json(data["F"]),
    )


def load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def dump(obj, path=None, indent=2):
    text = json.dumps(obj, indent=indent)
    if path is None:
        return text
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.write("\n")
    return text

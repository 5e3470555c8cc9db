"""JSON file formats for input matrices and decompositions.

Floats are written with 17 significant digits so a load/dump cycle is
exact and the output is byte-stable.  Complex values are ``[re, im]``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .blockops import BlockRule, IndexFamily, RuleOperator, SpectralPresentation
from .decomposer import Decomposition, plan_sectors
from .errors import ProjPairsError
from .linalg import as_hermitian

FORMAT = "projpairs.decomposition/1"


class FileFormatError(ProjPairsError, ValueError):
    pass


class _Rule(dict):
    """A block rule record; written on a single line."""


@lru_cache(maxsize=4096)
def _float(v: float) -> str:
    if not np.isfinite(v):
        raise FileFormatError(f"non-finite number {v}")
    text = format(v, ".17g")
    return text if any(c in text for c in ".en") else text + ".0"


def _emit_rule(r: _Rule) -> str:
    src = ", ".join(map(str, r["source"]))
    tgt = ", ".join(map(str, r["target"]))
    mat = ", ".join("[" + ", ".join(_float(v) for v in row) + "]" for row in r["mat"])
    return f'{{"source": [{src}], "target": [{tgt}], "mat": [{mat}]}}'


def _emit(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, _Rule):
        return _emit_rule(obj)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(k)}: {_emit(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (list, tuple, dict)) for v in obj):
            return "[" + ", ".join(_emit(v) for v in obj) + "]"
        if all(isinstance(v, (list, tuple)) and all(not isinstance(w, (list, tuple, dict)) for w in v) for v in obj) and len(obj) <= 2:
            return "[" + ", ".join(_emit(v) for v in obj) + "]"
        items = [pad + "  " + _emit(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise FileFormatError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return _emit(obj) + "\n"


def _encode_matrix(a: np.ndarray):
    if np.iscomplexobj(a):
        return [[[float(v.real), float(v.imag)] for v in row] for row in a]
    return [[float(v) for v in row] for row in a]


def _decode_matrix(data, is_complex: bool) -> np.ndarray:
    try:
        if is_complex:
            arr = np.array(data, dtype=float)
            if arr.ndim != 3 or arr.shape[2] != 2:
                raise FileFormatError("complex entries must be [re, im] pairs")
            return arr[..., 0] + 1j * arr[..., 1]
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"bad matrix data: {exc}") from None
    if arr.ndim != 2:
        raise FileFormatError("matrix data must be a 2-d array")
    return arr


# -- input matrices ---------------------------------------------------------


def matrix_to_dict(a) -> dict:
    a = np.asarray(a)
    return {"dim": int(a.shape[0]), "complex": bool(np.iscomplexobj(a)), "data": _encode_matrix(a)}


def load_input(path):
    """Load a matrix file or a spectrum list.

    Accepted shapes: ``{"dim", "complex", "data"}``, ``{"spectrum": [...]}``,
    or a bare list of numbers.  Returns a Hermitian matrix or a list of
    eigenvalues.
    """
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from None
    if isinstance(raw, list):
        return _spectrum(raw)
    if not isinstance(raw, dict):
        raise FileFormatError("input must be a JSON object or list")
    if "spectrum" in raw:
        return _spectrum(raw["spectrum"])
    try:
        dim, is_complex, data = int(raw["dim"]), bool(raw.get("complex", False)), raw["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"malformed matrix file: {exc}") from None
    a = _decode_matrix(data, is_complex)
    if a.shape != (dim, dim):
        raise FileFormatError(f"data shape {a.shape} does not match dim={dim}")
    scale = max(float(np.max(np.abs(a))), 1e-300)
    if np.max(np.abs(a - a.conj().T)) > 1e-10 * scale:
        raise FileFormatError("matrix is not Hermitian")
    return as_hermitian(a, tol=1e-10)


def _spectrum(values) -> list:
    try:
        vals = [float(v) for v in values]
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"bad spectrum: {exc}") from None
    if not vals or not all(np.isfinite(vals)):
        raise FileFormatError("spectrum must be a nonempty list of finite numbers")
    return vals


# -- decompositions ---------------------------------------------------------


def _rule_dict(rule: BlockRule) -> dict:
    return _Rule(source=rule.source.as_list(), target=rule.target.as_list(), mat=rule.mat)


def decomposition_to_dict(d: Decomposition) -> dict:
    spec = d.spec
    header = {
        "format": FORMAT,
        "n": d.n,
        "m": d.m,
        "a": str(d.a),
        "b": str(d.b),
        "F_labels": list(d.plan.f_labels),
        "eigenvalues": [float(v) for v in spec.values],
        "basis_rotation": None,
        "column_labels": None,
    }
    if spec.rotation is not None:
        header["basis_rotation"] = matrix_to_dict(spec.rotation)
        header["column_labels"] = list(spec.column_labels)
    pairs = []
    for i, (q, p) in enumerate(d.pairs):
        pairs.append({"index": i + 1, "Q": [_rule_dict(r) for r in q.rules], "P": [_rule_dict(r) for r in p.rules]})
    return {"header": header, "pairs": pairs}


def dump_decomposition(d: Decomposition) -> str:
    return dumps(decomposition_to_dict(d))


def _family(raw) -> IndexFamily:
    k, r, mod = (int(v) for v in raw)
    return IndexFamily(k, r, mod)


def decomposition_from_dict(raw: dict) -> Decomposition:
    try:
        h = raw["header"]
        if h.get("format") != FORMAT:
            raise FileFormatError(f"unknown format {h.get('format')!r}")
        n, m = int(h["n"]), int(h["m"])
        values = tuple(float(v) for v in h["eigenvalues"])
        rot = h.get("basis_rotation")
        if rot is not None:
            spec = SpectralPresentation(
                values, _decode_matrix(rot["data"], rot.get("complex", False)), tuple(h["column_labels"])
            )
        else:
            spec = SpectralPresentation(values)
        plan = plan_sectors(spec, n)
        if plan.m != m or str(plan.a) != h["a"] or str(plan.b) != h["b"]:
            raise FileFormatError("header constants do not match n")
        if list(plan.f_labels) != [int(k) for k in h["F_labels"]]:
            raise FileFormatError("header F_labels do not match the eigenvalues")
        pairs = []
        for entry in raw["pairs"]:
            ops = []
            for name in ("Q", "P"):
                ops.append(
                    RuleOperator(
                        BlockRule(_family(r["source"]), _family(r["target"]), r["mat"]) for r in entry[name]
                    )
                )
            pairs.append(tuple(ops))
        if len(pairs) != n:
            raise FileFormatError(f"expected {n} pairs, found {len(pairs)}")
    except FileFormatError:
        raise
    except (KeyError, TypeError, ValueError, ProjPairsError) as exc:
        raise FileFormatError(f"malformed decomposition file: {exc}") from None
    return Decomposition(
        n=n, m=m, spec=spec, a=Fraction(h["a"]), b=Fraction(h["b"]), pairs=tuple(pairs), plan=plan
    )


def load_decomposition(path) -> Decomposition:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise FileFormatError("decomposition file must hold a JSON object")
    return decomposition_from_dict(raw)


def save_decomposition(d: Decomposition, path) -> None:
    with open(path, "w") as fh:
        fh.write(dump_decomposition(d))

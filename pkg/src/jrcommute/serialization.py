"""JSON interchange for models, seeds, witnesses and polynomial metrics.

Rationals are written as ``"p/q"`` (``"p"`` when ``q == 1``); floats are
written as JSON numbers.  Tensor indices in files are 1-based.
"""
from __future__ import annotations

import json
from fractions import Fraction
from numbers import Integral

import numpy as np

from .act_core import CurvTensor, Model, canonical_key
from .errors import ParseError
from .scalar_linalg import BilinearForm, exact_array, float_array, to_scalar


def scalar_to_json(value):
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (Integral, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return float(value)
    raise TypeError(f"not a scalar: {value!r}")


def scalar_from_json(value):
    if isinstance(value, bool):
        raise ParseError(f"boolean is not a scalar: {value!r}")
    if isinstance(value, (int, float, str)):
        try:
            return to_scalar(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad scalar {value!r}") from exc
    raise ParseError(f"bad scalar {value!r}")


def matrix_to_json(M) -> list:
    return [[scalar_to_json(v) for v in row] for row in np.asarray(M)]


def matrix_from_json(rows) -> np.ndarray:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise ParseError("matrix must be a list of rows")
    if rows and len({len(r) for r in rows}) != 1:
        raise ParseError("matrix rows have unequal lengths")
    vals = [[scalar_from_json(v) for v in r] for r in rows]
    if any(isinstance(v, float) for r in vals for v in r):
        return float_array(vals).reshape(len(rows), len(rows[0]) if rows else 0)
    return exact_array(vals).reshape(len(rows), len(rows[0]) if rows else 0)


def components_to_json(tensor: CurvTensor) -> list:
    return [{"i": i + 1, "j": j + 1, "k": k + 1, "l": l + 1, "value": scalar_to_json(v)}
            for (i, j, k, l), v in sorted(tensor.components.items())]


def components_from_json(entries, dim: int) -> CurvTensor:
    """Read component records; non-canonical quadruples are folded onto representatives.

    A quadruple given twice (directly or via a symmetry) must agree.
    """
    if not isinstance(entries, list):
        raise ParseError("components must be a list")
    comps = {}
    for n, e in enumerate(entries):
        try:
            quad = tuple(int(e[key]) - 1 for key in "ijkl")
            value = scalar_from_json(e["value"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"component record {n} is malformed: {e!r}") from exc
        if any(not 0 <= q < dim for q in quad):
            raise ParseError(f"component record {n} has index out of range 1..{dim}")
        sign, key = canonical_key(*quad)
        if key is None:
            if value != 0:
                raise ParseError(f"component record {n} is forced to vanish by antisymmetry")
            continue
        value = sign * value
        if key in comps and comps[key] != value:
            raise ParseError(f"component record {n} conflicts with an earlier record")
        comps[key] = value
    return CurvTensor(dim, comps)


def model_to_json(model: Model) -> dict:
    return {"dim": model.dim, "gram": matrix_to_json(model.inner.gram),
            "components": components_to_json(model.tensor)}


def model_from_json(data) -> Model:
    try:
        dim = int(data["dim"])
        gram = matrix_from_json(data["gram"])
        entries = data["components"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"model JSON missing field: {exc}") from exc
    if gram.shape != (dim, dim):
        raise ParseError(f"gram has shape {gram.shape}, expected ({dim}, {dim})")
    tensor = components_from_json(entries, dim)
    if gram.dtype == float and tensor.exact:
        tensor = tensor.to_float()
    elif gram.dtype == object and not tensor.exact:
        gram = float_array(gram)
    return Model(BilinearForm(gram), tensor)


def seed_to_json(seed) -> dict:
    return {"p": seed.p, "gram": matrix_to_json(seed.g.gram),
            "A1": components_to_json(seed.A1), "A2": components_to_json(seed.A2),
            "a1": scalar_to_json(seed.a1), "a2": scalar_to_json(seed.a2)}


def seed_from_json(data, tol=None):
    from .ansatz import make_seed
    try:
        p = int(data["p"])
        gram = matrix_from_json(data["gram"])
        A1 = components_from_json(data["A1"], p)
        A2 = components_from_json(data["A2"], p)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"seed JSON missing field: {exc}") from exc
    if gram.shape != (p, p):
        raise ParseError(f"gram has shape {gram.shape}, expected ({p}, {p})")
    exact = gram.dtype == object and A1.exact and A2.exact
    if not exact:
        gram, A1, A2 = float_array(gram), A1.to_float(), A2.to_float()
    return make_seed(BilinearForm(gram), A1, A2, tol=tol)


def witness_to_json(witness) -> dict:
    return {"theta": matrix_to_json(witness.theta), "T": matrix_to_json(witness.T)}


def witness_from_json(data):
    from .equiv import Witness
    try:
        return Witness(matrix_from_json(data["theta"]), matrix_from_json(data["T"]))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"witness JSON missing field: {exc}") from exc


def metric_to_json(metric) -> dict:
    return {"dim": metric.m, "nvars": metric.nvars,
            "entries": [[poly_to_json(metric.entries[i][j]) for j in range(metric.m)]
                        for i in range(metric.m)]}


def poly_to_json(poly) -> list:
    return [{"exponents": list(e), "coeff": scalar_to_json(c)} for e, c in sorted(poly.terms.items())]


def poly_from_json(terms, nvars: int):
    from .polynomial import MultiPoly
    if not isinstance(terms, list):
        raise ParseError("polynomial must be a list of terms")
    out = {}
    for t in terms:
        try:
            exps = tuple(int(x) for x in t["exponents"])
            coeff = scalar_from_json(t["coeff"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad polynomial term {t!r}") from exc
        if isinstance(coeff, float):
            raise ParseError("polynomial coefficients must be rational")
        if len(exps) != nvars:
            raise ParseError(f"term {t!r} has {len(exps)} exponents, expected {nvars}")
        out[exps] = out.get(exps, Fraction(0)) + coeff
    return MultiPoly(nvars, out)


def metric_from_json(data):
    from .geometry import PolyMetric
    try:
        m = int(data["dim"])
        nvars = int(data.get("nvars", m))
        rows = data["entries"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"metric JSON missing field: {exc}") from exc
    if len(rows) != m or any(len(r) != m for r in rows):
        raise ParseError(f"metric entries must be {m}x{m}")
    entries = [[poly_from_json(rows[i][j], nvars) for j in range(m)] for i in range(m)]
    return PolyMetric(entries)


def dumps(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc

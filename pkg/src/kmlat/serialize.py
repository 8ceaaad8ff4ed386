"""JSON encodings of matrices, data, forms, Laurent matrices and report values.

Rationals are written as ``"p/q"`` strings, infinite Coxeter entries as
``"inf"`` and entries beyond an order cutoff as ``"exceeds-cutoff"``.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import coxeter as cx
from . import datum as dt
from . import descent as ds
from . import laurent as ls
from .errors import InputError
from .fields import field as make_field


def fraction_to_str(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def fraction_from_str(s):
    if isinstance(s, bool):
        raise InputError(f"{s!r} is not a rational")
    if isinstance(s, int):
        return Fraction(s)
    try:
        return Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{s!r} is not a rational 'p/q'") from None


def entry_to_json(m):
    if m is cx.EXCEEDS_CUTOFF:
        return "exceeds-cutoff"
    if m == math.inf:
        return "inf"
    return m


# ------------------------------------------------------------------ matrices


def gcm_to_json(A):
    return {"labels": list(A.labels), "matrix": A.as_lists()}


def coxeter_to_json(M):
    return {"labels": list(M.labels), "matrix": [[entry_to_json(m) for m in row] for row in M.entries]}


def _require(obj, *keys):
    if not isinstance(obj, dict):
        raise InputError("expected a JSON object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise InputError(f"missing key(s): {', '.join(missing)}")


def gcm_from_json(obj):
    """Read a GCM, or a Coxeter matrix (any ``"inf"`` entry or a diagonal of 1s) via its lift."""
    _require(obj, "matrix")
    rows = obj["matrix"]
    labels = obj.get("labels")
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError("'matrix' must be a list of rows")
    is_coxeter = any(x == "inf" for r in rows for x in r) or (rows and all(
        len(r) == len(rows) and r[i] == 1 for i, r in enumerate(rows)
    ))
    if is_coxeter:
        return cx.gcm_of_coxeter(cx.validate_coxeter(rows, labels))
    return cx.validate_gcm(rows, labels)


def datum_to_json(D):
    return {
        "gcm": gcm_to_json(D.gcm),
        "lattice_rank": D.lattice_rank,
        "c": [list(v) for v in D.c],
        "h": [list(v) for v in D.h],
    }


def datum_from_json(obj):
    _require(obj, "gcm", "c", "h")
    D = dt.make_datum(gcm_from_json(obj["gcm"]), obj["c"], obj["h"])
    if "lattice_rank" in obj and obj["lattice_rank"] != D.lattice_rank:
        raise InputError("lattice_rank does not match the vector lengths")
    return D


def form_to_json(form):
    labels = form.gcm.labels
    return {
        "gcm": gcm_to_json(form.gcm),
        "perm": {labels[s]: labels[form.aut(s)] for s in range(form.gcm.rank)},
        "s0": [labels[s] for s in form.s0],
        "q": form.q,
    }


def form_from_json(obj, q=None):
    _require(obj, "gcm", "perm")
    A = gcm_from_json(obj["gcm"])
    perm = obj["perm"]
    if isinstance(perm, dict):
        perm = {str(k): str(v) for k, v in perm.items()}
    pos = {lab: i for i, lab in enumerate(A.labels)}
    try:
        s0 = [pos[str(s)] for s in obj.get("s0", [])]
    except KeyError as exc:
        raise InputError(f"unknown label {exc} in s0") from None
    return ds.make_form(A, perm, s0, obj.get("q", 2) if q is None else q)


# ------------------------------------------------------------------ Laurent


def field_to_json(F):
    return {"p": F.p, "k": F.k, "modulus": list(F.modulus)}


def field_from_json(obj):
    _require(obj, "p")
    F = make_field(int(obj["p"]), int(obj.get("k", 1)))
    if "modulus" in obj and list(obj["modulus"]) != list(F.modulus):
        raise InputError(f"modulus {obj['modulus']} differs from the fixed choice {list(F.modulus)}")
    return F


def laurent_to_json(M):
    """Entries as lists of ``[exponent, "coefficient"]`` pairs in increasing exponent."""
    return [[[[e, str(c)] for e, c in x.sorted_terms()] for x in row] for row in M.rows]


def laurent_from_json(F, rows, check=True):
    if not isinstance(rows, list) or not rows:
        raise InputError("a Laurent matrix is a non-empty list of rows")
    out = []
    for row in rows:
        entries = []
        for cell in row:
            terms = {}
            for pair in cell:
                if len(pair) != 2:
                    raise InputError(f"bad term {pair!r}; expected [exponent, coefficient]")
                e, c = int(pair[0]), F.check(int(pair[1]))
                terms[e] = F.add(terms.get(e, 0), c)
            entries.append(ls.LaurentPoly(F, terms))
        out.append(entries)
    return ls.LaurentMatrix(F, out, check=check)


# ------------------------------------------------------------------ generic


def to_jsonable(obj):
    """Recursively convert report values into plain JSON types."""
    if obj is cx.EXCEEDS_CUTOFF or (isinstance(obj, float) and math.isinf(obj)):
        return entry_to_json(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return fraction_to_str(obj)
    if isinstance(obj, cx.WeylElement):
        return list(obj.word)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")

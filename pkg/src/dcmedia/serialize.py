"""Medium documents and canonical JSON.

Canonical JSON has sorted keys, two-space indentation, numeric arrays on
one line and every float written with 17 significant digits, so a document
that is parsed and written again reproduces the same bytes.  Complex
numbers are ``[re, im]`` pairs; on input a real number is accepted
wherever a complex one is expected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import media

SCHEMA_VERSION = "1.0"

# kind -> {parameter name: shape}
PARAMETER_SHAPES = {
    "raw6x6": {"M": (6, 6)},
    "qdcm": {"alpha": (), "M": (), "Q": (4, 4), "D": (6,), "C": (6,)},
    "pdcm": {"alpha": (), "M": (), "P": (4, 4), "D": (6,), "C": (6,)},
    "sdcm": {"alpha": (), "Bo": (4, 4), "A": (6,), "B": (6,)},
    "q_medium": {"M": (), "Q": (4, 4)},
    "p_medium": {"M": (), "P": (4, 4)},
    "gibbsian": {"eps": (3, 3), "xi": (3, 3), "zeta": (3, 3), "mu": (3, 3)},
    "uniaxial": {"eps_t": (), "eps_z": (), "mu_t": (), "mu_z": ()},
}
KINDS = tuple(PARAMETER_SHAPES)


class DocumentError(ValueError):
    """A document does not match its schema."""


# -- canonical JSON ------------------------------------------------------------

def _fmt_float(x):
    if not math.isfinite(x):
        raise ValueError("non-finite number in document")
    s = format(x, ".17g")
    return "0" if s == "-0" else s


def _is_flat(v):
    return isinstance(v, list) and all(not isinstance(e, (list, dict)) for e in v)


def _is_numeric_block(v):
    # a list whose leaves are numbers, e.g. a matrix of [re, im] pairs
    if isinstance(v, list):
        return all(_is_numeric_block(e) for e in v)
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _write(v, indent, out):
    pad = "  " * indent
    if isinstance(v, dict):
        if not v:
            out.append("{}")
            return
        out.append("{\n")
        keys = sorted(v)
        for n, k in enumerate(keys):
            out.append(f"{pad}  {json.dumps(str(k))}: ")
            _write(v[k], indent + 1, out)
            out.append(",\n" if n < len(keys) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(v, list):
        if not v:
            out.append("[]")
        elif _is_numeric_block(v) and (_is_flat(v) or all(_is_flat(e) for e in v)):
            out.append("[" + ", ".join(_inline(e) for e in v) + "]")
        else:
            out.append("[\n")
            for n, e in enumerate(v):
                out.append(pad + "  ")
                _write(e, indent + 1, out)
                out.append(",\n" if n < len(v) - 1 else "\n")
            out.append(pad + "]")
    else:
        out.append(_inline(v))


def _inline(v):
    if isinstance(v, list):
        return "[" + ", ".join(_inline(e) for e in v) + "]"
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return _fmt_float(v)
    if isinstance(v, str):
        return json.dumps(v)
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps(obj):
    """Canonical JSON text (with trailing newline) for plain JSON data."""
    out = []
    _write(to_jsonable(obj), 0, out)
    return "".join(out) + "\n"


def to_jsonable(x):
    """Plain JSON data from numpy arrays, complex numbers and containers."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        if np.iscomplexobj(x):
            return np.stack([x.real, x.imag], axis=-1).tolist()
        return x.tolist()
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if x is None or isinstance(x, str):
        return x
    raise TypeError(f"cannot serialize {type(x).__name__}")


def complex_array(value, shape, name="value"):
    """Parse a (possibly ``[re, im]``-encoded) numeric array of the given shape."""
    if np.iscomplexobj(value):
        a = np.asarray(value)
    else:
        try:
            a = np.asarray(value, dtype=float)
        except (TypeError, ValueError):
            raise DocumentError(f"{name}: expected numbers") from None
    if a.shape == tuple(shape):
        z = a.astype(complex)
    elif a.shape == tuple(shape) + (2,) and not np.iscomplexobj(a):
        z = a[..., 0] + 1j * a[..., 1]
    else:
        raise DocumentError(f"{name}: expected shape {list(shape)} (or with a trailing [re, im]), "
                            f"got {list(a.shape)}")
    if not np.all(np.isfinite(z)):
        raise DocumentError(f"{name}: entries must be finite")
    return z


# -- medium documents -------------------------------------------------------------

@dataclass
class MediumDocument:
    kind: str
    parameters: dict
    metadata: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_json(self):
        return {"schema_version": self.schema_version, "kind": self.kind,
                "parameters": {k: complex_array(v, PARAMETER_SHAPES[self.kind][k], k)
                               for k, v in self.parameters.items()},
                "metadata": self.metadata}

    def dumps(self):
        return dumps(self.to_json())

    def medium(self):
        return medium_from_document(self)


def parse_document(data):
    """Validate plain JSON data and return a :class:`MediumDocument`."""
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {version!r}")
    kind = data.get("kind")
    if kind not in PARAMETER_SHAPES:
        raise DocumentError(f"unknown kind {kind!r}; expected one of {list(KINDS)}")
    params = data.get("parameters")
    if not isinstance(params, dict):
        raise DocumentError("parameters must be an object")
    shapes = PARAMETER_SHAPES[kind]
    missing = sorted(set(shapes) - set(params))
    extra = sorted(set(params) - set(shapes))
    if missing or extra:
        raise DocumentError(f"{kind} parameters: missing {missing}, unexpected {extra}")
    parsed = {k: complex_array(params[k], shapes[k], k) for k in shapes}
    meta = data.get("metadata", {})
    if not isinstance(meta, dict):
        raise DocumentError("metadata must be an object")
    return MediumDocument(kind, parsed, meta, version)


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") \
            from None
    return parse_document(data)


def medium_from_document(doc):
    p = doc.parameters
    k = doc.kind
    if k == "raw6x6":
        return media.raw_medium(p["M"])
    if k == "qdcm":
        return media.construct_qdcm(p["alpha"], p["M"], p["Q"], p["D"], p["C"])
    if k == "pdcm":
        return media.construct_pdcm(p["alpha"], p["M"], p["P"], p["D"], p["C"])
    if k == "sdcm":
        return media.construct_sdcm(p["alpha"], p["Bo"], p["A"], p["B"])
    if k == "q_medium":
        return media.q_medium(p["M"], p["Q"])
    if k == "p_medium":
        return media.p_medium(p["M"], p["P"])
    if k == "gibbsian":
        return media.fourd_from_gibbsian(_gibbsian(doc))
    if k == "uniaxial":
        return media.fourd_from_gibbsian(_gibbsian(doc))
    raise DocumentError(f"unknown kind {k!r}")


def _gibbsian(doc):
    p = doc.parameters
    if doc.kind == "uniaxial":
        return media.uniaxial_gibbsian(*(complex(p[k]) for k in ("eps_t", "eps_z", "mu_t", "mu_z")))
    return media.GibbsianMedium(p["eps"], p["xi"], p["zeta"], p["mu"])


def raw_document(medium, metadata=None):
    return MediumDocument("raw6x6", {"M": np.array(medium.M.matrix)}, dict(metadata or {}))


def gibbsian_document(g, metadata=None):
    return MediumDocument("gibbsian", {"eps": g.eps, "xi": g.xi, "zeta": g.zeta, "mu": g.mu},
                          dict(metadata or {}))

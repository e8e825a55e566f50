"""Persistence of subspace bases and truncated operators.

Binary layout (``.hob``)::

    b"HARDYOPS"  8 bytes magic
    uint32 LE    header length in bytes
    header       UTF-8 JSON: kind, version, order, dims, rank or shape, tol, guards, meta
    payload      complex128 little-endian, column-major

Textual layout (``.csv``): ``# key: value`` header lines holding the same
JSON header, then one row per matrix row with ``re,im`` pairs for each
column.  Floats are written with ``repr`` so both layouts round-trip
bit-exactly.
"""

from __future__ import annotations

import csv
import io
import json
import struct
from pathlib import Path

import numpy as np

from .errors import InvalidParameter
from .operators import TruncatedOp
from .subspaces import Subspace

MAGIC = b"HARDYOPS"
VERSION = 1
_OP_FIELDS = ("row_guard", "col_guard", "up", "down", "in_cap", "out_cap", "err_bound")


def _header(obj) -> tuple[dict, np.ndarray]:
    if isinstance(obj, Subspace):
        h = {"kind": "subspace", "order": obj.order, "dim": obj.dim, "rank": obj.rank,
             "tol": obj.tol, "meta": _jsonable(obj.meta)}
        return h, obj.basis
    if isinstance(obj, TruncatedOp):
        h = {"kind": "operator", "order": obj.order, "dim_in": obj.dim_in, "dim_out": obj.dim_out}
        h.update({k: getattr(obj, k) for k in _OP_FIELDS})
        return h, obj.matrix
    raise InvalidParameter(f"cannot export {type(obj).__name__}")


def _jsonable(meta: dict) -> dict:
    return json.loads(json.dumps(meta, default=str))


def _rebuild(h: dict, M: np.ndarray):
    kind = h.get("kind")
    if kind == "subspace":
        return Subspace(M, h["order"], h["dim"], h["tol"], dict(h.get("meta", {})))
    if kind == "operator":
        return TruncatedOp(M, h["order"], h["dim_in"], h["dim_out"],
                           **{k: h[k] for k in _OP_FIELDS})
    raise InvalidParameter(f"unknown object kind {kind!r}")


def _shape(h: dict) -> tuple[int, int]:
    if h["kind"] == "subspace":
        return h["order"] * h["dim"], h["rank"]
    return h["order"] * h["dim_out"], h["order"] * h["dim_in"]


def dumps_binary(obj) -> bytes:
    h, M = _header(obj)
    h["version"] = VERSION
    hb = json.dumps(h, sort_keys=True).encode()
    payload = np.asarray(M, dtype="<c16").tobytes(order="F")
    return MAGIC + struct.pack("<I", len(hb)) + hb + payload


def loads_binary(data: bytes):
    if data[:8] != MAGIC:
        raise InvalidParameter("not a binary basis file (bad magic)")
    (n,) = struct.unpack("<I", data[8:12])
    h = json.loads(data[12:12 + n].decode())
    rows, cols = _shape(h)
    M = np.frombuffer(data[12 + n:], dtype="<c16")
    if M.size != rows * cols:
        raise InvalidParameter(f"payload has {M.size} entries, header says {rows}x{cols}")
    return _rebuild(h, M.reshape((rows, cols), order="F").astype(complex))


def dumps_csv(obj) -> str:
    h, M = _header(obj)
    h["version"] = VERSION
    buf = io.StringIO()
    buf.write(f"# hardyops: {json.dumps(h, sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(M):
        w.writerow([repr(float(x)) for z in row for x in (z.real, z.imag)])
    return buf.getvalue()


def loads_csv(text: str):
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# hardyops: "):
        raise InvalidParameter("missing '# hardyops:' header line")
    h = json.loads(lines[0][len("# hardyops: "):])
    rows, cols = _shape(h)
    body = [r for r in csv.reader(lines[1:]) if r]
    if len(body) != rows:
        raise InvalidParameter(f"expected {rows} rows, found {len(body)}")
    M = np.zeros((rows, cols), dtype=complex)
    for i, r in enumerate(body):
        if len(r) != 2 * cols:
            raise InvalidParameter(f"row {i + 2}: expected {2 * cols} fields, found {len(r)}")
        v = np.array([float(x) for x in r])
        M[i] = v[0::2] + 1j * v[1::2]
    return _rebuild(h, M)


def export(obj, path) -> Path:
    """Write ``obj`` as CSV when the suffix is ``.csv``, otherwise in the binary layout."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        path.write_text(dumps_csv(obj))
    else:
        path.write_bytes(dumps_binary(obj))
    return path


def load(path):
    """Read a file written by :func:`export`; the layout is detected from its first bytes."""
    data = Path(path).read_bytes()
    if data[:8] == MAGIC:
        return loads_binary(data)
    return loads_csv(data.decode())


def to_pairs(M) -> list:
    """Nested ``[re, im]`` lists for JSON embedding."""
    M = np.asarray(M, dtype=complex)
    if M.ndim == 0:
        return [float(M.real), float(M.imag)]
    return [to_pairs(x) for x in M]


def from_pairs(obj) -> np.ndarray:
    """Inverse of :func:`to_pairs`; plain real numbers are accepted too."""
    def conv(x):
        if isinstance(x, (int, float)):
            return complex(x)
        if len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
            return complex(x[0], x[1])
        return [conv(t) for t in x]
    return np.array(conv(obj), dtype=complex)

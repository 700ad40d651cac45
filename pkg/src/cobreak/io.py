"""Channel specification files.

A specification is a JSON document::

    {
      "label": "z contraction",
      "dim": 2,
      "representation": "affine",
      "affine": {"M": [[0, 0, 0], [0, 0, 0], [0, 0, 0.5]], "n": [0, 0, 0]}
    }

``representation`` is one of ``kraus``, ``affine`` or ``nc_family`` and
exactly the payload of the same name must be present:

* ``kraus``: list of ``d x d`` matrices, complex entries as ``[re, im]``
  (a bare real number is accepted too).
* ``affine``: real ``M`` of shape ``(d^2-1, d^2-1)`` and real ``n`` of
  length ``d^2-1``.
* ``nc_family``: ``{"family": 1|2, "theta", "phi", "xi", "eta"}`` in radians
  (``eta`` optional, default 0); requires ``dim = 2``.

Numbers are written back with round-trip-exact reprs (at most 17
significant digits).
"""

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import SpecParseError, ValidationError
from .qchannel import AffineRep, KrausChannel, NCFamilyParams, nc_family_channel

__all__ = ["ChannelSpec", "REPRESENTATIONS", "parse_spec", "loads_spec", "dumps_spec", "format_float"]

REPRESENTATIONS = ("kraus", "affine", "nc_family")
_ANGLES = ("theta", "phi", "xi", "eta")


def format_float(x):
    """17-significant-digit representation used in CSV and text reports."""
    x = float(x)
    if x == 0:
        return "0"
    return format(x, ".17g")


@dataclass
class ChannelSpec:
    dim: int
    representation: str
    payload: object
    label: str = None
    source: str = field(default=None, compare=False)

    def build(self):
        """Channel object described by this spec.

        Affine data is returned unchecked, since a file can describe a map
        that is not CPTP.
        """
        if self.representation == "kraus":
            return KrausChannel(list(self.payload))
        if self.representation == "affine":
            M, n = self.payload
            return AffineRep(M, n, checked=False)
        return nc_family_channel(self.payload)

    @property
    def display_label(self):
        if self.label:
            return self.label
        return Path(self.source).stem if self.source else self.representation


def _line_of(text, key):
    if text is None:
        return None
    match = re.search(r'"%s"\s*:' % re.escape(key), text)
    if not match:
        return None
    return text.count("\n", 0, match.start()) + 1


class _Parser:
    def __init__(self, text, source):
        self.text = text
        self.source = source

    def fail(self, message, path, key=None):
        raise SpecParseError(message, field=path, line=_line_of(self.text, key or path.split(".")[-1].split("[")[0]))

    def number(self, value, path, key):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(f"expected a number, got {json.dumps(value)}", path, key)
        if not math.isfinite(value):
            self.fail("number is not finite", path, key)
        return float(value)

    def complex_entry(self, value, path, key):
        if isinstance(value, list):
            if len(value) != 2:
                self.fail(f"complex entries are [re, im] pairs, got {len(value)} items", path, key)
            return complex(self.number(value[0], path + "[0]", key), self.number(value[1], path + "[1]", key))
        return complex(self.number(value, path, key))

    def matrix(self, value, rows, cols, path, key, entry):
        if not isinstance(value, list) or len(value) != rows:
            got = len(value) if isinstance(value, list) else type(value).__name__
            self.fail(f"expected {rows} rows, got {got}", path, key)
        out = []
        for i, row in enumerate(value):
            if not isinstance(row, list) or len(row) != cols:
                got = len(row) if isinstance(row, list) else type(row).__name__
                self.fail(f"expected {cols} columns, got {got}", f"{path}[{i}]", key)
            out.append([entry(x, f"{path}[{i}][{j}]", key) for j, x in enumerate(row)])
        return out

    def parse(self, doc):
        if not isinstance(doc, dict):
            self.fail("top level must be an object", "<root>")
        dim = doc.get("dim")
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 2:
            self.fail(f"dim must be an integer >= 2, got {json.dumps(dim)}", "dim")
        rep = doc.get("representation")
        if rep not in REPRESENTATIONS:
            self.fail(f"unknown representation {json.dumps(rep)}; expected one of {', '.join(REPRESENTATIONS)}", "representation")
        present = [r for r in REPRESENTATIONS if r in doc]
        if present != [rep]:
            others = [r for r in present if r != rep]
            if others:
                self.fail(f"payload '{others[0]}' does not match representation '{rep}'", others[0])
            self.fail(f"missing payload '{rep}'", rep)
        label = doc.get("label")
        if label is not None and not isinstance(label, str):
            self.fail("label must be a string", "label")
        payload = getattr(self, "_" + rep)(doc[rep], dim)
        return ChannelSpec(dim=dim, representation=rep, payload=payload, label=label, source=self.source)

    def _kraus(self, value, dim):
        if not isinstance(value, list) or not value:
            self.fail("kraus must be a nonempty list of matrices", "kraus")
        ops = [
            np.array(self.matrix(k, dim, dim, f"kraus[{i}]", "kraus", self.complex_entry))
            for i, k in enumerate(value)
        ]
        return ops

    def _affine(self, value, dim):
        if not isinstance(value, dict):
            self.fail("affine must be an object with keys M and n", "affine")
        size = dim * dim - 1
        if "M" not in value or "n" not in value:
            self.fail("affine needs both M and n", "affine")
        M = self.matrix(value["M"], size, size, "affine.M", "M", self.number)
        n = value["n"]
        if not isinstance(n, list) or len(n) != size:
            got = len(n) if isinstance(n, list) else type(n).__name__
            self.fail(f"expected {size} entries, got {got}", "affine.n", "n")
        n = [self.number(x, f"affine.n[{i}]", "n") for i, x in enumerate(n)]
        return np.array(M), np.array(n)

    def _nc_family(self, value, dim):
        if not isinstance(value, dict):
            self.fail("nc_family must be an object", "nc_family")
        if dim != 2:
            self.fail("nc_family channels are qubit channels; dim must be 2", "dim")
        family = value.get("family")
        if family not in (1, 2) or isinstance(family, bool):
            self.fail(f"family must be 1 or 2, got {json.dumps(family)}", "nc_family.family", "family")
        angles = {}
        for name in _ANGLES:
            if name not in value:
                if name == "eta":
                    angles[name] = 0.0
                    continue
                self.fail(f"missing angle '{name}'", f"nc_family.{name}", "nc_family")
            angles[name] = self.number(value[name], f"nc_family.{name}", name)
        unknown = set(value) - set(_ANGLES) - {"family"}
        if unknown:
            self.fail(f"unknown key '{sorted(unknown)[0]}'", f"nc_family.{sorted(unknown)[0]}", sorted(unknown)[0])
        return NCFamilyParams(family, **angles)


def loads_spec(text, source=None, degrees=False):
    """Parse a specification from a string.

    Args:
        text: JSON document.
        source: file name used in diagnostics.
        degrees: interpret ``nc_family`` angles as degrees.

    Raises:
        SpecParseError: with the offending field and line where known.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON: {exc.msg} (column {exc.colno})", line=exc.lineno) from exc
    parser = _Parser(text, source)
    spec = parser.parse(doc)
    if degrees and spec.representation == "nc_family":
        p = spec.payload
        spec.payload = NCFamilyParams(p.family, *(math.radians(getattr(p, a)) for a in _ANGLES))
    if spec.representation == "kraus":
        try:
            KrausChannel(spec.payload)
        except ValidationError as exc:
            raise SpecParseError(str(exc), field="kraus", line=_line_of(text, "kraus")) from exc
    return spec


def parse_spec(path, degrees=False):
    """Read and validate a specification file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc.strerror}") from exc
    return loads_spec(text, source=str(path), degrees=degrees)


def _encode(spec):
    doc = {}
    if spec.label is not None:
        doc["label"] = spec.label
    doc["dim"] = spec.dim
    doc["representation"] = spec.representation
    if spec.representation == "kraus":
        doc["kraus"] = [
            [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(k, dtype=complex)]
            for k in spec.payload
        ]
    elif spec.representation == "affine":
        M, n = spec.payload
        doc["affine"] = {"M": np.asarray(M, dtype=float).tolist(), "n": np.asarray(n, dtype=float).tolist()}
    else:
        p = spec.payload
        doc["nc_family"] = {"family": p.family, **{a: getattr(p, a) for a in _ANGLES}}
    return doc


def dumps_spec(spec):
    """Serialize a :class:`ChannelSpec` as JSON.

    Floats use the shortest repr that round-trips exactly (at most 17
    significant digits).
    """
    return json.dumps(_encode(spec), indent=2) + "\n"

"""File formats.

Fields and sinograms: a short text header (magic ``SYMRAD1``) followed by
the raw little-endian float64 payload in row-major order, so round trips
are bitwise while the header stays human-checkable.

Phantoms: plain text, one term per line, ``weight alpha c1 c2 ... cn``,
``#`` comments and blank lines allowed.
"""
from __future__ import annotations

import numpy as np

from .errors import FormatError
from .forward import Sinogram, SinogramSpec
from .grids import Field, GridSpec
from .phantoms import Phantom

MAGIC = "SYMRAD1"


def _read_header(fh, path, expected_kind, keys):
    first = fh.readline().decode("ascii", errors="replace").rstrip("\n")
    parts = first.split()
    if len(parts) != 2 or parts[0] != MAGIC:
        raise FormatError(f"{path}: line 1: expected '{MAGIC} <kind>', got "
                          f"{first!r}")
    if parts[1] != expected_kind:
        raise FormatError(f"{path}: line 1: kind {parts[1]!r}, expected "
                          f"{expected_kind!r}")
    out = {}
    for lineno, (key, conv) in enumerate(keys, start=2):
        line = fh.readline().decode("ascii", errors="replace").rstrip("\n")
        parts = line.split()
        if len(parts) != 2 or parts[0] != key:
            raise FormatError(f"{path}: line {lineno}: expected "
                              f"'{key} <value>', got {line!r}")
        try:
            out[key] = conv(parts[1])
        except ValueError:
            raise FormatError(f"{path}: line {lineno}: bad value {parts[1]!r} "
                              f"for {key}") from None
    return out


def _read_payload(fh, path, count):
    data = fh.read()
    n = len(data) // 8
    if len(data) != 8 * count:
        raise FormatError(f"{path}: expected {count} values, found {n}")
    return np.frombuffer(data, dtype="<f8").astype(float)


def write_field(f: Field, path) -> None:
    header = (f"{MAGIC} field\n"
              f"dims {f.spec.dims}\n"
              f"samples {f.spec.samples}\n"
              f"extent {float(f.spec.extent)!r}\n")
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(f.values, dtype="<f8").tobytes())


def read_field(path) -> Field:
    with open(path, "rb") as fh:
        hdr = _read_header(fh, path, "field",
                           [("dims", int), ("samples", int),
                            ("extent", float)])
        spec = GridSpec(dims=hdr["dims"], extent=hdr["extent"],
                        samples=hdr["samples"])
        values = _read_payload(fh, path, spec.samples ** spec.dims)
    return Field(spec=spec,
                 values=values.reshape((spec.samples,) * spec.dims))


def write_sinogram(sg: Sinogram, path) -> None:
    sp = sg.spec
    header = (f"{MAGIC} sinogram\n"
              f"angles {sp.n_angles}\n"
              f"offsets {sp.n_offsets}\n"
              f"offset_extent {float(sp.offset_halfwidth)!r}\n")
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(sg.values, dtype="<f8").tobytes())


def read_sinogram(path) -> Sinogram:
    with open(path, "rb") as fh:
        hdr = _read_header(fh, path, "sinogram",
                           [("angles", int), ("offsets", int),
                            ("offset_extent", float)])
        spec = SinogramSpec(n_angles=hdr["angles"], n_offsets=hdr["offsets"],
                            offset_halfwidth=hdr["offset_extent"])
        values = _read_payload(fh, path, spec.n_angles * spec.n_offsets)
    return Sinogram(spec=spec,
                    values=values.reshape(spec.n_angles, spec.n_offsets))


def write_phantom(ph: Phantom, path) -> None:
    with open(path, "w") as fh:
        fh.write("# weight alpha c1 ... cn\n")
        for w, a, c in zip(ph.weights, ph.alphas, ph.centers):
            coords = " ".join(repr(float(x)) for x in c)
            fh.write(f"{float(w)!r} {float(a)!r} {coords}\n")


def read_phantom(path, dims: int | None = None) -> Phantom:
    terms = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = body.split()
            if len(parts) < 4:
                raise FormatError(
                    f"{path}: line {lineno}: need 'weight alpha c1 ... cn' "
                    f"with at least 2 coordinates"
                )
            try:
                nums = [float(x) for x in parts]
            except ValueError:
                raise FormatError(
                    f"{path}: line {lineno}: non-numeric entry in {body!r}"
                ) from None
            w, a, c = nums[0], nums[1], nums[2:]
            if dims is None:
                dims = len(c)
            elif len(c) != dims:
                raise FormatError(
                    f"{path}: line {lineno}: expected {dims} coordinates, "
                    f"got {len(c)}"
                )
            terms.append((w, c, a))
    return Phantom.from_terms(terms, dims=dims if dims is not None else 2)

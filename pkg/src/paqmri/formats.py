"""On-disk formats used by the command-line surface.

Binary matrix container (".paqmat"):
    bytes 0-7    magic ``PAQMAT01``
    bytes 8-39   dtype tag, ASCII, null-padded: ``complex64-pair-little-endian``
                 (each element is a little-endian float64 real/imag pair)
    bytes 40-47  rows, unsigned 64-bit little-endian
    bytes 48-55  cols, unsigned 64-bit little-endian
    bytes 56-    payload: rows*cols*16 bytes, row-major interleaved
                 real/imag float64

Save/load round-trips are bit-exact. Images travel as binary PGM (P5),
8-bit by default with a 16-bit (big-endian samples, per the PGM spec)
variant for precision-sensitive outputs.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

__all__ = [
    "MATRIX_MAGIC",
    "MATRIX_DTYPE_TAG",
    "save_matrix",
    "load_matrix",
    "write_pgm",
    "read_pgm",
    "quantize_unit_image",
    "format_float",
]

MATRIX_MAGIC = b"PAQMAT01"
MATRIX_DTYPE_TAG = b"complex64-pair-little-endian"
_DTYPE_FIELD = 32
_HEADER = struct.Struct("<QQ")


def save_matrix(path, arr) -> None:
    """Write a 1-D or 2-D complex array (1-D is stored as a single row)."""
    a = np.atleast_2d(np.asarray(arr, dtype=np.complex128))
    if a.ndim != 2:
        raise ValueError(f"expected a 1-D or 2-D array, got {np.asarray(arr).ndim}-D")
    rows, cols = a.shape
    with open(path, "wb") as fh:
        fh.write(MATRIX_MAGIC)
        fh.write(MATRIX_DTYPE_TAG.ljust(_DTYPE_FIELD, b"\0"))
        fh.write(_HEADER.pack(rows, cols))
        fh.write(np.ascontiguousarray(a).astype("<c16").tobytes())


def load_matrix(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if raw[:8] != MATRIX_MAGIC:
        raise ValueError(f"{path}: bad magic {raw[:8]!r}, expected {MATRIX_MAGIC!r}")
    tag = raw[8 : 8 + _DTYPE_FIELD].rstrip(b"\0")
    if tag != MATRIX_DTYPE_TAG:
        raise ValueError(f"{path}: unsupported dtype tag {tag!r}")
    rows, cols = _HEADER.unpack_from(raw, 8 + _DTYPE_FIELD)
    start = 8 + _DTYPE_FIELD + _HEADER.size
    expected = rows * cols * 16
    payload = raw[start:]
    if len(payload) != expected:
        raise ValueError(
            f"{path}: payload is {len(payload)} bytes, expected {expected}"
        )
    return np.frombuffer(payload, dtype="<c16").reshape(rows, cols).astype(np.complex128)


def quantize_unit_image(image, maxval: int = 255):
    """Min-max scale a real image to [0, maxval] integers.

    Returns (quantized uint array, lo, hi) where lo/hi are the original
    range, so the scaling is recoverable: value ~= lo + code/maxval*(hi-lo).
    """
    img = np.asarray(image, dtype=float)
    lo, hi = float(img.min()), float(img.max())
    if hi > lo:
        scaled = (img - lo) / (hi - lo)
    else:
        scaled = np.zeros_like(img)
    codes = np.rint(scaled * maxval)
    dtype = np.uint8 if maxval <= 255 else np.uint16
    return codes.astype(dtype), lo, hi


def write_pgm(path, data, maxval: int = 255) -> None:
    """Write a 2-D unsigned integer array as binary PGM (P5).

    Samples are one byte for maxval <= 255, otherwise two bytes
    big-endian (maxval up to 65535).
    """
    a = np.asarray(data)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D array, got {a.ndim}-D")
    if not 1 <= maxval <= 65535:
        raise ValueError(f"maxval must be in [1, 65535], got {maxval}")
    if a.min() < 0 or a.max() > maxval:
        raise ValueError("pixel values out of [0, maxval] range")
    sample_dtype = ">u1" if maxval <= 255 else ">u2"
    with open(path, "wb") as fh:
        fh.write(f"P5\n{a.shape[1]} {a.shape[0]}\n{maxval}\n".encode("ascii"))
        fh.write(a.astype(sample_dtype).tobytes())


def read_pgm(path):
    """Read a binary PGM (P5); returns (2-D uint array, maxval)."""
    raw = Path(path).read_bytes()
    if raw[:2] != b"P5":
        raise ValueError(f"{path}: not a binary PGM (P5) file")
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if raw[pos : pos + 1] == b"#":
            while pos < len(raw) and raw[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        fields.append(int(raw[start:pos]))
    pos += 1  # single whitespace after maxval
    width, height, maxval = fields
    if not 1 <= maxval <= 65535:
        raise ValueError(f"{path}: invalid maxval {maxval}")
    dtype = ">u1" if maxval <= 255 else ">u2"
    count = width * height
    sample_bytes = 1 if maxval <= 255 else 2
    if len(raw) - pos < count * sample_bytes:
        raise ValueError(f"{path}: truncated pixel data")
    data = np.frombuffer(raw, dtype=dtype, count=count, offset=pos)
    return data.reshape(height, width).astype(np.uint16 if maxval > 255 else np.uint8), maxval


def format_float(x) -> str:
    """Deterministic shortest round-trip decimal for CSV/JSON payloads."""
    return repr(float(x))

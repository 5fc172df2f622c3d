"""Matrix codecs: CSV rows and the LTBX binary layout.

Binary layout (little endian): magic ``LTBX``, u32 N, u32 kind, u32 reserved,
then N·N complex entries in row-major order as (re, im) float64 pairs.
"""
import struct
from enum import IntEnum
from typing import Iterator, List, Tuple

import numpy as np
from numpy.typing import NDArray

MAGIC = b"LTBX"
HEADER = struct.Struct("<4sIII")


class MatrixKind(IntEnum):
    GRAM = 1
    WEIGHTED = 2
    LANDAU_FORM = 3
    LANDAU_GRAM = 4


def encode_matrix(matrix: NDArray[np.complex128], kind: MatrixKind) -> bytes:
    matrix = np.asarray(matrix)
    n_rows, n_cols = matrix.shape
    if n_rows != n_cols:
        raise ValueError("only square matrices are exported")
    body = np.ascontiguousarray(matrix, dtype="<c16").tobytes()
    return HEADER.pack(MAGIC, n_rows, int(kind), 0) + body


def decode_matrix(data: bytes) -> Tuple[NDArray[np.complex128], MatrixKind]:
    magic, n, kind, _ = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError(f"not an LTBX matrix (magic {magic!r})")
    expected = HEADER.size + 16 * n * n
    if len(data) != expected:
        raise ValueError(f"truncated matrix: {len(data)} bytes, expected {expected}")
    matrix = np.frombuffer(data, dtype="<c16", offset=HEADER.size).reshape(n, n)
    return matrix.astype(np.complex128), MatrixKind(kind)


def matrix_rows(matrix: NDArray[np.complex128]) -> Iterator[List[str]]:
    """CSV rows ``row, col, re, im`` with round-trip float formatting."""
    matrix = np.asarray(matrix)
    for (row, col), value in np.ndenumerate(matrix):
        yield [str(row), str(col), format_float(value.real), format_float(value.imag)]


def format_float(value: float) -> str:
    return f"{float(value):.17g}"

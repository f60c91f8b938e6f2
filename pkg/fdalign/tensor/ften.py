"""FTEN binary tensor dumps.

Layout: b"FTEN", u32 LE rank, rank x u32 LE dims, then prod(dims) x f64 LE
values in row-major order.
"""
import os

import numpy as np

from fdalign.errors import FtenFormatError

MAGIC = b"FTEN"
_U32 = np.dtype("<u4")
_F64 = np.dtype("<f8")


def encode_ften(array: np.ndarray) -> bytes:
    array = np.ascontiguousarray(array, dtype=_F64)
    header = MAGIC + np.array([array.ndim], dtype=_U32).tobytes()
    header += np.array(array.shape, dtype=_U32).tobytes()
    return header + array.tobytes(order="C")


def decode_ften(payload: bytes, source: str = "<bytes>") -> np.ndarray:
    if len(payload) < 8 or payload[:4] != MAGIC:
        raise FtenFormatError(f"{source}: missing FTEN magic header")
    rank = int(np.frombuffer(payload, dtype=_U32, count=1, offset=4)[0])
    dims_end = 8 + 4 * rank
    if len(payload) < dims_end:
        raise FtenFormatError(f"{source}: truncated dimension block (rank {rank})")
    shape = tuple(
        int(d) for d in np.frombuffer(payload, dtype=_U32, count=rank, offset=8)
    )
    count = int(np.prod(shape, dtype=np.int64)) if rank else 1
    expected = dims_end + 8 * count
    if len(payload) != expected:
        raise FtenFormatError(
            f"{source}: expected {expected} bytes for shape {shape}, found {len(payload)}"
        )
    values = np.frombuffer(payload, dtype=_F64, count=count, offset=dims_end)
    return values.reshape(shape).astype(np.float64)


def write_ften(path: str, array) -> None:
    data = array.data if hasattr(array, "requires_grad") else array
    with open(path, "wb") as f:
        f.write(encode_ften(np.asarray(data)))


def read_ften(path: str) -> np.ndarray:
    if not os.path.exists(path):
        raise FtenFormatError(f"{path}: file not found")
    with open(path, "rb") as f:
        return decode_ften(f.read(), source=path)

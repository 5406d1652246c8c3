"""IQ batch file formats.

CSV export: header ``replicate,carrier,re,im``, one row per occupied
carrier, replicate 0-based, carrier 1-based, 17 significant digits.

IQB1 binary (round-trip format), little-endian throughout:
magic ``PNSCIQB1`` | u32 version | u64 n_replicates | u32 k_max | u64 seed |
n*k_max complex128 samples, replicate-major | n u32 k_used.
"""

from __future__ import annotations

import struct

import numpy as np

from ..controls import FormatError
from .field import IQBatch

MAGIC = b"PNSCIQB1"
VERSION = 1
_HEADER = struct.Struct("<IQIQ")  # version, n_replicates, k_max, seed


def write_iq(batch: IQBatch, path) -> None:
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(
            _HEADER.pack(VERSION, batch.n_replicates, batch.k_max, batch.seed)
        )
        f.write(np.ascontiguousarray(batch.samples, dtype="<c16").tobytes())
        f.write(np.ascontiguousarray(batch.k_used, dtype="<u4").tobytes())


def _read_exact(f, size: int, what: str) -> bytes:
    data = f.read(size)
    if len(data) != size:
        raise FormatError(f"truncated IQ file while reading {what}")
    return data


def read_iq(path) -> IQBatch:
    with open(path, "rb") as f:
        if _read_exact(f, len(MAGIC), "magic") != MAGIC:
            raise FormatError("not an IQB1 file (bad magic)")
        version, n, k_max, seed = _HEADER.unpack(
            _read_exact(f, _HEADER.size, "header")
        )
        if version != VERSION:
            raise FormatError(f"unsupported IQB1 version {version}")
        raw = _read_exact(f, 16 * n * k_max, "samples")
        samples = np.frombuffer(raw, dtype="<c16").astype(np.complex128)
        raw = _read_exact(f, 4 * n, "carrier counts")
        k_used = np.frombuffer(raw, dtype="<u4").astype(np.uint32)
        if f.read(1):
            raise FormatError("trailing bytes after IQB1 payload")
    return IQBatch(samples.reshape(n, k_max), k_used, int(seed))


def write_csv(batch: IQBatch, path) -> None:
    n = batch.n_replicates
    k = batch.k_used.astype(np.int64)
    rep = np.repeat(np.arange(n), k)
    starts = np.concatenate(([0], np.cumsum(k[:-1])))
    col = np.arange(int(k.sum())) - np.repeat(starts, k)
    vals = batch.samples[rep, col]
    table = np.column_stack((rep, col + 1, vals.real, vals.imag))
    np.savetxt(
        path,
        table,
        fmt="%d,%d,%.17g,%.17g",
        header="replicate,carrier,re,im",
        comments="",
    )

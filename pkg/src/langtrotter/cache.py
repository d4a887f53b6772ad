"""Per-prime trace data on disk.

Layout of ``<cache_dir>/p_<p>.bin`` (little-endian)::

    u32 p
    u32 R                      histogram covers traces -R..R, R = isqrt(4p)
    i64 counts[2R + 1]         N_r(p) for r = -R..R
    u32 m                      number of membership bitsets that follow
    m times:
        i32 r
        u8  bits[ceil(p*p/8)]  np.packbits(table == r, bitorder="little"), row-major (a, b)

``<cache_dir>/index.tsv`` has the header ``p, r, flags, offset`` (tab
separated). The histogram row carries r = R and flags ``hist``; each bitset
row carries its trace and flags ``member``, with the byte offset of the bits.
The index is rebuilt from the ``.bin`` files after every run.
"""
from __future__ import annotations

import logging
import os
import struct
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .curves import compute_trace_table, hasse_range

log = logging.getLogger(__name__)

INDEX_HEADER = "p\tr\tflags\toffset\n"


@dataclass
class PrimeRecord:
    p: int
    histogram: np.ndarray  # int64, index r + R
    members: dict[int, np.ndarray] = field(default_factory=dict)  # r -> bool (p, p)

    @property
    def R(self) -> int:
        return hasse_range(self.p)

    def count(self, r: int) -> int:
        R = self.R
        return int(self.histogram[r + R]) if -R <= r <= R else 0

    def counts(self) -> dict[int, int]:
        R = self.R
        return {i - R: int(n) for i, n in enumerate(self.histogram) if n}


def record_from_table(p: int, table: np.ndarray, rs) -> PrimeRecord:
    R = hasse_range(p)
    hist = _kernels.trace_histogram(np.ascontiguousarray(table), R)
    return PrimeRecord(p, hist, {r: table == r for r in sorted(set(rs))})


def encode(rec: PrimeRecord) -> bytes:
    p, R = rec.p, rec.R
    parts = [struct.pack("<II", p, R), rec.histogram.astype("<i8").tobytes()]
    parts.append(struct.pack("<I", len(rec.members)))
    for r in sorted(rec.members):
        parts.append(struct.pack("<i", r))
        parts.append(np.packbits(rec.members[r].reshape(-1), bitorder="little").tobytes())
    return b"".join(parts)


def decode(data: bytes) -> tuple[PrimeRecord, list[tuple[int, int]]]:
    """Parse a prime file; returns the record and (r, bit offset) pairs.

    Raises ValueError on any inconsistency.
    """
    if len(data) < 8:
        raise ValueError("truncated header")
    p, R = struct.unpack_from("<II", data, 0)
    if p < 5 or R != hasse_range(p):
        raise ValueError("bad header")
    pos = 8
    hist = np.frombuffer(data, dtype="<i8", count=2 * R + 1, offset=pos).astype(np.int64)
    pos += 8 * (2 * R + 1)
    # Exactly p of the p^2 pairs are singular for p > 3.
    if hist.min() < 0 or int(hist.sum()) != p * p - p:
        raise ValueError("histogram does not cover the nonsingular pairs")
    (m,) = struct.unpack_from("<I", data, pos)
    pos += 4
    nbytes = (p * p + 7) // 8
    members, offsets = {}, []
    for _ in range(m):
        (r,) = struct.unpack_from("<i", data, pos)
        pos += 4
        if pos + nbytes > len(data):
            raise ValueError("truncated bitset")
        bits = np.frombuffer(data, dtype=np.uint8, count=nbytes, offset=pos)
        mask = np.unpackbits(bits, count=p * p, bitorder="little").astype(bool).reshape(p, p)
        if int(mask.sum()) != (int(hist[r + R]) if -R <= r <= R else 0):
            raise ValueError(f"bitset for r={r} disagrees with histogram")
        members[r] = mask
        offsets.append((r, pos))
        pos += nbytes
    if pos != len(data):
        raise ValueError("trailing bytes")
    return PrimeRecord(p, hist, members), offsets


class TraceCache:
    """Trace histograms and membership tables, optionally persisted.

    Without a directory this only computes. Each prime is written by the one
    thread that computed it, so no file has two writers.
    """

    def __init__(self, cache_dir: str | os.PathLike | None = None):
        self.dir = Path(cache_dir) if cache_dir else None
        self._index_lock = threading.Lock()
        if self.dir is not None:
            self.dir.mkdir(parents=True, exist_ok=True)

    def path(self, p: int) -> Path:
        return self.dir / f"p_{p}.bin"

    def _read(self, p: int) -> PrimeRecord | None:
        if self.dir is None or not self.path(p).exists():
            return None
        try:
            rec, _ = decode(self.path(p).read_bytes())
            if rec.p != p:
                raise ValueError("prime mismatch")
            return rec
        except (ValueError, struct.error) as exc:
            log.warning("discarding corrupt cache file %s: %s", self.path(p), exc)
            self.path(p).unlink(missing_ok=True)
            return None

    def _write(self, rec: PrimeRecord) -> None:
        target = self.path(rec.p)
        tmp = target.with_suffix(f".tmp{threading.get_ident()}")
        tmp.write_bytes(encode(rec))
        os.replace(tmp, target)

    def get(self, p: int, rs=()) -> PrimeRecord:
        """Histogram for p plus membership tables for every trace in rs."""
        wanted = set(rs)
        rec = self._read(p)
        if rec is not None and wanted <= rec.members.keys():
            return rec
        keep = set(rec.members) if rec is not None else set()
        fresh = record_from_table(p, compute_trace_table(p), wanted | keep)
        if self.dir is not None:
            self._write(fresh)
        return fresh

    def rebuild_index(self) -> None:
        if self.dir is None:
            return
        rows = []
        for f in self.dir.glob("p_*.bin"):
            try:
                rec, offsets = decode(f.read_bytes())
            except (ValueError, struct.error):
                continue
            rows.append((rec.p, rec.R, "hist", 8))
            rows.extend((rec.p, r, "member", off) for r, off in offsets)
        rows.sort(key=lambda row: (row[0], row[2] != "hist", row[1]))
        text = INDEX_HEADER + "".join(f"{p}\t{r}\t{fl}\t{off}\n" for p, r, fl, off in rows)
        with self._index_lock:
            tmp = self.dir / "index.tsv.tmp"
            tmp.write_text(text)
            os.replace(tmp, self.dir / "index.tsv")

    def read_index(self) -> list[tuple[int, int, str, int]]:
        if self.dir is None or not (self.dir / "index.tsv").exists():
            return []
        lines = (self.dir / "index.tsv").read_text().splitlines()[1:]
        out = []
        for line in lines:
            p, r, flags, off = line.split("\t")
            out.append((int(p), int(r), flags, int(off)))
        return out

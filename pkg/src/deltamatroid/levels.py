"""Level-by-level exhaustive enumeration of labelled delta-matroids.

Level n is built from level n-1 by composing every ordered pair of
parents (each parent a delta-matroid or the improper system, excluding the
improper/improper pair) and keeping the composites that are delta-matroids.
Up to level 4 compatibility is decided by the axiom checker directly.  At
level 5 it is decided by the minor-membership criterion: a proper system on
five or more elements whose single-element deletions and contractions are
all improper or delta-matroids is itself a delta-matroid unless its
feasible family is a single antipodal pair.

Caches of whole levels are numpy arrays of feasibility vectors, sorted
ascending, and can be persisted in a small binary format (see LevelCache).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .setsystem import (
    ImproperSystemError,
    MinorKind,
    SetSystem,
    atomic_write_bytes,
    check_symmetric_exchange,
    is_even,
    minor,
    popcount,
)

MAX_LISTED_LEVEL = 5
MAX_COUNTED_LEVEL = 6

_DTYPES = {0: "<u1", 1: "<u1", 2: "<u1", 3: "<u1", 4: "<u2", 5: "<u4", 6: "<u8"}


class ResourceLimitError(RuntimeError):
    """Raised when a request exceeds the supported enumeration scale."""


class CacheFormatError(ValueError):
    """Raised on malformed or corrupt level-cache files."""


class CacheInvariantError(ValueError):
    """Raised when a level cache fails its structural invariants."""


def _dtype_for(n: int) -> np.dtype:
    try:
        return np.dtype(_DTYPES[n])
    except KeyError:
        raise ResourceLimitError(
            f"level caches support n <= {MAX_COUNTED_LEVEL}, got {n}"
        ) from None


@dataclass(frozen=True)
class LevelCache:
    """All labelled delta-matroids on {1..n}, as sorted feasibility vectors."""

    n: int
    vectors: np.ndarray

    MAGIC = b"DMLC"
    VERSION = 1

    @classmethod
    def level_zero(cls) -> LevelCache:
        return cls(0, np.array([1], dtype=_dtype_for(0)))

    def __len__(self) -> int:
        return len(self.vectors)

    def contains(self, bits: int) -> bool:
        i = int(np.searchsorted(self.vectors, bits))
        return i < len(self.vectors) and int(self.vectors[i]) == bits

    def systems(self) -> Iterator[SetSystem]:
        for v in self.vectors:
            yield SetSystem(self.n, int(v))

    def validate(self, deep: bool = False) -> None:
        """Check structural invariants; with deep=True re-run the axiom
        checker on every entry (only sensible for small levels)."""
        v = self.vectors
        if v.dtype != _dtype_for(self.n):
            raise CacheInvariantError(f"dtype {v.dtype} wrong for level {self.n}")
        if len(v) == 0:
            raise CacheInvariantError("empty level cache")
        if np.any(v[:-1] >= v[1:]):
            raise CacheInvariantError("vectors not strictly ascending")
        if int(v[0]) == 0:
            raise CacheInvariantError("improper system stored in cache")
        limit = 1 << (1 << self.n)
        if int(v[-1]) >= limit:
            raise CacheInvariantError("vector out of range for level")
        if deep:
            for s in self.systems():
                if check_symmetric_exchange(s) is not None:
                    raise CacheInvariantError(f"non-delta-matroid entry {s.bits:#x}")

    def save(self, path: str | os.PathLike) -> None:
        header = (
            self.MAGIC
            + bytes([self.VERSION, self.n])
            + len(self.vectors).to_bytes(8, "little")
        )
        atomic_write_bytes(path, header + self.vectors.tobytes())

    @classmethod
    def load(cls, path: str | os.PathLike) -> LevelCache:
        with open(path, "rb") as fh:
            data = fh.read()
        if len(data) < 14 or data[:4] != cls.MAGIC:
            raise CacheFormatError(f"{path}: missing DMLC header")
        version, n = data[4], data[5]
        if version != cls.VERSION:
            raise CacheFormatError(f"{path}: unsupported version {version}")
        count = int.from_bytes(data[6:14], "little")
        dtype = _dtype_for(n)
        expected = 14 + count * dtype.itemsize
        if len(data) != expected:
            raise CacheFormatError(
                f"{path}: expected {expected} bytes for {count} records, got {len(data)}"
            )
        vectors = np.frombuffer(data[14:], dtype=dtype).copy()
        cache = cls(n, vectors)
        try:
            cache.validate()
        except CacheInvariantError as exc:
            raise CacheFormatError(f"{path}: {exc}") from None
        return cache


# --- direct compatibility testing (levels 1..4) -----------------------------

def _enumerate_small(prev: LevelCache) -> LevelCache:
    n = prev.n + 1
    half = 1 << prev.n
    parents = [0] + [int(v) for v in prev.vectors]
    out = []
    for d1 in parents:
        shifted = d1 << half
        for d2 in parents:
            bits = shifted | d2
            if bits == 0:
                continue
            if check_symmetric_exchange(SetSystem(n, bits)) is None:
                out.append(bits)
    return LevelCache(n, np.array(out, dtype=_dtype_for(n)))


# --- minor-membership compatibility kernel (levels >= 5) ---------------------

def _minor_table(n: int, p: int, kind: MinorKind) -> np.ndarray:
    """Lookup table: feasibility vector on {1..n} -> vector of its minor.

    Built for n=4 only (2^16 entries); larger vectors split into halves.
    """
    assert n == 4
    v = np.arange(1 << 16, dtype=np.uint32)
    out = np.zeros(1 << 16, dtype=np.uint16)
    want = 0 if kind is MinorKind.DELETE else 1
    for j in range(8):
        m = (j & ((1 << p) - 1)) | ((j >> p) << (p + 1)) | (want << p)
        out |= (((v >> m) & 1) << j).astype(np.uint16)
    return out.astype(np.uint8)


_TABLES4: dict[tuple[int, MinorKind], np.ndarray] = {}


def _tables4() -> dict[tuple[int, MinorKind], np.ndarray]:
    if not _TABLES4:
        for p in range(4):
            for kind in MinorKind:
                _TABLES4[(p, kind)] = _minor_table(4, p, kind)
    return _TABLES4


def _parent_minor_array(vectors: np.ndarray, parent_n: int, p: int, kind: MinorKind) -> np.ndarray:
    """Minor vectors of every parent, as a uint16 array (parent_n in {4, 5})."""
    tabs = _tables4()
    if parent_n == 4:
        return tabs[(p, kind)][vectors].astype(np.uint16)
    if parent_n == 5:
        lo = (vectors & np.uint32(0xFFFF)).astype(np.uint16)
        hi = (vectors >> np.uint32(16)).astype(np.uint16)
        if p < 4:
            t = tabs[(p, kind)]
            return (t[hi].astype(np.uint16) << np.uint16(8)) | t[lo]
        return hi if kind is MinorKind.CONTRACT else lo
    raise ResourceLimitError(f"no minor kernel for parent level {parent_n}")


class _ComposeKernel:
    """Vectorized compatibility rows for one child level (5 or 6).

    Holds the parent vectors (improper prepended), each parent's minor
    vectors per (element, kind), and a membership oracle against the
    previous level.  A row tests one first component against every second
    component at once: the composed system is a delta-matroid iff every
    joined minor is improper or cached and the pair is not antipodal.
    """

    def __init__(self, prev: LevelCache):
        self.child_n = prev.n + 1
        if self.child_n not in (5, 6):
            raise ResourceLimitError("compose kernel supports child levels 5 and 6")
        self.prev = prev
        dtype = prev.vectors.dtype
        self.parents = np.concatenate(
            [np.zeros(1, dtype=dtype), prev.vectors]
        )
        self.combos = [
            (p, kind) for p in range(prev.n) for kind in MinorKind
        ]
        self.parent_minors = {
            combo: _parent_minor_array(self.parents, prev.n, *combo)
            for combo in self.combos
        }
        if prev.n == 4:
            # joined minors are 16-bit: direct membership table
            table = np.zeros(1 << 16, dtype=bool)
            table[0] = True
            table[prev.vectors] = True
            self._ok_table: np.ndarray | None = table
            self._packed: np.ndarray | None = None
        else:
            # joined minors are 32-bit: packed bitmap, read in 2^16-wide
            # windows (one window per first-component minor value)
            packed = np.zeros(1 << 29, dtype=np.uint8)
            for b in range(8):
                sel = prev.vectors[(prev.vectors & np.uint32(7)) == b] >> np.uint32(3)
                packed[sel] |= np.uint8(1 << b)
            self._ok_table = None
            self._packed = packed

    def row_ok(self, parent_index: int) -> np.ndarray:
        """Boolean array over all parents-as-second-component: True where
        the composed system is a delta-matroid."""
        d1 = int(self.parents[parent_index])
        ok: np.ndarray | None = None
        for combo in self.combos:
            pm = self.parent_minors[combo]
            m1 = int(pm[parent_index])
            if self._ok_table is not None:
                good = self._ok_table[(np.uint16(m1) << np.uint16(8)) | pm]
            else:
                window = np.unpackbits(
                    self._packed[m1 << 13:(m1 + 1) << 13], bitorder="little"
                ).view(bool)
                if m1 == 0:
                    window[0] = True
                good = window[pm]
            ok = good if ok is None else (ok & good)
        assert ok is not None
        if d1 == 0:
            ok[0] = False
        elif popcount(d1) == 1:
            a = d1.bit_length() - 1
            partner = 1 << (a ^ ((1 << (self.child_n - 1)) - 1))
            j = int(np.searchsorted(self.parents, partner))
            if j < len(self.parents) and int(self.parents[j]) == partner:
                ok[j] = False
        return ok

    def row_vectors(self, parent_index: int, out_dtype: np.dtype) -> np.ndarray:
        ok = self.row_ok(parent_index)
        d1 = int(self.parents[parent_index])
        shifted = np.array(d1, dtype=out_dtype) << np.array(
            1 << (self.child_n - 1), dtype=out_dtype
        )
        return self.parents[ok].astype(out_dtype) | shifted


def _enumerate_fast(prev: LevelCache, threads: int = 1) -> LevelCache:
    kernel = _ComposeKernel(prev)
    n = kernel.child_n
    dtype = _dtype_for(n)
    total = len(kernel.parents)

    def run_chunk(lo: int, hi: int) -> list[np.ndarray]:
        return [kernel.row_vectors(i, dtype) for i in range(lo, hi)]

    if threads <= 1:
        pieces = run_chunk(0, total)
    else:
        bounds = np.linspace(0, total, threads * 4 + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(run_chunk, int(lo), int(hi))
                for lo, hi in zip(bounds[:-1], bounds[1:])
            ]
            pieces = [arr for fut in futures for arr in fut.result()]
    # parents are ascending and the first component occupies the high bits,
    # so concatenation in row order is already globally sorted
    vectors = np.concatenate([p for p in pieces if len(p)]).astype(dtype)
    return LevelCache(n, vectors)


def enumerate_level(prev: LevelCache, threads: int = 1) -> LevelCache:
    """Build the complete next level from the previous one."""
    prev.validate()
    n = prev.n + 1
    if n > MAX_LISTED_LEVEL:
        raise ResourceLimitError(
            f"level {n} cannot be materialized as a list; use class counting"
        )
    if n < 5:
        return _enumerate_small(prev)
    return _enumerate_fast(prev, threads=threads)


def fast_delta_matroid_check(d: SetSystem, prev: LevelCache) -> bool:
    """Delta-matroid test by minor membership plus antipodal exclusion.

    Valid on ground sets of size >= 5; agrees with check_symmetric_exchange
    there.  ``prev`` must be the complete cache one level down.
    """
    if d.n < 5:
        raise ValueError("minor-membership test requires n >= 5")
    if d.n != prev.n + 1:
        raise ValueError(f"cache level {prev.n} does not match system n={d.n}")
    if not d.is_proper:
        raise ImproperSystemError("improper system")
    if d.num_feasible == 2:
        a, b = d.feasible_masks()
        if a ^ b == (1 << d.n) - 1:
            return False
    for e in range(1, d.n + 1):
        for kind in MinorKind:
            sub = minor(d, e, kind)
            if sub.bits != 0 and not prev.contains(sub.bits):
                return False
    return True


def antipodal_systems(n: int) -> list[SetSystem]:
    """All systems whose feasible family is {F, complement of F}."""
    if n < 1:
        raise ValueError("antipodal systems need n >= 1")
    full = (1 << n) - 1
    out = []
    for f in range(1 << (n - 1)):
        out.append(SetSystem(n, (1 << f) | (1 << (f ^ full))))
    return out


# --- counts and reports ------------------------------------------------------

@dataclass(frozen=True)
class CountReport:
    n: int
    d: int
    gamma: float
    e: int | None = None


def gamma_value(n: int, d: int) -> float:
    return math.log2(math.log2(d + 1)) - (n - 1)


def _verify_count_invariants(reports: list[CountReport]) -> None:
    for r in reports:
        if r.gamma <= 0:
            raise ValueError(f"gamma at level {r.n} not positive: {r.gamma}")
        if r.d < 1 << (1 << (r.n - 1)):
            raise ValueError(f"level {r.n} count below the even-family floor")
    for a, b in zip(reports, reports[1:]):
        if b.d + 1 > (a.d + 1) ** 2:
            raise ValueError(f"recurrence violated between levels {a.n} and {b.n}")
        if a.n >= 2 and b.d + 1 >= (a.d + 1) ** 2:
            raise ValueError(f"strict recurrence violated at level {a.n}")
        if a.n >= 2 and b.gamma >= a.gamma:
            raise ValueError(f"gamma not decreasing at level {b.n}")


def count_report(
    n_max: int,
    levels: dict[int, LevelCache],
    with_even: bool = False,
    allow_n6: bool = False,
    d6: int | None = None,
) -> list[CountReport]:
    """Exact counts and gamma statistics for levels 1..n_max.

    ``levels`` must hold caches for 1..min(n_max, 5).  Level 6 is count-only
    and gated behind allow_n6; pass a precomputed d6 or it is recomputed
    from level 5 by equivalence-class counting (slow).
    """
    if n_max > MAX_COUNTED_LEVEL:
        raise ResourceLimitError(f"counts beyond level {MAX_COUNTED_LEVEL} unsupported")
    if n_max > MAX_LISTED_LEVEL and not allow_n6:
        raise ResourceLimitError("level 6 counting requires the explicit opt-in flag")
    reports = []
    for n in range(1, n_max + 1):
        if n <= MAX_LISTED_LEVEL:
            d = len(levels[n])
            e = count_even(levels[n]) if with_even else None
        else:
            d = d6 if d6 is not None else count_next_level_via_classes(levels[5])
            e = None
        reports.append(CountReport(n=n, d=d, gamma=gamma_value(n, d), e=e))
    _verify_count_invariants(reports)
    return reports


def even_parity_indicator(n: int) -> int:
    """Integer whose bit m is set iff mask m has even popcount."""
    ind = 1
    for k in range(n):
        width = 1 << k
        odd = ind ^ ((1 << width) - 1)
        ind |= odd << width
    return ind


def count_even(cache: LevelCache) -> int:
    """Number of cached systems in which all feasible sizes share a parity."""
    if cache.n == 0:
        return len(cache)
    ind = even_parity_indicator(cache.n)
    dtype = cache.vectors.dtype
    if dtype.itemsize * 8 >= (1 << cache.n):
        ev = np.array(ind, dtype=dtype)
        odd = np.array(ind ^ ((1 << (1 << cache.n)) - 1), dtype=dtype)
        v = cache.vectors
        hits = ((v & ev) == 0) | ((v & odd) == 0)
        return int(np.count_nonzero(hits))
    return sum(1 for s in cache.systems() if is_even(s))


def count_even_split(cache: LevelCache) -> tuple[int, int]:
    """(all-even-size, all-odd-size) counts among the cached systems."""
    ind = even_parity_indicator(cache.n)
    odd = ind ^ ((1 << (1 << cache.n)) - 1)
    v = cache.vectors
    n_all_even = int(np.count_nonzero((v & np.array(odd, dtype=v.dtype)) == 0))
    n_all_odd = int(np.count_nonzero((v & np.array(ind, dtype=v.dtype)) == 0))
    return n_all_even, n_all_odd


# --- equivalence classes under twist and relabelling -------------------------
#
# Two labelled delta-matroids are equivalent when one is a relabelling of a
# twist of the other.  The compatibility count of a first component is
# constant on classes, so one exhaustive scan per class representative
# suffices to count the next level.

def _position_xor_transform(vals: np.ndarray, n: int, q: int) -> np.ndarray:
    """Twist by element q+1: permute vector bits by mask-XOR with 2^q."""
    s = 1 << q
    low = 0
    for m in range(1 << n):
        if not (m >> q) & 1:
            low |= 1 << m
    lo = np.array(low, dtype=vals.dtype)
    sh = np.array(s, dtype=vals.dtype)
    return ((vals & lo) << sh) | ((vals >> sh) & lo)


def _position_swap_transform(vals: np.ndarray, n: int, q: int) -> np.ndarray:
    """Transpose elements q+1 and q+2: swap the two index bits of each mask."""
    s = 1 << q
    move = 0
    keep = 0
    for m in range(1 << n):
        b1, b2 = (m >> q) & 1, (m >> (q + 1)) & 1
        if b1 == 1 and b2 == 0:
            move |= 1 << m
        elif b1 == b2:
            keep |= 1 << m
    mv = np.array(move, dtype=vals.dtype)
    kp = np.array(keep, dtype=vals.dtype)
    sh = np.array(s, dtype=vals.dtype)
    return (vals & kp) | ((vals & mv) << sh) | ((vals >> sh) & mv)


def twist_permutation_canonical(cache: LevelCache) -> np.ndarray:
    """Per-entry canonical form: the minimum vector in its orbit under
    twists and relabellings.  Computed by minimum propagation along the
    orbit graph of involutive generators."""
    vals = cache.vectors
    n = cache.n
    transforms: list[Callable[[np.ndarray], np.ndarray]] = []
    for q in range(n):
        transforms.append(lambda v, q=q: _position_xor_transform(v, n, q))
    for q in range(n - 1):
        transforms.append(lambda v, q=q: _position_swap_transform(v, n, q))
    index_maps = []
    for t in transforms:
        images = t(vals)
        idx = np.searchsorted(vals, images)
        if np.any(vals[np.minimum(idx, len(vals) - 1)] != images):
            raise CacheInvariantError("cache not closed under twist/relabel")
        index_maps.append(idx)
    canon = vals.copy()
    while True:
        new = canon.copy()
        for idx in index_maps:
            np.minimum(new, canon[idx], out=new)
        if np.array_equal(new, canon):
            return canon
        canon = new


def twist_permutation_classes(cache: LevelCache) -> tuple[np.ndarray, np.ndarray]:
    """(representatives, class sizes); representatives are orbit minima."""
    canon = twist_permutation_canonical(cache)
    return np.unique(canon, return_counts=True)


def count_next_level_via_classes(
    prev: LevelCache,
    threads: int = 1,
    progress: Callable[[int, int], None] | None = None,
) -> int:
    """Count the next level without listing it.

    One compatibility row is evaluated per equivalence class representative
    and weighted by class size; the improper first component contributes one
    full previous level.  Requires child level >= 5.
    """
    reps, sizes = twist_permutation_classes(prev)
    kernel = _ComposeKernel(prev)
    rep_indices = np.searchsorted(kernel.parents, reps)

    def rows(lo: int, hi: int) -> int:
        subtotal = 0
        for k in range(lo, hi):
            ok = kernel.row_ok(int(rep_indices[k]))
            subtotal += int(sizes[k]) * int(np.count_nonzero(ok))
            if progress is not None:
                progress(k + 1, len(reps))
        return subtotal

    if threads <= 1:
        total = rows(0, len(reps))
    else:
        bounds = np.linspace(0, len(reps), threads * 4 + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(rows, int(lo), int(hi))
                for lo, hi in zip(bounds[:-1], bounds[1:])
            ]
            total = sum(f.result() for f in futures)
    return total + len(prev)


# --- on-disk level store ------------------------------------------------------

def cache_path(cache_dir: str | os.PathLike, n: int) -> str:
    return os.path.join(os.fspath(cache_dir), f"level-{n:02d}.v{LevelCache.VERSION}.dmlc")


def build_levels(
    n_max: int,
    cache_dir: str | os.PathLike | None = None,
    threads: int = 1,
) -> dict[int, LevelCache]:
    """Load or compute level caches 0..n_max, persisting computed ones.

    Corrupt cache files are detected by header and length checks and are
    recomputed rather than trusted.
    """
    if n_max > MAX_LISTED_LEVEL:
        raise ResourceLimitError(f"level lists stop at {MAX_LISTED_LEVEL}")
    levels: dict[int, LevelCache] = {0: LevelCache.level_zero()}
    for n in range(1, n_max + 1):
        cache = None
        if cache_dir is not None:
            path = cache_path(cache_dir, n)
            if os.path.exists(path):
                try:
                    cache = LevelCache.load(path)
                    if cache.n != n:
                        raise CacheFormatError(f"{path}: holds level {cache.n}")
                except CacheFormatError:
                    cache = None
        if cache is None:
            cache = enumerate_level(levels[n - 1], threads=threads)
            if cache_dir is not None:
                os.makedirs(cache_dir, exist_ok=True)
                cache.save(cache_path(cache_dir, n))
        levels[n] = cache
    return levels

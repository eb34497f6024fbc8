"""Compression of even delta-matroids and the matching upper bound.

The even-size subsets of {1..n} form one component of the distance-2 graph
of the hypercube; infeasible even sets of an even delta-matroid are a
vertex subset L of that component.  A container-style peeling procedure
(Kleitman-Winston) shrinks the graph to a small residue A while extracting
a short list S of L-vertices; each member of S carries a "local cover"
partition from which the feasibility of all its distance-2 neighbours can
be read back.  S, the covers, and the verbatim list of L inside A suffice
to reconstruct L exactly, and counting the possible records yields an
upper bound on the number of even delta-matroids.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations

import numpy as np

from .setsystem import (
    ImproperSystemError,
    SetSystem,
    SystemFormatError,
    atomic_write_text,
    is_even,
    min_feasible_matroid,
    popcount,
    twist,
)


class EncodingError(ValueError):
    """Invalid input to the encoding machinery."""


class InconsistentPrefixError(EncodingError):
    """A claimed peeling prefix S cannot be replayed on the graph."""


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"


# --- the distance-2 graph and its spectrum ------------------------------------

@dataclass(frozen=True)
class RegularGraph:
    """A d-regular graph with a fixed total vertex ordering.

    ``vertices`` lists vertex names (masks) in the tie-breaking order;
    ``adjacency[i]`` holds the neighbor indices of vertex i.
    """

    vertices: tuple[int, ...]
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.vertices) != len(self.adjacency):
            raise EncodingError("adjacency size mismatch")
        degrees = {len(row) for row in self.adjacency}
        if len(degrees) > 1:
            raise EncodingError(f"graph is not regular: degrees {sorted(degrees)}")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def degree(self) -> int:
        return len(self.adjacency[0]) if self.adjacency else 0

    def index_of(self, mask: int) -> int:
        lo, hi = 0, len(self.vertices)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.vertices[mid] < mask:
                lo = mid + 1
            else:
                hi = mid
        if lo == len(self.vertices) or self.vertices[lo] != mask:
            raise EncodingError(f"mask {mask} is not a vertex")
        return lo


def halved_cube(n: int, parity: Parity = Parity.EVEN) -> RegularGraph:
    """One component of the distance-2 graph of the n-cube.

    Vertices are the 2^(n-1) masks of the given size parity, in ascending
    order; two are adjacent when they differ in exactly two bits.  The
    graph is regular of degree C(n, 2).
    """
    if n < 2:
        raise EncodingError("component graph needs n >= 2")
    want = 0 if parity is Parity.EVEN else 1
    vertices = tuple(m for m in range(1 << n) if popcount(m) & 1 == want)
    index = {m: i for i, m in enumerate(vertices)}
    flips = [
        (1 << i) | (1 << j) for i, j in combinations(range(n), 2)
    ]
    adjacency = tuple(
        tuple(index[m ^ f] for f in flips) for m in vertices
    )
    return RegularGraph(vertices, adjacency)


def cube_adjacency_matrix(n: int) -> np.ndarray:
    """Adjacency matrix of the n-cube on all 2^n masks (exact integers)."""
    size = 1 << n
    masks = np.arange(size, dtype=np.uint32)
    xors = masks[:, None] ^ masks[None, :]
    pop = np.zeros(size, dtype=np.uint8)
    for i in range(n):
        pop += ((masks >> i) & 1).astype(np.uint8)
    dist = pop[xors]
    return (dist == 1).astype(np.int64)


def distance_two_matrix_identity(n: int) -> bool:
    """Exact check that the distance-2 adjacency matrix equals
    (A(Q_n)^2 - n*I)/2, which encodes that any two cube vertices at
    distance two have exactly two common neighbours."""
    if not 2 <= n <= 8:
        raise EncodingError("dense matrix identity limited to 2 <= n <= 8")
    size = 1 << n
    a = cube_adjacency_matrix(n)
    masks = np.arange(size, dtype=np.uint32)
    xors = masks[:, None] ^ masks[None, :]
    pop = np.zeros(size, dtype=np.uint8)
    for i in range(n):
        pop += ((masks >> i) & 1).astype(np.uint8)
    r = (pop[xors] == 2).astype(np.int64)
    lhs = 2 * r
    rhs = a @ a - n * np.eye(size, dtype=np.int64)
    return bool(np.array_equal(lhs, rhs))


def halved_cube_spectrum(n: int) -> list[int]:
    """Eigenvalues (lambda^2 - n)/2 for lambda = -n, -n+2, ..., n."""
    if n < 2:
        raise EncodingError("spectrum needs n >= 2")
    return [(lam * lam - n) // 2 for lam in range(-n, n + 1, 2)]


def smallest_eigenvalue(n: int) -> int:
    """Smallest distance-2 component eigenvalue: -n/2 for even n,
    (1-n)/2 for odd n."""
    return min(halved_cube_spectrum(n))


def eigenvalue_gap(n: int) -> Fraction:
    """lambda = |smallest eigenvalue| as an exact rational."""
    return Fraction(-smallest_eigenvalue(n))


# --- the peeling procedure -----------------------------------------------------

@dataclass(frozen=True)
class KWStep:
    mask: int
    taken: bool


@dataclass(frozen=True)
class KWResult:
    s: tuple[int, ...]
    a: tuple[int, ...]
    trace: tuple[KWStep, ...]


def _peel(
    graph: RegularGraph,
    alpha: Fraction,
    in_l,
    expected_s: tuple[int, ...] | None = None,
) -> KWResult:
    """Shared engine for encoding and replay.

    At each step the highest-degree vertex of the surviving induced
    subgraph is examined (ties to the earliest vertex in the fixed order).
    An L-vertex is appended to S and removed together with its surviving
    neighbours; a non-L vertex is removed alone.  Stops once the survivor
    count is at most alpha * N.

    For replay mode ``in_l`` tests membership in the claimed S and
    ``expected_s`` enforces that S is consumed in order and exhausted.
    """
    if not 0 < alpha < 1:
        raise EncodingError(f"alpha must be in (0, 1), got {alpha}")
    count = graph.n_vertices
    alive = [True] * count
    degree = [graph.degree] * count
    survivors = count
    threshold = alpha * count
    s: list[int] = []
    trace: list[KWStep] = []

    def remove(idx: int) -> None:
        nonlocal survivors
        alive[idx] = False
        survivors -= 1
        for nb in graph.adjacency[idx]:
            if alive[nb]:
                degree[nb] -= 1

    while survivors > threshold:
        best = -1
        best_deg = -1
        for idx in range(count):
            if alive[idx] and degree[idx] > best_deg:
                best, best_deg = idx, degree[idx]
        mask = graph.vertices[best]
        if in_l(mask):
            if expected_s is not None:
                if len(s) >= len(expected_s) or expected_s[len(s)] != mask:
                    raise InconsistentPrefixError(
                        f"replay selects {mask} out of order"
                    )
            s.append(mask)
            trace.append(KWStep(mask, True))
            neighbours = [nb for nb in graph.adjacency[best] if alive[nb]]
            remove(best)
            for nb in neighbours:
                remove(nb)
        else:
            trace.append(KWStep(mask, False))
            remove(best)
    if expected_s is not None and len(s) != len(expected_s):
        raise InconsistentPrefixError(
            "replay finished without selecting all claimed vertices"
        )
    a = tuple(graph.vertices[i] for i in range(count) if alive[i])
    return KWResult(tuple(s), a, tuple(trace))


def kw_encode(graph: RegularGraph, l_set, alpha: Fraction) -> KWResult:
    """Run the peeling procedure against a target vertex set L.

    Postconditions: S is a subsequence of L; every L-vertex is in S, a
    neighbour of S, or the residue A; |A| <= alpha * N.
    """
    members = set(l_set)
    for m in members:
        graph.index_of(m)
    return _peel(graph, alpha, members.__contains__)


def kw_reconstruct(graph: RegularGraph, s: tuple[int, ...], alpha: Fraction) -> tuple[int, ...]:
    """Replay the procedure from S alone and return the residue A.

    The residue is independent of which L produced S, so the record does
    not need to transmit it.
    """
    result = _peel(graph, alpha, set(s).__contains__, expected_s=tuple(s))
    return result.a


def s_length_bound(n: int) -> int:
    """ceil(ln(d+1)/(d+lambda) * N) for the even component parameters."""
    d = math.comb(n, 2)
    lam = eigenvalue_gap(n)
    big_n = 1 << (n - 1)
    return math.ceil(math.log(d + 1) / (d + lam) * big_n)


def component_alpha(n: int) -> Fraction:
    """alpha = lambda/(d + lambda): 1/n for even n, 1/(n+1) for odd n."""
    lam = eigenvalue_gap(n)
    return lam / (math.comb(n, 2) + lam)


# --- local covers ---------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """Partition of {0, 1, ..., n}, where 0 stands for the extra point z."""

    n: int
    blocks: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise EncodingError("empty block")
            if block & seen:
                raise EncodingError("blocks are not disjoint")
            seen |= block
        if seen != set(range(self.n + 1)):
            raise EncodingError(f"blocks do not cover 0..{self.n}")

    def block_of(self, element: int) -> frozenset[int]:
        for block in self.blocks:
            if element in block:
                return block
        raise EncodingError(f"element {element} not covered")

    def sorted_blocks(self) -> list[list[int]]:
        return sorted(sorted(b) for b in self.blocks)


def single_block_partition(n: int) -> Partition:
    return Partition(n, (frozenset(range(n + 1)),))


def local_cover(d: SetSystem, x: int) -> Partition:
    """Partition of the ground set plus z recording, for the infeasible
    even set X, which sets X symmetric-difference {a, b} are feasible.

    If none are, the partition is a single block.  Otherwise the size-2
    minimum feasible sets of the twist D*X are the bases of a rank-2
    matroid; the blocks are its parallel classes, with loops and z merged
    into one block.
    """
    if not is_even(d):
        raise EncodingError("local covers require an even delta-matroid")
    if popcount(next(d.feasible_masks())) & 1:
        raise EncodingError("system must be all-even (twist by {1} first)")
    if popcount(x) & 1:
        raise EncodingError(f"target set {x} has odd size")
    if d.has_mask(x):
        raise EncodingError(f"target set {x} is feasible")
    twisted = twist(d, x)
    matroid = min_feasible_matroid(twisted)
    if matroid.rank >= 4:
        return single_block_partition(d.n)
    if matroid.rank != 2:
        raise EncodingError(f"unexpected minimum feasible size {matroid.rank}")
    bases = set(matroid.system.feasible_masks())
    non_loops = [
        e for e in range(1, d.n + 1)
        if any(basis & (1 << (e - 1)) for basis in bases)
    ]
    loops = [e for e in range(1, d.n + 1) if e not in non_loops]
    classes: list[set[int]] = []
    for e in non_loops:
        for cls in classes:
            rep = next(iter(cls))
            if ((1 << (e - 1)) | (1 << (rep - 1))) not in bases:
                cls.add(e)
                break
        else:
            classes.append({e})
    for cls in classes:
        for a in cls:
            for b in cls:
                if a < b and ((1 << (a - 1)) | (1 << (b - 1))) in bases:
                    raise EncodingError("parallelism is not transitive")
    for c1, c2 in combinations(classes, 2):
        for a in c1:
            for b in c2:
                if ((1 << (a - 1)) | (1 << (b - 1))) not in bases:
                    raise EncodingError("cross-class pair is not a basis")
    blocks = [frozenset({0, *loops})] + [frozenset(c) for c in classes]
    return Partition(d.n, tuple(blocks))


def cover_certifies(p: Partition, a: int, b: int) -> bool:
    """True when the cover marks X symmetric-difference {a, b} feasible:
    at least three blocks and a, b in two distinct blocks, neither the
    block holding z."""
    if a == b or not (1 <= a <= p.n and 1 <= b <= p.n):
        raise EncodingError(f"invalid pair ({a}, {b})")
    if len(p.blocks) < 3:
        return False
    block_a = p.block_of(a)
    block_b = p.block_of(b)
    return block_a is not block_b and 0 not in block_a and 0 not in block_b


# --- whole-system records -------------------------------------------------------

@dataclass(frozen=True)
class EncodingRecord:
    """Everything needed to reconstruct an even delta-matroid.

    ``s`` is the ordered peeling selection, ``covers`` one partition per
    member of s, ``residual`` the infeasible even sets surviving in the
    residue A.  ``parity`` records whether the original system was twisted
    by {1} to make all sizes even.
    """

    n: int
    parity: Parity
    alpha: Fraction
    sigma: Fraction
    s: tuple[int, ...]
    covers: tuple[Partition, ...]
    residual: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.s) != len(self.covers):
            raise EncodingError("one cover required per selected vertex")
        if len(self.s) > s_length_bound(self.n):
            raise EncodingError("selection exceeds its guaranteed length bound")


def component_sigma(n: int) -> Fraction:
    """sigma = ln(d+1)/(d+lambda), canonicalized as the exact rational
    value of its double-precision evaluation."""
    d = math.comb(n, 2)
    lam = eigenvalue_gap(n)
    return Fraction(math.log(d + 1) / float(d + lam))


def encode_even_system(d: SetSystem) -> EncodingRecord:
    """Compress an even delta-matroid into an EncodingRecord.

    Systems whose feasible sizes are all odd are first twisted by {1}
    (recorded in the parity flag) so the infeasible target family lives in
    the even component.
    """
    if d.n < 2:
        raise EncodingError("encoding needs n >= 2")
    if not is_even(d):
        raise EncodingError("system is not even")
    parity = Parity.EVEN
    if popcount(next(d.feasible_masks())) & 1:
        parity = Parity.ODD
        d = twist(d, 1)
    graph = halved_cube(d.n, Parity.EVEN)
    feasible = set(d.feasible_masks())
    l_set = [m for m in graph.vertices if m not in feasible]
    alpha = component_alpha(d.n)
    result = kw_encode(graph, l_set, alpha)
    in_a = set(result.a)
    covers = tuple(local_cover(d, x) for x in result.s)
    residual = tuple(m for m in l_set if m in in_a)
    return EncodingRecord(
        n=d.n,
        parity=parity,
        alpha=alpha,
        sigma=component_sigma(d.n),
        s=result.s,
        covers=covers,
        residual=residual,
    )


def decode_even_system(record: EncodingRecord) -> tuple[int, ...]:
    """Reconstruct the infeasible even-mask family from a record."""
    graph = halved_cube(record.n, Parity.EVEN)
    residue = set(kw_reconstruct(graph, record.s, record.alpha))
    for m in record.residual:
        if m not in residue:
            raise EncodingError(f"residual mask {m} is outside the residue set")
    infeasible: set[int] = set(record.s)
    infeasible.update(record.residual)
    flips = [
        ((a, b), (1 << (a - 1)) | (1 << (b - 1)))
        for a, b in combinations(range(1, record.n + 1), 2)
    ]
    for x, cover in zip(record.s, record.covers):
        for (a, b), flip in flips:
            if not cover_certifies(cover, a, b):
                infeasible.add(x ^ flip)
    return tuple(sorted(infeasible))


def reconstruct_system(record: EncodingRecord) -> SetSystem:
    """Rebuild the original delta-matroid a record was produced from."""
    infeasible = set(decode_even_system(record))
    bits = 0
    for m in range(1 << record.n):
        if popcount(m) & 1 == 0 and m not in infeasible:
            bits |= 1 << m
    if bits == 0:
        raise ImproperSystemError("record decodes to an empty family")
    system = SetSystem(record.n, bits)
    if record.parity is Parity.ODD:
        system = twist(system, 1)
    return system


# --- record serialization -------------------------------------------------------

def record_to_dict(record: EncodingRecord) -> dict:
    return {
        "n": record.n,
        "parity": record.parity.value,
        "alpha": str(record.alpha),
        "sigma": str(record.sigma),
        "s": list(record.s),
        "covers": [cover.sorted_blocks() for cover in record.covers],
        "residual": list(record.residual),
    }


def record_from_dict(doc: object) -> EncodingRecord:
    if not isinstance(doc, dict):
        raise SystemFormatError("record document must be an object")
    try:
        n = doc["n"]
        parity = Parity(doc["parity"])
        alpha = Fraction(doc["alpha"])
        sigma = Fraction(doc["sigma"])
        s = tuple(int(m) for m in doc["s"])
        covers = tuple(
            Partition(n, tuple(frozenset(block) for block in blocks))
            for blocks in doc["covers"]
        )
        residual = tuple(int(m) for m in doc["residual"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SystemFormatError(f"bad record document: {exc}") from None
    if not isinstance(n, int) or n < 2:
        raise SystemFormatError("record needs an integer n >= 2")
    return EncodingRecord(n, parity, alpha, sigma, s, covers, residual)


def dumps_record(record: EncodingRecord) -> str:
    return json.dumps(record_to_dict(record), indent=2, sort_keys=True) + "\n"


def loads_record(text: str) -> EncodingRecord:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemFormatError(f"invalid JSON: {exc}") from None
    return record_from_dict(doc)


def save_record(record: EncodingRecord, path: str | os.PathLike) -> None:
    atomic_write_text(path, dumps_record(record))


def load_record(path: str | os.PathLike) -> EncodingRecord:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_record(fh.read())


# --- the counting bound ----------------------------------------------------------

def bell_number(k: int) -> int:
    """Bell number by the standard triangle recurrence."""
    if k < 0:
        raise EncodingError("Bell numbers need k >= 0")
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[0]


@dataclass(frozen=True)
class BoundReport:
    """Ingredients of the even-count upper bound at one ground-set size."""

    n: int
    alpha: Fraction
    sigma: float
    sigma_prime: Fraction
    bell_bound: int
    log_e_n_bound: float


def upper_bound_report(n: int) -> BoundReport:
    """Evaluate the record-counting upper bound on log2 of the even count.

    The record space is bounded by (number of possible S) x (covers per
    member, at most the Bell number of n+1 points, itself at most
    (n+1)^(n+1)) x (subsets of the residue).  sigma is rounded up to the
    grid rational sigma' with sigma <= sigma' <= sigma + 2^-(n-2).
    """
    if n < 3:
        raise EncodingError("bound evaluation needs n >= 3")
    alpha = component_alpha(n)
    d = math.comb(n, 2)
    lam = eigenvalue_gap(n)
    sigma = math.log(d + 1) / float(d + lam)
    half = 1 << (n - 1)
    sigma_prime = Fraction(1 + math.ceil(sigma * half), half)
    if not Fraction(sigma) <= sigma_prime <= Fraction(sigma) + Fraction(1, 1 << (n - 2)):
        raise EncodingError("rounded sigma fell outside its bracket")
    bell = bell_number(n + 1)
    if bell > (n + 1) ** (n + 1):
        raise EncodingError("Bell bound violated")
    sp = float(sigma_prime)
    log_bound = (
        math.log2(sp * (1 << n))
        + sp * half * (math.log2(math.e) - math.log2(sp))
        + (n + 1) * sp * half * math.log2(n + 1)
        + half / n
    )
    return BoundReport(
        n=n,
        alpha=alpha,
        sigma=sigma,
        sigma_prime=sigma_prime,
        bell_bound=bell,
        log_e_n_bound=log_bound,
    )

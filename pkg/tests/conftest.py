"""Shared fixtures and the independent axiom oracle.

The oracle below re-states the symmetric exchange axiom directly over
Python sets, with none of the package's bitvector machinery, so that
package results can be checked against a second, independently written
decision procedure.
"""

from __future__ import annotations

import pytest

from deltamatroid import build_levels


def mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(i + 1 for i in range(mask.bit_length()) if (mask >> i) & 1)


def set_to_mask(s) -> int:
    out = 0
    for e in s:
        out |= 1 << (e - 1)
    return out


def oracle_is_delta_matroid(n: int, feasible_masks) -> bool:
    """Raw triple-loop symmetric exchange test over explicit sets.

    For every ordered pair of feasible sets X, Y and every element e of
    the symmetric difference, some f in the symmetric difference (f = e
    allowed) must make X symmetric-difference {e, f} feasible.
    """
    family = {mask_to_set(m) for m in feasible_masks}
    if not family:
        return False
    for x in family:
        for y in family:
            diff = x ^ y
            for e in diff:
                if not any((x ^ {e, f}) in family for f in diff):
                    return False
    return True


def oracle_level_list(n: int) -> list[int]:
    """All delta-matroid feasibility vectors on {1..n} by brute force."""
    out = []
    for bits in range(1, 1 << (1 << n)):
        masks = [m for m in range(1 << n) if (bits >> m) & 1]
        if oracle_is_delta_matroid(n, masks):
            out.append(bits)
    return out


@pytest.fixture(scope="session")
def levels5():
    """Complete level caches 0..5 (a few seconds, shared per session)."""
    return build_levels(5)


@pytest.fixture(scope="session")
def levels4(levels5):
    return {n: levels5[n] for n in range(5)}


@pytest.fixture(scope="session")
def oracle_levels():
    """Brute-force delta-matroid lists for n = 1..3 from the raw oracle."""
    return {n: oracle_level_list(n) for n in range(1, 4)}

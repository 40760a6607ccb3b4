"""Extremal and lower-bound families: middle levels, the Katona-Tarjan
two-level family, and the middle-band family for size-restricted diamonds."""

from __future__ import annotations

from itertools import combinations

from .lattice import Family, binomial, mask_of


def middle_levels(n: int, r: int) -> Family:
    """All subsets with cardinality i for ceil((n-r)/2) <= i <= ceil((n+r)/2)-1;
    the family realizing the sum of the r largest binomial coefficients."""
    if not 1 <= r <= n + 1:
        raise ValueError(f"r must be in [1, {n + 1}], got {r}")
    lo = (n - r + 1) // 2
    hi = (n + r + 1) // 2 - 1
    masks = []
    for size in range(lo, hi + 1):
        for combo in combinations(range(1, n + 1), size):
            masks.append(mask_of(combo, n))
    return Family(n, masks)


def kt_construction(n: int) -> Family:
    """Sets of size floor(n/2) not containing element 1, together with sets of
    size ceil(n/2) containing element 1.  Attains the Katona-Tarjan bound
    2*C(n-1, floor((n-1)/2)) while containing no element below (or above) two
    equal-size sets.  Element "1" is literally ground element 1; symmetry
    makes the choice immaterial."""
    if n < 2:
        raise ValueError(f"kt_construction requires n >= 2, got {n}")
    low, high = n // 2, (n + 1) // 2
    masks = []
    for combo in combinations(range(2, n + 1), low):
        masks.append(mask_of(combo, n))
    for combo in combinations(range(2, n + 1), high - 1):
        masks.append(mask_of(combo, n) | 1)
    return Family(n, masks)


def diamond_r_for(m: int) -> int:
    """Largest r with C(r, floor(r/2)) < m."""
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    r = 1
    while binomial(r + 1, (r + 1) // 2) < m:
        r += 1
    return r


def diamond_levels(n: int, m: int) -> Family:
    """Middle levels with band width r = the largest integer such that
    C(r, floor(r/2)) < m; avoids the diamond with m equal-size middles.
    Clamped to the full powerset when r exceeds n+1 (huge m, tiny n)."""
    if n < 1 or m < 2:
        raise ValueError("diamond_levels requires n >= 1 and m >= 2")
    return middle_levels(n, min(diamond_r_for(m), n + 1))


def complement_family(family: Family) -> Family:
    """{[n] \\ F : F in family}; involutive."""
    full = family.ground.full_mask
    return Family(family.n, (full ^ m for m in family.members))

"""Closed-form upper bounds for families avoiding the named configurations,
plus the recursive constant of the general colored-poset bound.

Every evaluator returns an exact rational.  Statements whose published form
carries an unspecified O(.) error term are evaluated as their main term and
flagged ``main-term-only``; such values are reporting aids and never feed
equality assertions.  Out-of-range parameters still evaluate, with the
validity field recording the violated constraint, because small-n searches
probe exactly that regime.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .configs import ColoredPoset, require_valid
from .lattice import binomial, sigma

EXACT = "exact"
MAIN_TERM_ONLY = "main-term-only"


@dataclass(frozen=True)
class BoundResult:
    value: Fraction
    exactness: str  # EXACT or MAIN_TERM_ONLY
    validity: str  # "ok" or the violated constraint
    source: str


def _ceil_log(base: int, x: int) -> int:
    """Smallest K >= 0 with base**K >= x (exact integer arithmetic)."""
    if x < 1:
        raise ValueError(f"ceil log needs x >= 1, got {x}")
    k, v = 0, 1
    while v < x:
        k += 1
        v *= base
    return k


def _validity(ok: bool, requirement: str) -> str:
    return "ok" if ok else f"outside stated range: requires {requirement}"


def _kt(n: int) -> BoundResult:
    return BoundResult(
        Fraction(2 * binomial(n - 1, (n - 1) // 2)),
        EXACT,
        _validity(n >= 3, "n >= 3"),
        "size-restricted Katona-Tarjan bound",
    )


def _fork_explicit(n: int, s: int) -> BoundResult:
    value = binomial(n, n // 2) + Fraction(2, 3) * (s - 1) * binomial(n, n // 2 + 1) + 1
    return BoundResult(
        value,
        EXACT,
        _validity(s >= 2, "s >= 2"),
        "size-restricted fork bound, explicit form",
    )


def _fork_main(n: int, s: int) -> BoundResult:
    value = (1 + Fraction(2 * (s - 1), n)) * binomial(n, n // 2)
    return BoundResult(
        value,
        MAIN_TERM_ONLY,
        _validity(s >= 2, "s >= 2"),
        "size-restricted fork bound, main term",
    )


def _baton_main(n: int, h: int, s: int, t: int) -> BoundResult:
    value = sigma(n, h - 1) + binomial(n, (n + h) // 2) * Fraction(2 * (s + t - 2), n)
    return BoundResult(
        value,
        MAIN_TERM_ONLY,
        _validity(h >= 3 and s >= 1 and t >= 1, "h >= 3, s >= 1, t >= 1"),
        "size-restricted baton bound, main term",
    )


def _butterfly(n: int) -> BoundResult:
    return BoundResult(
        Fraction(sigma(n, 2)),
        EXACT,
        _validity(n >= 13, "n >= 13"),
        "size-restricted butterfly bound",
    )


def _j(n: int) -> BoundResult:
    return BoundResult(Fraction(sigma(n, 2)), EXACT, "ok", "size-restricted J bound")


def _diamond_restricted(n: int, m: int) -> BoundResult:
    ok = m >= 2
    k_const = 3 * (_ceil_log(3, max(m - 1, 1)) + 1)
    return BoundResult(
        Fraction(k_const * binomial(n, n // 2)),
        EXACT,
        _validity(ok, "m >= 2"),
        "size-restricted diamond bound",
    )


def _diamond_m4(n: int) -> BoundResult:
    return BoundResult(
        Fraction(sigma(n, 4)),
        EXACT,
        _validity(n >= 3, "n >= 3"),
        "size-restricted diamond bound, four equal-size middles (sharp)",
    )


def _glu_diamond(n: int, m: int) -> BoundResult:
    ok = n >= 2 and m >= 2
    t = _ceil_log(2, m + 2)
    mid = binomial(t, t // 2)
    if m <= 2 ** t - mid - 1:
        value = Fraction(sigma(n, t))
    else:
        value = (Fraction(t + 1) - Fraction(2 ** t - m - 1, mid)) * binomial(n, n // 2)
    return BoundResult(value, EXACT, _validity(ok, "n, m >= 2"), "Griggs-Li-Lu diamond bound")


def _dbk_fork_main(n: int, s: int) -> BoundResult:
    value = (1 + Fraction(2 * (s - 1), n)) * binomial(n, n // 2)
    return BoundResult(
        value,
        MAIN_TERM_ONLY,
        _validity(s >= 2, "s >= 2"),
        "De Bonis-Katona fork bound, main term",
    )


def _glu_baton_main(n: int, h: int, s: int, t: int) -> BoundResult:
    value = sigma(n, h - 1) + binomial(n, (n + h) // 2) * Fraction(2 * h * (s + t - 2), n)
    return BoundResult(
        value,
        MAIN_TERM_ONLY,
        _validity(h >= 3 and s >= 1 and t >= 1, "h >= 3, s >= 1, t >= 1"),
        "Griggs-Lu baton bound, main term",
    )


def _dks_butterfly(n: int) -> BoundResult:
    return BoundResult(
        Fraction(sigma(n, 2)), EXACT, "ok", "De Bonis-Katona-Swanepoel butterfly bound"
    )


def _li_j(n: int) -> BoundResult:
    return BoundResult(Fraction(sigma(n, 2)), EXACT, "ok", "Li J bound")


_TABLE = {
    "kt": (_kt, ("n",)),
    "fork_explicit": (_fork_explicit, ("n", "s")),
    "fork_main": (_fork_main, ("n", "s")),
    "baton_main": (_baton_main, ("n", "h", "s", "t")),
    "butterfly": (_butterfly, ("n",)),
    "j": (_j, ("n",)),
    "diamond_restricted": (_diamond_restricted, ("n", "m")),
    "diamond_m4": (_diamond_m4, ("n",)),
    "glu_diamond": (_glu_diamond, ("n", "m")),
    "dbk_fork_main": (_dbk_fork_main, ("n", "s")),
    "glu_baton_main": (_glu_baton_main, ("n", "h", "s", "t")),
    "dks_butterfly": (_dks_butterfly, ("n",)),
    "li_j": (_li_j, ("n",)),
}

BOUND_IDS = tuple(sorted(_TABLE))


def bound_params(bound_id: str) -> tuple[str, ...]:
    if bound_id not in _TABLE:
        raise ValueError(f"unknown bound id {bound_id!r}; known: {', '.join(BOUND_IDS)}")
    return _TABLE[bound_id][1]


def evaluate_bound(bound_id: str, **params: int) -> BoundResult:
    """Evaluate one closed-form bound by id; see BOUND_IDS for the table."""
    fn, names = _TABLE.get(bound_id, (None, None))
    if fn is None:
        raise ValueError(f"unknown bound id {bound_id!r}; known: {', '.join(BOUND_IDS)}")
    missing = [k for k in names if k not in params]
    extra = [k for k in params if k not in names]
    if missing or extra:
        raise ValueError(
            f"bound {bound_id!r} takes parameters {names}; "
            f"missing {missing or 'none'}, unexpected {extra or 'none'}"
        )
    args = [int(params[k]) for k in names]
    if args[0] < 1:
        raise ValueError("n must be >= 1")
    return fn(*args)


def cprime(m: int) -> Fraction:
    """Per-color constant: 3*(ceil(log3(m-1)) + 1) for m >= 2.

    The m = 1 value extends the recursion below its stated range: a family
    with no 3-chain meets every maximal chain at most twice, so its Lubell
    function is at most 2, giving constant 2.  Flag: extrapolation.
    """
    if m < 1:
        raise ValueError(f"color class size must be >= 1, got {m}")
    if m == 1:
        return Fraction(2)
    return Fraction(3 * (_ceil_log(3, m - 1) + 1))


def general_constant(a) -> Fraction:
    """Constant for the general colored-pattern bound with color class sizes
    a_1..a_k: the recursion peels one color per step and adds a per-color
    diamond constant, so the total is the sum of cprime(a_i)."""
    sizes = list(a)
    if not sizes:
        raise ValueError("need at least one color class size")
    return sum((cprime(m) for m in sizes), Fraction(0))


def constant_for_colored_poset(poset: ColoredPoset) -> Fraction:
    """general_constant applied to the poset's color class sizes."""
    require_valid(poset)
    return general_constant(poset.color_class_sizes())


def _order_preserving_colorings(poset_relation, p: int):
    """All order-preserving surjective colorings of a p-element strict poset,
    as tuples normalized to colors 1..k."""
    colorings = []
    colors = [0] * p

    def go(e: int) -> None:
        if e == p:
            used = sorted(set(colors))
            remap = {c: i + 1 for i, c in enumerate(used)}
            colorings.append(tuple(remap[c] for c in colors))
            return
        for c in range(1, p + 1):
            if all(
                (colors[f] < c if (f, e) in poset_relation else True)
                and (c < colors[f] if (e, f) in poset_relation else True)
                for f in range(e)
            ):
                colors[e] = c
                go(e + 1)
        colors[e] = 0

    go(0)
    return sorted(set(colorings))


def constant_for_poset_any_coloring(poset: ColoredPoset) -> Fraction:
    """Max of the general constant over every order-preserving coloring of
    the underlying poset, so the bound is coloring-independent.  Enumeration
    is guarded at 8 elements."""
    if poset.p > 8:
        raise ValueError("coloring enumeration is limited to posets with <= 8 elements")
    best = Fraction(0)
    for coloring in _order_preserving_colorings(poset.relation, poset.p):
        sizes: dict[int, int] = {}
        for c in coloring:
            sizes[c] = sizes.get(c, 0) + 1
        best = max(best, general_constant(sizes[c] for c in sorted(sizes)))
    return best

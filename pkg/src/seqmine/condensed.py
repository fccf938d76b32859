"""Closed and maximal pattern filtering.

The core test asks, per supporter sequence: which single items could be
inserted into the pattern while that sequence still contains the result?
For insertion as a new element between pattern positions i-1 and i, the
answer is exactly the items found strictly between

* the leftmost position where any embedding matches element i-1 (0 when
  i = 1), and
* the rightmost position where any embedding matches element i (n+1 past
  the last element).

A pattern is maximal when no insertion candidate is shared by fmin
supporters, closed when none is shared by *all* supporters, and the
backward variants restrict insertions to the append slot after the last
element.  In itemset mode a second extension kind exists (adding an item to
an existing element); it is checked at the completable match positions of
that element.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .seqdb import Elements, MiningResult, Pattern, ResultEntry, Sequence, SequenceDatabase
from .relations import as_elements, is_prefix, is_subitemset, is_subsequence, skip_gaps_levels


@dataclass(frozen=True)
class OccurrenceBounds:
    """Per pattern position: leftmost and rightmost match over all embeddings."""

    leftmost: tuple[int, ...]
    rightmost: tuple[int, ...]


def _match_positions(s: Elements, pelem: tuple[int, ...]) -> list[int]:
    return [j for j, selem in enumerate(s, start=1) if is_subitemset(pelem, selem)]


def occurrence_bounds(
    seq: Sequence | Elements, pattern: Pattern | Elements, strategy: str = "skip"
) -> OccurrenceBounds | None:
    """Bounds of the pattern's embeddings in one sequence; None if unsupported.

    The two strategies compute identical bounds through different
    intermediates: ``skip`` filters the reachable-match levels backwards,
    ``fill`` pairs the leftmost frontier with a raw-match backward sweep.
    """
    s = as_elements(seq)
    p = as_elements(pattern)
    if not p:
        return OccurrenceBounds((), ())
    if strategy == "skip":
        levels = skip_gaps_levels(s, p)
        if not levels[-1]:
            return None
        leftmost = tuple(lvl[0] for lvl in levels)
        rightmost = [0] * len(p)
        ceiling = len(s) + 1
        for i in range(len(p) - 1, -1, -1):
            candidates = [j for j in levels[i] if j < ceiling]
            if not candidates:
                return None
            rightmost[i] = candidates[-1]
            ceiling = rightmost[i]
        return OccurrenceBounds(leftmost, tuple(rightmost))
    if strategy == "fill":
        firsts: list[int] = []
        j = 0
        for pelem in p:
            while j < len(s) and not is_subitemset(pelem, s[j]):
                j += 1
            if j == len(s):
                return None
            j += 1
            firsts.append(j)
        rightmost = [0] * len(p)
        ceiling = len(s) + 1
        for i in range(len(p) - 1, -1, -1):
            candidates = [jj for jj in _match_positions(s, p[i]) if jj < ceiling]
            rightmost[i] = candidates[-1]
            ceiling = rightmost[i]
        return OccurrenceBounds(tuple(firsts), tuple(rightmost))
    raise ValueError(f"unknown strategy tag: {strategy!r}")


@dataclass(frozen=True)
class InsertableRegions:
    """Insertion slots of one supporter sequence.

    ``bounds[i-1]`` is the open interval (l_i, u_i) for inserting a new
    element between pattern positions i-1 and i (i ranges over 1..len+1);
    ``items[i-1]`` is the set of items occurring strictly inside it.
    """

    bounds: tuple[tuple[int, int], ...]
    items: tuple[frozenset[int], ...]


def insertable_regions(
    seq: Sequence | Elements, pattern: Pattern | Elements, strategy: str = "skip"
) -> InsertableRegions:
    s = as_elements(seq)
    p = as_elements(pattern)
    ob = occurrence_bounds(s, p, strategy)
    if ob is None:
        raise ValueError("pattern does not occur in the sequence")
    n = len(s)
    bounds = []
    items = []
    for i in range(1, len(p) + 2):
        lo = ob.leftmost[i - 2] if i >= 2 else 0
        hi = ob.rightmost[i - 1] if i <= len(p) else n + 1
        bounds.append((lo, hi))
        inside: set[int] = set()
        for j in range(lo + 1, hi):
            inside.update(s[j - 1])
        items.append(frozenset(inside))
    return InsertableRegions(tuple(bounds), tuple(items))


def _completable_levels(s: Elements, p: Elements) -> list[list[int]] | None:
    """Match positions per element restricted to completable embeddings."""
    levels = skip_gaps_levels(s, p)
    if not levels or not levels[-1]:
        return None
    valid: list[list[int]] = [[] for _ in p]
    valid[-1] = list(levels[-1])
    for i in range(len(p) - 2, -1, -1):
        ceiling = valid[i + 1][-1]
        valid[i] = [j for j in levels[i] if j < ceiling]
    return valid


def _augmentable_items(s: Elements, p: Elements, only_last: bool = False) -> dict[int, frozenset[int]]:
    """Per element index (1-based), items addable to that element in-place."""
    valid = _completable_levels(s, p)
    if valid is None:
        return {}
    out: dict[int, frozenset[int]] = {}
    indices = [len(p)] if only_last else range(1, len(p) + 1)
    for i in indices:
        pool: set[int] = set()
        for j in valid[i - 1]:
            pool.update(s[j - 1])
        pool.difference_update(p[i - 1])
        if pool:
            out[i] = frozenset(pool)
    return out


def _extension_candidates(
    seq: Sequence | Elements,
    pattern: Pattern | Elements,
    strategy: str,
    itemset_mode: bool,
    append_only: bool,
) -> set[tuple]:
    """All single-item extension keys this supporter admits.

    Keys are ("ins", position, item) for new-element insertion and
    ("aug", position, item) for element augmentation (itemset mode).
    """
    s = as_elements(seq)
    p = as_elements(pattern)
    keys: set[tuple] = set()
    regions = insertable_regions(s, p, strategy)
    positions = [len(p) + 1] if append_only else range(1, len(p) + 2)
    for i in positions:
        for a in regions.items[i - 1]:
            keys.add(("ins", i, a))
    if itemset_mode:
        for i, pool in _augmentable_items(s, p, only_last=append_only).items():
            for a in pool:
                keys.add(("aug", i, a))
    return keys


def _supporter_keys(db, pattern, support_ids, strategy, itemset_mode, append_only):
    for sid in support_ids:
        yield _extension_candidates(
            db.sequence(sid), pattern, strategy, itemset_mode, append_only
        )


def is_maximal(
    db: SequenceDatabase,
    pattern: Pattern,
    fmin: int,
    support_ids: tuple[int, ...],
    strategy: str = "skip",
    itemset_mode: bool = False,
) -> bool:
    """No single-item extension is supported by fmin of the given supporters."""
    counts: dict[tuple, int] = {}
    for keys in _supporter_keys(db, pattern, support_ids, strategy, itemset_mode, False):
        for key in keys:
            counts[key] = counts.get(key, 0) + 1
            if counts[key] >= fmin:
                return False
    return True


def is_closed(
    db: SequenceDatabase,
    pattern: Pattern,
    fmin: int,
    support_ids: tuple[int, ...],
    strategy: str = "skip",
    itemset_mode: bool = False,
) -> bool:
    """No single-item extension is supported by all of the given supporters."""
    common: set[tuple] | None = None
    for keys in _supporter_keys(db, pattern, support_ids, strategy, itemset_mode, False):
        common = set(keys) if common is None else (common & keys)
        if not common:
            return True
    return not common


def backward_filter(
    db: SequenceDatabase,
    pattern: Pattern,
    fmin: int,
    support_ids: tuple[int, ...],
    kind: str,
    strategy: str = "skip",
    itemset_mode: bool = False,
) -> bool:
    """Closed/maximal restricted to append-slot extensions (prefix growth)."""
    if kind == "maximal":
        counts: dict[tuple, int] = {}
        for keys in _supporter_keys(db, pattern, support_ids, strategy, itemset_mode, True):
            for key in keys:
                counts[key] = counts.get(key, 0) + 1
                if counts[key] >= fmin:
                    return False
        return True
    if kind == "closed":
        common: set[tuple] | None = None
        for keys in _supporter_keys(db, pattern, support_ids, strategy, itemset_mode, True):
            common = set(keys) if common is None else (common & keys)
            if not common:
                return True
        return not common
    raise ValueError(f"unknown backward kind: {kind!r}")


# ---------------------------------------------------------------------------
# Result-level filtering


def _pairwise_keep(result: MiningResult, kind: str) -> list[ResultEntry]:
    """Strict in-language filtering: compare patterns only against the result set."""
    relation = is_prefix if kind.startswith("backward") else is_subsequence
    need_equal_support = kind.endswith("closed")
    kept = []
    for e in result.entries:
        dominated = False
        for other in result.entries:
            if other.pattern == e.pattern or len(other.pattern) < len(e.pattern):
                continue
            if relation(e.pattern, other.pattern):
                if not need_equal_support or other.support == e.support:
                    dominated = True
                    break
        if not dominated:
            kept.append(e)
    return kept


def filter_result(
    db: SequenceDatabase,
    result: MiningResult,
    fmin: int,
    kind: str,
    strategy: str = "skip",
    itemset_mode: bool = False,
    constraints=None,
    within_constraints: bool = False,
    deadline: float | None = None,
) -> MiningResult:
    """Reduce a frequent result to its closed/maximal/backward-variant subset.

    Default semantics judge each pattern by single-item extension checks
    against its own supporters (unrestricted by any active constraint set);
    ``within_constraints`` switches to pairwise comparison inside the result.
    """
    if kind not in ("closed", "maximal", "backward-closed", "backward-maximal"):
        raise ValueError(f"unknown condensed kind: {kind!r}")
    if within_constraints:
        return MiningResult.build(_pairwise_keep(result, kind), result.params)
    kept = []
    for e in result.entries:
        if deadline is not None and time.monotonic() > deadline:
            from .miner import MiningTimeout

            raise MiningTimeout()
        if kind == "closed":
            ok = is_closed(db, e.pattern, fmin, e.support_ids, strategy, itemset_mode)
        elif kind == "maximal":
            ok = is_maximal(db, e.pattern, fmin, e.support_ids, strategy, itemset_mode)
        else:
            ok = backward_filter(
                db, e.pattern, fmin, e.support_ids,
                kind.removeprefix("backward-"), strategy, itemset_mode,
            )
        if ok:
            kept.append(e)
    return MiningResult.build(kept, result.params)

"""Depth-first prefix-projected pattern enumeration.

The engine grows patterns one extension at a time and counts an extension's
support in the projected suffixes of the current pattern's supporters.
Candidate extensions at a node are inherited from the parent's locally
frequent items (anti-monotone, so nothing is lost; a differential flag can
switch this narrowing off for testing).

Strategies differ only in per-sequence bookkeeping:

* ``fill``: one integer per supporter, the position right after the leftmost
  embedding's last match (pseudo-projection).
* ``skip``: the full list of positions where the last pattern element can be
  matched; heavier in memory, same counts.

Gap/span constraints switch to a chain engine whose per-sequence state is a
set of (last position, first position) pairs, admitted step by step.
"""

from __future__ import annotations

import os
import time
from bisect import bisect_left
from concurrent.futures import FIRST_EXCEPTION, ThreadPoolExecutor, wait
from dataclasses import dataclass, replace

from .seqdb import MiningResult, Pattern, ResultEntry, SequenceDatabase
from .relations import STRATEGIES, is_subitemset, is_subsequence

MODES = ("frequent", "closed", "maximal", "backward-closed", "backward-maximal")


class MiningTimeout(Exception):
    """Raised when a deadline passes mid-search."""


class DataError(ValueError):
    """Database/parameter mismatch (e.g. itemset data without itemset_mode)."""


@dataclass(frozen=True)
class MiningParams:
    fmin: int | float
    maxlen: int
    minlen: int = 1
    strategy: str = "fill"
    mode: str = "frequent"
    itemset_mode: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.fmin, bool) or not isinstance(self.fmin, (int, float)):
            raise ValueError(f"fmin must be an int count or float fraction, got {self.fmin!r}")
        if isinstance(self.fmin, int):
            if self.fmin < 1:
                raise ValueError("absolute fmin must be >= 1")
        elif not 0.0 < self.fmin <= 1.0:
            raise ValueError("fractional fmin must be in (0, 1]")
        if self.maxlen < 1:
            raise ValueError("maxlen must be >= 1")
        if not 1 <= self.minlen <= self.maxlen:
            raise ValueError("need 1 <= minlen <= maxlen")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy: {self.strategy!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode: {self.mode!r}")

    def resolved_fmin(self, n_sequences: int) -> int:
        if isinstance(self.fmin, int):
            return self.fmin
        resolved = -(-self.fmin * n_sequences // 1)  # ceil
        resolved = int(resolved)
        if resolved < 1:
            raise ValueError(f"fractional fmin {self.fmin} resolves to {resolved} on {n_sequences} sequences")
        return resolved


@dataclass
class MineStats:
    nodes_expanded: int = 0


# ---------------------------------------------------------------------------
# Public projection primitives (plain reference forms; the engine mirrors them)


@dataclass(frozen=True)
class ProjectedView:
    """Pseudo-projected supporter list: (sid, start_pos) pairs, 1-based.

    start_pos points at the first suffix element still available for
    extension; it is at most len(sequence)+1 (empty suffix).
    """

    entries: tuple[tuple[int, int], ...]


def root_view(db: SequenceDatabase) -> ProjectedView:
    return ProjectedView(tuple((s.sid, 1) for s in db.sequences))


def frequent_items(db: SequenceDatabase, fmin: int) -> frozenset[int]:
    """Items occurring in at least fmin distinct sequences."""
    counts: dict[int, int] = {}
    for seq in db.sequences:
        for item in set(seq.items()):
            counts[item] = counts.get(item, 0) + 1
    return frozenset(i for i, c in counts.items() if c >= fmin)


def project(
    view: ProjectedView, db: SequenceDatabase, extension: int | tuple[int, ...]
) -> ProjectedView:
    """Advance each entry past the first match of the extension.

    Entries whose suffix has no match are dropped; surviving entries get
    start_pos = match position + 1.
    """
    ext = (extension,) if isinstance(extension, int) else tuple(extension)
    out = []
    for sid, start in view.entries:
        elems = db.sequence(sid).elements
        for pos in range(start, len(elems) + 1):
            if is_subitemset(ext, elems[pos - 1]):
                out.append((sid, pos + 1))
                break
    return ProjectedView(tuple(out))


def locally_frequent_items(view: ProjectedView, db: SequenceDatabase, fmin: int) -> frozenset[int]:
    """Items present in at least fmin of the view's suffixes."""
    counts: dict[int, int] = {}
    for sid, start in view.entries:
        elems = db.sequence(sid).elements
        suffix_items = {i for elem in elems[start - 1 :] for i in elem}
        for item in suffix_items:
            counts[item] = counts.get(item, 0) + 1
    return frozenset(i for i, c in counts.items() if c >= fmin)


# ---------------------------------------------------------------------------
# Shared engine plumbing


class _Index:
    """Per-sequence position tables: item -> ascending 1-based positions."""

    __slots__ = ("elements", "pos", "sids", "n")

    def __init__(self, db: SequenceDatabase):
        self.elements = [s.elements for s in db.sequences]
        self.pos: list[dict[int, list[int]]] = []
        self.sids = [s.sid for s in db.sequences]
        self.n = len(db.sequences)
        for seq in db.sequences:
            table: dict[int, list[int]] = {}
            for p, elem in enumerate(seq.elements, start=1):
                for item in elem:
                    table.setdefault(item, []).append(p)
            self.pos.append(table)


def _check_deadline(deadline: float | None) -> None:
    if deadline is not None and time.monotonic() > deadline:
        raise MiningTimeout()


def _root_candidates(index: _Index, fmin: int, cannot: frozenset[int]) -> list[int]:
    counts: dict[int, int] = {}
    for table in index.pos:
        for item in table:
            counts[item] = counts.get(item, 0) + 1
    return sorted(i for i, c in counts.items() if c >= fmin and i not in cannot)


def _emission_ok(cs, elements: tuple[tuple[int, ...], ...], items: tuple[int, ...]) -> bool:
    """Pattern-level acceptance; regex and length are checked by the engines."""
    if cs is None:
        return True
    if cs.must_have and not cs.must_have.issubset(items):
        return False
    if cs.super_patterns:
        hits = (is_subsequence(sp.elements, elements) for sp in cs.super_patterns)
        if not (all(hits) if cs.super_pattern_all else any(hits)):
            return False
    if cs.aggregate is not None and not cs.aggregate.accepts(items):
        return False
    return True


# ---------------------------------------------------------------------------
# Simple-mode engine (no gap/span)


def _mine_simple(
    db: SequenceDatabase,
    fmin: int,
    params: MiningParams,
    cs,
    stats: MineStats,
    deadline: float | None,
    threads: int,
    use_local_pruning: bool,
) -> list[ResultEntry]:
    index = _Index(db)
    cannot = cs.cannot_have if cs else frozenset()
    dfa = cs.regex if cs else None
    agg = cs.aggregate if cs else None
    agg_prunes = agg is not None and agg.prunes_as_sum()
    skip = params.strategy == "skip"
    root_cands = _root_candidates(index, fmin, cannot)

    if skip:
        root_entries = [(si, 1, ()) for si in range(index.n)]
    else:
        root_entries = [(si, 1) for si in range(index.n)]

    def count(entries, candidates):
        pos = index.pos
        out = {c: [] for c in candidates}
        for ent in entries:
            table = pos[ent[0]]
            start = ent[1]
            for c in candidates:
                pl = table.get(c)
                if pl is not None and pl[-1] >= start:
                    out[c].append(ent)
        return out

    def child_entries(supporters, c):
        pos = index.pos
        out = []
        if skip:
            for ent in supporters:
                pl = pos[ent[0]][c]
                level = pl[bisect_left(pl, ent[1]) :]
                out.append((ent[0], level[0] + 1, tuple(level)))
        else:
            for ent in supporters:
                pl = pos[ent[0]][c]
                out.append((ent[0], pl[bisect_left(pl, ent[1])] + 1))
        return out

    def descend(prefix, entries, candidates, dfa_state, running_sum, stats, sink):
        stats.nodes_expanded += 1
        _check_deadline(deadline)
        out = count(entries, candidates)
        local = [c for c in candidates if len(out[c]) >= fmin]
        depth = len(prefix) + 1
        for c in local:
            nxt_state = None
            if dfa is not None:
                nxt_state = dfa.step(dfa_state, c)
                if nxt_state is None or nxt_state not in dfa.live:
                    continue
            if agg_prunes:
                new_sum = running_sum + agg.cost_of(c)
                if not agg.sum_viable(new_sum):
                    continue
            else:
                new_sum = 0
            items = prefix + (c,)
            supporters = out[c]
            if depth >= params.minlen and (dfa is None or nxt_state in dfa.accepting):
                elements = tuple((i,) for i in items)
                if _emission_ok(cs, elements, items):
                    sids = tuple(index.sids[ent[0]] for ent in supporters)
                    sink.append(ResultEntry(Pattern(elements), len(supporters), sids))
            if depth < params.maxlen:
                descend(
                    items,
                    child_entries(supporters, c),
                    local if use_local_pruning else candidates,
                    nxt_state,
                    new_sum,
                    stats,
                    sink,
                )

    def run_branch(c, st, sink):
        """First-level branch: emit the single-item pattern, then its subtree."""
        _check_deadline(deadline)
        out = count(root_entries, [c])
        supporters = out[c]
        if len(supporters) < fmin:
            return
        state = None
        if dfa is not None:
            state = dfa.step(dfa.start, c)
            if state is None or state not in dfa.live:
                return
        new_sum = 0
        if agg_prunes:
            new_sum = agg.cost_of(c)
            if not agg.sum_viable(new_sum):
                return
        if params.minlen <= 1 and (dfa is None or state in dfa.accepting):
            if _emission_ok(cs, ((c,),), (c,)):
                sids = tuple(index.sids[ent[0]] for ent in supporters)
                sink.append(ResultEntry(Pattern(((c,),)), len(supporters), sids))
        if params.maxlen > 1:
            descend((c,), child_entries(supporters, c), root_cands, state, new_sum, st, sink)

    if threads > 1 and len(root_cands) > 1:
        return _parallel_first_level(root_cands, threads, run_branch, stats)

    sink: list[ResultEntry] = []
    descend((), root_entries, root_cands, dfa.start if dfa is not None else None, 0, stats, sink)
    return sink


def _parallel_first_level(root_cands, threads, run_branch, stats):
    """Fan the first search level out over a thread pool; merge in any order.

    The final canonical sort makes the output independent of scheduling.
    """
    sinks: list[list[ResultEntry]] = []
    branch_stats: list[MineStats] = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = []
        for c in root_cands:
            st = MineStats()
            sink: list[ResultEntry] = []
            branch_stats.append(st)
            sinks.append(sink)
            futures.append(pool.submit(run_branch, c, st, sink))
        wait(futures, return_when=FIRST_EXCEPTION)
        failure = next((f.exception() for f in futures if f.done() and f.exception()), None)
        if failure is not None:
            for other in futures:
                other.cancel()
            raise failure
        for fut in futures:
            fut.result()
    stats.nodes_expanded += 1 + sum(st.nodes_expanded for st in branch_stats)
    return [entry for sink in sinks for entry in sink]


# ---------------------------------------------------------------------------
# Itemset-mode engine (no gap/span)

# Per-sequence state: ascending positions where an embedding of the current
# pattern can end.  Appending a new element admits matches after the minimum
# end; augmenting the last element filters the end set in place.
#
# Candidate narrowing needs care: an item that never occurs after a node's
# frontier minimum cannot appear in any later element, but it can still
# augment the current element (it only has to be present at a frontier
# position).  Append-children therefore inherit the append-viable list,
# while augment-children inherit the union of append-viable and
# augment-viable items.


def _mine_itemset(
    db: SequenceDatabase,
    fmin: int,
    params: MiningParams,
    cs,
    stats: MineStats,
    deadline: float | None,
    use_local_pruning: bool,
) -> list[ResultEntry]:
    index = _Index(db)
    cannot = cs.cannot_have if cs else frozenset()
    agg = cs.aggregate if cs else None
    agg_prunes = agg is not None and agg.prunes_as_sum()
    root_cands = _root_candidates(index, fmin, cannot)
    sink: list[ResultEntry] = []

    def descend(elements, entries, candidates, running_sum):
        stats.nodes_expanded += 1
        _check_deadline(deadline)
        n_elems = len(elements)
        supp = len(entries)
        items = tuple(i for e in elements for i in e)
        if n_elems >= params.minlen and _emission_ok(cs, elements, items):
            sink.append(ResultEntry(Pattern(elements), supp, tuple(index.sids[si] for si, _ in entries)))

        s_out = {c: [] for c in candidates}
        for si, ends in entries:
            table = index.pos[si]
            floor = ends[0]
            for c in candidates:
                pl = table.get(c)
                if pl is not None and pl[-1] > floor:
                    s_out[c].append((si, ends))
        s_local = [c for c in candidates if len(s_out[c]) >= fmin]

        last_max = elements[-1][-1]
        i_cands = [c for c in candidates if c > last_max]
        if i_cands:
            i_out = {c: [] for c in i_cands}
            for si, ends in entries:
                elems = index.elements[si]
                present = set()
                for j in ends:
                    present.update(elems[j - 1])
                for c in i_cands:
                    if c in present:
                        i_out[c].append((si, ends))
            i_local = [c for c in i_cands if len(i_out[c]) >= fmin]
            aug_pool = sorted(set(s_local).union(i_local))
            for c in i_local:
                new_sum = 0
                if agg_prunes:
                    new_sum = running_sum + agg.cost_of(c)
                    if not agg.sum_viable(new_sum):
                        continue
                new_entries = []
                for si, ends in i_out[c]:
                    elems = index.elements[si]
                    kept = tuple(j for j in ends if c in elems[j - 1])
                    new_entries.append((si, kept))
                descend(
                    elements[:-1] + (elements[-1] + (c,),),
                    new_entries,
                    aug_pool if use_local_pruning else candidates,
                    new_sum,
                )

        if n_elems < params.maxlen:
            for c in s_local:
                new_sum = 0
                if agg_prunes:
                    new_sum = running_sum + agg.cost_of(c)
                    if not agg.sum_viable(new_sum):
                        continue
                new_entries = []
                for si, ends in s_out[c]:
                    pl = index.pos[si][c]
                    new_entries.append((si, tuple(pl[bisect_left(pl, ends[0] + 1) :])))
                descend(
                    elements + ((c,),),
                    new_entries,
                    s_local if use_local_pruning else candidates,
                    new_sum,
                )

    for c in root_cands:
        entries = []
        for si in range(index.n):
            pl = index.pos[si].get(c)
            if pl:
                entries.append((si, tuple(pl)))
        if len(entries) < fmin:
            continue
        new_sum = 0
        if agg_prunes:
            new_sum = agg.cost_of(c)
            if not agg.sum_viable(new_sum):
                continue
        descend(((c,),), entries, root_cands, new_sum)
    return sink


# ---------------------------------------------------------------------------
# Chain engine for gap/span constraints

# Per-sequence state: sorted distinct (last, first) pairs of admissible
# partial chains.  Admission of a next position j after (j', f) requires
# mingap <= j-j'-1 <= maxgap and minspan <= j-f+1 <= maxspan, mirroring the
# step rules; first elements are unconstrained and set first=last.
#
# Children inherit the full root candidate list: admission windows move as
# the pattern grows, so an item that is an infrequent extension here can be
# a frequent extension one level deeper, and parent-local narrowing would
# lose patterns.  Only each node's own frequency gate prunes (sound, since
# dropping the last chain step of an admissible chain leaves one).


def _mine_chained(
    db: SequenceDatabase,
    fmin: int,
    params: MiningParams,
    cs,
    stats: MineStats,
    deadline: float | None,
    use_local_pruning: bool,
) -> list[ResultEntry]:
    index = _Index(db)
    cannot = cs.cannot_have
    dfa = cs.regex
    agg = cs.aggregate
    agg_prunes = agg is not None and agg.prunes_as_sum()
    itemset = params.itemset_mode
    root_cands = _root_candidates(index, fmin, cannot)
    mingap = cs.mingap if cs.mingap is not None else 0
    maxgap = cs.maxgap
    minspan = cs.minspan
    maxspan = cs.maxspan
    sink: list[ResultEntry] = []

    def admissible_next(si: int, pairs) -> dict[int, list[tuple[int, int]]]:
        """Map next-position j -> chain pairs (j, f) reachable from the state."""
        elems = index.elements[si]
        n = len(elems)
        hits: dict[int, set[int]] = {}
        for last, first in pairs:
            lo = last + 1 + mingap
            hi = n if maxgap is None else min(n, last + 1 + maxgap)
            if minspan is not None:
                lo = max(lo, first + minspan - 1)
            if maxspan is not None:
                hi = min(hi, first + maxspan - 1)
            for j in range(lo, hi + 1):
                hits.setdefault(j, set()).add(first)
        return {j: sorted((j, f) for f in firsts) for j, firsts in hits.items()}

    def descend(elements, entries, candidates, dfa_state, running_sum):
        stats.nodes_expanded += 1
        _check_deadline(deadline)
        items = tuple(i for e in elements for i in e)
        if len(elements) >= params.minlen and (dfa is None or dfa_state in dfa.accepting):
            if _emission_ok(cs, elements, items):
                sink.append(
                    ResultEntry(Pattern(elements), len(entries), tuple(index.sids[si] for si, _ in entries))
                )

        s_out: dict[int, list] = {c: [] for c in candidates}
        reach_cache = []
        for si, pairs in entries:
            elems = index.elements[si]
            reach = admissible_next(si, pairs)
            reach_cache.append((si, reach))
            present = set()
            for j in reach:
                present.update(elems[j - 1])
            for c in candidates:
                if c in present:
                    s_out[c].append((si, reach))
        s_local = [c for c in candidates if len(s_out[c]) >= fmin]

        if itemset:
            last_max = elements[-1][-1]
            i_cands = [c for c in candidates if c > last_max]
            if i_cands:
                i_out = {c: [] for c in i_cands}
                for si, pairs in entries:
                    elems = index.elements[si]
                    present = set()
                    for last, _ in pairs:
                        present.update(elems[last - 1])
                    for c in i_cands:
                        if c in present:
                            i_out[c].append((si, pairs))
                for c in i_cands:
                    if len(i_out[c]) < fmin:
                        continue
                    new_sum = 0
                    if agg_prunes:
                        new_sum = running_sum + agg.cost_of(c)
                        if not agg.sum_viable(new_sum):
                            continue
                    new_entries = []
                    for si, pairs in i_out[c]:
                        elems = index.elements[si]
                        kept = tuple(p for p in pairs if c in elems[p[0] - 1])
                        if kept:
                            new_entries.append((si, kept))
                    if len(new_entries) >= fmin:
                        descend(
                            elements[:-1] + (elements[-1] + (c,),),
                            new_entries,
                            candidates,
                            dfa_state,
                            new_sum,
                        )

        if len(elements) < params.maxlen:
            for c in s_local:
                nxt_state = None
                if dfa is not None:
                    nxt_state = dfa.step(dfa_state, c)
                    if nxt_state is None or nxt_state not in dfa.live:
                        continue
                new_sum = 0
                if agg_prunes:
                    new_sum = running_sum + agg.cost_of(c)
                    if not agg.sum_viable(new_sum):
                        continue
                new_entries = []
                for si, reach in s_out[c]:
                    elems = index.elements[si]
                    kept = tuple(
                        pair for j, pairs in sorted(reach.items()) if c in elems[j - 1] for pair in pairs
                    )
                    if kept:
                        new_entries.append((si, kept))
                if len(new_entries) >= fmin:
                    descend(
                        elements + ((c,),),
                        new_entries,
                        candidates,
                        nxt_state,
                        new_sum,
                    )

    for c in root_cands:
        state0 = None
        if dfa is not None:
            state0 = dfa.step(dfa.start, c)
            if state0 is None or state0 not in dfa.live:
                continue
        new_sum = 0
        if agg_prunes:
            new_sum = agg.cost_of(c)
            if not agg.sum_viable(new_sum):
                continue
        entries = []
        for si in range(index.n):
            pl = index.pos[si].get(c)
            if pl:
                entries.append((si, tuple((j, j) for j in pl)))
        if len(entries) >= fmin:
            descend(((c,),), entries, root_cands, state0, new_sum)
    return sink


# ---------------------------------------------------------------------------
# Entry points


def _env_threads() -> int:
    raw = os.environ.get("SEQMINE_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def mine(
    db: SequenceDatabase,
    params: MiningParams,
    constraints=None,
    *,
    threads: int | None = None,
    timeout: float | None = None,
    stats: MineStats | None = None,
    use_local_pruning: bool = True,
    condensed_within_constraints: bool = False,
) -> MiningResult:
    """Mine the database under the given parameters and optional constraints.

    Condensed modes run the frequent search first, then filter.  Returns a
    canonically ordered result; raises MiningTimeout past the deadline.
    """
    from . import condensed as _condensed

    cs = constraints
    if cs is not None:
        cs.validate()
        if cs.regex is not None and params.itemset_mode:
            from .constraints import ConstraintError

            raise ConstraintError("regex constraints require simple mode")
    if not params.itemset_mode and not db.simple_mode:
        raise DataError("database has multi-item elements; enable itemset_mode")
    fmin = params.resolved_fmin(len(db))
    stats = stats if stats is not None else MineStats()
    deadline = None if timeout is None else time.monotonic() + timeout
    threads = _env_threads() if threads is None else max(1, threads)

    chained = cs is not None and cs.has_embedding_constraints()
    if chained:
        entries = _mine_chained(db, fmin, params, cs, stats, deadline, use_local_pruning)
    elif params.itemset_mode:
        entries = _mine_itemset(db, fmin, params, cs, stats, deadline, use_local_pruning)
    else:
        entries = _mine_simple(db, fmin, params, cs, stats, deadline, threads, use_local_pruning)

    result = MiningResult.build(entries, params)
    if params.mode != "frequent":
        result = _condensed.filter_result(
            db,
            result,
            fmin,
            kind=params.mode,
            strategy=params.strategy,
            itemset_mode=params.itemset_mode,
            constraints=cs,
            within_constraints=condensed_within_constraints,
            deadline=deadline,
        )
    return result


def mine_frequent(db: SequenceDatabase, params: MiningParams, constraints=None, **kw) -> MiningResult:
    """Simple-pattern entry point; coerces itemset_mode off."""
    if params.itemset_mode:
        params = replace(params, itemset_mode=False)
    return mine(db, params, constraints, **kw)


def mine_itemset_patterns(db: SequenceDatabase, params: MiningParams, constraints=None, **kw) -> MiningResult:
    """Itemset-pattern entry point; coerces itemset_mode on."""
    if not params.itemset_mode:
        params = replace(params, itemset_mode=True)
    return mine(db, params, constraints, **kw)

"""Sequence database model and external formats.

A database is an ordered collection of sequences over a shared alphabet.
Each sequence is a tuple of itemsets; an itemset is a strictly increasing
tuple of item ids.  Item ids are dense (0..len(alphabet)-1) and ordered by
label, so id order and label order agree everywhere.

Three external formats are supported:

* SPMF text: one sequence per line, integer tokens, ``-1`` ends an itemset,
  ``-2`` ends the sequence.  The reader also accepts the terse form where
  ``-2`` closes a still-open itemset; the writer always emits the explicit
  ``... -1 -2`` form.
* ASP facts: one fact ``seq(T,P,I).`` per (sequence, position, item).
* Result records: one JSON object per line with keys ``pattern``,
  ``support``, ``support_ids``.
"""

from __future__ import annotations

import io
import json
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, TextIO


class FormatError(ValueError):
    """Raised on malformed external input (SPMF, ASP facts, result records)."""


Itemset = tuple[int, ...]
Elements = tuple[Itemset, ...]


class Alphabet:
    """Dense item table.

    ``labels`` is sorted; an item's id is its index, so ``id_of`` and
    ``label`` are inverse bijections and id order equals label order.
    """

    __slots__ = ("labels", "_index")

    def __init__(self, labels: Iterable[str]):
        self.labels: tuple[str, ...] = tuple(labels)
        if sorted(set(self.labels)) != list(self.labels):
            raise ValueError("alphabet labels must be unique and sorted")
        self._index: dict[str, int] = {lab: i for i, lab in enumerate(self.labels)}

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "Alphabet":
        return cls(sorted(set(tokens)))

    def id_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown item label: {label!r}") from None

    def label(self, item: int) -> str:
        return self.labels[item]

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[int]:
        return iter(range(len(self.labels)))

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.labels)!r})"


def _check_elements(elements: Elements, what: str) -> None:
    for itemset in elements:
        if not itemset:
            raise ValueError(f"{what} contains an empty itemset")
        if any(not isinstance(i, int) or i < 0 for i in itemset):
            raise ValueError(f"{what} itemset {itemset!r} has invalid item ids")
        if any(a >= b for a, b in zip(itemset, itemset[1:])):
            raise ValueError(f"{what} itemset {itemset!r} is not strictly increasing")


@dataclass(frozen=True)
class Sequence:
    """One database sequence: a sid plus its elements (itemsets)."""

    sid: int
    elements: Elements

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(tuple(e) for e in self.elements))
        _check_elements(self.elements, f"sequence {self.sid}")

    def __len__(self) -> int:
        return len(self.elements)

    def items(self) -> Iterator[int]:
        for itemset in self.elements:
            yield from itemset


@dataclass(frozen=True, order=True)
class Pattern:
    """A candidate/mined pattern: a tuple of itemsets, same shape as a sequence.

    The empty pattern is constructible (relation predicates treat it as
    vacuously contained) but the miner never emits it.
    """

    elements: Elements

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(tuple(e) for e in self.elements))
        _check_elements(self.elements, "pattern")

    @classmethod
    def of_items(cls, items: Iterable[int]) -> "Pattern":
        """Build a simple pattern: one singleton element per item."""
        return cls(tuple((i,) for i in items))

    def __len__(self) -> int:
        return len(self.elements)

    def items(self) -> Iterator[int]:
        for itemset in self.elements:
            yield from itemset

    def item_count(self) -> int:
        return sum(len(e) for e in self.elements)

    def is_simple(self) -> bool:
        return all(len(e) == 1 for e in self.elements)

    def labels(self, alphabet: Alphabet) -> list[list[str]]:
        return [[alphabet.label(i) for i in e] for e in self.elements]

    def sort_key(self) -> tuple[int, Elements]:
        """Canonical order: by element count, then lexicographic on elements."""
        return (len(self.elements), self.elements)


@dataclass(frozen=True)
class SequenceDatabase:
    alphabet: Alphabet
    sequences: tuple[Sequence, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sequences", tuple(self.sequences))
        n_items = len(self.alphabet)
        for pos, seq in enumerate(self.sequences, start=1):
            if seq.sid != pos:
                raise ValueError(f"sids must be dense 1..N; found {seq.sid} at row {pos}")
            for item in seq.items():
                if item >= n_items:
                    raise ValueError(f"sequence {seq.sid} uses item id {item} outside alphabet")

    def __len__(self) -> int:
        return len(self.sequences)

    def __iter__(self) -> Iterator[Sequence]:
        return iter(self.sequences)

    @property
    def simple_mode(self) -> bool:
        """True when every element of every sequence is a singleton."""
        return all(len(e) == 1 for s in self.sequences for e in s.elements)

    def sequence(self, sid: int) -> Sequence:
        return self.sequences[sid - 1]

    @classmethod
    def from_label_sequences(
        cls, label_seqs: Iterable[Iterable[Iterable[str] | str]]
    ) -> "SequenceDatabase":
        """Build a database from nested labels.

        Each sequence is an iterable of elements; an element is either a
        string label (singleton itemset) or an iterable of labels.
        """
        normal: list[list[tuple[str, ...]]] = []
        for seq in label_seqs:
            elems: list[tuple[str, ...]] = []
            for elem in seq:
                if isinstance(elem, str):
                    elems.append((elem,))
                else:
                    elems.append(tuple(elem))
            normal.append(elems)
        alphabet = Alphabet.from_tokens(lab for s in normal for e in s for lab in e)
        seqs = tuple(
            Sequence(sid, tuple(tuple(sorted(alphabet.id_of(lab) for lab in e)) for e in s))
            for sid, s in enumerate(normal, start=1)
        )
        return cls(alphabet, seqs)


# ---------------------------------------------------------------------------
# Mining results


@dataclass(frozen=True)
class ResultEntry:
    pattern: Pattern
    support: int
    support_ids: tuple[int, ...]


@dataclass(frozen=True)
class MiningResult:
    """Canonically ordered set of result entries plus an echo of the run params.

    Entries are sorted by (pattern length, elements) and pattern-unique;
    ``build`` enforces both.
    """

    entries: tuple[ResultEntry, ...]
    params: Any = None

    @classmethod
    def build(cls, entries: Iterable[ResultEntry], params: Any = None) -> "MiningResult":
        ordered = sorted(entries, key=lambda e: e.pattern.sort_key())
        for a, b in zip(ordered, ordered[1:]):
            if a.pattern == b.pattern:
                raise ValueError(f"duplicate pattern in result: {a.pattern}")
        return cls(tuple(ordered), params)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ResultEntry]:
        return iter(self.entries)

    def patterns(self) -> list[Pattern]:
        return [e.pattern for e in self.entries]

    def support_of(self, pattern: Pattern) -> int | None:
        for e in self.entries:
            if e.pattern == pattern:
                return e.support
        return None


# ---------------------------------------------------------------------------
# SPMF text format


def _as_text(source: str | bytes | TextIO) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    return source.read()


def read_spmf(source: str | bytes | TextIO) -> SequenceDatabase:
    """Parse SPMF text into a database.

    Tokens must be integers.  Errors: non-integer token, duplicate item in an
    itemset, empty itemset before ``-1``, missing ``-2`` at end of line, and
    tokens after ``-2``.  Blank lines are skipped.  A line holding only
    ``-2`` is an empty sequence.
    """
    raw_seqs: list[list[tuple[str, ...]]] = []
    for lineno, line in enumerate(_as_text(source).splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            continue
        elems: list[tuple[str, ...]] = []
        pending: list[str] = []
        closed = False
        for tok in tokens:
            if closed:
                raise FormatError(f"line {lineno}: token {tok!r} after sequence terminator")
            if tok == "-1":
                if not pending:
                    raise FormatError(f"line {lineno}: empty itemset before -1")
                elems.append(tuple(pending))
                pending = []
            elif tok == "-2":
                if pending:
                    elems.append(tuple(pending))
                    pending = []
                closed = True
            else:
                try:
                    value = int(tok)
                except ValueError:
                    raise FormatError(f"line {lineno}: non-integer token {tok!r}") from None
                if value < 0:
                    raise FormatError(f"line {lineno}: invalid token {tok!r}")
                if tok in pending:
                    raise FormatError(f"line {lineno}: duplicate item {tok!r} in itemset")
                pending.append(tok)
        if not closed:
            raise FormatError(f"line {lineno}: missing -2 at end of line")
        raw_seqs.append(elems)
    return _build_from_raw(raw_seqs)


def _build_from_raw(raw_seqs: list[list[tuple[str, ...]]]) -> SequenceDatabase:
    alphabet = Alphabet.from_tokens(lab for s in raw_seqs for e in s for lab in e)
    sequences = []
    for sid, elems in enumerate(raw_seqs, start=1):
        ids = []
        for elem in elems:
            mapped = sorted(alphabet.id_of(lab) for lab in elem)
            ids.append(tuple(mapped))
        sequences.append(Sequence(sid, tuple(ids)))
    return SequenceDatabase(alphabet, tuple(sequences))


def write_spmf(db: SequenceDatabase) -> str:
    """Serialize in canonical SPMF form (explicit ``-1`` before ``-2``)."""
    lines = []
    for seq in db.sequences:
        tokens: list[str] = []
        for elem in seq.elements:
            tokens.extend(db.alphabet.label(i) for i in elem)
            tokens.append("-1")
        tokens.append("-2")
        lines.append(" ".join(tokens))
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# ASP facts format

_BARE_LABEL = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")
_FACT = re.compile(
    r"seq\(\s*(\d+)\s*,\s*(\d+)\s*,\s*([a-z][a-zA-Z0-9_]*|\"(?:[^\"\\]|\\.)*\")\s*\)\s*\."
)


def _atom(label: str) -> str:
    if _BARE_LABEL.match(label):
        return label
    escaped = label.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def write_asp_facts(db: SequenceDatabase) -> str:
    """One fact ``seq(T,P,I).`` per item occurrence, ordered by (T, P, item id).

    Labels matching ``[a-z][a-zA-Z0-9_]*`` are written bare, anything else is
    double-quoted.
    """
    lines = []
    for seq in db.sequences:
        for pos, elem in enumerate(seq.elements, start=1):
            for item in elem:
                lines.append(f"seq({seq.sid},{pos},{_atom(db.alphabet.label(item))}).")
    return "\n".join(lines) + ("\n" if lines else "")


def read_asp_facts(source: str | bytes | TextIO) -> SequenceDatabase:
    """Parse ``seq(T,P,I).`` facts back into a database.

    Sequence ids are renumbered densely in ascending order of T; positions are
    compacted but must be strictly increasing per sequence after grouping.
    ``%`` comments are skipped; anything else unparseable is an error.
    """
    text = _as_text(source)
    by_t: dict[int, dict[int, list[str]]] = {}
    pos_in_text = 0
    while pos_in_text < len(text):
        rest = text[pos_in_text:]
        stripped = rest.lstrip()
        if not stripped:
            break
        pos_in_text += len(rest) - len(stripped)
        if stripped.startswith("%"):
            nl = text.find("\n", pos_in_text)
            pos_in_text = len(text) if nl < 0 else nl + 1
            continue
        m = _FACT.match(text, pos_in_text)
        if not m:
            snippet = stripped.splitlines()[0][:40]
            raise FormatError(f"unparseable ASP facts input at: {snippet!r}")
        t, p, atom = int(m.group(1)), int(m.group(2)), m.group(3)
        if atom.startswith('"'):
            label = atom[1:-1].replace('\\"', '"').replace("\\\\", "\\")
        else:
            label = atom
        slot = by_t.setdefault(t, {}).setdefault(p, [])
        if label in slot:
            raise FormatError(f"duplicate item {label!r} at seq({t},{p},...)")
        slot.append(label)
        pos_in_text = m.end()
    raw_seqs = []
    for t in sorted(by_t):
        elems = [tuple(by_t[t][p]) for p in sorted(by_t[t])]
        raw_seqs.append(elems)
    return _build_from_raw(raw_seqs)


def load_database(path: str, fmt: str = "spmf") -> SequenceDatabase:
    with io.open(path, "r", encoding="utf-8") as fh:
        if fmt == "spmf":
            return read_spmf(fh)
        if fmt == "aspfacts":
            return read_asp_facts(fh)
        raise ValueError(f"unknown database format: {fmt!r}")


# ---------------------------------------------------------------------------
# Result records (JSON lines)


def write_results(result: MiningResult, db: SequenceDatabase) -> str:
    """One compact JSON object per entry, in the result's canonical order."""
    lines = []
    for e in result.entries:
        record = {
            "pattern": e.pattern.labels(db.alphabet),
            "support": e.support,
            "support_ids": list(e.support_ids),
        }
        lines.append(json.dumps(record, separators=(",", ":")))
    return "\n".join(lines) + ("\n" if lines else "")


def read_results(source: str | bytes | TextIO, db: SequenceDatabase) -> MiningResult:
    entries = []
    for lineno, line in enumerate(_as_text(source).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            elements = tuple(
                tuple(sorted(db.alphabet.id_of(lab) for lab in elem))
                for elem in record["pattern"]
            )
            entries.append(
                ResultEntry(
                    Pattern(elements),
                    int(record["support"]),
                    tuple(int(s) for s in record["support_ids"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad result record on line {lineno}: {exc}") from None
    return MiningResult.build(entries)

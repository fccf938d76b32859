"""Shared test utilities: fixture databases, pattern builders, comparisons."""

from __future__ import annotations

import random

from seqmine import Pattern, SequenceDatabase

# The seven-sequence golden fixture over {a, b, c, d}.
D7_ROWS = [
    ["a", "c"],
    ["d", "a", "b", "c"],
    ["b"],
    ["a", "b", "c"],
    ["a", "b"],
    ["a", "c", "b", "c"],
    ["a", "b", "c", "c"],
]


def make_d7() -> SequenceDatabase:
    return SequenceDatabase.from_label_sequences(D7_ROWS)


def pat(db: SequenceDatabase, *elements: str) -> Pattern:
    """Build a pattern from label strings, one string per element.

    Each character of an element string is a single-letter label, so
    pat(db, "a", "bc") is the two-element pattern <(a)(bc)>.
    """
    return Pattern(
        tuple(tuple(sorted(db.alphabet.id_of(ch) for ch in elem)) for elem in elements)
    )


def entry_labels(db: SequenceDatabase, result) -> list[tuple[str, int]]:
    """Flatten simple-pattern entries to (joined labels, support) pairs."""
    out = []
    for e in result:
        labels = "".join(db.alphabet.label(i) for el in e.pattern.elements for i in el)
        out.append((labels, e.support))
    return out


def pattern_set(result) -> set[tuple]:
    return {e.pattern.elements for e in result}


def result_key(result) -> list[tuple]:
    return [(e.pattern.elements, e.support, e.support_ids) for e in result]


def random_simple_db(
    rng: random.Random, max_seqs: int = 8, max_len: int = 7, max_items: int = 4
) -> SequenceDatabase:
    labels = [chr(ord("a") + i) for i in range(rng.randint(1, max_items))]
    rows = [
        [rng.choice(labels) for _ in range(rng.randint(0, max_len))]
        for _ in range(rng.randint(1, max_seqs))
    ]
    return SequenceDatabase.from_label_sequences(rows)


def random_itemset_db(
    rng: random.Random, max_seqs: int = 8, max_len: int = 5, max_items: int = 4
) -> SequenceDatabase:
    labels = [chr(ord("a") + i) for i in range(rng.randint(1, max_items))]
    rows = []
    for _ in range(rng.randint(1, max_seqs)):
        row = []
        for _ in range(rng.randint(0, max_len)):
            row.append(rng.sample(labels, rng.randint(1, min(2, len(labels)))))
        rows.append(row)
    return SequenceDatabase.from_label_sequences(rows)


def db_maxlen(db: SequenceDatabase, cap: int = 8) -> int:
    longest = max((len(s) for s in db.sequences), default=1)
    return max(1, min(longest, cap))

"""Database model, SPMF text, ASP facts, and result record round trips."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqmine import (
    Alphabet,
    FormatError,
    MiningResult,
    Pattern,
    ResultEntry,
    Sequence,
    SequenceDatabase,
    load_database,
    read_asp_facts,
    read_results,
    read_spmf,
    write_asp_facts,
    write_results,
    write_spmf,
)

from helpers import make_d7, pat


# ---------------------------------------------------------------------------
# Alphabet


def test_alphabet_id_label_inverse():
    al = Alphabet(["a", "b", "c"])
    assert len(al) == 3
    for i, lab in enumerate(["a", "b", "c"]):
        assert al.id_of(lab) == i
        assert al.label(i) == lab
    assert "b" in al and "z" not in al
    assert list(al) == [0, 1, 2]


def test_alphabet_requires_sorted_unique():
    with pytest.raises(ValueError):
        Alphabet(["b", "a"])
    with pytest.raises(ValueError):
        Alphabet(["a", "a"])
    # from_tokens normalizes both problems away.
    assert Alphabet.from_tokens(["b", "a", "a"]).labels == ("a", "b")


def test_alphabet_unknown_label():
    with pytest.raises(KeyError):
        Alphabet(["a"]).id_of("b")


# ---------------------------------------------------------------------------
# Sequence / Pattern validation


def test_sequence_rejects_bad_itemsets():
    with pytest.raises(ValueError):
        Sequence(1, ((),))
    with pytest.raises(ValueError):
        Sequence(1, ((1, 1),))
    with pytest.raises(ValueError):
        Sequence(1, ((2, 1),))
    with pytest.raises(ValueError):
        Sequence(1, ((-1,),))


def test_pattern_rejects_bad_itemsets():
    with pytest.raises(ValueError):
        Pattern(((0,), ()))
    with pytest.raises(ValueError):
        Pattern(((3, 3),))


def test_pattern_helpers():
    p = Pattern(((0,), (1, 2)))
    assert len(p) == 2
    assert list(p.items()) == [0, 1, 2]
    assert p.item_count() == 3
    assert not p.is_simple()
    assert Pattern.of_items([2, 0, 1]).elements == ((2,), (0,), (1,))
    assert Pattern.of_items([2, 0]).is_simple()
    al = Alphabet(["a", "b", "c"])
    assert p.labels(al) == [["a"], ["b", "c"]]


def test_pattern_sort_key_orders_by_length_then_lex():
    ps = [
        Pattern(((1,), (0,))),
        Pattern(((2,),)),
        Pattern(((0,), (1,))),
        Pattern(((0, 1),)),
    ]
    ordered = sorted(ps, key=lambda p: p.sort_key())
    assert [p.elements for p in ordered] == [
        ((0, 1),),
        ((2,),),
        ((0,), (1,)),
        ((1,), (0,)),
    ]


def test_empty_pattern_is_constructible():
    assert len(Pattern(())) == 0


# ---------------------------------------------------------------------------
# SequenceDatabase


def test_database_checks_sids_and_item_range():
    al = Alphabet(["a"])
    with pytest.raises(ValueError):
        SequenceDatabase(al, (Sequence(2, (((0,),))),))
    with pytest.raises(ValueError):
        SequenceDatabase(al, (Sequence(1, ((1,),)),))


def test_from_label_sequences_mixed_forms():
    db = SequenceDatabase.from_label_sequences([["a", ("c", "b")], [], ["b"]])
    assert db.alphabet.labels == ("a", "b", "c")
    assert db.sequence(1).elements == ((0,), (1, 2))
    assert db.sequence(2).elements == ()
    assert db.sequence(3).elements == ((1,),)
    assert not db.simple_mode


def test_d7_fixture_shape(d7):
    assert len(d7) == 7
    assert len(d7.alphabet) == 4
    assert d7.alphabet.labels == ("a", "b", "c", "d")
    assert sum(sum(len(e) for e in s.elements) for s in d7) == 20
    assert d7.simple_mode


# ---------------------------------------------------------------------------
# SPMF text


def test_read_spmf_terse_and_explicit_agree():
    terse = read_spmf("1 2 -1 3 -2\n")
    explicit = read_spmf("1 2 -1 3 -1 -2\n")
    assert terse == explicit
    assert terse.sequence(1).elements == ((0, 1), (2,))
    assert terse.alphabet.labels == ("1", "2", "3")


def test_read_spmf_blank_lines_and_empty_sequence():
    db = read_spmf("\n1 -1 -2\n\n-2\n")
    assert len(db) == 2
    assert db.sequence(2).elements == ()


def test_read_spmf_errors():
    for bad in [
        "1 x -1 -2\n",  # non-integer token
        "1 -3 -1 -2\n",  # negative item token
        "1 1 -1 -2\n",  # duplicate item in an itemset
        "1 -1 -1 -2\n",  # empty itemset
        "1 -1\n",  # missing -2
        "1 -1 -2 2\n",  # trailing token after the terminator
    ]:
        with pytest.raises(FormatError):
            read_spmf(bad)


def test_write_spmf_is_explicit_form():
    db = read_spmf("1 2 -2\n-2\n")
    assert write_spmf(db) == "1 2 -1 -2\n-2\n"


def test_load_database_d7(d7_path):
    db = load_database(str(d7_path))
    assert len(db) == 7
    assert db.alphabet.labels == ("1", "2", "3", "4")
    # Same structure as the in-memory fixture, only the labels differ.
    letters = make_d7()
    assert [s.elements for s in db] == [s.elements for s in letters]
    with pytest.raises(ValueError):
        load_database(str(d7_path), fmt="nope")


@st.composite
def int_label_dbs(draw):
    rows = draw(
        st.lists(
            st.lists(
                st.sets(st.integers(min_value=0, max_value=9), min_size=1, max_size=3),
                max_size=5,
            ),
            max_size=6,
        )
    )
    label_rows = [[tuple(str(i) for i in elem) for elem in row] for row in rows]
    return SequenceDatabase.from_label_sequences(label_rows)


@settings(max_examples=100, deadline=None)
@given(int_label_dbs())
def test_spmf_roundtrip(db):
    text = write_spmf(db)
    again = read_spmf(text)
    assert [s.elements for s in again] == [s.elements for s in db]
    assert [again.alphabet.label(i) for i in again.alphabet] == sorted(
        db.alphabet.labels
    ) or len(db.alphabet) == 0
    assert write_spmf(again) == text


# ---------------------------------------------------------------------------
# ASP facts


def test_write_asp_facts_simple():
    db = SequenceDatabase.from_label_sequences([["a", "c"]])
    assert write_asp_facts(db) == "seq(1,1,a).\nseq(1,2,c).\n"


def test_write_asp_facts_quotes_nonbare_labels():
    db = SequenceDatabase.from_label_sequences([["A-B", "ok"]])
    assert write_asp_facts(db) == 'seq(1,1,"A-B").\nseq(1,2,ok).\n'


def test_asp_facts_roundtrip_quoted_and_spaced():
    db = SequenceDatabase.from_label_sequences([["1", ("a", "b")], ["x y"]])
    text = write_asp_facts(db)
    again = read_asp_facts(text)
    assert [s.elements for s in again] == [s.elements for s in db]
    assert again.alphabet == db.alphabet
    # The reader tolerates facts jammed onto one line and % comments.
    one_line = "% header\n" + " ".join(text.split("\n"))
    assert read_asp_facts(one_line) == again


def test_read_asp_facts_renumbers_and_compacts():
    db = read_asp_facts("seq(9,4,b). seq(9,2,a). seq(3,1,a).")
    assert len(db) == 2
    assert db.sequence(1).elements == ((0,),)
    assert db.sequence(2).elements == ((0,), (1,))


def test_read_asp_facts_errors():
    with pytest.raises(FormatError):
        read_asp_facts("seq(1,1,a). garbage")
    with pytest.raises(FormatError):
        read_asp_facts("seq(1,1,a). seq(1,1,a).")


# ---------------------------------------------------------------------------
# Result records


def test_write_results_exact_line(d7):
    entry = ResultEntry(pat(d7, "a", "c"), 5, (1, 2, 4, 6, 7))
    text = write_results(MiningResult.build([entry]), d7)
    assert text == '{"pattern":[["a"],["c"]],"support":5,"support_ids":[1,2,4,6,7]}\n'


def test_results_roundtrip(d7):
    entries = [
        ResultEntry(pat(d7, "a"), 6, (1, 2, 4, 5, 6, 7)),
        ResultEntry(pat(d7, "a", "bc"), 1, (2,)),
    ]
    result = MiningResult.build(entries)
    again = read_results(write_results(result, d7), d7)
    assert again == result


def test_read_results_rejects_bad_records(d7):
    with pytest.raises(FormatError):
        read_results('{"support":1}\n', d7)
    with pytest.raises(FormatError):
        read_results('{"pattern":[["a"]],"support":"x","support_ids":[]}\n', d7)


def test_mining_result_build_sorts_and_deduplicates(d7):
    a = ResultEntry(pat(d7, "a"), 6, (1, 2, 4, 5, 6, 7))
    ab = ResultEntry(pat(d7, "a", "b"), 5, (2, 4, 5, 6, 7))
    result = MiningResult.build([ab, a])
    assert [e.pattern for e in result.entries] == [a.pattern, ab.pattern]
    with pytest.raises(ValueError):
        MiningResult.build([a, a])

"""Byte-span edit batch tests."""

import random

import pytest
from hypothesis import given, strategies as st

from plansweep.diagnostics import DiagnosticError, Span
from plansweep.edits import Edit, apply_edits


def test_single_replacement():
    assert apply_edits("hello world", [Edit(Span(0, 5), "goodbye")]) == "goodbye world"


def test_insertion_and_deletion():
    assert apply_edits("ab", [Edit(Span(1, 1), "XYZ")]) == "aXYZb"
    assert apply_edits("abcdef", [Edit(Span(2, 4), "")]) == "abef"
    assert apply_edits("", [Edit(Span(0, 0), "new")]) == "new"


def test_batch_applies_against_original_offsets():
    # Spans address the original text even when earlier edits change length.
    src = "0123456789"
    out = apply_edits(
        src,
        [Edit(Span(0, 2), "AAAA"), Edit(Span(5, 5), "B"), Edit(Span(8, 10), "")],
    )
    assert out == "AAAA234B567"


def test_order_in_batch_does_not_matter():
    src = "0123456789"
    edits = [Edit(Span(8, 10), "x"), Edit(Span(0, 2), "yy"), Edit(Span(4, 6), "")]
    assert apply_edits(src, edits) == apply_edits(src, list(reversed(edits)))


def test_adjacent_spans_are_not_overlap():
    assert apply_edits("abcd", [Edit(Span(0, 2), "X"), Edit(Span(2, 4), "Y")]) == "XY"
    assert apply_edits("ab", [Edit(Span(1, 1), "X"), Edit(Span(1, 2), "Y")]) == "aXY"


def test_utf8_spans_are_byte_addressed():
    src = "café!"  # e-acute is two bytes
    assert apply_edits(src, [Edit(Span(3, 5), "e")]) == "cafe!"
    assert apply_edits(src, [Edit(Span(5, 6), "?")]) == "café?"


def test_out_of_bounds():
    for span in [Span(0, 3), Span(3, 3), Span(2, 1)]:
        with pytest.raises(DiagnosticError) as exc:
            apply_edits("ab", [Edit(span, "x")])
        assert exc.value.code == "E_SPAN"


def test_character_split():
    src = "é"  # two bytes
    with pytest.raises(DiagnosticError) as exc:
        apply_edits(src, [Edit(Span(0, 1), "x")])
    assert exc.value.code == "E_SPAN"
    with pytest.raises(DiagnosticError) as exc:
        apply_edits(src, [Edit(Span(1, 2), "x")])
    assert exc.value.code == "E_SPAN"


def test_overlap():
    with pytest.raises(DiagnosticError) as exc:
        apply_edits("abcdef", [Edit(Span(0, 3), "x"), Edit(Span(2, 5), "y")])
    assert exc.value.code == "E_OVERLAP"
    # A nested span overlaps too.
    with pytest.raises(DiagnosticError) as exc:
        apply_edits("abcdef", [Edit(Span(0, 6), "x"), Edit(Span(2, 3), "y")])
    assert exc.value.code == "E_OVERLAP"


def test_every_bad_span_is_reported():
    with pytest.raises(DiagnosticError) as exc:
        apply_edits("ab", [Edit(Span(0, 9), "x"), Edit(Span(5, 9), "y")])
    assert [d.code for d in exc.value.diagnostics] == ["E_SPAN", "E_SPAN"]


def test_span_errors_preempt_overlap_checks():
    with pytest.raises(DiagnosticError) as exc:
        apply_edits("abcdef", [Edit(Span(0, 3), "x"), Edit(Span(2, 99), "y")])
    assert [d.code for d in exc.value.diagnostics] == ["E_SPAN"]


def test_empty_batch_is_identity():
    assert apply_edits("text", []) == "text"


@given(st.text(max_size=40), st.integers(0, 2**32))
def test_random_disjoint_edits_compose(source, seed):
    # Build disjoint spans on character boundaries, then verify against a
    # piecewise reconstruction.
    rng = random.Random(seed)
    data = source.encode("utf-8")
    bounds = sorted(
        rng.sample(range(len(source) + 1), min(len(source) + 1, rng.randint(0, 6)))
    )
    char_to_byte = [len(source[:i].encode("utf-8")) for i in range(len(source) + 1)]
    edits = []
    expected_parts = []
    prev = 0
    for a, b in zip(bounds[::2], bounds[1::2]):
        replacement = rng.choice(["", "X", "éé", "longer text"])
        edits.append(Edit(Span(char_to_byte[a], char_to_byte[b]), replacement))
        expected_parts.append(source[prev:a])
        expected_parts.append(replacement)
        prev = b
    expected_parts.append(source[prev:])
    rng.shuffle(edits)
    assert apply_edits(source, edits) == "".join(expected_parts)

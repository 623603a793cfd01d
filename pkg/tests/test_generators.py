from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st

from multirec.errors import NotProlongable
from multirec.generators import (
    CONSTANT,
    PRESET_NAMES,
    SEEDED_RANDOM,
    Morphism,
    ToeplitzSchedule,
    ToeplitzWord,
    UrdNotUrSchedule,
    fib_rows_word,
    fibonacci_word,
    gcd_word,
    load_preset,
    morphic_prefix,
    morphism_from_json,
    morphism_to_json,
    preset_word,
    thue_morse,
    thue_morse_word,
    toeplitz_construct,
    toeplitz_rows_word,
    urd_not_ur_construct,
)
from multirec.lattice import FiniteWord, factor_at, iter_box, vec_scale


def test_thue_morse_prefix():
    assert [thue_morse(n) for n in range(16)] == [
        0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0,
    ]
    assert thue_morse(20) == 0
    assert all(thue_morse(1 << k) == 1 for k in range(12))


def test_fibonacci_prefix_from_substitution():
    """Expanding 0 -> 01, 1 -> 0 five times gives 0100101001001."""
    text = "0"
    for _ in range(6):
        text = text.replace("0", "a").replace("1", "0").replace("a", "01")
    assert [fibonacci_word(n) for n in range(len(text))] == [int(c) for c in text]
    assert [fibonacci_word(n) for n in range(9)] == [0, 1, 0, 0, 1, 0, 1, 0, 0]
    assert fibonacci_word(12) == 1


def test_presets_all_load_and_are_binary():
    for name in PRESET_NAMES:
        phi = load_preset(name)
        assert phi.alphabet_size == 2
        assert phi.is_prolongable(1)


def test_unknown_preset_is_reported():
    with pytest.raises(KeyError):
        load_preset("no-such-morphism")


def test_morphism_json_round_trip():
    for name in PRESET_NAMES:
        phi = load_preset(name)
        assert morphism_from_json(morphism_to_json(phi)) == phi


def test_prolongability_of_the_rectangular_preset():
    phi = load_preset("preimage-3x2")
    assert phi.dims == (3, 2)
    assert phi.is_prolongable(0)
    assert phi.is_prolongable(1)


def test_fixed_point_requires_prolongable_letter():
    phi = load_preset("sierpinski")
    assert not phi.is_prolongable(0) or phi.image(0)[(0, 0)] == 0
    with pytest.raises(NotProlongable):
        # 0's image starts with 0, so no fixed point grows from 1's seed there
        Morphism([phi.image(1), phi.image(1)]).fixed_point(0)


def test_sierpinski_square_expansion():
    block = morphic_prefix(load_preset("sierpinski"), 1, 2)
    assert block.size == (4, 4)
    assert [block[(x, 0)] for x in range(4)] == [1, 1, 1, 1]
    assert [block[(x, 3)] for x in range(4)] == [1, 0, 0, 0]


def test_sierpinski_letters_follow_bitwise_rule():
    w = preset_word("sierpinski")
    for x in range(24):
        for y in range(24):
            assert w.letter((x, y)) == (1 if x & y == 0 else 0)


def test_ssurdo_image_of_one():
    img = load_preset("ssurdo-3x3").image(1)
    assert [img[(0, y)] for y in range(3)] == [1, 1, 1]
    assert [img[(1, y)] for y in range(3)] == [0, 0, 0]
    assert [img[(2, y)] for y in range(3)] == [0, 1, 1]


def test_rectangular_digit_evaluation_matches_block_expansion():
    phi = load_preset("preimage-3x2")
    big = phi.iterate(1, 3)
    assert big.size == (27, 8)
    assert big[(0, 0)] == 1 and big[(2, 0)] == 0
    assert big[(8, 3)] == 1
    assert big[(4, 7)] == 1
    assert big[(4, 7)] == phi.image(phi.iterate(1, 2)[(1, 3)])[(1, 1)]


@given(st.sampled_from(PRESET_NAMES), st.integers(0, 60), st.integers(0, 60))
@settings(max_examples=60)
def test_preset_letters_match_prefix_expansion(name, x, y):
    phi = load_preset(name)
    depth = 4 if phi.dims == (2, 2) else 3
    block = phi.iterate(1, depth)
    if x < block.size[0] and y < block.size[1]:
        w = preset_word(name)
        assert w.letter((x, y)) == block[(x, y)]


def test_prefix_nesting():
    for name in ("sierpinski", "ssurdo-3x3", "power-3x3"):
        phi = load_preset(name)
        small = phi.iterate(1, 1)
        large = phi.iterate(1, 2)
        for p in iter_box(small.size):
            assert small[p] == large[p]


def test_power_is_iterated_composition():
    phi = load_preset("surd-not-ssurdo-2x2")
    sq = phi.power(2)
    assert sq.dims == (4, 4)
    for b in (0, 1):
        assert sq.image(b) == phi.iterate(b, 2)


def test_transpose_swaps_axes():
    phi = load_preset("preimage-3x2")
    t = phi.transpose()
    assert t.dims == (2, 3)
    for b in (0, 1):
        for x, y in iter_box((3, 2)):
            assert phi.image(b)[(x, y)] == t.image(b)[(y, x)]


def test_gcd_word_places_the_seed_along_every_direction():
    w = gcd_word(thue_morse_word(), 2)
    assert w.letter((2, 3)) == 1
    assert w.letter((4, 6)) == 1
    assert w.letter((0, 0)) == thue_morse(0)
    for q in ((1, 2), (3, 5), (1, 0)):
        for ell in range(30):
            assert w.letter(vec_scale(q, ell)) == thue_morse(ell)


def test_fib_rows_alternates_prefixed_rows():
    w = fib_rows_word()
    assert w.letters_along((0, 0), (1, 0), 9) == [1, 0, 1, 0, 0, 1, 0, 1, 0]
    assert w.letters_along((0, 1), (1, 0), 9) == [0, 0, 1, 0, 0, 1, 0, 1, 0]
    for y in range(6):
        expected = [y % 2 == 0] + [fibonacci_word(x) for x in range(8)]
        row = w.letters_along((0, y), (1, 0), 9)
        assert row[0] == int(expected[0])
        assert row[1:] == expected[1:]


def test_toeplitz_rows_word_rows():
    w = toeplitz_rows_word()
    assert w.letters_along((0, 0), (1, 0), 8) == [1, 0, 0, 0, 0, 0, 0, 0]
    assert w.letters_along((0, 4), (1, 0), 8) == [1, 0, 0, 0, 1, 0, 0, 0]
    for n in (1, 2, 3, 5, 6, 12):
        k = (n & -n).bit_length() - 1
        period = 1 << k
        row = w.letters_along((0, n), (1, 0), 4 * period)
        assert row == [1 if x % period == 0 else 0 for x in range(4 * period)]


def test_toeplitz_rows_prefix_recurs_on_a_double_lattice():
    w = toeplitz_rows_word()
    for n in (1, 2, 3):
        side = 1 << n
        stride = 1 << (n + 1)
        prefix = factor_at(w, (0, 1), (side, side))
        for a in range(3):
            for b in range(3):
                p = (a * stride, 1 + b * stride)
                assert factor_at(w, p, (side, side)) == prefix


def test_fib_rows_corner_prefix_sticks_to_column_zero():
    w = fib_rows_word()
    prefix = factor_at(w, (0, 0), (2, 2))
    assert prefix.cells == (1, 0, 0, 0)
    hits = [
        (x, y)
        for x in range(63)
        for y in range(63)
        if factor_at(w, (x, y), (2, 2)) == prefix
    ]
    assert hits
    assert all(x == 0 for x, _ in hits)


def test_constant_fill_toeplitz_is_morphic():
    w = toeplitz_construct(ToeplitzSchedule(policy=CONSTANT, fill_letter=0))
    marked = FiniteWord((2, 2), (1, 0, 0, 0))
    phi = Morphism([marked, marked])
    fp = phi.fixed_point(1)
    for p in iter_box((32, 32)):
        assert w.letter(p) == fp.letter(p)


def test_toeplitz_materialization_is_conflict_free():
    for policy, seed in ((CONSTANT, 0), (SEEDED_RANDOM, 7), (SEEDED_RANDOM, 8)):
        tw = ToeplitzWord(ToeplitzSchedule(steps=4, policy=policy, seed=seed))
        grid = tw.materialize(4)
        assert len(grid) == 32 * 32
        for cell, letter in grid.items():
            assert tw.letter(cell) == letter


def test_seeded_toeplitz_is_reproducible_and_seed_sensitive():
    a = toeplitz_construct(ToeplitzSchedule(policy=SEEDED_RANDOM, seed=3))
    b = toeplitz_construct(ToeplitzSchedule(policy=SEEDED_RANDOM, seed=3))
    c = toeplitz_construct(ToeplitzSchedule(policy=SEEDED_RANDOM, seed=4))
    probe = list(iter_box((16, 16)))
    va = [a.letter(p) for p in probe]
    assert va == [b.letter(p) for p in probe]
    assert va != [c.letter(p) for p in probe]


def test_urd_not_ur_artifact_shape():
    art = urd_not_ur_construct(UrdNotUrSchedule(steps=4, horizon=96))
    assert art.letter((0, 0)) == 1
    for p in iter_box((4, 4)):
        assert art.filled(p)
    assert art.zero_blocks
    for n, corner in art.zero_blocks:
        for off in iter_box((n, n)):
            p = (corner[0] + off[0], corner[1] + off[1])
            assert art.letter(p) == 0
    for (step, q), b in art.b_table.items():
        assert b >= 1 and math.gcd(*q) == 1

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, strategies as st

from multirec.errors import NotCoprime, OnLine
from multirec.residues import (
    bezout_coefficients,
    cyclic_subgroup,
    family_c,
    gcd_along_line,
    gcd_along_line_closed_form,
    iter_coprime_directions,
    line_gcd_period,
)


def test_cyclic_subgroup_is_closed_under_addition():
    g = cyclic_subgroup(6, (1, 4))
    for a in g.elements:
        for b in g.elements:
            assert tuple((x + y) % 6 for x, y in zip(a, b)) in g.elements


@given(st.integers(2, 12),
       st.tuples(st.integers(0, 11), st.integers(0, 11)))
def test_coprime_generators_have_full_order(s, gen):
    gen = tuple(g % s for g in gen)
    if math.gcd(*gen) != 1:
        with pytest.raises(NotCoprime):
            cyclic_subgroup(s, gen)
        return
    g = cyclic_subgroup(s, gen)
    assert len(g.elements) == s
    assert (0, 0) in g.elements


@pytest.mark.parametrize("s", [2, 3, 5, 7, 11, 13])
def test_prime_modulus_gives_s_plus_one_subgroups(s):
    assert len(family_c(s, 2)) == s + 1


def test_composite_modulus_six_gives_twelve_subgroups():
    fam = family_c(6, 2)
    assert len(fam) == 12
    assert len(fam.element_sets()) == 12


def test_family_generators_regenerate_their_subgroups():
    for g in family_c(6, 2).subgroups:
        assert cyclic_subgroup(6, g.generator).elements == g.elements
        assert math.gcd(*g.generator) == 1


def test_prime_family_meets_only_at_zero():
    groups = family_c(7, 2).subgroups
    for i, a in enumerate(groups):
        for b in groups[i + 1:]:
            assert a.elements & b.elements == {(0, 0)}


def test_coprime_directions_low_bounds():
    assert list(iter_coprime_directions(2, 1)) == [(0, 1), (1, 0), (1, 1)]
    assert list(iter_coprime_directions(2, 2)) == [
        (0, 1), (1, 0), (1, 1), (1, 2), (2, 1),
    ]
    assert len(list(iter_coprime_directions(3, 1))) == 7


def test_coprime_directions_are_sorted_and_coprime():
    dirs = list(iter_coprime_directions(2, 5))
    assert dirs == sorted(dirs)
    assert all(math.gcd(*q) == 1 for q in dirs)
    assert len(dirs) == len(set(dirs))


def test_bezout_coefficients_certify_coprimality():
    for q in [(2, 3), (6, 10, 15), (1, 0), (5, 7)]:
        alpha = bezout_coefficients(q)
        assert sum(a * c for a, c in zip(alpha, q)) == 1


def test_bezout_rejects_non_coprime_input():
    with pytest.raises(NotCoprime):
        bezout_coefficients((4, 6))


def test_line_gcd_examples():
    assert line_gcd_period((2, 3), (1, 1)) == 1
    assert gcd_along_line((2, 3), (1, 1), 0) == 1
    assert gcd_along_line((2, 3), (1, 1), 1) == 1
    assert line_gcd_period((1, 0), (0, 2)) == 2
    assert [gcd_along_line((1, 0), (0, 2), ell) for ell in range(4)] == [2, 1, 2, 1]


def test_points_on_the_line_are_rejected():
    with pytest.raises(OnLine):
        line_gcd_period((2, 3), (4, 6))
    with pytest.raises(OnLine):
        gcd_along_line((1, 1), (0, 0), 3)


def test_closed_form_matches_direct_gcd_on_random_pairs():
    rng = random.Random(20240)
    done = 0
    while done < 200:
        q = (rng.randrange(1, 30), rng.randrange(0, 30))
        if math.gcd(*q) != 1:
            continue
        i = (rng.randrange(0, 40), rng.randrange(0, 40))
        try:
            period = line_gcd_period(q, i)
        except OnLine:
            continue
        for ell in range(0, 3 * period + 1):
            assert gcd_along_line_closed_form(q, i, ell) == gcd_along_line(q, i, ell)
        done += 1


@given(st.integers(2, 30), st.integers(0, 200))
def test_closed_form_is_periodic(offset, ell):
    q, i = (1, 0), (0, offset)
    period = line_gcd_period(q, i)
    direct = gcd_along_line(q, i, ell)
    assert direct == gcd_along_line(q, i, ell + period)
    assert direct == gcd_along_line_closed_form(q, i, ell)

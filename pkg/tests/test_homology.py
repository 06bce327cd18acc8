"""Homology tables: golden values, oracle agreement, invariance properties."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _oracle as oracle
from khoma.diagram import POS_CROSS, Word, mirror, parse_word, smooth, torus_word
from khoma.homology import (
    AbGroup,
    BigradedTable,
    homology,
    homology_unnormalized,
    normalize,
)

TREFOIL_TABLE = {
    (0, 1): (1, ()),
    (0, 3): (1, ()),
    (2, 5): (1, ()),
    (3, 7): (0, (2,)),
    (3, 9): (1, ()),
}

MIRROR_TREFOIL_TABLE = {
    (-3, -9): (1, ()),
    (-2, -7): (0, (2,)),
    (-2, -5): (1, ()),
    (0, -3): (1, ()),
    (0, -1): (1, ()),
}

HOPF_TABLE = {
    (0, 0): (1, ()),
    (0, 2): (1, ()),
    (2, 4): (1, ()),
    (2, 6): (1, ()),
}

UNKNOT_TABLE = {(0, -1): (1, ()), (0, 1): (1, ())}


def as_plain(table):
    return {key: (g.rank, g.torsion) for key, g in table.items()}


def test_abgroup_validation():
    with pytest.raises(ValueError):
        AbGroup(-1)
    with pytest.raises(ValueError):
        AbGroup(0, (1,))
    with pytest.raises(ValueError):
        AbGroup(0, (4, 2))
    assert str(AbGroup(2, (2, 4))) == "Z^2 + Z_2 + Z_4"
    assert str(AbGroup()) == "0"


def test_trefoil_golden_table():
    assert as_plain(homology(parse_word("1 1 1"))) == TREFOIL_TABLE


def test_mirror_trefoil_table():
    assert as_plain(homology(parse_word("-1 -1 -1"))) == MIRROR_TREFOIL_TABLE


def test_hopf_link_table():
    assert as_plain(homology(parse_word("1 1"))) == HOPF_TABLE


def test_unknot_presentations():
    for text, strands in [("1", None), ("-1", None), ("1 -1 1", None)]:
        assert as_plain(homology(parse_word(text, strands=strands))) == UNKNOT_TABLE
    assert as_plain(homology(torus_word(1, 7))) == UNKNOT_TABLE
    assert as_plain(homology(Word(1))) == UNKNOT_TABLE


def test_two_component_unlink():
    assert as_plain(homology(parse_word("1 -1"))) == {
        (0, -2): (1, ()),
        (0, 0): (2, ()),
        (0, 2): (1, ()),
    }


def test_crossingless_unlinks():
    # the closure of the empty word on p strands is the p-component unlink,
    # whose homology is the p-th power of the unknot's
    for p in [1, 2, 3]:
        table = as_plain(homology(torus_word(p, 0)))
        expected = {
            (0, p - 2 * x): (math.comb(p, x), ()) for x in range(p + 1)
        }
        assert table == expected


def test_unnormalized_is_shift_of_normalized():
    w = parse_word("1 1 1")
    raw = homology_unnormalized(w)
    assert as_plain(raw) == {
        (i, j - 3): g for (i, j), g in TREFOIL_TABLE.items()
    }
    assert as_plain(normalize(raw)) == TREFOIL_TABLE


def test_normalize_guards():
    w = parse_word("1 1 1")
    table = homology(w)
    with pytest.raises(ValueError):
        normalize(table)  # already normalized
    smooth_word = Word(3, (smooth(1),))
    raw = homology_unnormalized(smooth_word)
    with pytest.raises(ValueError):
        normalize(raw)
    with pytest.raises(ValueError):
        homology(smooth_word)


def test_markov_moves_exact_table_equality():
    base = homology(parse_word("1 1 1"))
    stabilized = homology(parse_word("1 1 1 2", strands=3))
    conjugated = homology(parse_word("-2 1 1 1 2 2", strands=3))
    negative_stab = homology(parse_word("1 1 1 -2", strands=3))
    assert base.groups == stabilized.groups
    assert base.groups == conjugated.groups
    assert base.groups == negative_stab.groups


def test_mirror_duality_total_rank():
    for text in ["1 1 1", "1 1", "1 2 1 2", "1 -2 1"]:
        w = parse_word(text, strands=3)
        assert homology(w).total_rank() == homology(mirror(w)).total_rank()


def test_raw_homology_never_negative_degree():
    for text in ["1 1 1", "1 -1 1", "-1 -1", "1 -2 -2 1"]:
        w = parse_word(text, strands=3)
        raw = homology_unnormalized(w)
        assert all(i >= 0 for (i, j) in raw.groups)


def test_positive_link_diagrams_vanish_below_negative_count():
    # words whose closures are positive links: raw homology starts at n_minus
    for text in ["1 -1 1", "2 1 1 1 -2"]:
        w = parse_word(text, strands=3)
        raw = homology_unnormalized(w)
        assert all(i >= w.n_minus for (i, j) in raw.groups)


def test_parity_field():
    knot = homology(parse_word("1 1 1"))
    assert knot.parity == 1  # one component: odd quantum degrees
    link = homology(parse_word("1 1"))
    assert link.parity == 0


def test_max_i_truncation_agrees_with_full_run():
    w = torus_word(3, 3)
    full = homology_unnormalized(w)
    for bound in [0, 1, 2, 3]:
        part = homology_unnormalized(w, max_i=bound)
        assert part.groups == {
            key: g for key, g in full.groups.items() if key[0] <= bound
        }
    norm = homology(w, max_i=2)
    assert norm.groups == {
        key: g for key, g in homology(w).groups.items() if key[0] <= 2
    }


def test_parallel_jobs_identical_tables():
    w = torus_word(3, 4)
    assert homology(w, jobs=2).groups == homology(w).groups


def test_free_rank_matches_pure_rational_rank():
    from khoma.cube import build_cube
    from khoma.zalgebra import rank_q

    w = torus_word(3, 3)
    cube = build_cube(w)
    raw = homology_unnormalized(w)
    for i in range(cube.m + 1):
        for j in cube.chain_basis(i):
            dim = cube.chain_rank(i, j)
            free = dim - rank_q(cube.differential_matrix(i, j)) - rank_q(
                cube.differential_matrix(i - 1, j)
            )
            assert free == raw.group(i, j).rank


words_strategy = st.lists(
    st.integers(min_value=-2, max_value=2).filter(lambda k: k != 0),
    max_size=6,
)


@settings(max_examples=25, deadline=None)
@given(words_strategy)
def test_engine_matches_oracle_on_random_words(letters):
    word = parse_word(" ".join(str(k) for k in letters), strands=3)
    engine = as_plain(homology_unnormalized(word))
    assert engine == oracle.khovanov_groups(list(letters), strands=3)


def test_engine_matches_oracle_with_smoothings():
    # a plat-bearing word: smoothing letters participate in the closure
    letters = [1, ("o", 2), 1, 2]
    word = Word(3, tuple(
        smooth(x[1]) if isinstance(x, tuple) else
        (parse_word(str(x), strands=3).letters[0])
        for x in letters
    ))
    engine = as_plain(homology_unnormalized(word))
    assert engine == oracle.khovanov_groups(letters, strands=3)


T34_TABLE = {
    (0, 5): (1, ()),
    (0, 7): (1, ()),
    (2, 9): (1, ()),
    (3, 11): (0, (2,)),
    (3, 13): (1, ()),
    (4, 11): (1, ()),
    (4, 13): (1, ()),
    (5, 15): (1, ()),
    (5, 17): (1, ()),
}


def test_full_torus_34_table_matches_oracle():
    assert as_plain(homology(torus_word(3, 4))) == T34_TABLE
    assert oracle.khovanov_normalized([1, 2] * 4, strands=3) == T34_TABLE


def duality_pairing_holds(table, mirror_table):
    """Free ranks reflect through the origin; torsion shifts one degree.

    This is the universal-coefficient relation between the homology of a link
    and of its mirror; it cross-validates torsion placement between two
    independent computations.
    """
    keys = set(mirror_table)
    keys |= {(-i, -j) for (i, j) in table}
    keys |= {(-i + 1, -j) for (i, j) in table}
    for i, j in keys:
        free_m = mirror_table.get((i, j), (0, ()))[0]
        free_k = table.get((-i, -j), (0, ()))[0]
        tor_m = mirror_table.get((i, j), (0, ()))[1]
        tor_k = table.get((-i + 1, -j), (0, ()))[1]
        if free_m != free_k or tor_m != tor_k:
            return False
    return True


@pytest.mark.parametrize("p,q", [(2, 3), (2, 5), (3, 3), (3, 4)])
def test_mirror_duality_pairing(p, q):
    table = as_plain(homology(torus_word(p, q)))
    mirrored = as_plain(homology(mirror(torus_word(p, q))))
    assert duality_pairing_holds(table, mirrored)


def test_homology_group_at_single_slice():
    from khoma.homology import homology_group_at

    w = parse_word("1 1 1")
    full = homology_unnormalized(w)
    for (i, j), g in full.groups.items():
        assert homology_group_at(w, i, j) == g
    assert homology_group_at(w, 1, 0).is_trivial
    assert homology_group_at(torus_word(3, 4), 4, 3) == AbGroup(1)


def test_table_bookkeeping():
    t = homology(parse_word("1 1 1"))
    assert t.group(5, 5).is_trivial
    assert t.total_rank() == 4
    assert t.restricted(2) == {
        (0, 1): AbGroup(1),
        (0, 3): AbGroup(1),
    }
    shifted = t.shifted(1, 2)
    assert (1, 3) in shifted

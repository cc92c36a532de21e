"""
Test cases for D-terms: measures, compaction orderings, compacted D-terms
and level enumeration.
"""
import pytest

from core.dterms import (
    D, N, CompactedDTerm, LevelEnumerator, c_geq, c_gt, c_size, c_size_of, c_smaller_set, compact, contains,
    count_dterms, dag_stats, in_psp, is_prime, leaves_in_order, measure, prim, prime_level, prims, psp_level,
    psp_parts, psp_successors, replace_all, sc_size, strictly_contains, sub, subeq, successive_heights,
)
from core.errors import CyclicLabels, NotCompound, ResourceLimit, UnknownLabel
from notations.d_notation import parse_dnotation

ONE = prim("1")
D11 = D(ONE, ONE)
D1D11 = D(ONE, D11)
# shares D(1,1) and D(1,D(1,1))
SHARED = D(D11, D(D1D11, D1D11))


def left_chain(length: int):
    d = ONE
    for _ in range(length):
        d = D(d, ONE)
    return d


def right_chain(length: int):
    d = ONE
    for _ in range(length):
        d = D(ONE, d)
    return d


def random_dterm(rng, inner: int, labels=("1",)):
    if inner == 0:
        return prim(labels[0]) if len(labels) == 1 else prim(rng.choice(labels))
    left = rng.randrange(inner)
    return D(random_dterm(rng, left, labels), random_dterm(rng, inner - 1 - left, labels))


@pytest.mark.smoke
class TestMeasure:
    """Test case: tree size, height, compacted size and SC size."""

    def test_shared_term(self):
        sizes = measure(SHARED)
        assert (sizes.t_size, sizes.height, sizes.c_size) == (7, 4, 4)

    def test_primitive_is_all_zero(self):
        assert measure(ONE) == measure(N)
        assert measure(ONE).key() == (0, 0, 0)
        assert measure(ONE).height == 0

    def test_sc_size(self):
        assert sc_size(D(D(D11, D11), D(D11, ONE))) == 9

    def test_compacted_size_does_not_bound_sc_size(self):
        d = D(left_chain(4), right_chain(4))
        e = left_chain(7)
        assert (c_size(d), sc_size(d)) == (8, 27)
        assert (c_size(e), sc_size(e)) == (7, 28)

    def test_subeq_and_sub(self):
        assert subeq(SHARED) == {D11, D1D11, D(D1D11, D1D11), SHARED}
        assert sub(ONE) == frozenset()
        assert sub(D11) == frozenset()

    def test_prime(self):
        assert is_prime(D1D11)
        assert not is_prime(SHARED)

    def test_successive_heights(self):
        assert successive_heights(left_chain(3)) == (3, 1)
        assert successive_heights(right_chain(4)) == (1, 4)
        assert successive_heights(ONE) == (0, 0)


class TestCompactionOrdering:
    """Test case: d >=c e iff Sub(d) contains Sub(e)."""

    def test_strict(self):
        assert c_gt(D(D(D11, ONE), ONE), D1D11)

    def test_primitive_is_above_d11(self):
        assert c_geq(ONE, D11)

    def test_reflexive(self):
        assert c_geq(SHARED, SHARED)
        assert not c_gt(SHARED, SHARED)

    def test_smaller_set_sizes(self):
        assert len(c_smaller_set(D11)) == 2
        assert len(c_smaller_set(SHARED)) == 17

    def test_smaller_set_of_primitive(self):
        with pytest.raises(NotCompound):
            c_smaller_set(ONE)

    def test_smaller_set_matches_brute_force(self):
        enumerator = LevelEnumerator("csize")
        small = [d for n in range(5) for d in enumerator.level(n)]
        for d in enumerator.level(3) + enumerator.level(4)[::10]:
            brute = {e for e in small if c_geq(d, e)}
            assert set(c_smaller_set(d)) == brute, d

    @pytest.mark.regression
    def test_smaller_set_closed_form(self, rng):
        for i in range(1000):
            labels = ("1",) if i % 2 else ("1", "2", "3")
            d = random_dterm(rng, rng.randrange(1, 7), labels)
            assert c_size(d) <= 6
            k = len(prims(d))
            assert len(c_smaller_set(d)) == (c_size(d) - 1 + k) ** 2 + k, d

    def test_subterms_are_c_smaller(self, rng):
        for _ in range(40):
            d = random_dterm(rng, rng.randrange(1, 12))
            for e in list(subeq(d)) + leaves_in_order(d):
                assert c_geq(d, e)
                if e is not d and d is not D11:
                    assert c_gt(d, e)

    def test_ordering_bounds_compacted_size(self, rng):
        for _ in range(40):
            d = random_dterm(rng, rng.randrange(1, 10))
            e = random_dterm(rng, rng.randrange(0, 6))
            if c_gt(d, e):
                assert c_size(d) > c_size(e)
            elif c_geq(d, e):
                assert c_size(d) >= c_size(e)


class TestReplaceAll:
    """Test case: replacing every occurrence of a subterm."""

    def test_replacement_may_recreate_the_subterm(self):
        e = right_chain(3)
        d = D(D(e, ONE), D(e, ONE))
        reduced = replace_all(d, D1D11, D11)
        assert reduced is D(D(D1D11, ONE), D(D1D11, ONE))
        assert (c_size(d), c_size(reduced)) == (5, 4)

    def test_single_occurrence_grows(self):
        e = right_chain(3)
        d = D(D(e, ONE), D(e, ONE))
        partial = D(D(D1D11, ONE), D(e, ONE))
        assert c_size(partial) == 6 > c_size(d)

    def test_keeps_compacted_size_but_lowers_sc_size(self):
        d = D(D1D11, right_chain(3))
        reduced = replace_all(d, right_chain(3), D(D11, ONE))
        assert reduced is D(D1D11, D(D11, ONE))
        assert (c_size(d), c_size(reduced)) == (4, 4)
        assert (sc_size(d), sc_size(reduced)) == (10, 9)


@pytest.mark.smoke
class TestCompact:
    """Test case: minimal DAGs with fresh numeral labels."""

    def test_shared_term(self):
        delta = compact([("4", SHARED)], first_label=2)
        two, three = prim("2"), prim("3")
        assert delta.bindings == {"2": D11, "3": D(ONE, two), "4": D(two, D(three, three))}
        assert delta.roots == ["4"]
        assert delta.linearization() == ["2", "3", "4"]
        assert delta.inner_nodes == c_size(SHARED)
        assert delta.expand("4") is SHARED

    def test_fresh_labels_follow_largest_numeral(self):
        delta = compact([("4", SHARED)])
        assert sorted(delta.bindings) == ["4", "5", "6"]

    def test_primitive_root_is_alias(self):
        delta = compact([("goal", ONE)])
        assert delta.bindings == {}
        assert delta.aliases == {"goal": "1"}
        assert delta.expand("goal") is ONE

    def test_second_root_label_is_alias(self):
        delta = compact([("a", SHARED), ("b", SHARED)])
        assert delta.aliases == {"b": "a"}
        assert delta.roots == ["a", "b"]
        assert delta.expand("b") is SHARED
        assert delta.primitive_labels() == {"1"}
        assert dag_stats(delta).occurrences["a"] == 2

    def test_unlabelled_root_takes_a_later_label(self):
        delta = compact([(None, D11), ("r", D11)])
        assert delta.bindings == {"r": D11}
        assert delta.aliases == {}

    def test_round_trip(self, rng):
        for _ in range(30):
            d = random_dterm(rng, rng.randrange(1, 15))
            delta = compact([(None, d)])
            assert delta.expand(delta.roots[0]) is d
            assert delta.inner_nodes == c_size(d)
            bodies = [delta.expand(label) for label in delta.bindings]
            assert len(set(bodies)) == len(bodies)

    def test_label_all_keeps_inner_nodes(self):
        minimal = compact([("4", SHARED)], first_label=2)
        full = compact([("4", SHARED)], label_all=True, first_label=2)
        assert len(full) == len(minimal) + 1
        assert dag_stats(full).inner_nodes == dag_stats(minimal).inner_nodes == 4

    def test_unknown_label(self):
        with pytest.raises(UnknownLabel):
            compact([("4", SHARED)]).expand("9")

    def test_cycle(self):
        with pytest.raises(CyclicLabels):
            CompactedDTerm({"2": D(prim("3"), ONE), "3": D(prim("2"), ONE)})

    def test_dag_stats_of_single_step(self):
        stats = dag_stats(compact([("r", D11)]))
        assert stats.inner_nodes == 1
        assert stats.incoming["r"] == 0
        assert stats.occurrences == {"r": 1, "1": 2}
        assert stats.leaves == 2


@pytest.mark.corpus
class TestCorpusSizes:
    """Test case: sizes of the shipped proofs."""

    @pytest.mark.parametrize("fixture, root, sizes", [
        ("mer_corpus", "17", (31, 491, 29)),
        ("mer_corpus", "18", (26, 159, 25)),
        ("mer_corpus", "19", (10, 19, 10)),
        ("luk_corpus", "29", (32, 435, 29)),
        ("d29_corpus", "7", (22, 64, 22)),
        ("d29_corpus", "8", (18, 21, 16)),
        ("d29_corpus", "9", (6, 7, 6)),
    ])
    def test_root_sizes(self, request, fixture, root, sizes):
        corpus = request.getfixturevalue(fixture)
        report = measure(corpus.delta.expand(root))
        assert (report.c_size, report.t_size, report.height) == sizes

    def test_mer_roots(self, mer_corpus):
        assert mer_corpus.delta.roots == ["17", "18", "19"]

    @pytest.mark.parametrize("fixture, overall_c, overall_t, ones, ns", [
        ("mer_corpus", 33, 669, 554, 118),
        ("luk_corpus", 34, 585, 481, 107),
    ])
    def test_overall_sizes(self, request, fixture, overall_c, overall_t, ones, ns):
        delta = request.getfixturevalue(fixture).delta
        trees = list(delta.expanded_roots().values())
        assert c_size_of(trees) == overall_c
        assert sum(t.size for t in trees) == overall_t
        stats = dag_stats(delta)
        assert stats.occurrences["1"] == ones
        assert stats.n_leaves == ns
        assert stats.leaves == overall_t + len(trees)

    def test_roots_have_no_incoming_edges(self, mer_corpus):
        stats = dag_stats(mer_corpus.delta)
        assert all(stats.incoming[root] == 0 for root in mer_corpus.delta.roots)


class TestLevels:
    """Test case: PrimeLevel and PSP levels in the single-axiom setting."""

    def test_psp_base(self):
        assert psp_level(0) == [ONE]
        assert psp_level(1) == [D11]

    def test_psp_level_two(self):
        assert set(psp_level(2)) == {D(D11, ONE), D(D11, D11), D1D11}

    @pytest.mark.parametrize("n, expected", [(3, 15), (4, 105), (6, 10395)])
    def test_psp_sizes(self, n, expected):
        assert len(psp_level(n)) == expected

    @pytest.mark.parametrize("n, expected", [(3, 4), (9, 256)])
    def test_prime_sizes(self, n, expected):
        assert len(prime_level(n)) == expected
        assert all(is_prime(d) for d in prime_level(n))

    def test_psp_levels_have_matching_compacted_size(self):
        seen = set()
        for n in range(5):
            level = set(psp_level(n))
            assert all(c_size(d) == n for d in level)
            assert not level & seen
            seen |= level

    def test_psp_is_a_strict_subset_from_four_on(self):
        enumerator = LevelEnumerator("csize")
        assert len(psp_level(3)) == len(enumerator.level(3))
        assert len(psp_level(4)) < len(enumerator.level(4))

    def test_membership_agrees_with_levels(self):
        members = set(psp_level(4))
        for d in LevelEnumerator("csize").level(4):
            assert in_psp(d) == (d in members), d

    def test_psp_successor_contains_its_parent(self):
        for d in psp_level(3):
            major, minor = d.args
            assert contains(major, minor) or strictly_contains(minor, major)

    def test_partners_down_to_a_depth(self):
        x2 = D(D11, ONE)
        x1 = D(x2, ONE)
        d = D(x1, ONE)
        assert psp_parts(d, [ONE], 0) == [d, ONE]
        assert psp_parts(d, [ONE], 1) == [d, x1, ONE]
        assert psp_parts(d, [ONE], 2) == [d, x1, x2, ONE]
        assert psp_parts(d, [ONE]) == [d, x1, x2, D11, ONE]

    def test_partners_include_every_axiom(self):
        two = prim("2")
        assert psp_parts(D11, [ONE, two], 1) == [D11, ONE, two]

    def test_successors_at_depth_zero(self):
        assert psp_successors(D11, [ONE], 0) == [D(D11, D11), D(D11, ONE), D(ONE, D11)]

    def test_unknown_measure(self):
        with pytest.raises(ValueError):
            LevelEnumerator("width")

    def test_multi_axiom_level_one(self):
        level = LevelEnumerator("psp", ("1", "2")).level(1)
        two = prim("2")
        assert set(level) >= {D11, D(ONE, two), D(two, ONE)}


class TestCount:
    """Test case: numbers of distinct D-terms per size."""

    def test_tree_size(self):
        assert [count_dterms("tsize", n) for n in range(7)] == [1, 1, 2, 5, 14, 42, 132]

    def test_height(self):
        assert [count_dterms("height", n) for n in range(4)] == [1, 1, 3, 21]
        assert count_dterms("height", 4) == 651
        assert count_dterms("height", 5) == 457653

    def test_compacted_size(self):
        assert [count_dterms("csize", n) for n in range(6)] == [1, 1, 3, 15, 111, 1119]

    @pytest.mark.slow
    def test_compacted_size_six(self):
        assert count_dterms("csize", 6) == 14487

    def test_prime(self):
        assert [count_dterms("prime", n) for n in range(1, 8)] == [1, 2, 4, 8, 16, 32, 64]

    def test_psp(self):
        assert [count_dterms("psp", n) for n in range(7)] == [1, 1, 3, 15, 105, 945, 10395]

    def test_limit(self):
        with pytest.raises(ResourceLimit):
            count_dterms("csize", 7)

    def test_counts_match_enumeration(self):
        enumerator = LevelEnumerator("tsize")
        assert [len(enumerator.level(n)) for n in range(6)] == [count_dterms("tsize", n) for n in range(6)]


def test_parsed_and_built_terms_are_identical():
    """Test case: D-notation reading shares nodes with constructed terms."""
    assert parse_dnotation("DD11DD1D11D1D11") is SHARED

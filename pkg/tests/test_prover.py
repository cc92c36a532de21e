"""
Test cases for lemma enumeration and proof search.
"""
import pytest

from types import SimpleNamespace

from core.dterms import D, c_size, in_psp, prim
from core.errors import Exhausted, ProofCheckFailed, ResourceLimit
from core.prover import EnumPolicy, LemmaSearch, enumerate_lemmas, extract_compacted, level_summary, prove
from core.semantics import Atom, AxiomAssignment, Problem, check_proof, skolemize
from core.terms import subsumes
from notations.polish_notation import parse_polish

ONE = prim("1")
D11 = D(ONE, ONE)


def search_policy(max_level: int = 12, **overrides) -> EnumPolicy:
    settings = dict(kind="psp", max_level=max_level, max_ft=17, max_fh=7, psp_depth=None, cache_cap=500,
                    time_limit=None, jobs=1)
    settings.update(overrides)
    return EnumPolicy(**settings)


def goal(polish: str) -> Atom:
    return Atom(skolemize(parse_polish(polish)))


class TestPolicy:
    """Test case: enumeration policies and formula-size thresholds."""

    @pytest.mark.parametrize("overrides", [
        {"kind": "bogus"}, {"dedup": "equality"}, {"max_level": -1}, {"max_ft": 0}, {"cache_cap": 0},
        {"psp_depth": -1},
    ])
    def test_rejects_bad_values(self, overrides):
        with pytest.raises(ValueError):
            search_policy(**overrides)

    def test_admits(self):
        syll = parse_polish("CCpqCCqrCpr")
        assert search_policy(max_ft=5).admits(syll)
        assert not search_policy(max_ft=4).admits(syll)
        assert not search_policy(max_fh=2).admits(syll)
        assert not search_policy(max_fv=2).admits(syll)
        assert search_policy(max_ft=None, max_fh=None).admits(syll)

    def test_defaults(self):
        policy = EnumPolicy()
        assert (policy.max_level, policy.psp_depth, policy.cache_cap) == (30, 2, None)


class TestEnumerateLemmas:
    """Test case: goal-free generation of lemmas."""

    def test_first_levels(self, luk):
        entries = list(enumerate_lemmas(luk, search_policy(1)))
        assert [e.dterm for e in entries] == [ONE, D11]
        assert [e.level for e in entries] == [0, 1]
        assert entries[1].mgt_arg is luk.mgt_argument(D11)

    def test_arguments_match_the_assignment(self, luk):
        fresh = AxiomAssignment(luk.terms)
        for entry in enumerate_lemmas(luk, search_policy(4, jobs=4)):
            assert entry.mgt_arg is fresh.mgt_argument(entry.dterm)

    def test_uncapped_levels_keep_discovery_order(self, luk):
        search = LemmaSearch(luk, search_policy(4, psp_depth=2, cache_cap=None))
        entries = list(search.run())
        for n in range(1, 5):
            assert search.levels[n] == [e.dterm for e in entries if e.level == n]

    def test_capped_levels_keep_the_smallest_formulas(self, luk):
        search = LemmaSearch(luk, search_policy(4, cache_cap=5))
        arguments = {e.dterm: e.mgt_arg for e in search.run()}
        for level in search.levels[1:]:
            assert len(level) <= 5
            sizes = [(arguments[d].size, arguments[d].height) for d in level]
            assert sizes == sorted(sizes)

    def test_partner_depth_limits_the_level(self, luk):
        full = LemmaSearch(luk, search_policy(4, cache_cap=None))
        shallow = LemmaSearch(luk, search_policy(4, psp_depth=0, cache_cap=None))
        list(full.run())
        list(shallow.run())
        assert shallow.levels[2] == full.levels[2]
        assert shallow.stats[3].generated < full.stats[3].generated
        assert all(in_psp(d) for d in shallow.levels[3])

    def test_undefined_mgts_are_dropped(self, named_axioms):
        entries = list(enumerate_lemmas(named_axioms["Peirce"], search_policy(2)))
        assert [e.dterm for e in entries] == [ONE]

    @pytest.mark.parametrize("kind", ["psp", "prime", "tsize", "height", "csize"])
    def test_every_policy_yields_distinct_theorems(self, luk, kind):
        entries = list(enumerate_lemmas(luk, search_policy(3, kind=kind)))
        keys = [e.mgt_arg for e in entries]
        assert len(entries) > 2
        assert len(set(keys)) == len(keys)

    def test_psp_lemmas_are_in_psp(self, luk):
        for entry in enumerate_lemmas(luk, search_policy(4)):
            assert in_psp(entry.dterm)
            assert c_size(entry.dterm) == entry.level

    def test_subsumption_dedup(self, luk):
        keys = [e.mgt_arg for e in enumerate_lemmas(luk, search_policy(3, dedup="subsumption"))]
        for j, later in enumerate(keys):
            assert not any(subsumes(earlier, later) for earlier in keys[:j])

    def test_time_limit(self, luk):
        with pytest.raises(ResourceLimit):
            list(enumerate_lemmas(luk, search_policy(8, time_limit=1e-9)))


@pytest.mark.smoke
class TestProve:
    """Test case: proofs found by the PSP enumeration."""

    def test_syll_simp_problem(self, problems):
        problem = problems["syll_simp_kkkkk"]
        result = prove(problem, search_policy(8))
        assert result.level == 4
        assert (result.sizes.t_size, result.sizes.c_size) == (7, 4)
        assert subsumes(problem.axioms.mgt_argument(result.dterm), problem.goal.argument)
        assert result.delta.expand("syll_simp_kkkkk") is result.dterm

    def test_simp_from_lukasiewicz(self, problems):
        result = prove(problems["luk_simp"], search_policy())
        assert result.level == 6
        assert (result.sizes.t_size, result.sizes.c_size, result.sizes.height) == (19, 6, 6)
        verdict = check_proof(result.delta, problems["luk_simp"])["luk_simp"]
        assert verdict.proven

    def test_identity_from_lukasiewicz(self, luk):
        result = prove(Problem(luk, goal("Cpp")), search_policy())
        assert result.level == 6
        assert result.sizes.t_size == 31
        assert result.delta.roots == ["goal"]
        assert len(result.stats) == 7

    def test_axiom_proves_its_instance(self, luk):
        result = prove(Problem(luk, goal("CCCpqrCCrpCsp")), search_policy())
        assert result.dterm is ONE
        assert result.level == 0

    def test_exhausted(self, lcl038):
        with pytest.raises(Exhausted) as info:
            prove(lcl038, search_policy(2))
        assert [s.level for s in info.value.stats] == [0, 1, 2]
        assert "level 2" in level_summary(info.value.stats)

    def test_needs_goal(self, luk):
        with pytest.raises(ValueError):
            prove(Problem(luk), search_policy(2))

    @pytest.mark.slow
    def test_peirce_from_lukasiewicz(self, problems):
        result = prove(problems["luk_peirce"], search_policy())
        assert result.level == 11
        assert result.sizes.t_size == 61

    def test_default_partner_depth(self, problems):
        result = prove(problems["syll_simp_kkkkk"], search_policy(8, psp_depth=2, cache_cap=None))
        assert result.level == 4
        assert (result.sizes.t_size, result.sizes.c_size) == (7, 4)

    def test_check_failure_raises(self, problems, monkeypatch):
        refuted = {"syll_simp_kkkkk": SimpleNamespace(proven=False, sizes=None)}
        monkeypatch.setattr("core.prover.check_proof", lambda delta, problem: refuted)
        with pytest.raises(ProofCheckFailed):
            prove(problems["syll_simp_kkkkk"], search_policy(8))

    @pytest.mark.slow
    def test_syll_from_lukasiewicz(self, lcl038):
        """Max FT 17, FH 7, partners down to depth 2."""
        result = prove(lcl038, search_policy(30, psp_depth=2, cache_cap=None))
        assert result.level == 24
        assert (result.sizes.c_size, result.sizes.t_size, result.sizes.height) == (24, 816, 24)
        assert check_proof(result.delta, lcl038)["lcl038-1"].proven


class TestExtract:

    def test_shared_subproof_gets_a_label(self):
        delta = extract_compacted(D(D11, D11), "thm")
        assert delta.bindings == {"2": D11, "thm": D(prim("2"), prim("2"))}

    def test_axiom_proof_is_an_alias(self):
        delta = extract_compacted(ONE)
        assert delta.aliases == {"goal": "1"}

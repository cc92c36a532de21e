"""
Test cases for hash-consed terms, substitutions and unification.
"""
import pytest

from core.errors import NotUnifiable, PositionOutOfRange
from core.terms import (
    Compound, Substitution, Variable, apply, canonical, compose, imp, positions, replace_at, subsumes,
    subterm_at, unify, variables, variant,
)
from notations.polish_notation import parse_polish


def random_formula(rng, depth: int, names: str = "pqrs"):
    if depth == 0 or rng.random() < 0.3:
        return Variable(rng.choice(names))
    return imp(random_formula(rng, depth - 1, names), random_formula(rng, depth - 1, names))


def random_substitution(rng, names: str = "pqrs") -> Substitution:
    return Substitution({Variable(v): random_formula(rng, 2, names) for v in rng.sample(names, 2)})


@pytest.mark.smoke
class TestSharing:
    """Test case: equal terms are the same object."""

    def test_rebuilt_term_is_identical(self):
        assert parse_polish("CCpqCCqrCpr") is imp(imp(Variable("p"), Variable("q")),
                                                   imp(imp(Variable("q"), Variable("r")),
                                                       imp(Variable("p"), Variable("r"))))

    def test_size_and_height(self):
        syll = parse_polish("CCpqCCqrCpr")
        assert syll.size == 5
        assert syll.height == 3
        assert not syll.ground

    def test_variables_in_first_occurrence_order(self):
        names = [v.name for v in variables(parse_polish("CCrpCqr"))]
        assert names == ["r", "p", "q"]

    def test_repr_is_first_order(self):
        assert repr(parse_polish("CpCqp")) == "i(p,i(q,p))"


@pytest.mark.smoke
class TestUnify:
    """Test case: most general unifiers of term pair sets."""

    def test_trivial_pair_gives_identity(self):
        x = Variable("x")
        assert len(unify([(x, x)])) == 0

    def test_occurs_check(self):
        x, y = Variable("x"), Variable("y")
        with pytest.raises(NotUnifiable):
            unify([(x, imp(x, y))])

    def test_clash(self):
        with pytest.raises(NotUnifiable):
            unify([(Compound("f", [Variable("x")]), Compound("g", [Variable("x")]))])

    def test_unifier_solves_all_pairs(self):
        pairs = [(parse_polish("Cpq"), parse_polish("CqCrr")), (parse_polish("Cst"), parse_polish("Cqp"))]
        sigma = unify(pairs)
        for s, t in pairs:
            assert sigma.apply(s) is sigma.apply(t)

    def test_unifier_is_idempotent(self, rng):
        for _ in range(50):
            s, t = random_formula(rng, 4), random_formula(rng, 4, "stuv")
            try:
                sigma = unify([(s, t)])
            except NotUnifiable:
                continue
            assert sigma.is_idempotent()
            once = apply(s, sigma)
            assert apply(once, sigma) is once


class TestSubstitution:
    """Test case: application and composition."""

    def test_apply(self):
        p, q = Variable("p"), Variable("q")
        assert apply(imp(p, q), Substitution({p: q})) is imp(q, q)

    def test_apply_empty_is_identity(self):
        t = parse_polish("CCpqCCqrCpr")
        assert apply(t, Substitution.empty()) is t

    def test_identity_bindings_are_dropped(self):
        p = Variable("p")
        assert len(Substitution({p: p})) == 0

    def test_compose_with_empty(self):
        theta = Substitution.singleton(Variable("p"), parse_polish("Cqq"))
        assert dict(compose(Substitution.empty(), theta)) == dict(theta)

    def test_compose_chains_bindings(self):
        x, y, c = Variable("x"), Variable("y"), Variable("c")
        composed = compose(Substitution({x: y}), Substitution({y: c}))
        assert dict(composed) == {x: c, y: c}

    def test_composition_law(self, rng):
        for _ in range(50):
            sigma, theta = random_substitution(rng), random_substitution(rng)
            t = random_formula(rng, 4)
            assert apply(t, compose(sigma, theta)) is apply(apply(t, sigma), theta)


class TestSubsumption:
    """Test case: instance and variant checks."""

    def test_ipt_is_instance_of_mgt(self):
        assert subsumes(parse_polish("CpCqCrq"), parse_polish("CCpCqpCrCsr"))

    def test_reflexive(self):
        t = parse_polish("CCCpqrCCrpCsp")
        assert subsumes(t, t)

    def test_shared_variable_blocks_match(self):
        assert not subsumes(parse_polish("Cpp"), parse_polish("Cpq"))
        assert subsumes(parse_polish("Cpq"), parse_polish("Cpp"))

    def test_variant_by_renaming(self):
        assert variant(parse_polish("Cpq"), parse_polish("Cqp"))
        assert not variant(parse_polish("Cpp"), parse_polish("Cpq"))

    def test_variant_of_canonical_form(self, rng):
        for _ in range(30):
            t = random_formula(rng, 5, "xyzw")
            assert variant(t, canonical(t))

    def test_canonical_names_overflow(self):
        term = parse_polish("CaCbCcCdCeCfCgChCjj")
        assert repr(canonical(term)).endswith("i(w,i(v1,v1)))))))))")


class TestPositions:
    """Test case: positions of f(x, g(y))."""

    @pytest.fixture
    def fxgy(self):
        return Compound("f", [Variable("x"), Compound("g", [Variable("y")])])

    def test_positions(self, fxgy):
        assert set(positions(fxgy)) == {(), (1,), (2,), (2, 1)}

    def test_subterm_at(self, fxgy):
        assert subterm_at(fxgy, (2, 1)) is Variable("y")

    def test_subterm_out_of_range(self, fxgy):
        with pytest.raises(PositionOutOfRange):
            subterm_at(fxgy, (1, 1))

    def test_replace_at_root(self, fxgy):
        u = Variable("u")
        assert replace_at(fxgy, (), u) is u

    def test_replace_inner(self, fxgy):
        replaced = replace_at(fxgy, (2, 1), Variable("z"))
        assert replaced is Compound("f", [Variable("x"), Compound("g", [Variable("z")])])

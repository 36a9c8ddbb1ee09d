import random

import pytest

from dlsequent.calculus import BUILTIN_DDRS, assemble_calculus
from dlsequent.countermodel import (
    ExtractionError,
    Interpretation,
    OracleLimit,
    UnmappedIndividual,
    extract_model,
    find_countermodel,
    find_countermodel_reversed,
    rra_via_definition,
    satisfies,
    satisfies_sequent,
)
from dlsequent.parser import parse_formula, parse_sequent
from dlsequent.prover import SATURATED, Budget, initial_branch, prove
from dlsequent.syntax import ALC, Rra, profile

EQ = profile("equality")
FULLISH = profile("equality", "inequality", "negated_roles")


def saturate(text, prof, steps=2000):
    calc = assemble_calculus(prof)
    out = prove(parse_sequent(text, prof), calc, Budget(steps=steps))
    assert out.verdict == SATURATED, text
    return out.branch


class TestExtraction:
    def test_smallest_extraction(self):
        b = saturate("|- a : C", EQ)
        theta = {str(f) for f in b.theta}
        omega = {str(f) for f in b.omega}
        assert {"a : top", "a = a"} <= theta
        assert {"a : C", "a : bot"} <= omega
        m = extract_model(b)
        assert m.domain == ("a",)
        assert m.concept_ext.get("C", frozenset()) == frozenset()
        assert not satisfies_sequent(m, parse_sequent("|- a : C", EQ))

    def test_gci_extraction(self):
        b = saturate("|- C sub D", ALC)
        m = extract_model(b)
        assert m.domain == ("_e1",)
        assert m.concept_ext["C"] == {"_e1"}
        assert m.concept_ext.get("D", frozenset()) == frozenset()
        assert not satisfies_sequent(m, parse_sequent("|- C sub D", ALC))

    def test_quotient_collapses_equated_individuals(self):
        b = saturate("a = b, a : C |- b : D", EQ)
        m = extract_model(b)
        assert m.domain == ("a",)
        assert m.individual_map == {"a": "a", "b": "a"}
        assert m.concept_ext["C"] == {"a"}
        assert not satisfies_sequent(m, parse_sequent("a = b, a : C |- b : D", EQ))

    def test_rejects_unsaturated_branch(self):
        b = initial_branch(parse_sequent("a : C |-", ALC))
        with pytest.raises(ExtractionError):
            extract_model(b)

    def test_empty_sequent_gets_one_element_domain(self):
        # the procedure seeds a first individual, so the domain is a
        # single class with every named extension empty
        b = saturate("|-", ALC)
        m = extract_model(b)
        assert len(m.domain) == 1
        assert all(not v for v in m.concept_ext.values())
        assert all(not v for v in m.role_ext.values())

    def test_individual_free_valid_sequent_closes(self):
        # needs the seeded individual: top sub bot is unsatisfiable
        calc = assemble_calculus(ALC)
        out = prove(parse_sequent("top sub bot |-", ALC), calc)
        assert out.verdict == "proved"

    def test_theta_satisfied_omega_falsified(self):
        # extraction faithfulness, instance by instance
        for text, prof in (("|- C sub D", ALC),
                           ("a : (C or D) |- a : (C and D)", ALC),
                           ("r(a,b) |- a : all r C", ALC),
                           ("a != b |- a : C", FULLISH)):
            b = saturate(text, prof)
            m = extract_model(b)
            for f in b.theta:
                assert satisfies(m, f).holds, f"theta {f} in {text}"
            for f in b.omega:
                assert not satisfies(m, f).holds, f"omega {f} in {text}"


class TestSatisfies:
    def interp(self):
        return Interpretation(
            domain=(0, 1, 2),
            concept_ext={"C": frozenset({0})},
            role_ext={"r": frozenset({(0, 1), (1, 2)})},
            individual_map={"a": 0, "b": 1, "c": 2},
        )

    def test_concept_assertion(self):
        m = self.interp()
        assert satisfies(m, parse_formula("a : C", ALC)).holds
        assert not satisfies(m, parse_formula("b : C", ALC)).holds

    def test_trans_fails_with_witness(self):
        m = self.interp()
        rep = satisfies(m, Rra("Trans", ("r",)))
        assert not rep.holds
        assert rep.witness == (0, 2)

    def test_counting(self):
        m = self.interp()
        p = profile("unqualified_counting")
        assert satisfies(m, parse_formula("a : atmost 1 r top", p)).holds
        assert not satisfies(m, parse_formula("a : atleast 2 r top", p)).holds

    def test_inverse_and_universal_and_chain(self):
        m = self.interp()
        p = profile("inverses", "universal_role", "compose")
        assert satisfies(m, parse_formula("inv r(b,a)", p)).holds
        assert satisfies(m, parse_formula("U(c,a)", p)).holds
        assert satisfies(m, parse_formula("r;r(a,c)", p)).holds
        assert not satisfies(m, parse_formula("r;r(a,b)", p)).holds

    def test_existential_witness(self):
        m = self.interp()
        rep = satisfies(m, parse_formula("a : some r top", ALC))
        assert rep.holds and rep.witness == 1

    def test_equality_as_element_identity(self):
        m = Interpretation((0,), {}, {}, {"a": 0, "b": 0})
        assert satisfies(m, parse_formula("a = b", EQ)).holds
        assert not satisfies(m, parse_formula("a != b",
                                              profile("inequality"))).holds

    def test_unmapped_individual(self):
        m = self.interp()
        with pytest.raises(UnmappedIndividual):
            satisfies(m, parse_formula("z : C", ALC))

    def test_unknown_rra(self):
        from dlsequent.syntax import UnknownRra

        m = self.interp()
        with pytest.raises(UnknownRra):
            satisfies(m, Rra("Sym", ("r",)))

    def test_builtins_agree_with_their_definitions(self):
        rng = random.Random(7)
        for _ in range(60):
            size = rng.randint(1, 3)
            dom = tuple(range(size))
            pairs = [(x, y) for x in dom for y in dom]
            m = Interpretation(
                dom, {},
                {"r": frozenset(p for p in pairs if rng.random() < 0.4),
                 "s": frozenset(p for p in pairs if rng.random() < 0.4)},
                {})
            for name, d in BUILTIN_DDRS.items():
                f = Rra(name, ("r", "s") if name == "Disj" else ("r",))
                direct = satisfies(m, f).holds
                via_def = rra_via_definition(m, f, d)[0]
                assert direct == via_def, (name, m.role_ext)


class TestSatisfiesSequent:
    def test_shared_formula_always_true(self):
        m = Interpretation((0,), {}, {}, {"a": 0})
        assert satisfies_sequent(m, parse_sequent("a : C |- a : C", ALC))

    def test_extraction_falsifies(self):
        b = saturate("|- a : C", EQ)
        m = extract_model(b)
        assert not satisfies_sequent(m, parse_sequent("|- a : C", EQ))

    def test_vacuous_antecedent(self):
        m = Interpretation((0,), {"C": frozenset()}, {}, {"a": 0})
        assert satisfies_sequent(m, parse_sequent("a : C |- a : D", ALC))

    def test_antitone_antecedent_monotone_consequent(self):
        m = Interpretation((0,), {"C": frozenset({0})}, {}, {"a": 0})
        weak = parse_sequent("|- a : D", ALC)
        stronger = parse_sequent("a : C |- a : D", ALC)
        wider = parse_sequent("|- a : D, a : C", ALC)
        assert not satisfies_sequent(m, weak)
        # adding a satisfied antecedent formula cannot turn false into true
        assert not satisfies_sequent(m, stronger)
        # adding consequent formulas can only help
        assert satisfies_sequent(m, wider)


class TestOracle:
    def test_gci_countermodel_at_size_one(self):
        m = find_countermodel(parse_sequent("|- C sub D", ALC), 3)
        assert m is not None and len(m.domain) == 1
        assert not satisfies_sequent(m, parse_sequent("|- C sub D", ALC))

    def test_identity_has_none(self):
        assert find_countermodel(parse_sequent("a : C |- a : C", ALC), 3) is None

    def test_transitivity_example_has_none(self):
        p = profile(ddrs=("Trans",))
        s = parse_sequent("Trans(r), r(a,b), r(b,c) |- r(a,c)", p)
        assert find_countermodel(s, 3) is None

    def test_deterministic_first_hit(self):
        s = parse_sequent("|- C sub D", ALC)
        assert find_countermodel(s, 3) == find_countermodel(s, 3)

    def test_vocabulary_limits(self):
        s = parse_sequent("a:C, b:D, c:E |- x : some r (F or G)", ALC)
        with pytest.raises(OracleLimit):
            find_countermodel(s, 2, max_concepts=3)

    def test_agrees_with_reversed_enumeration(self):
        rng = random.Random(11)
        from dlsequent.gen import TermGen

        checked = 0
        for i in range(50):
            prof = (ALC, EQ, profile("self_concept"),
                    profile("unqualified_counting"))[i % 4]
            g = TermGen(rng, prof, concepts=("C",), roles=("r",),
                        individuals=("a", "b"))
            s = g.sequent(max_ante=2, max_cons=1)
            a = find_countermodel(s, 2) is not None
            b = find_countermodel_reversed(s, 2) is not None
            assert a == b, str(s)
            checked += 1
        assert checked == 50

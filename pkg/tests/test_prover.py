import json

import pytest

from dlsequent.calculus import assemble_calculus
from dlsequent.parser import parse_sequent
from dlsequent.prover import (
    BUDGET,
    PROVED,
    SATURATED,
    Budget,
    ProofTree,
    check_proof,
    find_closing,
    prove,
    rule_sequence,
    tree_from_json,
    tree_to_json,
    tree_to_text,
)
from dlsequent.syntax import (
    ALC,
    ConceptName,
    Individual,
    profile,
    show,
)

EQ = profile("equality")
TRANS = profile(ddrs=("Trans",))


@pytest.fixture(scope="module")
def alc_calc():
    return assemble_calculus(ALC)


@pytest.fixture(scope="module")
def eq_calc():
    return assemble_calculus(EQ)


class TestProve:
    def test_identity(self, alc_calc):
        out = prove(parse_sequent("a:C |- a:C", ALC), alc_calc)
        assert out.verdict == PROVED
        assert out.tree.height == 0
        assert out.tree.rule == "id_c"
        assert out.tree.conclusion == parse_sequent("a:C |- a:C", ALC)

    def test_transitivity_axiom_use(self):
        calc = assemble_calculus(TRANS)
        s = parse_sequent("Trans(r), r(a,b), r(b,c) |- r(a,c)", TRANS)
        out = prove(s, calc, Budget(steps=100))
        assert out.verdict == PROVED
        names = rule_sequence(out.tree)
        assert names[0] == "Trans_l" and names[-1] == "id_r"
        assert check_proof(out.tree, calc).valid

    def test_plain_gci_saturates(self, alc_calc):
        out = prove(parse_sequent("|- C sub D", ALC), alc_calc)
        assert out.verdict == SATURATED
        theta = {show(f) for f in out.branch.theta}
        omega = {show(f) for f in out.branch.omega}
        assert "_e1 : C" in theta
        assert "_e1 : D" in omega

    def test_conjunction_subsumption(self, alc_calc):
        out = prove(parse_sequent("|- (C and D) sub C", ALC), alc_calc)
        assert out.verdict == PROVED
        assert check_proof(out.tree, alc_calc).valid

    def test_reflexive_equality_is_initial(self, eq_calc):
        out = prove(parse_sequent("|- a = a", EQ), eq_calc)
        assert out.verdict == PROVED
        assert out.tree.rule == "eq_r" and out.tree.height == 0

    def test_proved_tree_always_checks(self, alc_calc):
        for text in ("a : (C or D) |- a : (D or C)",
                     "a : not not C |- a : C",
                     "C sub D, a : C |- a : D",
                     "a : some r (C and D) |- a : some r C",
                     "a : all r C, r(a,b) |- b : C"):
            out = prove(parse_sequent(text, ALC), alc_calc, Budget(steps=200))
            assert out.verdict == PROVED, text
            assert check_proof(out.tree, alc_calc).valid, text

    def test_budget_exhaustion_on_divergent_loop(self, alc_calc):
        s = parse_sequent("C sub some r C, a : C |-", ALC)
        out = prove(s, alc_calc, Budget(steps=40))
        assert out.verdict == BUDGET
        assert out.tree is not None  # partial tree with open leaves
        assert any(n.rule is None for n in out.tree.nodes())

    def test_determinism(self, alc_calc):
        s = parse_sequent("a : (C or D), a : not C |- a : D", ALC)
        o1 = prove(s, alc_calc)
        o2 = prove(s, alc_calc)
        assert o1.verdict == o2.verdict == PROVED
        assert o1.tree == o2.tree
        assert o1.stats.steps == o2.stats.steps

    def test_profile_violation_in_root(self, alc_calc):
        from dlsequent.parser import ProfileViolation

        s = parse_sequent("a = a |-", EQ)
        with pytest.raises(ProfileViolation):
            prove(s, alc_calc)

    def test_fairness_floor(self, alc_calc):
        # a saturating run schedules every rule at least floor(steps/#rules) times
        s = parse_sequent("a : some r C, a : all r D |- a : all r C", ALC)
        out = prove(s, alc_calc, Budget(steps=500))
        assert out.verdict == SATURATED
        n = len(alc_calc.cyclic_order)
        floor = out.stats.steps // n
        for name in alc_calc.cyclic_order:
            assert out.stats.schedule_counts[name] >= floor

    def test_saturated_branch_closed_under_rules(self, alc_calc):
        from dlsequent.calculus import enumerate_applications

        out = prove(parse_sequent("|- C sub D", ALC), alc_calc)
        b = out.branch
        assert b.saturated
        for idx in range(len(alc_calc.cyclic_order)):
            b2 = b.__class__(**{**b.__dict__, "rule_index": idx})
            assert enumerate_applications(alc_calc, b2) == []
        assert find_closing(alc_calc, b.sequent) is None


class TestCheckProof:
    def test_valid_identity(self, alc_calc):
        out = prove(parse_sequent("a:C |- a:C", ALC), alc_calc)
        assert check_proof(out.tree, alc_calc).valid

    def test_forged_eigenvariable_reported(self, alc_calc):
        # a sub_r inference whose "fresh" individual already occurs below
        b = Individual("b")
        C, D = ConceptName("C"), ConceptName("D")
        concl = parse_sequent("b : C |- C sub D", ALC)
        premise = parse_sequent("b : C, b : C |- b : D", ALC)
        leafish = ProofTree(premise, "id_c")
        forged = ProofTree(concl, "sub_r", (b,), (leafish,))
        rep = check_proof(forged, alc_calc)
        assert not rep.valid
        assert "eigenvariable" in rep.error

    def test_id_r_shape_restriction(self, alc_calc):
        s = parse_sequent("C sub D |- C sub D", ALC)
        rep = check_proof(ProofTree(s, "id_r"), alc_calc)
        assert not rep.valid
        assert "r(a,b) or a = b" in rep.error

    def test_open_leaf_invalid(self, alc_calc):
        s = parse_sequent("a : C |-", ALC)
        rep = check_proof(ProofTree(s, None), alc_calc)
        assert not rep.valid and "open" in rep.error

    def test_unknown_rule(self, alc_calc):
        s = parse_sequent("a:C |- a:C", ALC)
        rep = check_proof(ProofTree(s, "magic"), alc_calc)
        assert not rep.valid and "magic" in rep.error

    def test_wrong_premise_rejected(self, alc_calc):
        concl = parse_sequent("a : (C and D) |- a : C", ALC)
        bad_child = ProofTree(parse_sequent("a : C |- a : C", ALC), "id_c")
        node = ProofTree(concl, "and_l", (), (bad_child,))
        assert not check_proof(node, alc_calc).valid

    def test_reports_path_of_first_offender(self, alc_calc):
        good = prove(parse_sequent("a : (C and D) |- a : C", ALC), alc_calc).tree
        # break a node two levels down
        bad = ProofTree(good.conclusion, good.rule, good.eigens,
                        (ProofTree(good.children[0].conclusion, "magic"),))
        rep = check_proof(bad, alc_calc)
        assert rep.where == "root.0"


class TestCheckerRejectsMutations:
    """The checker must catch every structural corruption of a real proof."""

    def _proofs(self, alc_calc):
        texts = ("a : (C or D), a : not C |- a : D",
                 "|- (C and D) sub C",
                 "a : some r (C and D) |- a : some r D")
        for t in texts:
            out = prove(parse_sequent(t, ALC), alc_calc)
            assert out.verdict == PROVED
            yield out.tree

    def test_dropping_a_child_is_caught(self, alc_calc):
        for tree in self._proofs(alc_calc):
            for i, node in enumerate(tree.nodes()):
                if len(node.children) < 2:
                    continue
                mutated = _replace_node(
                    tree, node,
                    ProofTree(node.conclusion, node.rule, node.eigens,
                              node.children[:-1]))
                assert not check_proof(mutated, alc_calc).valid

    def test_renaming_rules_is_caught(self, alc_calc):
        swap = {"or_l": "and_l", "and_l": "or_l", "and_r": "or_r",
                "ex_l": "all_r", "sub_r": "ex_l", "id_c": "id_r"}
        for tree in self._proofs(alc_calc):
            for node in tree.nodes():
                if node.rule not in swap:
                    continue
                mutated = _replace_node(
                    tree, node,
                    ProofTree(node.conclusion, swap[node.rule], node.eigens,
                              node.children))
                assert not check_proof(mutated, alc_calc).valid

    def test_tampering_with_a_premise_is_caught(self, alc_calc):
        extra = parse_sequent("|- b : E", ALC).if_cons
        for tree in self._proofs(alc_calc):
            for node in tree.nodes():
                if not node.children:
                    continue
                child = node.children[0]
                fat = ProofTree(
                    child.conclusion.__class__(
                        child.conclusion.ef_ante, child.conclusion.if_ante,
                        child.conclusion.if_cons + extra,
                        child.conclusion.ef_cons),
                    child.rule, child.eigens, child.children)
                mutated = _replace_node(
                    tree, node,
                    ProofTree(node.conclusion, node.rule, node.eigens,
                              (fat,) + node.children[1:]))
                assert not check_proof(mutated, alc_calc).valid
                break  # one corrupted node per proof is enough


def _replace_node(tree, target, replacement):
    if tree is target:
        return replacement
    return ProofTree(tree.conclusion, tree.rule, tree.eigens,
                     tuple(_replace_node(c, target, replacement)
                           for c in tree.children))


class TestSerialization:
    def test_text_format_one_line_per_node(self, alc_calc):
        out = prove(parse_sequent("a : (C and D) |- a : C", ALC), alc_calc)
        text = tree_to_text(out.tree)
        assert len(text.splitlines()) == len(list(out.tree.nodes()))
        assert text.splitlines()[0].startswith(out.tree.rule + ":")

    def test_json_round_trip(self, alc_calc):
        out = prove(parse_sequent("|- (C and D) sub C", ALC), alc_calc)
        blob = tree_to_json(out.tree)
        back = tree_from_json(blob, ALC)
        assert back == out.tree
        assert check_proof(back, alc_calc).valid

    def test_json_shape(self, alc_calc):
        out = prove(parse_sequent("a:C |- a:C", ALC), alc_calc)
        obj = json.loads(tree_to_json(out.tree))
        assert set(obj) == {"conclusion", "rule", "bindings", "children"}

    def test_rule_sequences_agree_between_renderings(self, alc_calc):
        out = prove(parse_sequent("|- (C and D) sub C", ALC), alc_calc)
        text_rules = [line.strip().split(":")[0]
                      for line in tree_to_text(out.tree).splitlines()]
        json_rules = rule_sequence(tree_from_json(tree_to_json(out.tree), ALC))
        assert text_rules == json_rules

    def test_height_recomputation(self, alc_calc):
        out = prove(parse_sequent("|- (C and D) sub C", ALC), alc_calc)

        def rec(n):
            return 0 if not n.children else 1 + max(rec(c) for c in n.children)

        assert out.tree.height == rec(out.tree)

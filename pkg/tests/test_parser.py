import pytest

from dlsequent.calculus import BUILTIN_DDRS, RoleAtom
from dlsequent.parser import (
    KB,
    ParseError,
    ProfileViolation,
    parse,
    parse_ddr_file,
    parse_formula,
    parse_kb,
    parse_profile,
    parse_sequent,
)
from dlsequent.syntax import (
    ALC,
    ConceptAssertion,
    ConceptName,
    FLAGS,
    Gci,
    Individual,
    Role,
    RoleAssertion,
    Rra,
    Sequent,
    profile,
    show,
)

FULL = profile(*FLAGS, ddrs=("Trans", "Refl", "Irr", "Asy", "Disj", "Funct"))
a, b, c = Individual("a"), Individual("b"), Individual("c")
C = ConceptName("C")


class TestSequents:
    def test_identity_sequent_zones(self):
        s = parse_sequent("a:C |- a:C", ALC)
        assert s == Sequent(if_ante=(ConceptAssertion(a, C),),
                            if_cons=(ConceptAssertion(a, C),))

    def test_trans_sequent_zones(self):
        p = profile(ddrs=("Trans",))
        s = parse_sequent("Trans(r), r(a,b), r(b,c) |- r(a,c)", p)
        assert set(s.ef_ante) == {Rra("Trans", ("r",)),
                                  RoleAssertion(Role("r"), a, b),
                                  RoleAssertion(Role("r"), b, c)}
        assert s.ef_cons == (RoleAssertion(Role("r"), a, c),)
        assert s.if_ante == () and s.if_cons == ()

    def test_empty_sides(self):
        s = parse_sequent("|- a : C", ALC)
        assert s.antecedent() == ()
        s = parse_sequent("a : C |-", ALC)
        assert s.consequent() == ()

    def test_profile_violation_names_flag(self):
        with pytest.raises(ProfileViolation) as e:
            parse_sequent("|- a : some inv r C", profile())
        assert e.value.flag == "inverses"
        assert "inv r" in e.value.construct

    def test_syntax_error_carries_position(self):
        with pytest.raises(ParseError) as e:
            parse_sequent("a : |- C", ALC)
        assert e.value.line == 1 and e.value.col > 1

    def test_trailing_input_rejected(self):
        with pytest.raises(ParseError):
            parse_sequent("a:C |- a:C a:D", ALC)


class TestFormulas:
    @pytest.mark.parametrize("text", [
        "a : (C or D)",
        "a : not (C and not D)",
        "a : some r all s C",
        "a : {b}",
        "a : atmost 2 r C",
        "a : atleast 0 r top",
        "a : self r",
        "a : some inv r C",
        "a : all U top",
        "C sub (D or E)",
        "r(a,b)",
        "inv r(a,b)",
        "U(a,b)",
        "r;s(a,b)",
        "not r(a,b)",
        "r sub s",
        "r;s sub t",
        "Trans(r)",
        "Disj(r,s)",
        "Rel[Funct](r)",
        "a = b",
        "a != b",
    ])
    def test_roundtrip_through_show(self, text):
        f = parse_formula(text, FULL)
        assert parse_formula(show(f), FULL) == f

    def test_builtin_sugar_matches_rel_form(self):
        assert parse_formula("Trans(r)", FULL) == parse_formula("Rel[Trans](r)", FULL)

    def test_builtin_arity_enforced(self):
        with pytest.raises(ParseError):
            parse_formula("Disj(r)", FULL)

    def test_unknown_sugar_suggests_rel(self):
        with pytest.raises(ParseError) as e:
            parse_formula("Sym(r)", FULL)
        assert "Rel[Sym]" in str(e.value)

    def test_case_convention_enforced(self):
        with pytest.raises(ParseError):
            parse_formula("a : c", ALC)  # concepts are uppercase
        with pytest.raises(ParseError):
            parse_formula("R(a,b)", ALC)  # roles are lowercase

    def test_eigen_names_rejected_in_user_input(self):
        with pytest.raises(ParseError):
            parse_sequent("_e1 : C |- _e1 : C", ALC)

    def test_eigen_names_allowed_internally(self):
        s = parse_sequent("_e1 : C |- _e1 : C", ALC, allow_eigen=True)
        subj = s.if_ante[0].subject
        assert subj.origin == "eigen" and subj.index == 1

    def test_counting_ceiling(self):
        with pytest.raises(ProfileViolation):
            parse_formula("a : atmost 9 r C", FULL)
        parse_formula("a : atmost 9 r C", FULL.normalized(), ceiling=9)


class TestProfileGates:
    @pytest.mark.parametrize("text,flag", [
        ("a : {b}", "nominals"),
        ("a : atmost 1 r top", "unqualified_counting"),
        ("a : atmost 1 r C", "qualified_counting"),
        ("a : self r", "self_concept"),
        ("a = b", "equality"),
        ("a != b", "inequality"),
        ("not r(a,b)", "negated_roles"),
        ("r;s(a,b)", "compose"),
        ("r sub s", "rias"),
        ("r;s sub t", "crias"),
        ("U(a,b)", "universal_role"),
        ("Trans(r)", "ddr Trans"),
    ])
    def test_flag_gate(self, text, flag):
        with pytest.raises(ProfileViolation) as e:
            parse_formula(text, ALC)
        assert e.value.flag == flag

    def test_qualified_flag_admits_top(self):
        p = profile("qualified_counting")
        parse_formula("a : atmost 1 r top", p)

    def test_ria_accepted_under_crias(self):
        parse_formula("r sub s", profile("crias"))


class TestKb:
    KB_TEXT = """
    # a tiny inconsistent KB
    tbox: C sub not C
    abox: a : C
    abox: r(a,b)
    """

    def test_parse_and_reduce(self):
        kb = parse_kb(self.KB_TEXT, ALC)
        assert len(kb.tbox) == 1 and len(kb.abox) == 2
        s = kb.sequent()
        assert set(s.ef_ante) == {Gci(C, parse_formula("a : not C", ALC).concept),
                                  RoleAssertion(Role("r"), a, b)}
        assert s.if_ante == (ConceptAssertion(a, C),)
        assert s.consequent() == ()

    def test_tbox_rejects_ifs(self):
        with pytest.raises(ParseError):
            parse_kb("tbox: a : C", ALC)

    def test_abox_rejects_gcis(self):
        with pytest.raises(ParseError):
            parse_kb("abox: C sub D", ALC)

    def test_dispatching_parse(self):
        assert isinstance(parse("a:C |- a:C", ALC), Sequent)
        assert isinstance(parse("tbox: C sub D", ALC), KB)
        assert isinstance(parse("a : C", ALC), ConceptAssertion)


class TestProfileFiles:
    def test_parse(self):
        p = parse_profile("nominals\ninverses\nddr Trans\n# comment\n")
        assert p.has("nominals") and p.has("inverses") and p.has("equality")
        assert "Trans" in p.ddr_names

    def test_unknown_flag(self):
        with pytest.raises(ParseError):
            parse_profile("frobnicate")


class TestDdrFiles:
    def test_funct_definition(self):
        (d,) = parse_ddr_file(
            "def Funct(r): forall a b c . r(a,b) & r(a,c) -> b = c")
        assert d == BUILTIN_DDRS["Funct"]

    def test_empty_sides(self):
        (d,) = parse_ddr_file("def Refl(r): forall a . true -> r(a,a)")
        assert d.antecedent == () and d.consequent == (RoleAtom("r", "a", "a"),)
        (d2,) = parse_ddr_file("def Irr(r): forall a . r(a,a) -> false")
        assert d2.consequent == ()

    def test_multiple_defs_and_comments(self):
        ds = parse_ddr_file(
            "# builtins, restated\n"
            "def Trans(r): forall a b c . r(a,b) & r(b,c) -> r(a,c)\n"
            "def Sym(r): forall a b . r(a,b) -> r(b,a)\n")
        assert [d.rel for d in ds] == ["Trans", "Sym"]

    def test_undeclared_variable_rejected(self):
        from dlsequent.syntax import SyntaxError_

        with pytest.raises(SyntaxError_):
            parse_ddr_file("def Bad(r): forall a . r(a,b) -> false")

    def test_unused_variable_rejected(self):
        from dlsequent.syntax import SyntaxError_

        with pytest.raises(SyntaxError_):
            parse_ddr_file("def Bad(r): forall a b c . r(a,a) -> false")

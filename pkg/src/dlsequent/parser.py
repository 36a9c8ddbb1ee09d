"""Concrete text grammar for formulae, sequents, KB, profile and DDR files.

The grammar (also reproduced in the README):

  concepts   C | top | bot | not P | (P or Q) | (P and Q) | some R P
             | all R P | {a} | atmost n R P | atleast n R P | self R
  roles      r | inv r | U | r;s;...
  EFs        P sub Q | R(a,b) | not r(a,b) | r;s sub t
             | Rel[Name](r1,...,rk) | a = b | a != b
             with sugar Trans(r) Refl(r) Irr(r) Asy(r) Disj(r,s) Funct(r)
  IFs        a : P
  sequent    EF*, IF* |- IF*, EF*      (comma separated, zones inferred)

Concept and relation names start with an uppercase letter; role,
individual and variable names start lowercase.  Names of the form _eN
are reserved for eigenvariables and rejected in user input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .calculus import DescriptiveDefinition, EqAtom, RoleAtom
from .syntax import (
    BUILTIN_RRA_NAMES,
    DEFAULT_COUNTING_CEILING,
    EIGEN_PREFIX,
    AtLeast,
    AtMost,
    Bot,
    Chain,
    Concept,
    ConceptAssertion,
    ConceptName,
    Cria,
    Equality,
    Exists,
    Forall,
    Gci,
    Individual,
    Inequality,
    Inv,
    LanguageProfile,
    NegatedRoleAssertion,
    Nominal,
    Not,
    Or,
    And,
    Role,
    RoleAssertion,
    RoleTerm,
    Rra,
    SelfLoop,
    Sequent,
    Top,
    UNIVERSAL,
    FLAGS,
    Formula,
    is_ef,
    sequent as mk_sequent,
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


class ProfileViolation(ValueError):
    """A construct used outside the active language profile."""

    def __init__(self, construct: str, flag):
        if flag is None:
            super().__init__(f"{construct} is not allowed here")
        else:
            super().__init__(f"{construct} requires the {flag!r} profile flag")
        self.construct = construct
        self.flag = flag


KEYWORDS = {
    "top", "bot", "not", "or", "and", "some", "all", "atmost", "atleast",
    "self", "inv", "U", "sub", "Rel", "true", "false", "def", "forall",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>\|-|!=|->|[(){},:;=&|.\[\]])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "ident" | "sym" | "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str):
    toks = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            toks.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    toks.append(Token("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str, profile: LanguageProfile, *, allow_eigen=False,
                 ceiling=DEFAULT_COUNTING_CEILING):
        self.toks = _tokenize(text)
        self.pos = 0
        self.profile = profile
        self.allow_eigen = allow_eigen
        self.ceiling = ceiling

    # -- token plumbing ---------------------------------------------------
    def peek(self, k=0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}",
                             t.line, t.col)
        return t

    def fail(self, msg: str):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    def at_eof(self) -> bool:
        return self.peek().kind == "eof"

    # -- names ------------------------------------------------------------
    def _ident(self, what: str) -> Token:
        t = self.next()
        if t.kind != "ident":
            raise ParseError(f"expected {what}, found {t.text or 'end of input'!r}",
                             t.line, t.col)
        return t

    def lower_name(self, what: str) -> str:
        t = self._ident(what)
        if t.text in KEYWORDS:
            raise ParseError(f"keyword {t.text!r} cannot be used as {what}", t.line, t.col)
        if not (t.text[0].islower() or t.text[0] == "_"):
            raise ParseError(f"{what} must start with a lowercase letter: {t.text!r}",
                             t.line, t.col)
        return t.text

    def individual(self) -> Individual:
        t = self.peek()
        name = self.lower_name("an individual name")
        if name.startswith("_"):
            m = re.fullmatch(re.escape(EIGEN_PREFIX) + r"(\d+)", name)
            if m and self.allow_eigen:
                return Individual(name, "eigen", int(m.group(1)))
            raise ParseError(f"names starting with '_' are reserved: {name!r}",
                             t.line, t.col)
        return Individual(name)

    def upper_name(self, what: str) -> str:
        t = self._ident(what)
        if t.text in KEYWORDS:
            raise ParseError(f"keyword {t.text!r} cannot be used as {what}", t.line, t.col)
        if not t.text[0].isupper():
            raise ParseError(f"{what} must start with an uppercase letter: {t.text!r}",
                             t.line, t.col)
        return t.text

    # -- roles ------------------------------------------------------------
    def role_name(self) -> str:
        return self.lower_name("a role name")

    def role_term(self, chains=False) -> RoleTerm:
        t = self.peek()
        if t.text == "inv":
            self.next()
            return Inv(self.role_name())
        if t.text == "U":
            self.next()
            return UNIVERSAL
        first = self.role_name()
        if chains and self.peek().text == ";":
            parts = [first]
            while self.peek().text == ";":
                self.next()
                parts.append(self.role_name())
            return Chain(tuple(Role(p) for p in parts))
        return Role(first)

    # -- concepts ----------------------------------------------------------
    def concept(self) -> Concept:
        t = self.peek()
        if t.text == "top":
            self.next()
            return Top()
        if t.text == "bot":
            self.next()
            return Bot()
        if t.text == "not":
            self.next()
            return Not(self.concept())
        if t.text == "(":
            self.next()
            left = self.concept()
            op = self.next()
            if op.text not in ("or", "and"):
                raise ParseError(f"expected 'or' or 'and', found {op.text!r}",
                                 op.line, op.col)
            right = self.concept()
            self.expect(")")
            return Or(left, right) if op.text == "or" else And(left, right)
        if t.text == "some":
            self.next()
            return Exists(self.role_term(), self.concept())
        if t.text == "all":
            self.next()
            return Forall(self.role_term(), self.concept())
        if t.text == "{":
            self.next()
            a = self.individual()
            self.expect("}")
            return Nominal(a)
        if t.text in ("atmost", "atleast"):
            self.next()
            n_tok = self.next()
            if n_tok.kind != "int":
                raise ParseError(f"expected a number, found {n_tok.text!r}",
                                 n_tok.line, n_tok.col)
            n = int(n_tok.text)
            role = self.role_term()
            sub = self.concept()
            cls = AtMost if t.text == "atmost" else AtLeast
            return cls(n, role, sub)
        if t.text == "self":
            self.next()
            return SelfLoop(self.role_term())
        if t.kind == "ident" and t.text[0].isupper():
            return ConceptName(self.upper_name("a concept name"))
        self.fail(f"expected a concept, found {t.text or 'end of input'!r}")

    # -- formulae -----------------------------------------------------------
    def formula(self) -> Formula:
        t = self.peek()

        # negated role assertion vs. a GCI starting with "not"
        if t.text == "not":
            nxt, nxt2 = self.peek(1), self.peek(2)
            if (nxt.kind == "ident" and nxt.text not in KEYWORDS
                    and nxt.text[0].islower() and nxt2.text == "("):
                self.next()
                r = self.role_name()
                self.expect("(")
                a = self.individual()
                self.expect(",")
                b = self.individual()
                self.expect(")")
                return NegatedRoleAssertion(r, a, b)
            return self._gci()

        if t.text == "Rel":
            self.next()
            self.expect("[")
            name = self.upper_name("a relation name")
            self.expect("]")
            return self._rra(name)

        if t.kind == "ident" and t.text[0].isupper() and t.text not in KEYWORDS:
            if self.peek(1).text == "(":
                if t.text in BUILTIN_RRA_NAMES:
                    self.next()
                    return self._rra(t.text)
                raise ParseError(
                    f"unknown relation sugar {t.text!r}; use Rel[{t.text}](...)",
                    t.line, t.col)
            return self._gci()

        if t.text in ("top", "bot", "some", "all", "atmost", "atleast",
                      "self", "(", "{"):
            return self._gci()

        if t.text == "U":
            self.next()
            return self._role_assertion(UNIVERSAL)

        if t.text == "inv":
            self.next()
            return self._role_assertion(Inv(self.role_name()))

        if t.kind == "ident":
            # lowercase: individual or role, disambiguated by what follows
            nxt = self.peek(1)
            if nxt.text == ":":
                a = self.individual()
                self.next()  # ':'
                return ConceptAssertion(a, self.concept())
            if nxt.text == "=":
                a = self.individual()
                self.next()
                b = self.individual()
                return Equality(a, b)
            if nxt.text == "!=":
                a = self.individual()
                self.next()
                b = self.individual()
                return Inequality(a, b)
            if nxt.text == "(":
                r = self.role_name()
                return self._role_assertion(Role(r))
            if nxt.text in (";", "sub"):
                return self._role_inclusion()
        self.fail(f"expected a formula, found {t.text or 'end of input'!r}")

    def _role_assertion(self, role: RoleTerm) -> RoleAssertion:
        self.expect("(")
        a = self.individual()
        self.expect(",")
        b = self.individual()
        self.expect(")")
        return RoleAssertion(role, a, b)

    def _role_inclusion(self) -> Formula:
        names = [self.role_name()]
        while self.peek().text == ";":
            self.next()
            names.append(self.role_name())
        if self.peek().text == "(":
            # a composition assertion r;s(a,b) after all
            return self._role_assertion(Chain(tuple(Role(n) for n in names)))
        self.expect("sub")
        return Cria(tuple(names), self.role_name())

    def _rra(self, name: str) -> Rra:
        self.expect("(")
        roles = [self.role_name()]
        while self.peek().text == ",":
            self.next()
            roles.append(self.role_name())
        self.expect(")")
        arity = _BUILTIN_ARITY.get(name)
        if arity is not None and len(roles) != arity:
            self.fail(f"{name} takes {arity} role argument(s), got {len(roles)}")
        return Rra(name, tuple(roles))

    def _gci(self) -> Gci:
        sub = self.concept()
        self.expect("sub")
        return Gci(sub, self.concept())

    # -- sequents ------------------------------------------------------------
    def formula_list(self, stop: str):
        out = []
        if self.peek().text == stop or (stop == "" and self.at_eof()):
            return out
        out.append(self.formula())
        while self.peek().text == ",":
            self.next()
            out.append(self.formula())
        return out

    def sequent(self) -> Sequent:
        ante = self.formula_list("|-")
        self.expect("|-")
        cons = self.formula_list("")
        if not self.at_eof():
            self.fail(f"trailing input {self.peek().text!r}")
        return mk_sequent(ante, cons)


_BUILTIN_ARITY = {"Trans": 1, "Refl": 1, "Irr": 1, "Asy": 1, "Funct": 1, "Disj": 2}


# ---------------------------------------------------------------------------
# profile validation
# ---------------------------------------------------------------------------


def _check_role(r: RoleTerm, profile: LanguageProfile):
    from .syntax import Univ, show

    if isinstance(r, Inv) and not profile.has("inverses"):
        raise ProfileViolation(show(r), "inverses")
    if isinstance(r, Univ) and not profile.has("universal_role"):
        raise ProfileViolation("the universal role U", "universal_role")
    if isinstance(r, Chain):
        if not profile.has("compose"):
            raise ProfileViolation(show(r), "compose")
        for p in r.parts:
            _check_role(p, profile)


def _check_concept(c: Concept, profile: LanguageProfile, ceiling: int):
    from .syntax import show

    if isinstance(c, Not):
        _check_concept(c.sub, profile, ceiling)
    elif isinstance(c, (Or, And)):
        _check_concept(c.left, profile, ceiling)
        _check_concept(c.right, profile, ceiling)
    elif isinstance(c, (Exists, Forall)):
        _check_role(c.role, profile)
        _check_concept(c.sub, profile, ceiling)
    elif isinstance(c, Nominal):
        if not profile.has("nominals"):
            raise ProfileViolation(show(c), "nominals")
    elif isinstance(c, (AtMost, AtLeast)):
        if c.bound > ceiling:
            raise ProfileViolation(
                f"counting bound {c.bound} exceeds the ceiling {ceiling}", None)
        if isinstance(c.sub, Top):
            if not (profile.has("unqualified_counting")
                    or profile.has("qualified_counting")):
                raise ProfileViolation(show(c), "unqualified_counting")
        elif not profile.has("qualified_counting"):
            raise ProfileViolation(show(c), "qualified_counting")
        _check_role(c.role, profile)
        _check_concept(c.sub, profile, ceiling)
    elif isinstance(c, SelfLoop):
        if not profile.has("self_concept"):
            raise ProfileViolation(show(c), "self_concept")
        _check_role(c.role, profile)


def check_profile(term, profile: LanguageProfile,
                  ceiling=DEFAULT_COUNTING_CEILING):
    """Reject constructs outside the profile; returns the term unchanged."""
    from .syntax import show

    if isinstance(term, Sequent):
        for f in term.ef_ante + term.if_ante + term.if_cons + term.ef_cons:
            check_profile(f, profile, ceiling)
    elif isinstance(term, KB):
        for f in term.tbox + term.abox:
            check_profile(f, profile, ceiling)
    elif isinstance(term, ConceptAssertion):
        _check_concept(term.concept, profile, ceiling)
    elif isinstance(term, Gci):
        _check_concept(term.sub, profile, ceiling)
        _check_concept(term.sup, profile, ceiling)
    elif isinstance(term, RoleAssertion):
        _check_role(term.role, profile)
    elif isinstance(term, NegatedRoleAssertion):
        if not profile.has("negated_roles"):
            raise ProfileViolation(show(term), "negated_roles")
    elif isinstance(term, Cria):
        if len(term.lhs) == 1:
            if not (profile.has("rias") or profile.has("crias")):
                raise ProfileViolation(show(term), "rias")
        elif not profile.has("crias"):
            raise ProfileViolation(show(term), "crias")
    elif isinstance(term, Rra):
        if term.rel not in profile.ddr_names:
            raise ProfileViolation(show(term), f"ddr {term.rel}")
    elif isinstance(term, Equality):
        if not profile.has("equality"):
            raise ProfileViolation(show(term), "equality")
    elif isinstance(term, Inequality):
        if not profile.has("inequality"):
            raise ProfileViolation(show(term), "inequality")
    elif isinstance(term, Concept):
        _check_concept(term, profile, ceiling)
    return term


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def parse_formula(text: str, profile: LanguageProfile, *, allow_eigen=False,
                  ceiling=DEFAULT_COUNTING_CEILING) -> Formula:
    p = _Parser(text, profile, allow_eigen=allow_eigen, ceiling=ceiling)
    f = p.formula()
    if not p.at_eof():
        p.fail(f"trailing input {p.peek().text!r}")
    return check_profile(f, profile, ceiling)


def parse_sequent(text: str, profile: LanguageProfile, *, allow_eigen=False,
                  ceiling=DEFAULT_COUNTING_CEILING) -> Sequent:
    s = _Parser(text, profile, allow_eigen=allow_eigen, ceiling=ceiling).sequent()
    return check_profile(s, profile, ceiling)


def parse_concept(text: str, profile: LanguageProfile,
                  ceiling=DEFAULT_COUNTING_CEILING) -> Concept:
    p = _Parser(text, profile, ceiling=ceiling)
    c = p.concept()
    if not p.at_eof():
        p.fail(f"trailing input {p.peek().text!r}")
    return check_profile(c, profile, ceiling)


@dataclass(frozen=True)
class KB:
    """A knowledge base: TBox EFs plus ABox assertions."""

    tbox: tuple = ()
    abox: tuple = ()

    def sequent(self, cons=()) -> Sequent:
        return mk_sequent(self.tbox + self.abox, cons)


def _content_lines(text: str):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line


def parse_kb(text: str, profile: LanguageProfile,
             ceiling=DEFAULT_COUNTING_CEILING) -> KB:
    tbox, abox = [], []
    for i, line in _content_lines(text):
        if line.startswith("tbox:"):
            f = parse_formula(line[len("tbox:"):], profile, ceiling=ceiling)
            if not is_ef(f):
                raise ParseError("tbox lines must hold external formulae", i, 1)
            tbox.append(f)
        elif line.startswith("abox:"):
            f = parse_formula(line[len("abox:"):], profile, ceiling=ceiling)
            if not isinstance(f, (ConceptAssertion, RoleAssertion,
                                  NegatedRoleAssertion)):
                raise ParseError("abox lines must hold assertions", i, 1)
            abox.append(f)
        else:
            raise ParseError("KB lines start with 'tbox:' or 'abox:'", i, 1)
    return KB(tuple(tbox), tuple(abox))


def parse(text: str, profile: LanguageProfile, ceiling=DEFAULT_COUNTING_CEILING):
    """Dispatching parse: sequent if '|-' occurs, KB if tbox:/abox: lines, else formula."""
    stripped = text.strip()
    if any(line.startswith(("tbox:", "abox:")) for _, line in _content_lines(text)):
        return parse_kb(text, profile, ceiling=ceiling)
    if "|-" in stripped:
        return parse_sequent(text, profile, ceiling=ceiling)
    return parse_formula(text, profile, ceiling=ceiling)


def parse_profile(text: str) -> LanguageProfile:
    flags, ddrs = set(), set()
    for i, line in _content_lines(text):
        if line.startswith("ddr "):
            name = line[4:].strip()
            if not name or not name[0].isupper():
                raise ParseError(f"bad ddr name {name!r}", i, 1)
            ddrs.add(name)
        elif line in FLAGS:
            flags.add(line)
        else:
            raise ParseError(f"unknown profile flag {line!r}", i, 1)
    return LanguageProfile(frozenset(flags), frozenset(ddrs)).normalized()


# ---------------------------------------------------------------------------
# descriptive definition files
# ---------------------------------------------------------------------------


def _parse_ddr_line(p: "_Parser") -> DescriptiveDefinition:
    p.expect("def")
    name = p.upper_name("a relation name")
    p.expect("(")
    roles = [p.role_name()]
    while p.peek().text == ",":
        p.next()
        roles.append(p.role_name())
    p.expect(")")
    p.expect(":")
    p.expect("forall")
    variables = []
    while p.peek().text != ".":
        variables.append(p.lower_name("a variable name"))
    p.expect(".")

    def atom():
        x = p.lower_name("a variable or role name")
        if p.peek().text == "=":
            p.next()
            y = p.lower_name("a variable name")
            return EqAtom(x, y)
        p.expect("(")
        u = p.lower_name("a variable name")
        p.expect(",")
        v = p.lower_name("a variable name")
        p.expect(")")
        return RoleAtom(x, u, v)

    ante = []
    if p.peek().text == "true":
        p.next()
    else:
        ante.append(atom())
        while p.peek().text == "&":
            p.next()
            ante.append(atom())
    p.expect("->")
    cons = []
    if p.peek().text == "false":
        p.next()
    else:
        cons.append(atom())
        while p.peek().text == "|":
            p.next()
            cons.append(atom())
    return DescriptiveDefinition(name, tuple(roles), tuple(variables),
                                 tuple(ante), tuple(cons))


def parse_ddr_file(text: str):
    """Parse a definition file, one ``def Name(...): forall ...`` per line."""
    defs = []
    for i, line in _content_lines(text):
        p = _Parser(line, LanguageProfile())
        try:
            d = _parse_ddr_line(p)
        except ParseError as e:
            raise ParseError(str(e).split(": ", 1)[1], i, e.col) from None
        if not p.at_eof():
            raise ParseError(f"trailing input {p.peek().text!r}", i, p.peek().col)
        defs.append(d)
    return tuple(defs)

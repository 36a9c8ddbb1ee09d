"""Rule schemata and the bottom-up application machinery.

A schema turns a sequent into candidate `Application`s.  Applications are
produced in template form: eigenvariable positions hold `Hole` markers.
The prover fills holes with fresh eigen individuals; the proof checker
fills them by unifying premise templates against the actual child
sequents.  An application with zero premises closes a branch.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional

from .syntax import (
    And,
    AtLeast,
    AtMost,
    Bot,
    Chain,
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
    NegatedRoleAssertion,
    Nominal,
    Not,
    Or,
    Role,
    RoleAssertion,
    SelfLoop,
    Sequent,
    Top,
    UNIVERSAL,
    Univ,
    ms_remove,
    substitute,
)

# ---------------------------------------------------------------------------
# applications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hole:
    """Placeholder for an eigenvariable inside a premise template."""

    name: str


@dataclass(frozen=True)
class Zones:
    ef_ante: tuple = ()
    if_ante: tuple = ()
    if_cons: tuple = ()
    ef_cons: tuple = ()

    def zones(self):
        return (self.ef_ante, self.if_ante, self.if_cons, self.ef_cons)

    def all(self):
        return self.ef_ante + self.if_ante + self.if_cons + self.ef_cons

    def antecedent(self):
        return self.ef_ante + self.if_ante

    def consequent(self):
        return self.if_cons + self.ef_cons


EMPTY = Zones()


def efa(*fs) -> Zones:
    return Zones(ef_ante=fs)


def ifa(*fs) -> Zones:
    return Zones(if_ante=fs)


def ifc(*fs) -> Zones:
    return Zones(if_cons=fs)


def efc(*fs) -> Zones:
    return Zones(ef_cons=fs)


def zjoin(*zs: Zones) -> Zones:
    return Zones(
        tuple(f for z in zs for f in z.ef_ante),
        tuple(f for z in zs for f in z.if_ante),
        tuple(f for z in zs for f in z.if_cons),
        tuple(f for z in zs for f in z.ef_cons),
    )


@dataclass(frozen=True)
class Application:
    """One bottom-up rule application on a fixed conclusion sequent."""

    schema: str
    key: tuple  # identifies the match for blocking marks
    consume: Zones = EMPTY
    premises: tuple = ()  # tuple[Zones, ...], additions per premise
    eigens: tuple = ()  # hole names, in the order fresh individuals are drawn

    def instantiate(self, assignment) -> "Application":
        """Fill holes with concrete individuals."""
        if not self.eigens:
            return self
        filled = tuple(_fill(p, assignment) for p in self.premises)
        return dataclasses.replace(
            self, premises=filled,
            eigens=tuple(assignment[h] for h in self.eigens))

    def premise_sequents(self, conclusion: Sequent):
        """Child sequents of this application (holes must be filled)."""
        base = _remove_zones(conclusion, self.consume)
        return [_add_zones(base, p) for p in self.premises]


def _fill(node, assignment):
    if isinstance(node, Hole):
        return assignment[node.name]
    if isinstance(node, tuple):
        return tuple(_fill(x, assignment) for x in node)
    if dataclasses.is_dataclass(node):
        kw = {f.name: _fill(getattr(node, f.name), assignment)
              for f in dataclasses.fields(node)}
        return type(node)(**kw)
    return node


def _remove_zones(seq: Sequent, z: Zones) -> Sequent:
    return Sequent(
        ms_remove(seq.ef_ante, z.ef_ante),
        ms_remove(seq.if_ante, z.if_ante),
        ms_remove(seq.if_cons, z.if_cons),
        ms_remove(seq.ef_cons, z.ef_cons),
    )


def _add_zones(seq: Sequent, z: Zones) -> Sequent:
    return Sequent(
        seq.ef_ante + z.ef_ante,
        seq.if_ante + z.if_ante,
        seq.if_cons + z.if_cons,
        seq.ef_cons + z.ef_cons,
    )


# ---------------------------------------------------------------------------
# template matching (used by the checker to recover eigen bindings)
# ---------------------------------------------------------------------------


def match_term(template, actual, binding) -> Optional[dict]:
    """One-sided structural match; holes bind to individuals."""
    if isinstance(template, Hole):
        if not isinstance(actual, Individual):
            return None
        bound = binding.get(template.name)
        if bound is None:
            out = dict(binding)
            out[template.name] = actual
            return out
        return binding if bound == actual else None
    if type(template) is not type(actual):
        return None
    if isinstance(template, tuple):
        if len(template) != len(actual):
            return None
        for t, a in zip(template, actual):
            binding = match_term(t, a, binding)
            if binding is None:
                return None
        return binding
    if dataclasses.is_dataclass(template):
        for f in dataclasses.fields(template):
            binding = match_term(getattr(template, f.name), getattr(actual, f.name), binding)
            if binding is None:
                return None
        return binding
    return binding if template == actual else None


def match_multiset(templates, actuals, binding) -> Optional[dict]:
    """Match template formulas against actual formulas, order-insensitively."""
    if len(templates) != len(actuals):
        return None
    if not templates:
        return binding
    t, rest = templates[0], templates[1:]
    used = set()
    for i, a in enumerate(actuals):
        if i in used:
            continue
        b = match_term(t, a, binding)
        if b is not None:
            res = match_multiset(rest, actuals[:i] + actuals[i + 1:], b)
            if res is not None:
                return res
    return None


# ---------------------------------------------------------------------------
# schema base
# ---------------------------------------------------------------------------


def ind_key(i: Individual):
    """Sort key realizing the linear order on individuals (eigens last)."""
    return (0, i.name, 0) if i.origin == "user" else (1, "", i.index)


class Schema:
    """A rule schema; concrete subclasses enumerate applications."""

    name: str = "?"
    kind: str = "unary"  # "initial" | "unary" | "binary" | "nary"
    is_generator = False  # conclusion shows no principal formula
    has_eigens = False
    can_close = False  # may yield zero-premise applications

    def applications(self, seq: Sequent, targets=()) -> Iterator[Application]:
        raise NotImplementedError

    def __repr__(self):
        return f"<schema {self.name}>"


def _plain_role(r) -> bool:
    return isinstance(r, (Role, Inv, Univ))


# ---------------------------------------------------------------------------
# initial rules
# ---------------------------------------------------------------------------


class IdC(Schema):
    name, kind, can_close = "id_c", "initial", True

    def applications(self, seq, targets=()):
        cons = set(seq.if_cons)
        for f in seq.if_ante:
            if isinstance(f.concept, ConceptName) and f in cons:
                yield Application(self.name, (f,))


class IdR(Schema):
    """Initial rule on a shared EF; F is restricted to r(a,b) or a = b."""

    name, kind, can_close = "id_r", "initial", True

    @staticmethod
    def admissible(f) -> bool:
        if isinstance(f, RoleAssertion):
            return _plain_role(f.role)
        return isinstance(f, Equality)

    def applications(self, seq, targets=()):
        cons = set(seq.ef_cons)
        for f in seq.ef_ante:
            if self.admissible(f) and f in cons:
                yield Application(self.name, (f,))


class BotL(Schema):
    name, kind, can_close = "bot_l", "initial", True

    def applications(self, seq, targets=()):
        for f in seq.if_ante:
            if isinstance(f.concept, Bot):
                yield Application(self.name, (f,))


class TopR(Schema):
    name, kind, can_close = "top_r", "initial", True

    def applications(self, seq, targets=()):
        for f in seq.if_cons:
            if isinstance(f.concept, Top):
                yield Application(self.name, (f,))


class NomR2(Schema):
    name, kind, can_close = "nom_r2", "initial", True

    def applications(self, seq, targets=()):
        for f in seq.if_cons:
            if isinstance(f.concept, Nominal) and f.concept.individual == f.subject:
                yield Application(self.name, (f,))


class EqR(Schema):
    name, kind, can_close = "eq_r", "initial", True

    def applications(self, seq, targets=()):
        for f in seq.ef_cons:
            if isinstance(f, Equality) and f.a == f.b:
                yield Application(self.name, (f,))


class UnivR(Schema):
    name, kind, can_close = "univ_r", "initial", True

    def applications(self, seq, targets=()):
        for f in seq.ef_cons:
            if isinstance(f, RoleAssertion) and isinstance(f.role, Univ):
                yield Application(self.name, (f,))


# ---------------------------------------------------------------------------
# generator rules (no principal formula in the conclusion)
# ---------------------------------------------------------------------------


class _Generator(Schema):
    is_generator = True
    kind = "unary"

    def premise_for(self, a) -> Zones:
        raise NotImplementedError

    def applications(self, seq, targets=()):
        for a in targets:
            yield Application(self.name, (a,), premises=(self.premise_for(a),))


class BotR(_Generator):
    name = "bot_r"

    def premise_for(self, a):
        return ifc(ConceptAssertion(a, Bot()))


class TopL(_Generator):
    name = "top_l"

    def premise_for(self, a):
        return ifa(ConceptAssertion(a, Top()))


class EqL(_Generator):
    name = "eq_l"

    def premise_for(self, a):
        return efa(Equality(a, a))


class NomL2(_Generator):
    name = "nom_l2"

    def premise_for(self, a):
        return ifa(ConceptAssertion(a, Nominal(a)))


class UnivL(Schema):
    name, kind, is_generator = "univ_l", "unary", True

    def applications(self, seq, targets=()):
        for a in targets:
            for b in targets:
                yield Application(self.name, (a, b),
                                  premises=(efa(RoleAssertion(UNIVERSAL, a, b)),))


# ---------------------------------------------------------------------------
# propositional rules
# ---------------------------------------------------------------------------


class NegL(Schema):
    name = "neg_l"

    def applications(self, seq, targets=()):
        for f in seq.if_ante:
            if isinstance(f.concept, Not):
                yield Application(self.name, (f,), consume=ifa(f),
                                  premises=(ifc(ConceptAssertion(f.subject, f.concept.sub)),))


class NegR(Schema):
    name = "neg_r"

    def applications(self, seq, targets=()):
        for f in seq.if_cons:
            if isinstance(f.concept, Not):
                yield Application(self.name, (f,), consume=ifc(f),
                                  premises=(ifa(ConceptAssertion(f.subject, f.concept.sub)),))


class OrL(Schema):
    name, kind = "or_l", "binary"

    def applications(self, seq, targets=()):
        for f in seq.if_ante:
            if isinstance(f.concept, Or):
                a = f.subject
                yield Application(self.name, (f,), consume=ifa(f), premises=(
                    ifa(ConceptAssertion(a, f.concept.left)),
                    ifa(ConceptAssertion(a, f.concept.right))))


class OrR(Schema):
    name = "or_r"

    def applications(self, seq, targets=()):
        for f in seq.if_cons:
            if isinstance(f.concept, Or):
                a = f.subject
                yield Application(self.name, (f,), consume=ifc(f), premises=(
                    ifc(ConceptAssertion(a, f.concept.left),
                        ConceptAssertion(a, f.concept.right)),))


class AndL(Schema):
    name = "and_l"

    def applications(self, seq, targets=()):
        for f in seq.if_ante:
            if isinstance(f.concept, And):
                a = f.subject
                yield Application(self.name, (f,), consume=ifa(f), premises=(
                    ifa(ConceptAssertion(a, f.concept.left),
                        ConceptAssertion(a, f.concept.right)),))


class AndR(Schema):
    name, kind = "and_r", "binary"

    def applications(self, seq, targets=()):
        for f in seq.if_cons:
            if isinstance(f.concept, And):
                a = f.subject
                yield Application(self.name, (f,), consume=ifc(f), premises=(
                    ifc(ConceptAssertion(a, f.concept.left)),
                    ifc(ConceptAssertion(a, f.concept.right))))


class SubL(Schema):
    name = "sub_l"

    def applications(self, seq, targets=()):
        for g in seq.ef_ante:
            if not isinstance(g, Gci):
                continue
            for f in seq.if_ante:
                if f.concept == g.sub:
                    yield Application(self.name, (g, f), premises=(
                        ifa(ConceptAssertion(f.subject, g.sup)),))


class SubR(Schema):
    name, has_eigens = "sub_r", True

    def applications(self, seq, targets=()):
        for g in seq.ef_cons:
            if isinstance(g, Gci):
                b = Hole("b")
                yield Application(self.name, (g,), consume=efc(g), eigens=("b",),
                                  premises=(zjoin(ifa(ConceptAssertion(b, g.sub)),
                                                  ifc(ConceptAssertion(b, g.sup))),))


class ExL(Schema):
    name, has_eigens = "ex_l", True

    def applications(self, seq, targets=()):
        for f in seq.if_ante:
            if isinstance(f.concept, Exists):
                b = Hole("b")
                yield Application(self.name, (f,), consume=ifa(f), eigens=("b",),
                                  premises=(zjoin(
                                      efa(RoleAssertion(f.concept.role, f.subject, b)),
                                      ifa(ConceptAssertion(b, f.concept.sub))),))


class ExR(Schema):
    name = "ex_r"

    def applications(self, seq, targets=()):
        for ra in seq.ef_ante:
            if not (isinstance(ra, RoleAssertion) and _plain_role(ra.role)):
                continue
            for f in seq.if_cons:
                if (isinstance(f.concept, Exists) and f.concept.role == ra.role
                        and f.subject == ra.a):
                    yield Application(self.name, (ra, f), premises=(
                        ifc(ConceptAssertion(ra.b, f.concept.sub)),))


class AllL(Schema):
    name = "all_l"

    def applications(self, seq, targets=()):
        for ra in seq.ef_ante:
            if not (isinstance(ra, RoleAssertion) and _plain_role(ra.role)):
                continue
            for f in seq.if_ante:
                if (isinstance(f.concept, Forall) and f.concept.role == ra.role
                        and f.subject == ra.a):
                    yield Application(self.name, (ra, f), premises=(
                        ifa(ConceptAssertion(ra.b, f.concept.sub)),))


class AllR(Schema):
    name, has_eigens = "all_r", True

    def applications(self, seq, targets=()):
        for f in seq.if_cons:
            if isinstance(f.concept, Forall):
                b = Hole("b")
                yield Application(self.name, (f,), consume=ifc(f), eigens=("b",),
                                  premises=(zjoin(
                                      efa(RoleAssertion(f.concept.role, f.subject, b)),
                                      ifc(ConceptAssertion(b, f.concept.sub))),))


# ---------------------------------------------------------------------------
# role composition and inclusion rules
# ---------------------------------------------------------------------------


def _chain_term(parts: tuple):
    return parts[0] if len(parts) == 1 else Chain(parts)


def _cria_lhs_assertion(f: Cria, a, b) -> RoleAssertion:
    return RoleAssertion(_chain_term(tuple(Role(n) for n in f.lhs)), a, b)


class CompL(Schema):
    """Split off the last component of a composition assertion on the left."""

    name, has_eigens = "comp_l", True

    def applications(self, seq, targets=()):
        for ra in seq.ef_ante:
            if isinstance(ra, RoleAssertion) and isinstance(ra.role, Chain):
                parts = ra.role.parts
                b = Hole("b")
                yield Application(self.name, (ra,), consume=efa(ra), eigens=("b",),
                                  premises=(efa(
                                      RoleAssertion(_chain_term(parts[:-1]), ra.a, b),
                                      RoleAssertion(parts[-1], b, ra.b)),))


class CompR(Schema):
    name, kind = "comp_r", "binary"

    def applications(self, seq, targets=()):
        for ra in seq.ef_cons:
            if isinstance(ra, RoleAssertion) and isinstance(ra.role, Chain):
                parts = ra.role.parts
                for b in targets:
                    yield Application(self.name, (ra, b), premises=(
                        efc(RoleAssertion(_chain_term(parts[:-1]), ra.a, b)),
                        efc(RoleAssertion(parts[-1], b, ra.b))))


class CriaL(Schema):
    kind = "binary"

    def __init__(self, name="cria_l", max_len=None):
        self.name = name
        self.max_len = max_len  # None: any; 1: plain RIAs only

    def _fits(self, f) -> bool:
        return isinstance(f, Cria) and (self.max_len is None or len(f.lhs) <= self.max_len)

    def applications(self, seq, targets=()):
        for f in seq.ef_ante:
            if not self._fits(f):
                continue
            for a in targets:
                for b in targets:
                    yield Application(self.name, (f, a, b), premises=(
                        efc(_cria_lhs_assertion(f, a, b)),
                        efa(RoleAssertion(Role(f.rhs), a, b))))


class CriaR(Schema):
    has_eigens = True

    def __init__(self, name="cria_r", max_len=None):
        self.name = name
        self.max_len = max_len

    def applications(self, seq, targets=()):
        for f in seq.ef_cons:
            if not (isinstance(f, Cria)
                    and (self.max_len is None or len(f.lhs) <= self.max_len)):
                continue
            a, b = Hole("a"), Hole("b")
            yield Application(self.name, (f,), consume=efc(f), eigens=("a", "b"),
                              premises=(zjoin(
                                  efa(_cria_lhs_assertion(f, a, b)),
                                  efc(RoleAssertion(Role(f.rhs), a, b))),))


# ---------------------------------------------------------------------------
# nominal rules
# ---------------------------------------------------------------------------


class NomL1(Schema):
    name = "nom_l1"

    def applications(self, seq, targets=()):
        for f in seq.if_ante:
            if isinstance(f.concept, Nominal):
                yield Application(self.name, (f,), premises=(
                    efa(Equality(f.subject, f.concept.individual)),))


class NomR1(Schema):
    name = "nom_r1"

    def applications(self, seq, targets=()):
        for f in seq.if_cons:
            if isinstance(f.concept, Nominal):
                yield Application(self.name, (f,), premises=(
                    efc(Equality(f.subject, f.concept.individual)),))


# ---------------------------------------------------------------------------
# inverse role rules
# ---------------------------------------------------------------------------


class _InvBase(Schema):
    left: bool
    from_inv: bool

    def applications(self, seq, targets=()):
        zone = seq.ef_ante if self.left else seq.ef_cons
        mk = efa if self.left else efc
        for ra in zone:
            if not isinstance(ra, RoleAssertion):
                continue
            if self.from_inv and isinstance(ra.role, Inv):
                flipped = RoleAssertion(Role(ra.role.name), ra.b, ra.a)
            elif not self.from_inv and isinstance(ra.role, Role):
                flipped = RoleAssertion(Inv(ra.role.name), ra.b, ra.a)
            else:
                continue
            yield Application(self.name, (ra,), premises=(mk(flipped),))


class InvL(_InvBase):
    name, left, from_inv = "inv_l", True, False


class InvInvL(_InvBase):
    name, left, from_inv = "invinv_l", True, True


class InvR(_InvBase):
    name, left, from_inv = "inv_r", False, False


class InvInvR(_InvBase):
    name, left, from_inv = "invinv_r", False, True


# ---------------------------------------------------------------------------
# counting rules
# ---------------------------------------------------------------------------


def _successors(seq, role, a):
    """Occurrences of role(a, _) on the left, in zone order.

    Occurrences, not distinct formulas: a counting rule may legitimately
    use two copies of the same assertion as two of its principals.
    """
    return [ra for ra in seq.ef_ante
            if isinstance(ra, RoleAssertion) and ra.role == role and ra.a == a]


class _Counting(Schema):
    def __init__(self, qualified: bool):
        self.qualified = qualified
        if not qualified:
            stem, side = self.name.rsplit("_", 1)
            self.name = f"{stem}u_{side}"  # unqualified variant over top

    def _fits(self, c) -> bool:
        if self.qualified:
            return True
        return isinstance(c.sub, Top)


class AtMostL(_Counting):
    name, kind = "atmost_l", "nary"

    def __init__(self, qualified):
        super().__init__(qualified)
        self.can_close = not qualified  # n = 0 leaves no premises

    def applications(self, seq, targets=()):
        for f in seq.if_ante:
            if not (isinstance(f.concept, AtMost) and self._fits(f.concept)):
                continue
            c = f.concept
            cands = _successors(seq, c.role, f.subject)
            for chosen in combinations(cands, c.bound + 1):
                bs = [ra.b for ra in chosen]
                prem = []
                if self.qualified:
                    prem += [ifc(ConceptAssertion(b, c.sub)) for b in bs]
                prem += [efa(Equality(bs[i], bs[j]))
                         for i in range(len(bs)) for j in range(i + 1, len(bs))]
                yield Application(self.name, (f,) + tuple(chosen), premises=tuple(prem))


class AtMostR(_Counting):
    name, has_eigens = "atmost_r", True

    def applications(self, seq, targets=()):
        for f in seq.if_cons:
            if not (isinstance(f.concept, AtMost) and self._fits(f.concept)):
                continue
            c = f.concept
            holes = [Hole(f"b{i}") for i in range(c.bound + 1)]
            adds = [efa(*(RoleAssertion(c.role, f.subject, h) for h in holes))]
            if self.qualified:
                adds.append(ifa(*(ConceptAssertion(h, c.sub) for h in holes)))
            adds.append(efc(*(Equality(holes[i], holes[j])
                              for i in range(len(holes))
                              for j in range(i + 1, len(holes)))))
            yield Application(self.name, (f,), consume=ifc(f),
                              eigens=tuple(h.name for h in holes),
                              premises=(zjoin(*adds),))


class AtLeastL(_Counting):
    name, has_eigens = "atleast_l", True

    def applications(self, seq, targets=()):
        for f in seq.if_ante:
            if not (isinstance(f.concept, AtLeast) and self._fits(f.concept)):
                continue
            c = f.concept
            holes = [Hole(f"b{i}") for i in range(1, c.bound + 1)]
            adds = [efa(*(RoleAssertion(c.role, f.subject, h) for h in holes))]
            if self.qualified:
                adds.append(ifa(*(ConceptAssertion(h, c.sub) for h in holes)))
            adds.append(efc(*(Equality(holes[i], holes[j])
                              for i in range(len(holes))
                              for j in range(i + 1, len(holes)))))
            yield Application(self.name, (f,), consume=ifa(f),
                              eigens=tuple(h.name for h in holes),
                              premises=(zjoin(*adds),))


class AtLeastR(_Counting):
    name, kind, can_close = "atleast_r", "nary", True

    def applications(self, seq, targets=()):
        for f in seq.if_cons:
            if not (isinstance(f.concept, AtLeast) and self._fits(f.concept)):
                continue
            c = f.concept
            cands = _successors(seq, c.role, f.subject)
            for chosen in combinations(cands, c.bound):
                bs = [ra.b for ra in chosen]
                prem = []
                if self.qualified:
                    prem += [ifc(ConceptAssertion(b, c.sub)) for b in bs]
                prem += [efa(Equality(bs[i], bs[j]))
                         for i in range(len(bs)) for j in range(i + 1, len(bs))]
                yield Application(self.name, (f,) + tuple(chosen), premises=tuple(prem))


# ---------------------------------------------------------------------------
# equality and inequality rules
# ---------------------------------------------------------------------------


class Rep1(Schema):
    name = "rep1"

    def applications(self, seq, targets=()):
        for eq in seq.ef_ante:
            if not isinstance(eq, Equality):
                continue
            for f in seq.if_ante:
                if f.subject == eq.a:
                    yield Application(self.name, (eq, f), premises=(
                        ifa(ConceptAssertion(eq.b, f.concept)),))


class Rep2(Schema):
    name = "rep2"

    def applications(self, seq, targets=()):
        for eq in seq.ef_ante:
            if not isinstance(eq, Equality):
                continue
            for f in seq.ef_ante:
                g = substitute(f, eq.a, eq.b)
                yield Application(self.name, (eq, f), premises=(efa(g),))


class Euc(Schema):
    name = "euc"

    def applications(self, seq, targets=()):
        eqs = [f for f in seq.ef_ante if isinstance(f, Equality)]
        for e1 in eqs:
            for e2 in eqs:
                if e1.a == e2.a:
                    yield Application(self.name, (e1, e2), premises=(
                        efa(Equality(e1.b, e2.b)),))


class NeqL(Schema):
    name = "neq_l"

    def applications(self, seq, targets=()):
        for f in seq.ef_ante:
            if isinstance(f, Inequality):
                yield Application(self.name, (f,), consume=efa(f),
                                  premises=(efc(Equality(f.a, f.b)),))


class NeqR(Schema):
    name = "neq_r"

    def applications(self, seq, targets=()):
        for f in seq.ef_cons:
            if isinstance(f, Inequality):
                yield Application(self.name, (f,), consume=efc(f),
                                  premises=(efa(Equality(f.a, f.b)),))


# ---------------------------------------------------------------------------
# negated roles, Self
# ---------------------------------------------------------------------------


class NegRoleL(Schema):
    name = "negrole_l"

    def applications(self, seq, targets=()):
        for f in seq.ef_ante:
            if isinstance(f, NegatedRoleAssertion):
                yield Application(self.name, (f,), consume=efa(f),
                                  premises=(efc(RoleAssertion(Role(f.role), f.a, f.b)),))


class NegRoleR(Schema):
    name = "negrole_r"

    def applications(self, seq, targets=()):
        for f in seq.ef_cons:
            if isinstance(f, NegatedRoleAssertion):
                yield Application(self.name, (f,), consume=efc(f),
                                  premises=(efa(RoleAssertion(Role(f.role), f.a, f.b)),))


class SelfL(Schema):
    name = "self_l"

    def applications(self, seq, targets=()):
        for f in seq.if_ante:
            if isinstance(f.concept, SelfLoop):
                yield Application(self.name, (f,), consume=ifa(f), premises=(
                    efa(RoleAssertion(f.concept.role, f.subject, f.subject)),))


class SelfR(Schema):
    name = "self_r"

    def applications(self, seq, targets=()):
        for f in seq.if_cons:
            if isinstance(f.concept, SelfLoop):
                yield Application(self.name, (f,), consume=ifc(f), premises=(
                    efc(RoleAssertion(f.concept.role, f.subject, f.subject)),))


# ---------------------------------------------------------------------------
# rule groups
# ---------------------------------------------------------------------------


def base_rules():
    """The core rule set for plain ALC."""
    return (
        IdC(), IdR(), BotL(), BotR(), TopL(), TopR(),
        NegL(), NegR(), OrL(), OrR(), AndL(), AndR(),
        SubL(), SubR(), ExL(), ExR(), AllL(), AllR(),
    )


EXTENSION_GROUPS = {
    "compose": lambda: (CompL(), CompR()),
    "rias": lambda: (CriaL("ria_l", max_len=1), CriaR("ria_r", max_len=1)),
    "crias": lambda: (CriaL(), CriaR()),
    "nominals": lambda: (NomL1(), NomL2(), NomR1(), NomR2()),
    "inverses": lambda: (InvL(), InvInvL(), InvR(), InvInvR()),
    "qualified_counting": lambda: (AtMostL(True), AtMostR(True),
                                   AtLeastL(True), AtLeastR(True)),
    "unqualified_counting": lambda: (AtMostL(False), AtMostR(False),
                                     AtLeastL(False), AtLeastR(False)),
    "equality": lambda: (EqL(), EqR(), Rep1(), Rep2(), Euc()),
    "inequality": lambda: (NeqL(), NeqR()),
    "negated_roles": lambda: (NegRoleL(), NegRoleR()),
    "universal_role": lambda: (UnivL(), UnivR()),
    "self_concept": lambda: (SelfL(), SelfR()),
}

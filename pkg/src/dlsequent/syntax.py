"""Core term language: individuals, roles, concepts, formulae, sequents.

Everything here is an immutable dataclass; values can be shared freely
between threads and used as dict keys.  Formulae split into two classes:

  internal formulae (IFs)  -- concept assertions ``a : P``
  external formulae (EFs)  -- everything governing roles and concept
                              inclusion (GCIs, role assertions, RRAs,
                              CRIAs, (in)equalities)

A sequent keeps the two classes in separate zones on each side; zone
membership is validated at construction time.
"""

from __future__ import annotations

import dataclasses
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

EIGEN_PREFIX = "_e"

DEFAULT_COUNTING_CEILING = 8


class SyntaxError_(ValueError):
    """Malformed term (bad constructor arguments, zone violation)."""


# ---------------------------------------------------------------------------
# individuals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Individual:
    name: str
    origin: str = "user"  # "user" | "eigen"
    index: Optional[int] = None

    def __post_init__(self):
        if self.origin not in ("user", "eigen"):
            raise SyntaxError_(f"bad individual origin {self.origin!r}")
        if self.origin == "eigen" and self.index is None:
            raise SyntaxError_("eigen individual needs a creation index")

    def __str__(self):
        return self.name


def eigen(index: int) -> Individual:
    return Individual(f"{EIGEN_PREFIX}{index}", "eigen", index)


def ind(name: str) -> Individual:
    """A user-named individual."""
    return Individual(name)


# ---------------------------------------------------------------------------
# role terms
# ---------------------------------------------------------------------------


class RoleTerm:
    def __str__(self):
        return show(self)


@dataclass(frozen=True)
class Role(RoleTerm):
    name: str


@dataclass(frozen=True)
class Inv(RoleTerm):
    name: str  # inverse only ever wraps a named role


@dataclass(frozen=True)
class Univ(RoleTerm):
    pass


UNIVERSAL = Univ()


@dataclass(frozen=True)
class Chain(RoleTerm):
    parts: tuple

    def __post_init__(self):
        if len(self.parts) < 2:
            raise SyntaxError_("role chain needs at least two components")
        if any(isinstance(p, Chain) for p in self.parts):
            raise SyntaxError_("role chains do not nest")


# ---------------------------------------------------------------------------
# concepts
# ---------------------------------------------------------------------------


class Concept:
    def __str__(self):
        return show(self)


@dataclass(frozen=True)
class ConceptName(Concept):
    name: str


@dataclass(frozen=True)
class Top(Concept):
    pass


@dataclass(frozen=True)
class Bot(Concept):
    pass


TOP = Top()
BOT = Bot()


@dataclass(frozen=True)
class Not(Concept):
    sub: Concept


@dataclass(frozen=True)
class Or(Concept):
    left: Concept
    right: Concept


@dataclass(frozen=True)
class And(Concept):
    left: Concept
    right: Concept


@dataclass(frozen=True)
class Exists(Concept):
    role: RoleTerm
    sub: Concept

    def __post_init__(self):
        if isinstance(self.role, Chain):
            raise SyntaxError_("role chains are not allowed inside concepts")


@dataclass(frozen=True)
class Forall(Concept):
    role: RoleTerm
    sub: Concept

    def __post_init__(self):
        if isinstance(self.role, Chain):
            raise SyntaxError_("role chains are not allowed inside concepts")


@dataclass(frozen=True)
class Nominal(Concept):
    individual: Individual


@dataclass(frozen=True)
class AtMost(Concept):
    bound: int
    role: RoleTerm
    sub: Concept

    def __post_init__(self):
        if self.bound < 0:
            raise SyntaxError_("counting bound must be non-negative")
        if isinstance(self.role, Chain):
            raise SyntaxError_("role chains are not allowed inside concepts")


@dataclass(frozen=True)
class AtLeast(Concept):
    bound: int
    role: RoleTerm
    sub: Concept

    def __post_init__(self):
        if self.bound < 0:
            raise SyntaxError_("counting bound must be non-negative")
        if isinstance(self.role, Chain):
            raise SyntaxError_("role chains are not allowed inside concepts")


@dataclass(frozen=True)
class SelfLoop(Concept):
    role: RoleTerm

    def __post_init__(self):
        if isinstance(self.role, Chain):
            raise SyntaxError_("role chains are not allowed inside concepts")


# ---------------------------------------------------------------------------
# formulae
# ---------------------------------------------------------------------------


class Formula:
    def __str__(self):
        return show(self)


class ExternalFormula(Formula):
    pass


@dataclass(frozen=True)
class ConceptAssertion(Formula):
    """Internal formula ``a : P``."""

    subject: Individual
    concept: Concept


@dataclass(frozen=True)
class Gci(ExternalFormula):
    sub: Concept
    sup: Concept


@dataclass(frozen=True)
class RoleAssertion(ExternalFormula):
    role: RoleTerm
    a: Individual
    b: Individual


@dataclass(frozen=True)
class NegatedRoleAssertion(ExternalFormula):
    role: str  # named roles only
    a: Individual
    b: Individual


@dataclass(frozen=True)
class Cria(ExternalFormula):
    """Role inclusion ``r1;...;rn sub r`` (n = 1 gives a plain RIA)."""

    lhs: tuple  # tuple of role names
    rhs: str

    def __post_init__(self):
        if len(self.lhs) < 1:
            raise SyntaxError_("role inclusion needs a non-empty left side")


@dataclass(frozen=True)
class Rra(ExternalFormula):
    """Role relational axiom ``Rel[Name](r1,...,rk)``."""

    rel: str
    roles: tuple  # tuple of role names


@dataclass(frozen=True)
class Equality(ExternalFormula):
    a: Individual
    b: Individual


@dataclass(frozen=True)
class Inequality(ExternalFormula):
    a: Individual
    b: Individual


def is_if(f) -> bool:
    return isinstance(f, ConceptAssertion)


def is_ef(f) -> bool:
    return isinstance(f, ExternalFormula)


# ---------------------------------------------------------------------------
# sequents
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Sequent:
    """Four-zone sequent ``Gamma, Sigma |- Pi, Delta``.

    Zones are multisets realized as tuples: order is preserved for
    deterministic iteration but ignored by equality and hashing.
    """

    ef_ante: tuple = ()
    if_ante: tuple = ()
    if_cons: tuple = ()
    ef_cons: tuple = ()

    def __post_init__(self):
        for f in self.ef_ante + self.ef_cons:
            if not is_ef(f):
                raise SyntaxError_(f"EF zone holds a non-EF formula: {f}")
        for f in self.if_ante + self.if_cons:
            if not is_if(f):
                raise SyntaxError_(f"IF zone holds a non-IF formula: {f}")

    def zones(self):
        return (self.ef_ante, self.if_ante, self.if_cons, self.ef_cons)

    def antecedent(self):
        return self.ef_ante + self.if_ante

    def consequent(self):
        return self.if_cons + self.ef_cons

    def __eq__(self, other):
        if not isinstance(other, Sequent):
            return NotImplemented
        return all(Counter(a) == Counter(b) for a, b in zip(self.zones(), other.zones()))

    def __hash__(self):
        return hash(tuple(frozenset(Counter(z).items()) for z in self.zones()))

    def __str__(self):
        return show(self)


def sequent(ante: Iterable = (), cons: Iterable = ()) -> Sequent:
    """Build a sequent from mixed formula iterables, routing by class."""
    ef_a, if_a, if_c, ef_c = [], [], [], []
    for f in ante:
        (ef_a if is_ef(f) else if_a).append(f)
    for f in cons:
        (ef_c if is_ef(f) else if_c).append(f)
    return Sequent(tuple(ef_a), tuple(if_a), tuple(if_c), tuple(ef_c))


# ---------------------------------------------------------------------------
# multiset helpers over tuples
# ---------------------------------------------------------------------------


def ms_contains(big: tuple, small: Iterable) -> bool:
    need = Counter(small)
    have = Counter(big)
    return all(have[k] >= n for k, n in need.items())


def ms_remove(big: tuple, small: Iterable) -> tuple:
    need = Counter(small)
    out = []
    for x in big:
        if need[x] > 0:
            need[x] -= 1
        else:
            out.append(x)
    if any(n > 0 for n in need.values()):
        raise ValueError("multiset difference of a non-subset")
    return tuple(out)


def ms_eq(a: Iterable, b: Iterable) -> bool:
    return Counter(a) == Counter(b)


# ---------------------------------------------------------------------------
# language profiles
# ---------------------------------------------------------------------------

FLAGS = (
    "compose",
    "rias",
    "crias",
    "nominals",
    "inverses",
    "functionality",
    "unqualified_counting",
    "qualified_counting",
    "equality",
    "inequality",
    "negated_roles",
    "universal_role",
    "self_concept",
)

# flag -> flags it drags in
_FLAG_DEPS = {
    "nominals": ("equality",),
    "functionality": ("equality",),
    "qualified_counting": ("equality",),
    "unqualified_counting": ("equality",),
    "crias": ("compose",),
}


@dataclass(frozen=True)
class LanguageProfile:
    flags: frozenset = frozenset()
    ddr_names: frozenset = frozenset()

    def __post_init__(self):
        unknown = set(self.flags) - set(FLAGS)
        if unknown:
            raise SyntaxError_(f"unknown profile flags: {sorted(unknown)}")

    def has(self, flag: str) -> bool:
        return flag in self.flags

    def normalized(self) -> "LanguageProfile":
        """Close the profile under flag dependencies.

        The functionality flag and the Funct definition name are kept in
        sync: either one switches on the other.
        """
        flags = set(self.flags)
        names = set(self.ddr_names)
        if "Funct" in names:
            flags.add("functionality")
        if "functionality" in flags:
            names.add("Funct")
        changed = True
        while changed:
            changed = False
            for flag, deps in _FLAG_DEPS.items():
                if flag in flags:
                    for d in deps:
                        if d not in flags:
                            flags.add(d)
                            changed = True
        return LanguageProfile(frozenset(flags), frozenset(names))


def profile(*flags: str, ddrs: Iterable = ()) -> LanguageProfile:
    return LanguageProfile(frozenset(flags), frozenset(ddrs)).normalized()


ALC = LanguageProfile()


# ---------------------------------------------------------------------------
# generic traversal over the immutable term dataclasses
# ---------------------------------------------------------------------------


def _map_individuals(node, fn):
    if isinstance(node, Individual):
        return fn(node)
    if isinstance(node, tuple):
        return tuple(_map_individuals(x, fn) for x in node)
    if dataclasses.is_dataclass(node):
        kw = {
            f.name: _map_individuals(getattr(node, f.name), fn)
            for f in dataclasses.fields(node)
        }
        return type(node)(**kw)
    return node


def _iter_individuals(node) -> Iterator[Individual]:
    if isinstance(node, Individual):
        yield node
    elif isinstance(node, tuple):
        for x in node:
            yield from _iter_individuals(x)
    elif dataclasses.is_dataclass(node):
        for f in dataclasses.fields(node):
            yield from _iter_individuals(getattr(node, f.name))


def substitute(target, frm: Individual, to: Individual):
    """Replace every occurrence of ``frm`` by ``to`` (formula, sequent, tuple)."""
    if frm == to:
        return target
    return _map_individuals(target, lambda i: to if i == frm else i)


def free_individuals(target) -> frozenset:
    """Every individual occurring in the term, nominals included."""
    return frozenset(_iter_individuals(target))


# ---------------------------------------------------------------------------
# formula weight
# ---------------------------------------------------------------------------


class UnknownRra(KeyError):
    """Weight or satisfaction asked of an RRA with no registered definition."""


def concept_weight(c: Concept) -> int:
    if isinstance(c, (ConceptName, Top, Bot)):
        return 1
    if isinstance(c, (Nominal, SelfLoop)):
        return 2
    if isinstance(c, (Or, And)):
        return max(concept_weight(c.left), concept_weight(c.right)) + 1
    if isinstance(c, Not):
        return concept_weight(c.sub) + 1
    if isinstance(c, (Exists, Forall, AtMost, AtLeast)):
        return concept_weight(c.sub) + 1
    raise SyntaxError_(f"unknown concept {c!r}")


def weight(f, ddrs=None) -> int:
    """The inductive weight measure on formulae (and bare concepts).

    RRA weight is ``1 + n + k`` for a definition with n antecedent and k
    consequent atoms, so it needs the definition registry.
    """
    if isinstance(f, Concept):
        return concept_weight(f)
    if isinstance(f, ConceptAssertion):
        return concept_weight(f.concept)
    if isinstance(f, (Equality,)):
        return 1
    if isinstance(f, Inequality):
        return 2
    if isinstance(f, NegatedRoleAssertion):
        return 2
    if isinstance(f, RoleAssertion):
        if isinstance(f.role, Chain):
            return len(f.role.parts)
        return 1
    if isinstance(f, Gci):
        return max(concept_weight(f.sub), concept_weight(f.sup)) + 1
    if isinstance(f, Cria):
        return len(f.lhs) + 2
    if isinstance(f, Rra):
        d = (ddrs or {}).get(f.rel)
        if d is None:
            raise UnknownRra(f.rel)
        return 1 + len(d.antecedent) + len(d.consequent)
    raise SyntaxError_(f"weight undefined for {f!r}")


# ---------------------------------------------------------------------------
# printing (the parser's grammar, reproduced exactly)
# ---------------------------------------------------------------------------


def _show_role(r: RoleTerm) -> str:
    if isinstance(r, Role):
        return r.name
    if isinstance(r, Inv):
        return f"inv {r.name}"
    if isinstance(r, Univ):
        return "U"
    if isinstance(r, Chain):
        return ";".join(_show_role(p) for p in r.parts)
    raise SyntaxError_(f"unknown role term {r!r}")


def _show_concept(c: Concept) -> str:
    if isinstance(c, ConceptName):
        return c.name
    if isinstance(c, Top):
        return "top"
    if isinstance(c, Bot):
        return "bot"
    if isinstance(c, Not):
        return f"not {_show_concept(c.sub)}"
    if isinstance(c, Or):
        return f"({_show_concept(c.left)} or {_show_concept(c.right)})"
    if isinstance(c, And):
        return f"({_show_concept(c.left)} and {_show_concept(c.right)})"
    if isinstance(c, Exists):
        return f"some {_show_role(c.role)} {_show_concept(c.sub)}"
    if isinstance(c, Forall):
        return f"all {_show_role(c.role)} {_show_concept(c.sub)}"
    if isinstance(c, Nominal):
        return "{%s}" % c.individual.name
    if isinstance(c, AtMost):
        return f"atmost {c.bound} {_show_role(c.role)} {_show_concept(c.sub)}"
    if isinstance(c, AtLeast):
        return f"atleast {c.bound} {_show_role(c.role)} {_show_concept(c.sub)}"
    if isinstance(c, SelfLoop):
        return f"self {_show_role(c.role)}"
    raise SyntaxError_(f"unknown concept {c!r}")


BUILTIN_RRA_NAMES = ("Trans", "Refl", "Irr", "Asy", "Disj", "Funct")


def _show_formula(f) -> str:
    if isinstance(f, ConceptAssertion):
        return f"{f.subject.name} : {_show_concept(f.concept)}"
    if isinstance(f, Gci):
        return f"{_show_concept(f.sub)} sub {_show_concept(f.sup)}"
    if isinstance(f, RoleAssertion):
        return f"{_show_role(f.role)}({f.a.name},{f.b.name})"
    if isinstance(f, NegatedRoleAssertion):
        return f"not {f.role}({f.a.name},{f.b.name})"
    if isinstance(f, Cria):
        return f"{';'.join(f.lhs)} sub {f.rhs}"
    if isinstance(f, Rra):
        args = ",".join(f.roles)
        if f.rel in BUILTIN_RRA_NAMES:
            return f"{f.rel}({args})"
        return f"Rel[{f.rel}]({args})"
    if isinstance(f, Equality):
        return f"{f.a.name} = {f.b.name}"
    if isinstance(f, Inequality):
        return f"{f.a.name} != {f.b.name}"
    raise SyntaxError_(f"unknown formula {f!r}")


def show(x) -> str:
    """Render a term in the concrete grammar; ``parse`` round-trips it."""
    if isinstance(x, Sequent):
        left = ", ".join(_show_formula(f) for f in x.ef_ante + x.if_ante)
        right = ", ".join(_show_formula(f) for f in x.if_cons + x.ef_cons)
        return f"{left} |- {right}".strip()
    if isinstance(x, (ConceptAssertion, ExternalFormula)):
        return _show_formula(x)
    if isinstance(x, Concept):
        return _show_concept(x)
    if isinstance(x, RoleTerm):
        return _show_role(x)
    if isinstance(x, Individual):
        return x.name
    raise SyntaxError_(f"cannot render {x!r}")


def fkey(x) -> str:
    """Canonical sort key for deterministic iteration orders."""
    return show(x)

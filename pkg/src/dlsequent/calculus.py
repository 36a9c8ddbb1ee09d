"""Descriptive definitions, their compiled rules, and calculus assembly.

A descriptive definition

    Rel(r1,...,rl)  <->  forall a1..am . F1 & ... & Fn -> G1 | ... | Gk

with atoms of the form r(x,y) or x = y compiles into a left/right rule
pair introducing the relational axiom Rel(...).  Left rules whose atoms
can be identified by a variable substitution get contracted variants so
the calculus satisfies the closure condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional

from .rules import (
    Application,
    Hole,
    Schema,
    efa,
    efc,
    base_rules,
    ind_key,
    zjoin,
    EXTENSION_GROUPS,
)
from .syntax import (
    Equality,
    FLAGS,
    LanguageProfile,
    Role,
    RoleAssertion,
    Rra,
    Sequent,
    SyntaxError_,
    eigen,
    free_individuals,
)


# ---------------------------------------------------------------------------
# descriptive definitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RoleAtom:
    role: str
    x: str
    y: str


@dataclass(frozen=True)
class EqAtom:
    x: str
    y: str


@dataclass(frozen=True)
class DescriptiveDefinition:
    rel: str
    roles: tuple  # formal role parameters r1..rl
    variables: tuple  # bound variables a1..am
    antecedent: tuple  # atoms F1..Fn (empty means "true")
    consequent: tuple  # atoms G1..Gk (empty means "false")

    def __post_init__(self):
        if len(set(self.roles)) != len(self.roles):
            raise SyntaxError_(f"{self.rel}: duplicate role parameters")
        if len(set(self.variables)) != len(self.variables):
            raise SyntaxError_(f"{self.rel}: duplicate variables")
        used = set()
        for atom in self.antecedent + self.consequent:
            if isinstance(atom, RoleAtom):
                if atom.role not in self.roles:
                    raise SyntaxError_(f"{self.rel}: undeclared role {atom.role!r}")
                vs = (atom.x, atom.y)
            elif isinstance(atom, EqAtom):
                vs = (atom.x, atom.y)
            else:
                raise SyntaxError_(f"{self.rel}: bad atom {atom!r}")
            for v in vs:
                if v not in self.variables:
                    raise SyntaxError_(f"{self.rel}: undeclared variable {v!r}")
                used.add(v)
        missing = set(self.variables) - used
        if missing:
            raise SyntaxError_(f"{self.rel}: unused variables {sorted(missing)}")


BUILTIN_DDRS = {
    d.rel: d
    for d in (
        DescriptiveDefinition(
            "Trans", ("r",), ("a", "b", "c"),
            (RoleAtom("r", "a", "b"), RoleAtom("r", "b", "c")),
            (RoleAtom("r", "a", "c"),)),
        DescriptiveDefinition(
            "Refl", ("r",), ("a",), (), (RoleAtom("r", "a", "a"),)),
        DescriptiveDefinition(
            "Irr", ("r",), ("a",), (RoleAtom("r", "a", "a"),), ()),
        DescriptiveDefinition(
            "Asy", ("r",), ("a", "b"),
            (RoleAtom("r", "a", "b"), RoleAtom("r", "b", "a")), ()),
        DescriptiveDefinition(
            "Disj", ("r", "s"), ("a", "b"),
            (RoleAtom("r", "a", "b"), RoleAtom("s", "a", "b")), ()),
        DescriptiveDefinition(
            "Funct", ("r",), ("a", "b", "c"),
            (RoleAtom("r", "a", "b"), RoleAtom("r", "a", "c")),
            (EqAtom("b", "c"),)),
    )
}


def _atom_formula(atom, rolemap, env):
    """Instantiate an atom; env maps variables to individuals or holes."""
    if isinstance(atom, RoleAtom):
        return RoleAssertion(Role(rolemap[atom.role]), env[atom.x], env[atom.y])
    return Equality(env[atom.x], env[atom.y])


def _subst_atom(atom, varmap):
    if isinstance(atom, RoleAtom):
        return RoleAtom(atom.role, varmap[atom.x], varmap[atom.y])
    return EqAtom(varmap[atom.x], varmap[atom.y])


class RelLeft(Schema):
    """Left DDR: Rel plus all antecedent atoms principal, one premise per G_j."""

    def __init__(self, defn: DescriptiveDefinition, variables=None,
                 ante_atoms=None, cons_atoms=None, suffix=""):
        self.defn = defn
        self.variables = tuple(variables if variables is not None else defn.variables)
        self.ante_atoms = tuple(ante_atoms if ante_atoms is not None else defn.antecedent)
        self.cons_atoms = tuple(cons_atoms if cons_atoms is not None else defn.consequent)
        self.suffix = suffix
        self.name = f"{defn.rel}_l{suffix}"
        k = len(self.cons_atoms)
        self.kind = "initial" if k == 0 else ("unary" if k == 1 else "nary")
        self.can_close = k == 0

    def _match_atom(self, atom, f, rolemap, binding) -> Optional[dict]:
        if isinstance(atom, RoleAtom):
            if not (isinstance(f, RoleAssertion) and isinstance(f.role, Role)
                    and f.role.name == rolemap[atom.role]):
                return None
            pairs = ((atom.x, f.a), (atom.y, f.b))
        else:
            if not isinstance(f, Equality):
                return None
            pairs = ((atom.x, f.a), (atom.y, f.b))
        out = dict(binding)
        for var, val in pairs:
            if out.get(var, val) != val:
                return None
            out[var] = val
        return out

    def applications(self, seq: Sequent, targets=()):
        seen_rra = set()
        for rra in seq.ef_ante:
            if not (isinstance(rra, Rra) and rra.rel == self.defn.rel
                    and len(rra.roles) == len(self.defn.roles)
                    and rra not in seen_rra):
                continue
            seen_rra.add(rra)
            rolemap = dict(zip(self.defn.roles, rra.roles))
            yield from self._backtrack(seq, targets, rra, rolemap, 0, {},
                                       frozenset())

    def _backtrack(self, seq, targets, rra, rolemap, i, binding, used):
        # atoms are matched against distinct formula occurrences, so an
        # instance with duplicated atoms needs that many copies in the zone
        # (single copies are the business of the contracted variants)
        if i == len(self.ante_atoms):
            free = [v for v in self.variables if v not in binding]
            for combo in product(targets, repeat=len(free)):
                env = dict(binding)
                env.update(zip(free, combo))
                prem = tuple(efa(_atom_formula(g, rolemap, env))
                             for g in self.cons_atoms)
                key = (rra,) + tuple(env[v] for v in self.variables)
                yield Application(self.name, key, premises=prem)
            return
        atom = self.ante_atoms[i]
        for pos, f in enumerate(seq.ef_ante):
            if pos in used:
                continue
            b2 = self._match_atom(atom, f, rolemap, binding)
            if b2 is not None:
                yield from self._backtrack(seq, targets, rra, rolemap, i + 1,
                                           b2, used | {pos})


class RelRight(Schema):
    """Right DDR: consumes Rel on the right; all bound variables are eigen."""

    has_eigens = True

    def __init__(self, defn: DescriptiveDefinition):
        self.defn = defn
        self.name = f"{defn.rel}_r"

    def eigens_declared(self):
        return self.defn.variables

    def applications(self, seq: Sequent, targets=()):
        d = self.defn
        for rra in seq.ef_cons:
            if not (isinstance(rra, Rra) and rra.rel == d.rel
                    and len(rra.roles) == len(d.roles)):
                continue
            rolemap = dict(zip(d.roles, rra.roles))
            env = {v: Hole(v) for v in d.variables}
            adds = zjoin(
                efa(*(_atom_formula(a, rolemap, env) for a in d.antecedent)),
                efc(*(_atom_formula(g, rolemap, env) for g in d.consequent)))
            yield Application(self.name, (rra,), consume=efc(rra),
                              eigens=d.variables, premises=(adds,))


def compile_ddr(d: DescriptiveDefinition):
    """The raw left/right rule pair for one descriptive definition."""
    return RelLeft(d), RelRight(d)


# ---------------------------------------------------------------------------
# closure condition
# ---------------------------------------------------------------------------


def _partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in _partitions(rest):
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]
        yield [[first]] + p


def _signature(variables, ante, cons):
    order = []
    for atom in ante + cons:
        for v in (atom.x, atom.y):
            if v not in order:
                order.append(v)
    rename = {v: f"v{i}" for i, v in enumerate(order)}
    rename.update({v: v for v in variables if v not in rename})
    return (tuple(_subst_atom(a, rename) for a in ante),
            tuple(_subst_atom(g, rename) for g in cons))


def close_under_contraction(schema: RelLeft):
    """All contracted variants required by the closure condition.

    Iterates over partitions of the schema's variables; a partition whose
    induced substitution makes two principal atoms coincide contributes
    the variant with the duplicates merged.  The result contains the
    schema itself and is closed under further contraction.
    """
    variables = list(schema.variables)
    variants = {}
    for part in _partitions(variables):
        rep = {}
        for block in part:
            block_sorted = sorted(block, key=variables.index)
            for v in block:
                rep[v] = block_sorted[0]
        inst = [_subst_atom(a, rep) for a in schema.ante_atoms]
        if len(set(inst)) == len(inst):
            continue
        merged = []
        for a in inst:
            if a not in merged:
                merged.append(a)
        cons = [_subst_atom(g, rep) for g in schema.cons_atoms]
        new_vars = tuple(v for v in variables if rep[v] == v)
        sig = _signature(new_vars, tuple(merged), tuple(cons))
        if sig not in variants:
            variants[sig] = (new_vars, tuple(merged), tuple(cons))
    out = [schema]
    for i, sig in enumerate(sorted(variants, key=repr)):
        new_vars, merged, cons = variants[sig]
        out.append(RelLeft(schema.defn, new_vars, merged, cons,
                           suffix=schema.suffix + "'" * (i + 1)))
    return tuple(out)


# ---------------------------------------------------------------------------
# the assembled calculus
# ---------------------------------------------------------------------------


class UndefinedDdr(KeyError):
    pass


class Calculus:
    """An immutable rule set for one language profile."""

    def __init__(self, profile: LanguageProfile, schemas, ddrs, cyclic_order):
        self.profile = profile
        self.schemas = tuple(schemas)
        self.ddrs = dict(ddrs)
        names = [s.name for s in self.schemas]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise SyntaxError_(f"duplicate schema names: {dupes}")
        self.by_name = {s.name: s for s in self.schemas}
        self.cyclic_order = tuple(cyclic_order)
        if sorted(self.cyclic_order) != sorted(names):
            raise SyntaxError_("cyclic order must be a permutation of the schema set")
        self.closers = tuple(s for s in self.schemas
                             if s.kind == "initial" or s.can_close)

    def schema_names(self):
        return tuple(s.name for s in self.schemas)

    def __repr__(self):
        return f"<calculus {sorted(self.profile.flags)} with {len(self.schemas)} schemas>"


def _default_order(schemas):
    initials = [s for s in schemas if s.kind == "initial"]
    generators = [s for s in schemas if s.is_generator]
    eigens = [s for s in schemas
              if s.has_eigens and s.kind != "initial" and not s.is_generator]
    rest = [s for s in schemas
            if s not in initials and s not in generators and s not in eigens]
    return [s.name for s in initials + rest + eigens + generators]


def assemble_calculus(profile: LanguageProfile, ddrs: Iterable = (),
                      order=None) -> Calculus:
    """Build the full rule set for a dependency-closed profile.

    ``ddrs`` supplies user descriptive definitions; built-in names
    (Trans, Refl, Irr, Asy, Disj, Funct) resolve automatically.  Enabled
    definition names without a definition raise ``UndefinedDdr``.
    """
    profile = profile.normalized()
    user = {}
    for d in ddrs:
        if d.rel in user and user[d.rel] != d:
            raise SyntaxError_(f"conflicting definitions for {d.rel}")
        if d.rel in BUILTIN_DDRS and BUILTIN_DDRS[d.rel] != d:
            raise SyntaxError_(f"{d.rel} conflicts with the built-in definition")
        user[d.rel] = d

    defs = {}
    for name in sorted(profile.ddr_names):
        d = user.get(name) or BUILTIN_DDRS.get(name)
        if d is None:
            raise UndefinedDdr(name)
        defs[name] = d

    schemas = list(base_rules())
    for flag in FLAGS:
        if profile.has(flag) and flag in EXTENSION_GROUPS:
            schemas.extend(EXTENSION_GROUPS[flag]())
    for name in sorted(defs):
        left, right = compile_ddr(defs[name])
        schemas.extend(close_under_contraction(left))
        schemas.append(right)

    cyclic = list(order) if order is not None else _default_order(schemas)
    return Calculus(profile, schemas, defs, cyclic)


# ---------------------------------------------------------------------------
# application enumeration
# ---------------------------------------------------------------------------


def branch_targets(seq: Sequent):
    """Branch individuals in the linear order (users first, eigens by index).

    A branch mentioning no individual at all still gets one: the minimal
    individual of the order (generator rules must service somebody, or a
    sequent like ``top sub bot |-`` would never develop).
    """
    inds = tuple(sorted(free_individuals(seq), key=ind_key))
    return inds if inds else (eigen(0),)


def candidate_applications(schema: Schema, seq: Sequent):
    """All distinct applications of one schema on a sequent (template form)."""
    out, seen = [], set()
    targets = branch_targets(seq)
    for app in schema.applications(seq, targets):
        if app.key in seen:
            continue
        seen.add(app.key)
        out.append(app)
    return out


def is_redundant(app: Application, seq: Sequent) -> bool:
    """Every premise only re-adds formulae already on the branch."""
    if app.eigens or not app.premises:
        return False
    zones = tuple(set(z) for z in seq.zones())
    for prem in app.premises:
        for have, add in zip(zones, (prem.ef_ante, prem.if_ante,
                                     prem.if_cons, prem.ef_cons)):
            if any(f not in have for f in add):
                return False
    return True


def instantiate_fresh(app: Application, counter: int) -> Application:
    """Fill eigen holes with the next fresh eigen individuals."""
    assignment = {h: eigen(counter + i) for i, h in enumerate(app.eigens)}
    return app.instantiate(assignment)


def enumerate_applications(calc: Calculus, branch):
    """Non-redundant, unmarked applications of the branch's scheduled schema.

    Returns (schema name, match key, premise sequents) triples; eigen
    parameters are instantiated with the branch's next eigen individuals.
    """
    name = calc.cyclic_order[branch.rule_index % len(calc.cyclic_order)]
    schema = calc.by_name[name]
    out = []
    for app in candidate_applications(schema, branch.sequent):
        if (name, app.key) in branch.marks:
            continue
        if is_redundant(app, branch.sequent):
            continue
        concrete = instantiate_fresh(app, branch.eigen_counter)
        out.append((name, app.key, concrete.premise_sequents(branch.sequent)))
    return out

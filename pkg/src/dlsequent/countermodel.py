"""Finite interpretations: extraction from saturated branches and an oracle.

Interpretations store only the basic extensions (atomic concepts, named
roles, the individual map); everything else (inverses, chains, the
universal role, complex concepts) is computed on demand.

The brute-force oracle enumerates all interpretations over domain sizes
1..max_domain with a bitmask evaluator; a second, deliberately separate
object-based enumeration walks the space in the opposite order and is
used to cross-check the first.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from .calculus import BUILTIN_DDRS, DescriptiveDefinition, RoleAtom
from .rules import ind_key
from .syntax import (
    And,
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
    NegatedRoleAssertion,
    Nominal,
    Not,
    Or,
    Role,
    RoleAssertion,
    RoleTerm,
    Rra,
    SelfLoop,
    Sequent,
    Top,
    UnknownRra,
    Univ,
    free_individuals,
)


class UnmappedIndividual(KeyError):
    pass


class ExtractionError(ValueError):
    pass


class OracleLimit(ValueError):
    pass


@dataclass(frozen=True)
class Interpretation:
    domain: tuple  # element ids
    concept_ext: dict  # concept name -> frozenset of elements
    role_ext: dict  # role name -> frozenset of (element, element)
    individual_map: dict  # individual name -> element

    def to_obj(self) -> dict:
        return {
            "domain": list(self.domain),
            "concepts": {c: sorted(v) for c, v in sorted(self.concept_ext.items())},
            "roles": {r: sorted([list(p) for p in v])
                      for r, v in sorted(self.role_ext.items())},
            "individuals": dict(sorted(self.individual_map.items())),
        }


@dataclass(frozen=True)
class SatisfactionReport:
    formula: object
    holds: bool
    witness: object = None  # element or pair backing an existential verdict


# ---------------------------------------------------------------------------
# set-based evaluation (definition by definition from the semantics)
# ---------------------------------------------------------------------------


def role_extension(i: Interpretation, term: RoleTerm) -> frozenset:
    if isinstance(term, Role):
        return frozenset(i.role_ext.get(term.name, ()))
    if isinstance(term, Inv):
        return frozenset((b, a) for (a, b) in i.role_ext.get(term.name, ()))
    if isinstance(term, Univ):
        return frozenset((a, b) for a in i.domain for b in i.domain)
    if isinstance(term, Chain):
        ext = role_extension(i, term.parts[0])
        for part in term.parts[1:]:
            nxt = role_extension(i, part)
            ext = frozenset((a, c) for (a, b) in ext for (b2, c) in nxt if b == b2)
        return ext
    raise TypeError(f"unknown role term {term!r}")


def _element(i: Interpretation, a: Individual):
    try:
        return i.individual_map[a.name]
    except KeyError:
        raise UnmappedIndividual(a.name) from None


def concept_extension(i: Interpretation, c: Concept) -> frozenset:
    dom = frozenset(i.domain)
    if isinstance(c, ConceptName):
        return frozenset(i.concept_ext.get(c.name, ()))
    if isinstance(c, Top):
        return dom
    if isinstance(c, Bot):
        return frozenset()
    if isinstance(c, Not):
        return dom - concept_extension(i, c.sub)
    if isinstance(c, Or):
        return concept_extension(i, c.left) | concept_extension(i, c.right)
    if isinstance(c, And):
        return concept_extension(i, c.left) & concept_extension(i, c.right)
    if isinstance(c, Exists):
        r = role_extension(i, c.role)
        sub = concept_extension(i, c.sub)
        return frozenset(a for a in dom if any((a, b) in r and b in sub for b in dom))
    if isinstance(c, Forall):
        r = role_extension(i, c.role)
        sub = concept_extension(i, c.sub)
        return frozenset(a for a in dom
                         if all((a, b) not in r or b in sub for b in dom))
    if isinstance(c, Nominal):
        return frozenset((_element(i, c.individual),))
    if isinstance(c, AtMost):
        r = role_extension(i, c.role)
        sub = concept_extension(i, c.sub)
        return frozenset(a for a in dom
                         if len([b for b in dom if (a, b) in r and b in sub]) <= c.bound)
    if isinstance(c, AtLeast):
        r = role_extension(i, c.role)
        sub = concept_extension(i, c.sub)
        return frozenset(a for a in dom
                         if len([b for b in dom if (a, b) in r and b in sub]) >= c.bound)
    if isinstance(c, SelfLoop):
        r = role_extension(i, c.role)
        return frozenset(a for a in dom if (a, a) in r)
    raise TypeError(f"unknown concept {c!r}")


def _builtin_rra(i: Interpretation, f: Rra):
    """Short-circuit property checks for the built-in relational axioms."""
    exts = [role_extension(i, Role(r)) for r in f.roles]
    dom = sorted(i.domain)
    if f.rel == "Trans":
        r = exts[0]
        for (a, b) in sorted(r):
            for (b2, c) in sorted(r):
                if b == b2 and (a, c) not in r:
                    return False, (a, c)
        return True, None
    if f.rel == "Refl":
        for d in dom:
            if (d, d) not in exts[0]:
                return False, (d, d)
        return True, None
    if f.rel == "Irr":
        for d in dom:
            if (d, d) in exts[0]:
                return False, (d, d)
        return True, None
    if f.rel == "Asy":
        for (a, b) in sorted(exts[0]):
            if (b, a) in exts[0]:
                return False, (b, a)
        return True, None
    if f.rel == "Disj":
        both = exts[0] & exts[1]
        if both:
            return False, min(both)
        return True, None
    if f.rel == "Funct":
        r = sorted(exts[0])
        for (a, b) in r:
            for (a2, c) in r:
                if a == a2 and b != c:
                    return False, (b, c)
        return True, None
    raise UnknownRra(f.rel)


def rra_via_definition(i: Interpretation, f: Rra, defn: DescriptiveDefinition):
    """Evaluate an RRA through its first-order descriptive definition."""
    if len(f.roles) != len(defn.roles):
        raise UnknownRra(f"{f.rel} arity mismatch")
    rolemap = dict(zip(defn.roles, f.roles))
    exts = {r: role_extension(i, Role(rolemap[r])) for r in defn.roles}

    def atom_holds(atom, env):
        if isinstance(atom, RoleAtom):
            return (env[atom.x], env[atom.y]) in exts[atom.role]
        return env[atom.x] == env[atom.y]

    for combo in product(sorted(i.domain), repeat=len(defn.variables)):
        env = dict(zip(defn.variables, combo))
        if all(atom_holds(a, env) for a in defn.antecedent) and not any(
                atom_holds(g, env) for g in defn.consequent):
            return False, combo
    return True, None


def satisfies(i: Interpretation, f, ddrs=None) -> SatisfactionReport:
    """Exact finite-model satisfaction of one IF or EF."""
    registry = dict(BUILTIN_DDRS)
    registry.update(ddrs or {})
    if isinstance(f, ConceptAssertion):
        el = _element(i, f.subject)
        ext = concept_extension(i, f.concept)
        holds = el in ext
        witness = None
        if holds and isinstance(f.concept, Exists):
            r = role_extension(i, f.concept.role)
            sub = concept_extension(i, f.concept.sub)
            witness = min(b for b in i.domain if (el, b) in r and b in sub)
        elif holds and isinstance(f.concept, SelfLoop):
            witness = (el, el)
        return SatisfactionReport(f, holds, witness)
    if isinstance(f, Gci):
        sub = concept_extension(i, f.sub)
        sup = concept_extension(i, f.sup)
        missing = sub - sup
        return SatisfactionReport(f, not missing, min(missing) if missing else None)
    if isinstance(f, RoleAssertion):
        pair = (_element(i, f.a), _element(i, f.b))
        return SatisfactionReport(f, pair in role_extension(i, f.role))
    if isinstance(f, NegatedRoleAssertion):
        pair = (_element(i, f.a), _element(i, f.b))
        return SatisfactionReport(f, pair not in role_extension(i, Role(f.role)))
    if isinstance(f, Cria):
        lhs = role_extension(i, Chain(tuple(Role(n) for n in f.lhs))
                             if len(f.lhs) > 1 else Role(f.lhs[0]))
        rhs = role_extension(i, Role(f.rhs))
        missing = lhs - rhs
        return SatisfactionReport(f, not missing, min(missing) if missing else None)
    if isinstance(f, Rra):
        if f.rel in BUILTIN_DDRS and f.rel not in (ddrs or {}):
            holds, witness = _builtin_rra(i, f)
        else:
            defn = registry.get(f.rel)
            if defn is None:
                raise UnknownRra(f.rel)
            holds, witness = rra_via_definition(i, f, defn)
        return SatisfactionReport(f, holds, witness)
    if isinstance(f, Equality):
        return SatisfactionReport(f, _element(i, f.a) == _element(i, f.b))
    if isinstance(f, Inequality):
        return SatisfactionReport(f, _element(i, f.a) != _element(i, f.b))
    raise TypeError(f"cannot evaluate {f!r}")


def satisfies_sequent(i: Interpretation, s: Sequent, ddrs=None) -> bool:
    """True unless every antecedent formula holds and no consequent one does."""
    if not all(satisfies(i, f, ddrs).holds for f in s.antecedent()):
        return True
    return any(satisfies(i, f, ddrs).holds for f in s.consequent())


# ---------------------------------------------------------------------------
# extraction from a saturated branch
# ---------------------------------------------------------------------------


def extract_model(branch) -> Interpretation:
    """The quotient interpretation of a saturated branch.

    Individuals are identified when the branch derived their equality;
    the relation must come out an equivalence (reflexivity is supplied
    by construction, symmetry and transitivity by equality saturation).
    """
    if not getattr(branch, "saturated", False):
        raise ExtractionError("branch is not saturated")
    formulas = set(branch.theta) | set(branch.omega)
    inds = sorted({i for f in formulas for i in free_individuals(f)}, key=ind_key)
    eq = {(f.a, f.b) for f in branch.theta if isinstance(f, Equality)}
    sim = eq | {(a, a) for a in inds}

    for (a, b) in eq:
        if (b, a) not in sim:
            raise ExtractionError(f"~ not symmetric: {a.name} ~ {b.name} only")
    for (a, b) in sim:
        for (b2, c) in sim:
            if b == b2 and (a, c) not in sim:
                raise ExtractionError(
                    f"~ not transitive: {a.name} ~ {b.name} ~ {c.name}")

    rep = {}
    for a in inds:
        cls = sorted((b for b in inds if (a, b) in sim), key=ind_key)
        rep[a] = cls[0].name
    domain = tuple(sorted(set(rep.values())))
    if not domain:
        domain = ("d0",)  # interpretations need a non-empty domain

    concept_ext = {}
    role_ext = {}
    for f in branch.theta:
        if isinstance(f, ConceptAssertion) and isinstance(f.concept, ConceptName):
            concept_ext.setdefault(f.concept.name, set()).add(rep[f.subject])
        elif isinstance(f, RoleAssertion) and isinstance(f.role, Role):
            role_ext.setdefault(f.role.name, set()).add((rep[f.a], rep[f.b]))
    return Interpretation(
        domain,
        {c: frozenset(v) for c, v in concept_ext.items()},
        {r: frozenset(v) for r, v in role_ext.items()},
        {a.name: rep[a] for a in inds},
    )


# ---------------------------------------------------------------------------
# vocabulary
# ---------------------------------------------------------------------------


def _walk_concepts(x):
    if isinstance(x, Concept):
        yield x
    for attr in ("sub", "sup", "left", "right", "concept"):
        v = getattr(x, attr, None)
        if isinstance(v, Concept):
            yield from _walk_concepts(v)


def _role_names(term) -> set:
    if isinstance(term, (Role, Inv)):
        return {term.name}
    if isinstance(term, Chain):
        return set().union(*(_role_names(p) for p in term.parts))
    return set()


def vocabulary(s: Sequent):
    concepts, roles, rras = set(), set(), []
    for f in s.antecedent() + s.consequent():
        if isinstance(f, (ConceptAssertion, Gci)):
            for c in _walk_concepts(f):
                if isinstance(c, ConceptName):
                    concepts.add(c.name)
                elif isinstance(c, (Exists, Forall, AtMost, AtLeast, SelfLoop)):
                    roles |= _role_names(c.role)
        if isinstance(f, RoleAssertion):
            roles |= _role_names(f.role)
        elif isinstance(f, NegatedRoleAssertion):
            roles.add(f.role)
        elif isinstance(f, Cria):
            roles |= set(f.lhs) | {f.rhs}
        elif isinstance(f, Rra):
            roles |= set(f.roles)
            rras.append(f)
    inds = sorted(free_individuals(s), key=ind_key)
    return sorted(concepts), sorted(roles), inds, rras


# ---------------------------------------------------------------------------
# bitmask oracle
# ---------------------------------------------------------------------------


def _canonical_maps(n_inds: int, size: int):
    """Individual maps up to domain symmetry (restricted growth strings)."""
    if n_inds == 0:
        yield ()
        return

    def rec(i, used_max, cur):
        if i == n_inds:
            yield tuple(cur)
            return
        for v in range(min(used_max + 1, size - 1) + 1):
            cur.append(v)
            yield from rec(i + 1, max(used_max, v), cur)
            cur.pop()

    yield from rec(0, -1, [])


class _MaskEval:
    """Evaluate formulas over bitmask interpretations of a fixed size."""

    def __init__(self, size, registry):
        self.size = size
        self.full_c = (1 << size) - 1
        self.full_r = (1 << (size * size)) - 1
        self.registry = registry

    def row(self, rmask, a):
        return (rmask >> (a * self.size)) & self.full_c

    def transpose(self, rmask):
        out = 0
        n = self.size
        for a in range(n):
            for b in range(n):
                if rmask >> (a * n + b) & 1:
                    out |= 1 << (b * n + a)
        return out

    def compose(self, m1, m2):
        out = 0
        n = self.size
        for a in range(n):
            r1 = self.row(m1, a)
            acc = 0
            for c in range(n):
                if r1 >> c & 1:
                    acc |= self.row(m2, c)
            out |= acc << (a * n)
        return out

    def role_mask(self, term, roles):
        if isinstance(term, Role):
            return roles.get(term.name, 0)
        if isinstance(term, Inv):
            return self.transpose(roles.get(term.name, 0))
        if isinstance(term, Univ):
            return self.full_r
        if isinstance(term, Chain):
            m = self.role_mask(term.parts[0], roles)
            for p in term.parts[1:]:
                m = self.compose(m, self.role_mask(p, roles))
            return m
        raise TypeError(term)

    def concept_mask(self, c, concepts, roles, imap):
        if isinstance(c, ConceptName):
            return concepts.get(c.name, 0)
        if isinstance(c, Top):
            return self.full_c
        if isinstance(c, Bot):
            return 0
        if isinstance(c, Not):
            return self.full_c & ~self.concept_mask(c.sub, concepts, roles, imap)
        if isinstance(c, Or):
            return (self.concept_mask(c.left, concepts, roles, imap)
                    | self.concept_mask(c.right, concepts, roles, imap))
        if isinstance(c, And):
            return (self.concept_mask(c.left, concepts, roles, imap)
                    & self.concept_mask(c.right, concepts, roles, imap))
        if isinstance(c, Exists):
            r = self.role_mask(c.role, roles)
            sub = self.concept_mask(c.sub, concepts, roles, imap)
            return sum(1 << a for a in range(self.size) if self.row(r, a) & sub)
        if isinstance(c, Forall):
            r = self.role_mask(c.role, roles)
            sub = self.concept_mask(c.sub, concepts, roles, imap)
            return sum(1 << a for a in range(self.size)
                       if not (self.row(r, a) & ~sub & self.full_c))
        if isinstance(c, Nominal):
            return 1 << imap[c.individual.name]
        if isinstance(c, AtMost):
            r = self.role_mask(c.role, roles)
            sub = self.concept_mask(c.sub, concepts, roles, imap)
            return sum(1 << a for a in range(self.size)
                       if (self.row(r, a) & sub).bit_count() <= c.bound)
        if isinstance(c, AtLeast):
            r = self.role_mask(c.role, roles)
            sub = self.concept_mask(c.sub, concepts, roles, imap)
            return sum(1 << a for a in range(self.size)
                       if (self.row(r, a) & sub).bit_count() >= c.bound)
        if isinstance(c, SelfLoop):
            r = self.role_mask(c.role, roles)
            return sum(1 << a for a in range(self.size)
                       if r >> (a * self.size + a) & 1)
        raise TypeError(c)

    def rra_holds(self, f, roles):
        defn = self.registry.get(f.rel)
        if defn is None:
            raise UnknownRra(f.rel)
        rolemap = dict(zip(defn.roles, f.roles))
        masks = {r: roles.get(rolemap[r], 0) for r in defn.roles}

        def atom(at, env):
            if isinstance(at, RoleAtom):
                return masks[at.role] >> (env[at.x] * self.size + env[at.y]) & 1
            return env[at.x] == env[at.y]

        for combo in product(range(self.size), repeat=len(defn.variables)):
            env = dict(zip(defn.variables, combo))
            if all(atom(a, env) for a in defn.antecedent) and not any(
                    atom(g, env) for g in defn.consequent):
                return False
        return True

    def holds(self, f, concepts, roles, imap) -> bool:
        if isinstance(f, ConceptAssertion):
            return bool(self.concept_mask(f.concept, concepts, roles, imap)
                        >> imap[f.subject.name] & 1)
        if isinstance(f, Gci):
            sub = self.concept_mask(f.sub, concepts, roles, imap)
            sup = self.concept_mask(f.sup, concepts, roles, imap)
            return not (sub & ~sup & self.full_c)
        if isinstance(f, RoleAssertion):
            m = self.role_mask(f.role, roles)
            return bool(m >> (imap[f.a.name] * self.size + imap[f.b.name]) & 1)
        if isinstance(f, NegatedRoleAssertion):
            m = roles.get(f.role, 0)
            return not (m >> (imap[f.a.name] * self.size + imap[f.b.name]) & 1)
        if isinstance(f, Cria):
            lhs = self.role_mask(Chain(tuple(Role(n) for n in f.lhs))
                                 if len(f.lhs) > 1 else Role(f.lhs[0]), roles)
            rhs = roles.get(f.rhs, 0)
            return not (lhs & ~rhs & self.full_r)
        if isinstance(f, Rra):
            return self.rra_holds(f, roles)
        if isinstance(f, Equality):
            return imap[f.a.name] == imap[f.b.name]
        if isinstance(f, Inequality):
            return imap[f.a.name] != imap[f.b.name]
        raise TypeError(f)


def _stage(f) -> int:
    if isinstance(f, (Equality, Inequality)):
        return 0
    if isinstance(f, (RoleAssertion, NegatedRoleAssertion, Cria, Rra)):
        return 1
    return 2


_PLANE_CAP = 1 << 22  # joint role-config planes beyond this fall back to scalar


def find_countermodel(s: Sequent, max_domain: int, ddrs=None, *,
                      max_concepts=5, max_roles=3,
                      max_individuals=6) -> Optional[Interpretation]:
    """Exhaustive search for a falsifying interpretation of bounded size.

    Enumerates canonical individual maps, concept assignments, and the
    joint role-assignment plane (vectorized when the plane fits).
    Returns the first hit in canonical order, or None; None means no
    counter-model up to the bound, not validity.
    """
    registry = dict(BUILTIN_DDRS)
    registry.update(ddrs or {})
    concepts, roles, inds, rras = vocabulary(s)
    for f in rras:
        if f.rel not in registry:
            raise UnknownRra(f.rel)
    if len(concepts) > max_concepts or len(roles) > max_roles \
            or len(inds) > max_individuals:
        raise OracleLimit(
            f"vocabulary too large: {len(concepts)} concepts, "
            f"{len(roles)} roles, {len(inds)} individuals")

    ante = list(s.antecedent())
    cons = list(s.consequent())
    for size in range(1, max_domain + 1):
        plane = (1 << (size * size)) ** len(roles)
        if plane <= _PLANE_CAP:
            hit = _search_size_vector(s, size, registry, concepts, roles,
                                      inds, ante, cons, ddrs)
        else:
            hit = _search_size_scalar(s, size, registry, concepts, roles,
                                      inds, ante, cons, ddrs)
        if hit is not None:
            return hit
    return None


def _search_size_scalar(s, size, registry, concepts, roles, inds, ante,
                        cons, ddrs):
    ev = _MaskEval(size, registry)
    n_pairs = size * size
    a0 = [f for f in ante if _stage(f) == 0]
    c0 = [f for f in cons if _stage(f) == 0]
    a1 = [f for f in ante if _stage(f) == 1]
    c1 = [f for f in cons if _stage(f) == 1]
    a2 = [f for f in ante if _stage(f) == 2]
    c2 = [f for f in cons if _stage(f) == 2]
    for assignment in _canonical_maps(len(inds), size):
        imap = {ind.name: v for ind, v in zip(inds, assignment)}
        if not all(ev.holds(f, {}, {}, imap) for f in a0):
            continue
        if any(ev.holds(f, {}, {}, imap) for f in c0):
            continue
        for rvec in product(range(1 << n_pairs), repeat=len(roles)):
            rmask = dict(zip(roles, rvec))
            if not all(ev.holds(f, {}, rmask, imap) for f in a1):
                continue
            if any(ev.holds(f, {}, rmask, imap) for f in c1):
                continue
            for cvec in product(range(1 << size), repeat=len(concepts)):
                cmask = dict(zip(concepts, cvec))
                if not all(ev.holds(f, cmask, rmask, imap) for f in a2):
                    continue
                if any(ev.holds(f, cmask, rmask, imap) for f in c2):
                    continue
                model = _masks_to_interpretation(size, concepts, cmask,
                                                 roles, rmask, imap)
                assert not satisfies_sequent(model, s, ddrs), \
                    "oracle hit disagrees with the set evaluator"
                return model
    return None


# ---------------------------------------------------------------------------
# vectorized search over the joint role-assignment plane
# ---------------------------------------------------------------------------

_SIZE_TABLES = {}


def _tables(size):
    """Per-size lookup tables over all role configurations."""
    import numpy as np

    if size in _SIZE_TABLES:
        return _SIZE_TABLES[size]
    m = 1 << (size * size)
    full_c = (1 << size) - 1
    cfgs = np.arange(m, dtype=np.int64)
    rows = np.empty((m, size), dtype=np.int64)
    for a in range(size):
        rows[:, a] = (cfgs >> (a * size)) & full_c
    transpose = np.zeros(m, dtype=np.int64)
    for a in range(size):
        for b in range(size):
            bit = (cfgs >> (a * size + b)) & 1
            transpose |= bit << (b * size + a)
    pop = np.array([bin(x).count("1") for x in range(1 << size)], dtype=np.int64)
    ev = _MaskEval(size, {})
    # r transitive iff r;r is a subset of r
    trans_ok = np.fromiter(
        ((ev.compose(c, c) & ~c) == 0 for c in range(m)), dtype=bool, count=m)
    diag = sum(1 << (a * size + a) for a in range(size))
    refl_ok = (cfgs & diag) == diag
    irr_ok = (cfgs & diag) == 0
    asy_ok = (cfgs & transpose) == 0
    funct_ok = np.ones(m, dtype=bool)
    for a in range(size):
        funct_ok &= pop[rows[:, a]] <= 1
    tables = {
        "m": m, "rows": rows, "transpose": transpose, "pop": pop,
        "Trans": trans_ok, "Refl": refl_ok, "Irr": irr_ok, "Asy": asy_ok,
        "Funct": funct_ok,
    }
    _SIZE_TABLES[size] = tables
    return tables


class _PlaneEval:
    """Evaluate formulas pointwise over the joint role-configuration plane."""

    def __init__(self, size, registry, roles, imap):
        import numpy as np

        self.np = np
        self.size = size
        self.registry = registry
        self.full_c = (1 << size) - 1
        self.full_r = (1 << (size * size)) - 1
        self.t = _tables(size)
        self.imap = imap
        m = self.t["m"]
        if roles:
            grids = np.meshgrid(*([np.arange(m, dtype=np.int64)] * len(roles)),
                                indexing="ij")
            self.rvecs = {r: g.ravel() for r, g in zip(roles, grids)}
            self.n = self.rvecs[roles[0]].size
        else:
            self.rvecs = {}
            self.n = 1
        self.roles = roles

    def const(self, value):
        return self.np.full(self.n, value, dtype=self.np.int64)

    def row(self, rvec, a):
        return self.t["rows"][rvec, a]

    def compose_vec(self, v1, v2):
        np = self.np
        out = np.zeros_like(v1)
        for a in range(self.size):
            r1 = self.row(v1, a)
            acc = np.zeros_like(v1)
            for c in range(self.size):
                acc |= np.where(((r1 >> c) & 1) == 1, self.row(v2, c), 0)
            out |= acc << (a * self.size)
        return out

    def role_vec(self, term):
        if isinstance(term, Role):
            v = self.rvecs.get(term.name)
            return v if v is not None else self.const(0)
        if isinstance(term, Inv):
            base = self.rvecs.get(term.name)
            if base is None:
                return self.const(0)
            return self.t["transpose"][base]
        if isinstance(term, Univ):
            return self.const(self.full_r)
        if isinstance(term, Chain):
            v = self.role_vec(term.parts[0])
            for p in term.parts[1:]:
                v = self.compose_vec(v, self.role_vec(p))
            return v
        raise TypeError(term)

    def concept_vec(self, c, cmask):
        np = self.np
        if isinstance(c, ConceptName):
            return self.const(cmask.get(c.name, 0))
        if isinstance(c, Top):
            return self.const(self.full_c)
        if isinstance(c, Bot):
            return self.const(0)
        if isinstance(c, Not):
            return self.full_c & ~self.concept_vec(c.sub, cmask)
        if isinstance(c, Or):
            return self.concept_vec(c.left, cmask) | self.concept_vec(c.right, cmask)
        if isinstance(c, And):
            return self.concept_vec(c.left, cmask) & self.concept_vec(c.right, cmask)
        if isinstance(c, (Exists, Forall, AtMost, AtLeast)):
            rv = self.role_vec(c.role)
            sub = self.concept_vec(c.sub, cmask)
            out = np.zeros(self.n, dtype=np.int64)
            for a in range(self.size):
                hits = self.row(rv, a) & sub
                if isinstance(c, Exists):
                    bit = hits != 0
                elif isinstance(c, Forall):
                    bit = (self.row(rv, a) & ~sub & self.full_c) == 0
                elif isinstance(c, AtMost):
                    bit = self.t["pop"][hits] <= c.bound
                else:
                    bit = self.t["pop"][hits] >= c.bound
                out |= bit.astype(np.int64) << a
            return out
        if isinstance(c, Nominal):
            return self.const(1 << self.imap[c.individual.name])
        if isinstance(c, SelfLoop):
            rv = self.role_vec(c.role)
            out = np.zeros(self.n, dtype=np.int64)
            for a in range(self.size):
                out |= ((rv >> (a * self.size + a)) & 1) << a
            return out
        raise TypeError(c)

    def rra_vec(self, f):
        np = self.np
        if f.rel == "Trans":
            return self.t["Trans"][self.rvecs.get(f.roles[0], self.const(0))]
        if f.rel in ("Refl", "Irr", "Asy", "Funct"):
            return self.t[f.rel][self.rvecs.get(f.roles[0], self.const(0))]
        if f.rel == "Disj":
            v1 = self.role_vec(Role(f.roles[0]))
            v2 = self.role_vec(Role(f.roles[1]))
            return (v1 & v2) == 0
        defn = self.registry.get(f.rel)
        if defn is None:
            raise UnknownRra(f.rel)
        rolemap = dict(zip(defn.roles, f.roles))
        violated = np.zeros(self.n, dtype=bool)
        for combo in product(range(self.size), repeat=len(defn.variables)):
            env = dict(zip(defn.variables, combo))
            ante = np.ones(self.n, dtype=bool)
            for at in defn.antecedent:
                if isinstance(at, RoleAtom):
                    v = self.role_vec(Role(rolemap[at.role]))
                    ante &= ((v >> (env[at.x] * self.size + env[at.y])) & 1) == 1
                else:
                    ante &= self.const(env[at.x] == env[at.y]).astype(bool)
            cons = np.zeros(self.n, dtype=bool)
            for at in defn.consequent:
                if isinstance(at, RoleAtom):
                    v = self.role_vec(Role(rolemap[at.role]))
                    cons |= ((v >> (env[at.x] * self.size + env[at.y])) & 1) == 1
                else:
                    cons |= self.const(env[at.x] == env[at.y]).astype(bool)
            violated |= ante & ~cons
        return ~violated

    def truth_vec(self, f, cmask):
        np = self.np
        imap = self.imap
        if isinstance(f, ConceptAssertion):
            cv = self.concept_vec(f.concept, cmask)
            return ((cv >> imap[f.subject.name]) & 1) == 1
        if isinstance(f, Gci):
            sub = self.concept_vec(f.sub, cmask)
            sup = self.concept_vec(f.sup, cmask)
            return (sub & ~sup & self.full_c) == 0
        if isinstance(f, RoleAssertion):
            v = self.role_vec(f.role)
            bit = imap[f.a.name] * self.size + imap[f.b.name]
            return ((v >> bit) & 1) == 1
        if isinstance(f, NegatedRoleAssertion):
            v = self.role_vec(Role(f.role))
            bit = imap[f.a.name] * self.size + imap[f.b.name]
            return ((v >> bit) & 1) == 0
        if isinstance(f, Cria):
            lhs = self.role_vec(Chain(tuple(Role(n) for n in f.lhs))
                                if len(f.lhs) > 1 else Role(f.lhs[0]))
            rhs = self.role_vec(Role(f.rhs))
            return (lhs & ~rhs & self.full_r) == 0
        if isinstance(f, Rra):
            return self.rra_vec(f)
        if isinstance(f, Equality):
            return self.const(imap[f.a.name] == imap[f.b.name]).astype(bool)
        if isinstance(f, Inequality):
            return self.const(imap[f.a.name] != imap[f.b.name]).astype(bool)
        raise TypeError(f)


def _search_size_vector(s, size, registry, concepts, roles, inds, ante,
                        cons, ddrs):
    import numpy as np

    a01 = [f for f in ante if _stage(f) <= 1]
    c01 = [f for f in cons if _stage(f) <= 1]
    a2 = [f for f in ante if _stage(f) == 2]
    c2 = [f for f in cons if _stage(f) == 2]

    for assignment in _canonical_maps(len(inds), size):
        imap = {ind.name: v for ind, v in zip(inds, assignment)}
        ev = _PlaneEval(size, registry, roles, imap)
        ok1 = np.ones(ev.n, dtype=bool)
        for f in a01:
            ok1 &= ev.truth_vec(f, {})
            if not ok1.any():
                break
        if not ok1.any():
            continue
        for f in c01:
            ok1 &= ~ev.truth_vec(f, {})
            if not ok1.any():
                break
        if not ok1.any():
            continue
        for cvec in product(range(1 << size), repeat=len(concepts)):
            cmask = dict(zip(concepts, cvec))
            ok = ok1.copy()
            for f in a2:
                ok &= ev.truth_vec(f, cmask)
                if not ok.any():
                    break
            else:
                for f in c2:
                    ok &= ~ev.truth_vec(f, cmask)
                    if not ok.any():
                        break
            if not ok.any():
                continue
            idx = int(np.argmax(ok))
            rmask = {r: int(ev.rvecs[r][idx]) for r in roles}
            model = _masks_to_interpretation(size, concepts, cmask, roles,
                                             rmask, imap)
            assert not satisfies_sequent(model, s, ddrs), \
                "oracle hit disagrees with the set evaluator"
            return model
    return None


def _masks_to_interpretation(size, concepts, cmask, roles, rmask, imap):
    return Interpretation(
        tuple(range(size)),
        {c: frozenset(e for e in range(size) if cmask[c] >> e & 1)
         for c in concepts},
        {r: frozenset((a, b) for a in range(size) for b in range(size)
                      if rmask[r] >> (a * size + b) & 1) for r in roles},
        dict(imap),
    )


def find_countermodel_reversed(s: Sequent, max_domain: int,
                               ddrs=None) -> Optional[Interpretation]:
    """Second, independent enumeration in the opposite order.

    Walks domain sizes downward and extensions from full to empty, builds
    real Interpretation objects and evaluates with ``satisfies_sequent``.
    Only meant for tiny vocabularies; used to cross-check the oracle.
    """
    concepts, roles, inds, _ = vocabulary(s)
    for size in range(max_domain, 0, -1):
        domain = tuple(range(size))
        pairs = [(a, b) for a in domain for b in domain]
        imaps = list(product(domain, repeat=len(inds)))
        for assignment in reversed(imaps):
            imap = {ind.name: v for ind, v in zip(inds, assignment)}
            for rvec in reversed(list(product(range(1 << len(pairs)),
                                              repeat=len(roles)))):
                role_ext = {r: frozenset(p for k, p in enumerate(pairs)
                                         if rvec[j] >> k & 1)
                            for j, r in enumerate(roles)}
                for cvec in reversed(list(product(range(1 << size),
                                                  repeat=len(concepts)))):
                    concept_ext = {c: frozenset(e for e in domain
                                                if cvec[j] >> e & 1)
                                   for j, c in enumerate(concepts)}
                    model = Interpretation(domain, concept_ext, role_ext, imap)
                    if not satisfies_sequent(model, s, ddrs):
                        return model
    return None

"""Height-preserving proof transformations, executable and checkable.

Implemented by structural recursion on proofs:

  * generalized identity: a proof of ``ctx + X |- X + ctx`` for any
    formula X, by recursion on the weight of X;
  * weakening and substitution: context surgery with on-the-fly renaming
    of eigenvariables that would be captured;
  * inversion: premises of kernel-retaining rules come from weakening,
    the rest by pushing the target instance up through the proof;
  * contraction: recursion with inversion; a contracted duplicate of a
    rule's principal formulae switches the node to the closure-condition
    variant of the rule (that is what the closure condition is for).

Every output is a proof of height at most the input's height.
"""

from __future__ import annotations

from itertools import permutations
from .calculus import Calculus, candidate_applications
from .parser import check_profile
from .prover import (
    ProofTree,
    ResolvedApp,
    find_closing,
    match_app_to_children,
    resolve_instance,
)
from .rules import Application, Zones, ind_key
from .syntax import (
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
    NegatedRoleAssertion,
    Nominal,
    Not,
    Or,
    And,
    Role,
    RoleAssertion,
    Rra,
    SelfLoop,
    Sequent,
    Top,
    UnknownRra,
    eigen,
    free_individuals,
    is_ef,
    ms_remove,
    sequent as mk_sequent,
    substitute,
)

TRANSFORM_KINDS = ("weaken_left", "weaken_right", "contract_left",
                   "contract_right", "substitute")


class TransformError(ValueError):
    pass


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------


def _tree_individuals(t: ProofTree) -> set:
    out = set()
    for node in t.nodes():
        out |= free_individuals(node.conclusion)
        out |= {e for e in node.eigens if isinstance(e, Individual)}
    return out


def _fresh_allocator(avoid):
    counter = 1
    for i in avoid:
        if i.origin == "eigen":
            counter = max(counter, i.index + 1)
    taken = {i.name for i in avoid}

    def fresh() -> Individual:
        nonlocal counter
        while True:
            cand = eigen(counter)
            counter += 1
            if cand.name not in taken:
                taken.add(cand.name)
                return cand

    return fresh


def _resolve(calc: Calculus, t: ProofTree) -> ResolvedApp:
    res = resolve_instance(calc, t)
    if res is None:
        raise TransformError(f"cannot resolve rule instance {t.rule!r} "
                             f"at {t.conclusion}")
    return res


def _rename_below(t: ProofTree, frm: Individual, to: Individual) -> ProofTree:
    """Blind rename inside a subtree; only safe when ``to`` is fresh for it."""
    return ProofTree(
        substitute(t.conclusion, frm, to),
        t.rule,
        tuple(to if e == frm else e for e in t.eigens),
        tuple(_rename_below(c, frm, to) for c in t.children),
    )


def _rename_node_eigens(t: ProofTree, res: ResolvedApp, bad, avoid) -> ProofTree:
    """Rename this node's eigenvariables that occur in ``bad`` to fresh names."""
    clashes = [e for e in res.app.eigens if e in bad]
    if not clashes:
        return t
    fresh = _fresh_allocator(set(avoid) | _tree_individuals(t) | set(bad))
    children = list(t.children)
    eigens = list(t.eigens)
    for e in clashes:
        new = fresh()
        children = [_rename_below(c, e, new) for c in children]
        eigens = [new if x == e else x for x in eigens]
    return ProofTree(t.conclusion, t.rule, tuple(eigens), tuple(children))


def _add_zones_seq(seq: Sequent, z: Zones) -> Sequent:
    return Sequent(seq.ef_ante + z.ef_ante, seq.if_ante + z.if_ante,
                   seq.if_cons + z.if_cons, seq.ef_cons + z.ef_cons)


def _zone_formulas(z: Zones):
    for idx, zone in enumerate((z.ef_ante, z.if_ante, z.if_cons, z.ef_cons)):
        for f in zone:
            yield idx, f


def _remove_one(seq: Sequent, zidx: int, f) -> Sequent:
    zones = list(seq.zones())
    zones[zidx] = ms_remove(zones[zidx], (f,))
    return Sequent(*zones)


def _count(seq: Sequent, zidx: int, f) -> int:
    return sum(1 for g in seq.zones()[zidx] if g == f)


def _rederive_subset(calc: Calculus, conclusion: Sequent, children):
    """Find any one-step derivation of ``conclusion`` from a subset of children.

    Returns (rule name, concrete application, chosen child trees) or None.
    Unused children are discarded, which only ever lowers the height.
    """
    child_seqs = [c.conclusion for c in children]
    for schema in calc.schemas:
        seen = set()
        for app in schema.applications(
                conclusion, _targets(conclusion, child_seqs)):
            if app.key in seen:
                continue
            seen.add(app.key)
            p = len(app.premises)
            if p > len(children):
                continue
            for combo in permutations(range(len(children)), p):
                picked = [child_seqs[j] for j in combo]
                res = match_app_to_children(app, conclusion, picked)
                if res is not None:
                    chosen = [children[combo[j]] for j in res.child_order]
                    return schema.name, res.app, chosen
    return None


def _targets(conclusion, child_seqs):
    inds = set(free_individuals(conclusion))
    for cs in child_seqs:
        inds |= free_individuals(cs)
    return tuple(sorted(inds, key=ind_key))


def _rebuild(calc: Calculus, rule: str, conclusion: Sequent, eigens,
             children) -> ProofTree:
    """Build a node and verify it; fall back to any one-step re-derivation.

    The fallback realizes the closure-condition switch: when a contracted
    conclusion no longer carries enough principal copies for the original
    rule, some contracted variant (or another rule instance) must cover it.
    """
    node = ProofTree(conclusion, rule, tuple(eigens), tuple(children))
    if resolve_instance(calc, node) is not None:
        return node
    found = _rederive_subset(calc, conclusion, list(children))
    if found is None:
        raise TransformError(
            f"no rule instance derives {conclusion} after transformation")
    name, app, chosen = found
    return ProofTree(conclusion, name, app.eigens, tuple(chosen))


# ---------------------------------------------------------------------------
# weakening
# ---------------------------------------------------------------------------


def _weaken(calc: Calculus, t: ProofTree, adds: Zones) -> ProofTree:
    if not any((adds.ef_ante, adds.if_ante, adds.if_cons, adds.ef_cons)):
        return t
    add_inds = set()
    for _, f in _zone_formulas(adds):
        add_inds |= free_individuals(f)
    return _wk(calc, t, adds, frozenset(add_inds))


def _wk(calc, t, adds, add_inds):
    if t.children:
        res = _resolve(calc, t)
        t = _rename_node_eigens(t, res, add_inds, add_inds)
        new_children = tuple(_wk(calc, c, adds, add_inds) for c in t.children)
        return ProofTree(_add_zones_seq(t.conclusion, adds), t.rule,
                         t.eigens, new_children)
    new_concl = _add_zones_seq(t.conclusion, adds)
    if resolve_instance(calc, ProofTree(new_concl, t.rule)) is not None:
        return ProofTree(new_concl, t.rule)
    app = find_closing(calc, new_concl)
    if app is None:
        raise TransformError(f"weakened leaf no longer closes: {new_concl}")
    return ProofTree(new_concl, app.schema)


def weaken_left(t: ProofTree, formulas, calc: Calculus) -> ProofTree:
    ef = tuple(f for f in formulas if is_ef(f))
    iff = tuple(f for f in formulas if not is_ef(f))
    return _weaken(calc, t, Zones(ef_ante=ef, if_ante=iff))


def weaken_right(t: ProofTree, formulas, calc: Calculus) -> ProofTree:
    ef = tuple(f for f in formulas if is_ef(f))
    iff = tuple(f for f in formulas if not is_ef(f))
    return _weaken(calc, t, Zones(if_cons=iff, ef_cons=ef))


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------


def substitute_proof(t: ProofTree, frm: Individual, to: Individual,
                     calc: Calculus) -> ProofTree:
    """Replace ``frm`` by ``to`` throughout; eigenvariables are renamed away."""
    if frm == to:
        return t
    return _sub(calc, t, frm, to)


def _sub(calc, t, frm, to):
    if not t.children:
        new_concl = substitute(t.conclusion, frm, to)
        if resolve_instance(calc, ProofTree(new_concl, t.rule)) is not None:
            return ProofTree(new_concl, t.rule)
        app = find_closing(calc, new_concl)
        if app is None:
            raise TransformError(f"substituted leaf no longer closes: {new_concl}")
        return ProofTree(new_concl, app.schema)
    res = _resolve(calc, t)
    t = _rename_node_eigens(t, res, {frm, to}, {frm, to})
    children = tuple(_sub(calc, c, frm, to) for c in t.children)
    return ProofTree(substitute(t.conclusion, frm, to), t.rule,
                     t.eigens, children)


# ---------------------------------------------------------------------------
# inversion
# ---------------------------------------------------------------------------


def _consume_empty(app: Application) -> bool:
    c = app.consume
    return not (c.ef_ante or c.if_ante or c.if_cons or c.ef_cons)


def _sorted_key(fs):
    from .syntax import fkey

    return tuple(sorted(fs, key=fkey))


def _same_instance(a: ResolvedApp, target: Application) -> bool:
    """Same schema, same consumed formulae, same additions modulo eigens."""
    if a.app.schema != target.schema:
        return False
    for za, zt in zip(a.app.consume.zones(), target.consume.zones()):
        if _sorted_key(za) != _sorted_key(zt):
            return False
    if len(a.app.eigens) != len(target.eigens):
        return False
    if len(a.app.premises) != len(target.premises):
        return False
    ren = dict(zip(a.app.eigens, target.eigens))

    def rename(f):
        out = f
        for x, y in ren.items():
            out = substitute(out, x, y)
        return out

    for pa, pt in zip(a.app.premises, target.premises):
        for za, zt in zip(pa.zones(), pt.zones()):
            if _sorted_key(tuple(rename(f) for f in za)) != _sorted_key(zt):
                return False
    return True


def _invert(calc: Calculus, t: ProofTree, target: Application,
            premise_index: int) -> ProofTree:
    """A proof of the target instance's premise, height at most height(t)."""
    if _consume_empty(target):
        adds = target.premises[premise_index]
        return _weaken(calc, t, adds)
    try:
        goal = target.premise_sequents(t.conclusion)[premise_index]
    except ValueError:
        raise TransformError(
            f"cannot push {target.schema!r} inversion past {t.rule!r}: "
            f"its principal is gone at {t.conclusion}") from None
    if not t.children:
        app = find_closing(calc, goal)
        if app is None:
            raise TransformError(f"inverted initial sequent no longer closes: {goal}")
        return ProofTree(goal, app.schema)
    res = _resolve(calc, t)
    if _same_instance(res, target):
        child = t.children[res.child_order[premise_index]]
        for have, want in zip(res.app.eigens, target.eigens):
            if have != want:
                child = substitute_proof(child, have, want, calc)
        return child
    children = []
    for i in range(len(res.app.premises)):
        child = t.children[res.child_order[i]]
        children.append(_invert(calc, child, target, premise_index))
    return _rebuild(calc, t.rule, goal, res.app.eigens, children)


def invert(schema_name: str, premise_index: int, t: ProofTree,
           calc: Calculus) -> ProofTree:
    """Derive the indicated premise of the first matching rule instance."""
    schema = calc.by_name.get(schema_name)
    if schema is None:
        raise TransformError(f"unknown schema {schema_name!r}")
    apps = candidate_applications(schema, t.conclusion)
    if not apps:
        raise TransformError(
            f"conclusion does not match {schema_name!r}: {t.conclusion}")
    template = apps[0]
    if premise_index >= len(template.premises):
        raise TransformError(f"{schema_name!r} has no premise {premise_index}")
    fresh = _fresh_allocator(_tree_individuals(t))
    assignment = {h: fresh() for h in template.eigens}
    target = template.instantiate(assignment)
    return _invert(calc, t, target, premise_index)


# ---------------------------------------------------------------------------
# contraction
# ---------------------------------------------------------------------------


def _ctr(calc: Calculus, t: ProofTree, zidx: int, x) -> ProofTree:
    """Merge two copies of x in zone ``zidx`` of the conclusion into one."""
    new_concl = _remove_one(t.conclusion, zidx, x)
    if not t.children:
        app = find_closing(calc, new_concl)
        if app is None:
            raise TransformError(f"contracted initial sequent no longer closes:"
                                 f" {new_concl}")
        return ProofTree(new_concl, app.schema)

    res = _resolve(calc, t)
    consumed = sum(1 for g in res.app.consume.zones()[zidx] if g == x)

    if consumed == 0:
        children = []
        for i in range(len(res.app.premises)):
            child = t.children[res.child_order[i]]
            children.append(_ctr(calc, child, zidx, x))
        return _rebuild(calc, t.rule, new_concl, res.app.eigens, children)

    # the instance consumed one duplicate; invert it at the remaining copy
    children = []
    for i in range(len(res.app.premises)):
        child = t.children[res.child_order[i]]
        if _count(child.conclusion, zidx, x) >= 2:
            children.append(_ctr(calc, child, zidx, x))
            continue
        fresh = _fresh_allocator(_tree_individuals(t))
        renaming = {e: fresh() for e in res.app.eigens}
        rebased = res.app
        for e, e2 in renaming.items():
            rebased = _subst_app(rebased, e, e2)
        u = _invert(calc, child, rebased, i)
        for e, e2 in renaming.items():
            u = substitute_proof(u, e2, e, calc)
        for zj, g in _zone_formulas(res.app.premises[i]):
            u = _ctr(calc, u, zj, g)
        children.append(u)
    return _rebuild(calc, t.rule, new_concl, res.app.eigens, children)


def _subst_app(app: Application, frm, to) -> Application:
    import dataclasses as _dc

    return _dc.replace(
        app,
        consume=substitute(app.consume, frm, to),
        premises=tuple(substitute(p, frm, to) for p in app.premises),
        eigens=tuple(to if e == frm else e for e in app.eigens),
    )


def contract_left(t: ProofTree, formulas, calc: Calculus) -> ProofTree:
    for f in formulas:
        zidx = 0 if is_ef(f) else 1
        if _count(t.conclusion, zidx, f) < 2:
            raise TransformError(f"cannot contract {f}: not duplicated")
        t = _ctr(calc, t, zidx, f)
    return t


def contract_right(t: ProofTree, formulas, calc: Calculus) -> ProofTree:
    for f in formulas:
        zidx = 3 if is_ef(f) else 2
        if _count(t.conclusion, zidx, f) < 2:
            raise TransformError(f"cannot contract {f}: not duplicated")
        t = _ctr(calc, t, zidx, f)
    return t


def transform(kind: str, t: ProofTree, payload, calc: Calculus) -> ProofTree:
    """Dispatch on the structural-rule kind.

    Payloads: weaken_* take an iterable of formulas (routed to zones by
    class), contract_* an iterable of duplicated formulas, substitute a
    pair (from_individual, to_individual).
    """
    if kind == "weaken_left":
        return weaken_left(t, payload, calc)
    if kind == "weaken_right":
        return weaken_right(t, payload, calc)
    if kind == "contract_left":
        return contract_left(t, payload, calc)
    if kind == "contract_right":
        return contract_right(t, payload, calc)
    if kind == "substitute":
        frm, to = payload
        return substitute_proof(t, frm, to, calc)
    raise TransformError(f"unknown transform kind {kind!r}")


# ---------------------------------------------------------------------------
# generalized identity
# ---------------------------------------------------------------------------


def derive_identity(x, calc: Calculus, context: Sequent = Sequent()) -> ProofTree:
    """A proof of ``context + x |- x + context``, by recursion on weight."""
    check_profile(x, calc.profile)
    check_profile(context, calc.profile)
    fresh = _fresh_allocator(free_individuals(context) | free_individuals(x))

    def has(name):
        return name in calc.by_name

    def goal(ctx: Sequent, f) -> Sequent:
        return mk_sequent(ctx.antecedent() + (f,), (f,) + ctx.consequent())

    def with_ante(ctx, *fs) -> Sequent:
        return mk_sequent(ctx.antecedent() + fs, ctx.consequent())

    def with_cons(ctx, *fs) -> Sequent:
        return mk_sequent(ctx.antecedent(), ctx.consequent() + fs)

    def build(f, ctx: Sequent) -> ProofTree:
        g = goal(ctx, f)
        if isinstance(f, ConceptAssertion):
            return build_if(f, ctx, g)
        return build_ef(f, ctx, g)

    def leaf(g: Sequent, rule: str) -> ProofTree:
        return ProofTree(g, rule)

    def build_if(f, ctx, g):
        a, c = f.subject, f.concept
        if isinstance(c, ConceptName):
            return leaf(g, "id_c")
        if isinstance(c, Top):
            return leaf(g, "top_r")
        if isinstance(c, Bot):
            return leaf(g, "bot_l")
        if isinstance(c, Not):
            sub = ConceptAssertion(a, c.sub)
            inner = build(sub, ctx)
            p1 = with_ante(with_ante(ctx, f), sub)
            return ProofTree(g, "neg_r", (),
                             (ProofTree(p1, "neg_l", (), (inner,)),))
        if isinstance(c, Or):
            l, r = ConceptAssertion(a, c.left), ConceptAssertion(a, c.right)
            c1 = ProofTree(with_cons(with_ante(ctx, l), f), "or_r", (),
                           (build(l, with_cons(ctx, r)),))
            c2 = ProofTree(with_cons(with_ante(ctx, r), f), "or_r", (),
                           (build(r, with_cons(ctx, l)),))
            return ProofTree(g, "or_l", (), (c1, c2))
        if isinstance(c, And):
            l, r = ConceptAssertion(a, c.left), ConceptAssertion(a, c.right)
            p1 = with_cons(with_ante(ctx, l, r), f)
            c1 = build(l, with_ante(ctx, r))
            c2 = build(r, with_ante(ctx, l))
            return ProofTree(g, "and_l", (),
                             (ProofTree(p1, "and_r", (), (c1, c2)),))
        if isinstance(c, Exists):
            b = fresh()
            ra = RoleAssertion(c.role, a, b)
            bp = ConceptAssertion(b, c.sub)
            inner = build(bp, with_cons(with_ante(ctx, ra), f))
            p1 = with_cons(with_ante(ctx, ra, bp), f)
            return ProofTree(g, "ex_l", (b,),
                             (ProofTree(p1, "ex_r", (), (inner,)),))
        if isinstance(c, Forall):
            b = fresh()
            ra = RoleAssertion(c.role, a, b)
            bp = ConceptAssertion(b, c.sub)
            inner = build(bp, with_ante(ctx, f, ra))
            p1 = with_cons(with_ante(ctx, f, ra), bp)
            return ProofTree(g, "all_r", (b,),
                             (ProofTree(p1, "all_l", (), (inner,)),))
        if isinstance(c, Nominal):
            eq = Equality(a, c.individual)
            p1 = with_ante(g, eq)
            p2 = with_cons(p1, eq)
            return ProofTree(g, "nom_l1", (),
                             (ProofTree(p1, "nom_r1", (),
                                        (leaf(p2, "id_r"),)),))
        if isinstance(c, SelfLoop):
            ra = RoleAssertion(c.role, a, a)
            p1 = with_cons(with_ante(ctx, f), ra)
            p2 = with_cons(with_ante(ctx, ra), ra)
            return ProofTree(g, "self_r", (),
                             (ProofTree(p1, "self_l", (), (leaf(p2, "id_r"),)),))
        if isinstance(c, (AtMost, AtLeast)):
            return build_counting(f, ctx, g)
        raise TransformError(f"identity underivable for {f}")

    def counting_names(c):
        # over top, prefer the unqualified rule set when it is available
        if isinstance(c.sub, Top) and has("atmostu_l"):
            return "atmostu_l", "atmostu_r", "atleastu_l", "atleastu_r", False
        return "atmost_l", "atmost_r", "atleast_l", "atleast_r", True

    def build_counting(f, ctx, g):
        a, c = f.subject, f.concept
        ml, mr, ll, lr, qualified = counting_names(c)
        n = c.bound
        if isinstance(c, AtLeast):
            bs = [fresh() for _ in range(n)]
            root_rule, top_rule = ll, lr
        else:
            bs = [fresh() for _ in range(n + 1)]
            root_rule, top_rule = mr, ml
        ras = tuple(RoleAssertion(c.role, a, b) for b in bs)
        bps = tuple(ConceptAssertion(b, c.sub) for b in bs) if qualified else ()
        eqs = tuple(Equality(bs[i], bs[j])
                    for i in range(len(bs)) for j in range(i + 1, len(bs)))
        # premise of the eigen rule: the retained copy of f plus the new material
        if isinstance(c, AtLeast):
            p1 = with_cons(with_ante(with_cons(ctx, f), *(ras + bps)), *eqs)
        else:
            p1 = with_cons(with_ante(with_ante(ctx, f), *(ras + bps)), *eqs)
        children = []
        if qualified:
            for i, b in enumerate(bs):
                sub_ctx = _ctx_minus(p1, ConceptAssertion(b, c.sub))
                children.append(build(ConceptAssertion(b, c.sub), sub_ctx))
        for i in range(len(bs)):
            for j in range(i + 1, len(bs)):
                pij = with_ante(p1, Equality(bs[i], bs[j]))
                children.append(leaf(pij, "id_r"))
        if children:
            top = ProofTree(p1, top_rule, (), tuple(children))
        else:
            top = leaf(p1, top_rule)  # zero premises: the rule closes
        return ProofTree(g, root_rule, tuple(bs), (top,))

    def _ctx_minus(seq: Sequent, f) -> Sequent:
        zidx = 1 if not is_ef(f) else 0
        return _remove_one(seq, zidx, f)

    def build_ef(f, ctx, g):
        if isinstance(f, (Equality,)):
            return leaf(g, "id_r")
        if isinstance(f, RoleAssertion):
            if isinstance(f.role, Chain):
                return build_chain(f, ctx, g)
            return leaf(g, "id_r")
        if isinstance(f, Inequality):
            eq = Equality(f.a, f.b)
            p1 = with_ante(with_ante(ctx, f), eq)
            p2 = with_cons(with_ante(ctx, eq), eq)
            return ProofTree(g, "neq_r", (),
                             (ProofTree(p1, "neq_l", (), (leaf(p2, "id_r"),)),))
        if isinstance(f, NegatedRoleAssertion):
            ra = RoleAssertion(Role(f.role), f.a, f.b)
            p1 = with_ante(with_ante(ctx, f), ra)
            p2 = with_cons(with_ante(ctx, ra), ra)
            return ProofTree(g, "negrole_r", (),
                             (ProofTree(p1, "negrole_l", (), (leaf(p2, "id_r"),)),))
        if isinstance(f, Gci):
            b = fresh()
            bp = ConceptAssertion(b, f.sub)
            bq = ConceptAssertion(b, f.sup)
            inner = build(bq, with_ante(ctx, f, bp))
            p1 = with_cons(with_ante(ctx, f, bp), bq)
            return ProofTree(g, "sub_r", (b,),
                             (ProofTree(p1, "sub_l", (), (inner,)),))
        if isinstance(f, Cria):
            return build_cria(f, ctx, g)
        if isinstance(f, Rra):
            return build_rra(f, ctx, g)
        raise TransformError(f"identity underivable for {f}")

    def build_chain(f, ctx, g):
        parts = f.role.parts
        c = fresh()
        prefix = parts[0] if len(parts) == 2 else Chain(parts[:-1])
        ra1 = RoleAssertion(prefix, f.a, c)
        ra2 = RoleAssertion(parts[-1], c, f.b)
        p1 = with_cons(with_ante(ctx, ra1, ra2), f)
        k1 = build(ra1, _ctx_minus_ef(p1, ra1))
        k2 = build(ra2, _ctx_minus_ef(p1, ra2))
        return ProofTree(g, "comp_l", (c,),
                         (ProofTree(p1, "comp_r", (), (k1, k2)),))

    def _ctx_minus_ef(seq, f):
        return _remove_one(seq, 0, f)

    def build_cria(f, ctx, g):
        names = ("ria_l", "ria_r") if (len(f.lhs) == 1 and has("ria_l")) \
            else ("cria_l", "cria_r")
        a, b = fresh(), fresh()
        lhs = RoleAssertion(
            Role(f.lhs[0]) if len(f.lhs) == 1
            else Chain(tuple(Role(n) for n in f.lhs)), a, b)
        rab = RoleAssertion(Role(f.rhs), a, b)
        p1 = with_cons(with_ante(ctx, f, lhs), rab)
        k1 = build(lhs, _ctx_minus_ef(p1, lhs))
        k2 = leaf(with_ante(p1, rab), "id_r")
        return ProofTree(g, names[1], (a, b),
                         (ProofTree(p1, names[0], (), (k1, k2)),))

    def build_rra(f, ctx, g):
        defn = calc.ddrs.get(f.rel)
        if defn is None:
            raise UnknownRra(f.rel)
        rolemap = dict(zip(defn.roles, f.roles))
        env = {v: fresh() for v in defn.variables}

        def atom(at):
            from .calculus import RoleAtom

            if isinstance(at, RoleAtom):
                return RoleAssertion(Role(rolemap[at.role]), env[at.x], env[at.y])
            return Equality(env[at.x], env[at.y])

        fs = tuple(atom(at) for at in defn.antecedent)
        gs = tuple(atom(at) for at in defn.consequent)
        p1 = with_cons(with_ante(ctx, f, *fs), *gs)
        if gs:
            children = tuple(leaf(with_ante(p1, gj), "id_r") for gj in gs)
            top = ProofTree(p1, f"{f.rel}_l", (), children)
        else:
            top = leaf(p1, f"{f.rel}_l")
        return ProofTree(g, f"{f.rel}_r", tuple(env[v] for v in defn.variables),
                         (top,))

    return build(x, context)

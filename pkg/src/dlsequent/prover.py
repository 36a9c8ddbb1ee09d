"""Fair backward proof search with saturation detection, plus the checker.

The search walks the calculus' cyclic rule order, applying at most one
new application per schema visit, so over any horizon every schema gets
its fair share of visits.  Branches are explored depth-first; each branch
owns its marks (applied matches), its eigen counter and its schedule
position.  A branch closes when some zero-premise application fits; it
saturates when a full cycle yields no new application.  Saturation of a
single branch settles the whole search: the branch yields a counter-model
for the root.
"""

from __future__ import annotations

import json
import sys
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Optional

from .calculus import (
    Calculus,
    candidate_applications,
    instantiate_fresh,
    is_redundant,
)
from .parser import check_profile, parse_sequent
from .rules import Application, ind_key, match_multiset
from .syntax import (
    Individual,
    Sequent,
    free_individuals,
    ms_contains,
    ms_remove,
    show,
)

PROVED = "proved"
SATURATED = "saturated"
BUDGET = "budget"


@dataclass(frozen=True)
class ProofTree:
    conclusion: Sequent
    rule: Optional[str]  # None marks an open leaf in partial trees
    eigens: tuple = ()
    children: tuple = ()

    @property
    def height(self) -> int:
        if not self.children:
            return 0
        return 1 + max(c.height for c in self.children)

    def nodes(self):
        yield self
        for c in self.children:
            yield from c.nodes()


@dataclass(frozen=True)
class BranchState:
    sequent: Sequent
    theta: frozenset  # antecedent formulae accumulated along the branch
    omega: frozenset  # consequent formulae accumulated along the branch
    marks: frozenset  # applied (schema, match) pairs incl. serviced targets
    eigen_counter: int
    rule_index: int = 0
    saturated: bool = False


@dataclass(frozen=True)
class Budget:
    steps: int = 10_000
    max_branch_formulas: int = 2_000
    max_depth: Optional[int] = None


@dataclass
class SearchStats:
    steps: int = 0
    branch_count: int = 0
    max_branch_size: int = 0
    schedule_counts: Counter = field(default_factory=Counter)


@dataclass
class SearchOutcome:
    verdict: str  # PROVED | SATURATED | BUDGET
    tree: Optional[ProofTree]
    branch: Optional[BranchState]
    stats: SearchStats


def initial_branch(root: Sequent) -> BranchState:
    counter = 1
    for i in free_individuals(root):
        if i.origin == "eigen":
            counter = max(counter, i.index + 1)
    return BranchState(root, frozenset(root.antecedent()),
                       frozenset(root.consequent()), frozenset(), counter)


def find_closing(calc: Calculus, seq: Sequent) -> Optional[Application]:
    """First zero-premise application: the branch is an initial sequent."""
    for schema in calc.closers:
        for app in candidate_applications(schema, seq):
            if not app.premises:
                return app
    return None


def prove(root: Sequent, calc: Calculus, budget: Budget = Budget()) -> SearchOutcome:
    """Run the bottom-up procedure; deterministic for fixed inputs."""
    check_profile(root, calc.profile)
    stats = SearchStats()
    order = calc.cyclic_order
    n_rules = len(order)

    def search(state: BranchState, depth: int):
        seq = state.sequent
        stats.branch_count += 1
        size = sum(len(z) for z in seq.zones())
        stats.max_branch_size = max(stats.max_branch_size, size)
        if size > budget.max_branch_formulas:
            return BUDGET, ProofTree(seq, None)
        if budget.max_depth is not None and depth > budget.max_depth:
            return BUDGET, ProofTree(seq, None)

        closing = find_closing(calc, seq)
        if closing is not None:
            return PROVED, ProofTree(seq, closing.schema)

        marks = set(state.marks)
        for k in range(n_rules):
            idx = (state.rule_index + k) % n_rules
            name = order[idx]
            schema = calc.by_name[name]
            stats.schedule_counts[name] += 1
            if schema.kind == "initial":
                continue
            chosen = None
            for app in candidate_applications(schema, seq):
                mk = (name, app.key)
                if mk in marks:
                    continue
                if is_redundant(app, seq):
                    marks.add(mk)
                    continue
                chosen = app
                break
            if chosen is None:
                continue
            if stats.steps >= budget.steps:
                return BUDGET, ProofTree(seq, None)
            stats.steps += 1
            marks.add((name, chosen.key))
            concrete = instantiate_fresh(chosen, state.eigen_counter)
            premises = concrete.premise_sequents(seq)
            children = []
            for i, prem in enumerate(premises):
                child = BranchState(
                    prem,
                    state.theta | set(prem.antecedent()),
                    state.omega | set(prem.consequent()),
                    frozenset(marks),
                    state.eigen_counter + len(concrete.eigens),
                    (idx + 1) % n_rules,
                )
                tag, payload = search(child, depth + 1)
                if tag == SATURATED:
                    return SATURATED, payload
                if tag == BUDGET:
                    rest = tuple(ProofTree(p, None) for p in premises[i + 1:])
                    return BUDGET, ProofTree(seq, concrete.schema, concrete.eigens,
                                             tuple(children) + (payload,) + rest)
                children.append(payload)
            return PROVED, ProofTree(seq, concrete.schema, concrete.eigens,
                                     tuple(children))
        return SATURATED, replace(state, marks=frozenset(marks), saturated=True)

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 3 * budget.steps + 1000))
    try:
        tag, payload = search(initial_branch(root), 0)
    finally:
        sys.setrecursionlimit(old_limit)
    if tag == PROVED:
        return SearchOutcome(PROVED, payload, None, stats)
    if tag == SATURATED:
        return SearchOutcome(SATURATED, None, payload, stats)
    return SearchOutcome(BUDGET, payload, None, stats)


# ---------------------------------------------------------------------------
# proof checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResolvedApp:
    """A node's rule application recovered by the checker."""

    app: Application  # concrete (holes filled)
    child_order: tuple  # child_order[i] = index of the child proving premise i


@dataclass(frozen=True)
class CheckReport:
    valid: bool
    error: Optional[str] = None
    where: Optional[str] = None

    def __bool__(self):
        return self.valid


def _zone_diff(child: Sequent, base: Sequent):
    """Per-zone multiset difference child - base, or None if base not below child."""
    out = []
    for c, b in zip(child.zones(), base.zones()):
        if not ms_contains(c, b):
            return None
        out.append(ms_remove(c, b))
    return out


def match_app_to_children(app: Application, conclusion: Sequent,
                          child_seqs) -> Optional[ResolvedApp]:
    """Try to realize ``app`` so its premises are exactly the children."""
    if len(app.premises) != len(child_seqs):
        return None
    consume_zones = (app.consume.ef_ante, app.consume.if_ante,
                     app.consume.if_cons, app.consume.ef_cons)
    for z_have, z_need in zip(conclusion.zones(), consume_zones):
        if not ms_contains(z_have, z_need):
            return None
    base = Sequent(
        ms_remove(conclusion.ef_ante, app.consume.ef_ante),
        ms_remove(conclusion.if_ante, app.consume.if_ante),
        ms_remove(conclusion.if_cons, app.consume.if_cons),
        ms_remove(conclusion.ef_cons, app.consume.ef_cons),
    )
    diffs = []
    for cs in child_seqs:
        d = _zone_diff(cs, base)
        if d is None:
            return None
        diffs.append(d)

    conclusion_inds = free_individuals(conclusion)

    def bind_premise(prem, diff, binding):
        for tmpl, actual in zip((prem.ef_ante, prem.if_ante, prem.if_cons,
                                 prem.ef_cons), diff):
            binding = match_multiset(list(tmpl), list(actual), binding)
            if binding is None:
                return None
        return binding

    def assign(i, used, binding):
        if i == len(app.premises):
            return [], binding
        for j in range(len(child_seqs)):
            if j in used:
                continue
            b2 = bind_premise(app.premises[i], diffs[j], binding)
            if b2 is None:
                continue
            rest = assign(i + 1, used | {j}, b2)
            if rest is not None:
                order, final = rest
                return [j] + order, final
        return None

    res = assign(0, frozenset(), {})
    if res is None:
        return None
    order, binding = res
    if set(binding) != set(app.eigens):
        return None
    values = [binding[h] for h in app.eigens]
    if len(set(values)) != len(values):
        return None
    for v in values:
        if not isinstance(v, Individual) or v in conclusion_inds:
            return None
    concrete = app.instantiate(binding)
    expected = concrete.premise_sequents(conclusion)
    for i, j in enumerate(order):
        if expected[i] != child_seqs[j]:
            return None
    return ResolvedApp(concrete, tuple(order))


def _checker_targets(conclusion, child_seqs):
    inds = set(free_individuals(conclusion))
    for cs in child_seqs:
        inds |= free_individuals(cs)
    return tuple(sorted(inds, key=ind_key))


def resolve_instance(calc: Calculus, node: ProofTree) -> Optional[ResolvedApp]:
    """Recover which application of the node's rule produced its children."""
    schema = calc.by_name.get(node.rule)
    if schema is None:
        return None
    child_seqs = [c.conclusion for c in node.children]
    targets = _checker_targets(node.conclusion, child_seqs)
    seen = set()
    for app in schema.applications(node.conclusion, targets):
        if app.key in seen:
            continue
        seen.add(app.key)
        res = match_app_to_children(app, node.conclusion, child_seqs)
        if res is not None:
            return res
    return None


def rederive(calc: Calculus, conclusion: Sequent, child_seqs):
    """Find any single rule instance deriving ``conclusion`` from the children."""
    targets = _checker_targets(conclusion, child_seqs)
    for schema in calc.schemas:
        seen = set()
        for app in schema.applications(conclusion, targets):
            if app.key in seen:
                continue
            seen.add(app.key)
            res = match_app_to_children(app, conclusion, child_seqs)
            if res is not None:
                return res
    return None


def check_proof(tree: ProofTree, calc: Calculus) -> CheckReport:
    """Independent verifier: every node must instantiate a schema of the calculus."""

    def walk(node, path):
        if node.rule is None:
            return CheckReport(False, "open leaf (no rule)", path)
        if node.rule not in calc.by_name:
            return CheckReport(False, f"unknown rule {node.rule!r}", path)
        res = resolve_instance(calc, node)
        if res is None:
            msg = f"no valid instance of {node.rule!r} matches this node"
            if node.rule == "id_r":
                shared = set(node.conclusion.ef_ante) & set(node.conclusion.ef_cons)
                from .rules import IdR

                if shared and not any(IdR.admissible(f) for f in shared):
                    msg = "id_r: F must be of the form r(a,b) or a = b"
            eig = _eigen_clash(calc, node)
            if eig:
                msg = eig
            return CheckReport(False, msg, path)
        for i, child in enumerate(node.children):
            r = walk(child, f"{path}.{i}")
            if not r.valid:
                return r
        return CheckReport(True)

    return walk(tree, "root")


def _eigen_clash(calc, node) -> Optional[str]:
    """Diagnose the common failure: an eigenvariable occurring in the conclusion."""
    schema = calc.by_name.get(node.rule)
    if schema is None or not schema.has_eigens:
        return None
    for e in node.eigens:
        if isinstance(e, Individual) and e in free_individuals(node.conclusion):
            return f"{node.rule}: eigenvariable {e.name} occurs in the conclusion"
    return None


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def tree_to_text(tree: ProofTree) -> str:
    lines = []

    def walk(node, depth):
        rule = node.rule if node.rule is not None else "open"
        lines.append("  " * depth + f"{rule}: {show(node.conclusion)}")
        for c in node.children:
            walk(c, depth + 1)

    walk(tree, 0)
    return "\n".join(lines)


def tree_to_obj(tree: ProofTree) -> dict:
    return {
        "conclusion": show(tree.conclusion),
        "rule": tree.rule,
        "bindings": {"eigens": [e.name for e in tree.eigens]},
        "children": [tree_to_obj(c) for c in tree.children],
    }


def tree_to_json(tree: ProofTree, indent=None) -> str:
    return json.dumps(tree_to_obj(tree), indent=indent)


def tree_from_obj(obj: dict, profile) -> ProofTree:
    import re

    from .syntax import EIGEN_PREFIX

    eigens = []
    for name in obj.get("bindings", {}).get("eigens", ()):
        m = re.fullmatch(re.escape(EIGEN_PREFIX) + r"(\d+)", name)
        eigens.append(Individual(name, "eigen", int(m.group(1))) if m
                      else Individual(name))
    return ProofTree(
        parse_sequent(obj["conclusion"], profile, allow_eigen=True),
        obj.get("rule"),
        tuple(eigens),
        tuple(tree_from_obj(c, profile) for c in obj.get("children", ())),
    )


def tree_from_json(text: str, profile) -> ProofTree:
    return tree_from_obj(json.loads(text), profile)


def rule_sequence(tree: ProofTree):
    """Pre-order rule names; text and JSON renderings share this sequence."""
    return [n.rule for n in tree.nodes()]

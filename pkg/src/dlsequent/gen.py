"""Seeded random generators for formulae, sequents and checked proofs.

Used by the acceptance corpus and the experiment scripts.  Every
generator draws from a caller-supplied ``random.Random`` so corpora are
reproducible from a seed.
"""

from __future__ import annotations

import random
from typing import Optional

from .calculus import assemble_calculus
from .prover import PROVED, Budget, prove
from .syntax import (
    ALC,
    And,
    AtLeast,
    AtMost,
    Bot,
    ConceptAssertion,
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
    Role,
    RoleAssertion,
    Rra,
    SelfLoop,
    Top,
    UNIVERSAL,
    ConceptName,
    Chain,
    Sequent,
    profile,
    sequent as mk_sequent,
)

# profiles rotated through by the corpus generators; one counting flavor
# at a time (the N rules are redundant next to the Q rules)
CORPUS_PROFILES = (
    ALC,
    profile("equality"),
    profile("equality", "inequality"),
    profile("nominals"),
    profile("inverses"),
    profile("compose", ddrs=("Trans",)),
    profile(ddrs=("Refl", "Irr")),
    profile(ddrs=("Asy", "Disj")),
    profile("functionality"),
    profile("rias"),
    profile("crias"),
    profile("unqualified_counting"),
    profile("qualified_counting"),
    profile("negated_roles"),
    profile("universal_role"),
    profile("self_concept"),
)


class TermGen:
    def __init__(self, rng: random.Random, prof: LanguageProfile,
                 concepts=("C", "D", "E"), roles=("r", "s"),
                 individuals=("a", "b", "c", "d"), max_bound=2):
        self.rng = rng
        self.profile = prof.normalized()
        self.concepts = concepts
        self.roles = roles
        self.individuals = [Individual(n) for n in individuals]
        self.max_bound = max_bound

    def individual(self) -> Individual:
        return self.rng.choice(self.individuals)

    def role_name(self) -> str:
        return self.rng.choice(self.roles)

    def role_term(self):
        opts = ["named"]
        if self.profile.has("inverses"):
            opts.append("inv")
        if self.profile.has("universal_role"):
            opts.append("univ")
        pick = self.rng.choice(opts)
        if pick == "inv":
            return Inv(self.role_name())
        if pick == "univ":
            return UNIVERSAL
        return Role(self.role_name())

    def concept(self, depth=2):
        leaves = ["name", "top", "bot"]
        if self.profile.has("nominals"):
            leaves.append("nominal")
        if self.profile.has("self_concept"):
            leaves.append("self")
        inner = []
        if depth > 0:
            inner = ["not", "or", "and", "some", "all"]
            if self.profile.has("qualified_counting"):
                inner += ["atmost", "atleast"]
            if self.profile.has("unqualified_counting"):
                inner += ["atmostu", "atleastu"]
        pick = self.rng.choice(leaves + inner * 2)
        if pick == "name":
            return ConceptName(self.rng.choice(self.concepts))
        if pick == "top":
            return Top()
        if pick == "bot":
            return Bot()
        if pick == "nominal":
            return Nominal(self.individual())
        if pick == "self":
            return SelfLoop(Role(self.role_name()))
        if pick == "not":
            return Not(self.concept(depth - 1))
        if pick == "or":
            return Or(self.concept(depth - 1), self.concept(depth - 1))
        if pick == "and":
            return And(self.concept(depth - 1), self.concept(depth - 1))
        if pick == "some":
            return Exists(self.role_term(), self.concept(depth - 1))
        if pick == "all":
            return Forall(self.role_term(), self.concept(depth - 1))
        n = self.rng.randint(0, self.max_bound)
        if pick == "atmost":
            return AtMost(n, self.role_term(), self.concept(depth - 1))
        if pick == "atleast":
            return AtLeast(n, self.role_term(), self.concept(depth - 1))
        if pick == "atmostu":
            return AtMost(n, self.role_term(), Top())
        return AtLeast(n, self.role_term(), Top())

    def formula(self, depth=2):
        opts = ["if", "if", "gci", "role"]
        if self.profile.has("equality"):
            opts.append("eq")
        if self.profile.has("inequality"):
            opts.append("neq")
        if self.profile.has("negated_roles"):
            opts.append("negrole")
        if self.profile.has("compose"):
            opts.append("chain")
        if self.profile.has("rias") or self.profile.has("crias"):
            opts.append("cria")
        if self.profile.ddr_names:
            opts.append("rra")
        pick = self.rng.choice(opts)
        if pick == "if":
            return ConceptAssertion(self.individual(), self.concept(depth))
        if pick == "gci":
            return Gci(self.concept(depth - 1), self.concept(depth - 1))
        if pick == "role":
            return RoleAssertion(self.role_term(), self.individual(),
                                 self.individual())
        if pick == "eq":
            return Equality(self.individual(), self.individual())
        if pick == "neq":
            return Inequality(self.individual(), self.individual())
        if pick == "negrole":
            return NegatedRoleAssertion(self.role_name(), self.individual(),
                                        self.individual())
        if pick == "chain":
            parts = tuple(Role(self.role_name()) for _ in range(2))
            return RoleAssertion(Chain(parts), self.individual(),
                                 self.individual())
        if pick == "cria":
            n = 1 if not self.profile.has("crias") else self.rng.randint(1, 2)
            return Cria(tuple(self.role_name() for _ in range(n)),
                        self.role_name())
        name = self.rng.choice(sorted(self.profile.ddr_names))
        if name == "Disj":
            pool = list(self.roles) if len(self.roles) >= 2 else ["r", "s"]
            return Rra(name, tuple(self.rng.sample(pool, 2)))
        return Rra(name, (self.role_name(),))

    def sequent(self, max_ante=3, max_cons=2) -> Sequent:
        ante = [self.formula() for _ in range(self.rng.randint(0, max_ante))]
        cons = [self.formula() for _ in range(self.rng.randint(0, max_cons))]
        return mk_sequent(ante, cons)


def _pools(rng: random.Random, prof: LanguageProfile):
    """Draw a per-sequent vocabulary within the corpus bounds."""
    n_concepts = rng.choice((1, 1, 2, 2, 3))
    n_roles = 2 if "Disj" in prof.ddr_names else rng.choice((1, 1, 1, 2))
    n_inds = rng.choice((1, 2, 2, 3, 4))
    return (("C", "D", "E")[:n_concepts], ("r", "s")[:n_roles],
            ("a", "b", "c", "d")[:n_inds])


def corpus(seed: int, size: int, profiles=CORPUS_PROFILES):
    """Yield (profile, sequent) pairs, rotating through the profiles."""
    rng = random.Random(seed)
    for i in range(size):
        prof = profiles[i % len(profiles)]
        concepts, roles, inds = _pools(rng, prof)
        gen = TermGen(rng, prof, concepts=concepts, roles=roles,
                      individuals=inds)
        yield prof, gen.sequent()


def proved_trees(seed: int, count: int, max_height=6,
                 budget: Optional[Budget] = None, profiles=CORPUS_PROFILES):
    """Checked proof trees harvested from proof search on random sequents."""
    rng = random.Random(seed)
    budget = budget or Budget(steps=300, max_branch_formulas=200)
    calcs = {id(p): assemble_calculus(p) for p in profiles}
    out = []
    i = 0
    while len(out) < count and i < count * 200:
        prof = profiles[i % len(profiles)]
        gen = TermGen(rng, prof)
        s = gen.sequent()
        i += 1
        calc = calcs[id(prof)]
        outcome = prove(s, calc, budget)
        if outcome.verdict == PROVED and outcome.tree.height <= max_height:
            out.append((prof, calc, outcome.tree))
    return out

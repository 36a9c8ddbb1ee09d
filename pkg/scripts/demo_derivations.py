#!/usr/bin/env python3
"""A gallery: proofs, counter-models and proof transformations.

Walks a handful of sequents across language profiles, printing the proof
tree or the extracted counter-model, then demonstrates the structural
transformations on a generalized identity derivation.
"""

from dlsequent.calculus import assemble_calculus
from dlsequent.countermodel import extract_model, find_countermodel
from dlsequent.meta import contract_left, derive_identity, invert, weaken_left
from dlsequent.parser import parse_formula, parse_sequent
from dlsequent.prover import PROVED, SATURATED, Budget, check_proof, prove, tree_to_text
from dlsequent.syntax import FLAGS, profile, show

GALLERY = [
    ("plain ALC", profile(), "a : (C and D) |- a : (D or E)"),
    ("plain ALC", profile(), "|- (C and D) sub C"),
    ("plain ALC", profile(), "C sub D, D sub E, a : C |- a : E"),
    ("transitivity axiom", profile(ddrs=("Trans",)),
     "Trans(r), r(a,b), r(b,c) |- r(a,c)"),
    ("role composition", profile("crias"),
     "r;s sub t, r(a,b), s(b,c) |- t(a,c)"),
    ("nominals", profile("nominals"), "a : {b}, b : C |- a : C"),
    ("functionality", profile("functionality"),
     "Funct(r), r(a,b), r(a,c), b : C |- c : C"),
    ("inverses", profile("inverses"), "r(a,b) |- a : some r top"),
    ("counting", profile("qualified_counting"),
     "a : atleast 2 r C |- a : atleast 1 r C"),
    ("self loops", profile("self_concept"), "a : self r |- r(a,a)"),
    ("an invalid one", profile(), "C sub D |- D sub C"),
]


def main():
    for label, prof, text in GALLERY:
        calc = assemble_calculus(prof)
        seq = parse_sequent(text, prof)
        out = prove(seq, calc, Budget(steps=12_000))
        print(f"== {label}: {show(seq)}")
        if out.verdict == PROVED:
            assert check_proof(out.tree, calc).valid
            print(tree_to_text(out.tree))
        elif out.verdict == SATURATED:
            model = extract_model(out.branch)
            print(f"counter-model: {model.to_obj()}")
            oracle = find_countermodel(seq, 3, calc.ddrs)
            print(f"oracle agrees: {oracle is not None}")
        else:
            print("budget exhausted")
        print()

    print("== structural transformations on an identity derivation")
    full = profile(*FLAGS, ddrs=("Trans",))
    calc = assemble_calculus(full)
    t = derive_identity(parse_formula("a : some r (C and {b})", full), calc)
    print(tree_to_text(t))
    extra = parse_formula("d : E", full)
    w = weaken_left(t, [extra, extra], calc)
    c = contract_left(w, [extra], calc)
    print(f"\nweakened twice then contracted: {show(c.conclusion)}")
    print(f"heights: identity={t.height} weakened={w.height} contracted={c.height}")
    inv = invert("ex_l", 0, t, calc)
    print(f"inverted first premise of ex_l: {show(inv.conclusion)}")
    for name, tree in (("identity", t), ("contracted", c), ("inverted", inv)):
        assert check_proof(tree, calc).valid, name
    print("all transformed proofs re-check")


if __name__ == "__main__":
    main()

import random

import pytest

from procalc import semantics, syntax as S
from procalc.syntax import (
    Label, LabelError, Nil, Prefix, Sum, Par, Restrict, Rec, Var,
    ExtChoice, IntChoice, IfacePar, Hide, Rename, SyncClause,
    NIL, STOP, canonicalise, sort_ccs, alphabet_csp,
)

import genterms


def test_complement_involution_all_kinds():
    rng = random.Random(7)
    for _ in range(50):
        base = rng.choice("abcdefg") + str(rng.randint(0, 99))
        complementable = [
            S.name(base), S.coname(base), S.sync(base), S.cosync(base),
            S.indexed(base, (1, 4)), S.coindexed(base, (2,)),
        ]
        for label in complementable:
            assert label.complement().complement() == label
            assert label.complement() != label
    for label in (S.tau(), S.taupair("a"), S.tauevent(), S.tick()):
        with pytest.raises(LabelError):
            label.complement()


def test_base_name_validation():
    with pytest.raises(LabelError):
        S.name("tau")
    with pytest.raises(LabelError):
        S.name("chan_S")
    with pytest.raises(LabelError):
        S.name("1abc")
    with pytest.raises(LabelError):
        S.name("")
    assert S.name("a_b1").base == "a_b1"


def test_indexed_indices_strictly_increasing():
    with pytest.raises(LabelError):
        S.indexed("a", (2, 1))
    with pytest.raises(LabelError):
        S.indexed("a", (1, 1))
    with pytest.raises(LabelError):
        S.indexed("a", ())
    assert S.indexed("a", (1, 2, 5)).indices == (1, 2, 5)


def test_sync_clause_validation():
    with pytest.raises(LabelError):
        SyncClause(S.name("a"), 1)
    with pytest.raises(LabelError):
        SyncClause(S.tauevent(), 2)
    with pytest.raises(LabelError):
        SyncClause(S.coname("a"), 2)
    assert SyncClause(S.name("a")).multiplicity is None


def test_sort_ccs_examples():
    p = Par(Prefix(S.name("a"), NIL), Prefix(S.coname("a"), NIL))
    assert sort_ccs(p) == {S.name("a"), S.coname("a")}
    assert sort_ccs(NIL) == set()


def test_sort_ccs_under_rec_matches_unfolding_oracle():
    # oracle: collect the prefixes of a three-step unfolding
    p = Rec("X", Par(Prefix(S.name("a"), NIL),
                     Prefix(S.coname("a"), Var("X"))))
    unfolded = p
    for _ in range(3):
        unfolded = S.substitute(p.body, "X", unfolded)
    assert sort_ccs(unfolded) == {S.name("a"), S.coname("a")}
    assert sort_ccs(p) == sort_ccs(unfolded)


def test_sort_distributes_over_parallel():
    rng = random.Random(11)
    for _ in range(40):
        p = genterms.random_ccs(rng, depth=4, max_par=3)
        q = genterms.random_ccs(rng, depth=4, max_par=3)
        assert sort_ccs(Par(p, q)) == sort_ccs(p) | sort_ccs(q)


def test_alphabet_csp_examples():
    p = ExtChoice(Prefix(S.name("a"), STOP), Prefix(S.sync("a"), STOP))
    assert alphabet_csp(p) == {S.name("a"), S.sync("a")}
    hidden = Hide(Prefix(S.sync("a"), STOP), frozenset({S.sync("a")}))
    assert alphabet_csp(hidden) == set()


def test_alphabet_csp_rename_matches_lts_labels():
    # oracle: the labels that actually occur in the generated LTS
    renamed = Rename(Prefix(S.name("a"), STOP),
                     {S.name("a"): {S.indexed("a", (1, 2)), S.indexed("a", (1, 3))}})
    expected = {S.indexed("a", (1, 2)), S.indexed("a", (1, 3))}
    assert alphabet_csp(renamed) == expected
    lts = semantics.build_lts(renamed, "cspmn")
    labels = {label for _, label, _ in lts.transitions}
    assert labels == expected


def test_alphabet_distributes_over_ifacepar():
    rng = random.Random(13)
    for _ in range(30):
        p = genterms.gen_csp_sequential(rng, 3)
        q = genterms.gen_csp_sequential(rng, 3)
        par = IfacePar(p, q, frozenset({SyncClause(S.name("a"), 2)}))
        assert alphabet_csp(par) == alphabet_csp(p) | alphabet_csp(q)


def test_canonicalise_sum_commutes():
    a = Prefix(S.name("a"), NIL)
    b = Prefix(S.name("b"), NIL)
    assert canonicalise(Sum(a, b)) == canonicalise(Sum(b, a))


def test_canonicalise_alpha_equivalence():
    p = Rec("X", Prefix(S.name("a"), Var("X")))
    q = Rec("Y", Prefix(S.name("a"), Var("Y")))
    assert canonicalise(p) == canonicalise(q)


def test_canonicalise_applies_no_unit_laws():
    a = Prefix(S.name("a"), NIL)
    assert canonicalise(a) != canonicalise(Sum(a, NIL))


def test_canonicalise_merges_nested_hides():
    inner = Hide(STOP, frozenset({S.tauevent()}))
    outer = Hide(inner, frozenset({S.sync("a")}))
    assert canonicalise(outer) == Hide(STOP, frozenset({S.tauevent(), S.sync("a")}))


def test_canonicalise_idempotent_random():
    rng = random.Random(17)
    for _ in range(60):
        p = genterms.random_ccs(rng, depth=5, max_par=3)
        c = canonicalise(p)
        assert canonicalise(c) == c
    for _ in range(60):
        p = genterms.random_cspmn(rng, depth=4, max_par=3)
        c = canonicalise(p)
        assert canonicalise(c) == c


def _step_set(p, calculus):
    step = semantics.step_function(calculus)
    return {(label, canonicalise(target)) for label, target in step(p)}


def test_canonicalise_preserves_one_step_transitions():
    rng = random.Random(19)
    for _ in range(80):
        p = genterms.random_ccs(rng, depth=5, max_par=3)
        assert _step_set(p, "ccs") == _step_set(canonicalise(p), "ccs")
    for _ in range(80):
        p = genterms.random_cspmn(rng, depth=4, max_par=3)
        assert _step_set(p, "cspmn") == _step_set(canonicalise(p), "cspmn")


def test_well_formedness_checks():
    with pytest.raises(S.WellFormednessError):
        S.check_well_formed(Var("X"))
    with pytest.raises(S.WellFormednessError):
        S.check_well_formed(Rec("X", Var("X")))  # unguarded
    with pytest.raises(S.WellFormednessError):
        S.check_well_formed(Rec("X", Par(Prefix(S.name("a"), NIL), Var("X"))))
    S.check_well_formed(Rec("X", Prefix(S.name("a"), Var("X"))))


def test_thide_sets_closed_under_complement():
    h = S.THide(NIL, frozenset({S.name("a"), S.sync("b")}))
    assert S.coname("a") in h.labels
    assert S.cosync("b") in h.labels

import random

import pytest

from procalc import io, semantics, syntax as S
from procalc.io import ParseError, parse_ccs, parse_ccstau, parse_cspmn, print_proc
from procalc.syntax import (
    Nil, Prefix, Sum, Par, TPar, Restrict, THide, Rec, Var,
    ExtChoice, IfacePar, Hide, RestrictCsp, SyncClause, NIL, STOP,
    canonicalise,
)

import genterms


def test_parse_ccs_basic():
    p = parse_ccs("a.0 | 'a.0")
    assert p == Par(Prefix(S.name("a"), NIL), Prefix(S.coname("a"), NIL))


def test_parse_ccs_recursion():
    p = parse_ccs("rec X. (a.0 | 'a.X)")
    assert p == Rec("X", Par(Prefix(S.name("a"), NIL),
                             Prefix(S.coname("a"), Var("X"))))


def test_parse_ccs_precedence():
    # restriction binds tighter than prefix, prefix tighter than sum,
    # sum tighter than parallel
    p = parse_ccs("a.0 \\ {b} + c.0 | 0")
    assert isinstance(p, Par)
    assert isinstance(p.left, Sum)
    assert p.left.left == Prefix(S.name("a"), Restrict(NIL, frozenset({S.name("b")})))


def test_parse_ccs_syntax_error_span():
    with pytest.raises(ParseError) as err:
        parse_ccs("a.")
    assert err.value.span.line == 1
    assert err.value.span.column == 3


def test_parse_ccs_unbound_and_unguarded():
    with pytest.raises(S.WellFormednessError):
        parse_ccs("X")
    with pytest.raises(S.WellFormednessError):
        parse_ccs("rec X. X")


def test_parse_ccs_rejects_ccstau_operators():
    with pytest.raises(ParseError):
        parse_ccs("a.0 |T 'a.0")
    with pytest.raises(ParseError):
        parse_ccs("a.0 \\T {a}")


def test_parse_ccstau():
    p = parse_ccstau("(a.0 |T 'a.0) \\T {tau[a|'a]}")
    assert p == THide(TPar(Prefix(S.name("a"), NIL), Prefix(S.coname("a"), NIL)),
                      frozenset({S.taupair("a")}))
    q = parse_ccstau("a_S.0 + 'a_S.0")
    assert q == Sum(Prefix(S.sync("a"), NIL), Prefix(S.cosync("a"), NIL))


def test_parse_cspmn_basic():
    p = parse_cspmn("a -> STOP [| {a#2} |] a -> STOP")
    clause = SyncClause(S.name("a"), 2)
    assert p == IfacePar(Prefix(S.name("a"), STOP), Prefix(S.name("a"), STOP),
                         frozenset({clause}))


def test_parse_cspmn_default_multiplicity():
    p = parse_cspmn("a -> STOP [| {a} |] STOP")
    (clause,) = p.clauses
    assert clause.multiplicity is None


def test_parse_cspmn_rejects_small_multiplicity():
    with pytest.raises(ParseError):
        parse_cspmn("STOP [| {a#1} |] STOP")
    with pytest.raises(ParseError):
        parse_cspmn("STOP [| {a#0} |] STOP")


def test_parse_cspmn_tau_event_and_restriction():
    p = parse_cspmn("(tau -> STOP) |> {a}")
    assert p == RestrictCsp(Prefix(S.tauevent(), STOP), frozenset({S.name("a")}))
    # postfix operators bind tightest: an unparenthesised body attaches
    # the restriction to the final atom
    q = parse_cspmn("tau -> STOP |> {a}")
    assert q == Prefix(S.tauevent(), RestrictCsp(STOP, frozenset({S.name("a")})))


def test_parse_cspmn_rename():
    p = parse_cspmn("(a -> STOP) [[ a <- b, a <- c ]]")
    assert p.mapping == {S.name("a"): frozenset({S.name("b"), S.name("c")})}


def test_parse_indexed_names():
    p = parse_cspmn("a_{1,2} -> STOP")
    assert p == Prefix(S.indexed("a", (1, 2)), STOP)


def test_print_examples():
    p = Par(Prefix(S.name("a"), NIL), Prefix(S.coname("a"), NIL))
    assert print_proc(p) == "a.0 | 'a.0"
    assert print_proc(Prefix(S.sync("a"), NIL)) == "a_S.0"
    assert parse_ccstau(print_proc(Prefix(S.sync("a"), NIL))) == Prefix(S.sync("a"), NIL)
    assert print_proc(Prefix(S.indexed("a", (1, 2)), STOP)) == "a_{1,2} -> STOP"


def test_round_trip_random_ccs():
    rng = random.Random(23)
    for _ in range(80):
        p = genterms.random_ccs(rng, depth=5, max_par=3)
        assert canonicalise(parse_ccs(print_proc(p))) == canonicalise(p)


def test_round_trip_random_cspmn():
    rng = random.Random(29)
    for _ in range(80):
        p = genterms.random_cspmn(rng, depth=4, max_par=3)
        assert canonicalise(parse_cspmn(print_proc(p))) == canonicalise(p)


def test_round_trip_ccstau_post_g2():
    from procalc import translate
    rng = random.Random(31)
    for _ in range(40):
        p = translate.g2(translate.c2ccstau(genterms.random_ccs(rng, depth=4, max_par=3)))
        assert canonicalise(parse_ccstau(print_proc(p))) == canonicalise(p)


def test_export_lts_dot():
    lts = semantics.build_lts(NIL, "ccs")
    dot = io.export_lts(lts, "dot")
    assert dot.startswith("digraph lts {")
    assert dot.count("ellipse") == 1

    lts = semantics.build_lts(parse_ccs("a.0"), "ccs")
    dot = io.export_lts(lts, "dot")
    assert dot.count("ellipse") == 2
    assert '[label="a"]' in dot


def test_export_lts_ccs_par_example():
    lts = semantics.build_lts(parse_ccs("a.0 | 'a.0"), "ccs")
    assert len(lts.states) == 4
    initial_labels = {label.to_text() for src, label, _ in lts.transitions
                      if src == lts.initial}
    assert initial_labels == {"a", "'a", "tau"}
    # the diamond plus its tau chord
    assert len(lts.transitions) == 5


def test_export_lts_json_round_trip():
    lts = semantics.build_lts(parse_ccs("a.0 | 'a.0"), "ccs")
    initial, states, transitions = io.import_lts_json(io.export_lts(lts, "json"))
    assert initial in states
    assert len(states) == len(lts.states)
    assert len(transitions) == len(lts.transitions)
    for src, label, dst in transitions:
        assert src in states and dst in states
    # isomorphic: the hash ids map one-to-one onto original state ids
    by_hash = {io.state_hash(term): sid for sid, term in lts.states.items()}
    remapped = {(by_hash[src], label, by_hash[dst])
                for src, label, dst in transitions}
    original = {(src, label.to_text(), dst) for src, label, dst in lts.transitions}
    assert remapped == original


def test_export_cspm_stop():
    assert io.export_cspm(STOP) == "MAIN = STOP\n"


def test_export_cspm_declares_hidden_channels():
    term = Hide(Prefix(S.name("a"), STOP), frozenset({S.name("a")}))
    out = io.export_cspm(term)
    assert "channel a" in out
    assert "MAIN = (a -> STOP) \\ {a}" in out


def test_export_cspm_mangling_is_injective():
    pairs = [
        (S.coname("a"), "a_bar"),
        (S.name("a_bar"), "a__bar"),
        (S.indexed("a", (1, 2)), "a_1_2"),
        (S.name("a_1_2"), "a__1__2"),
    ]
    seen = set()
    for label, expected in pairs:
        text = io._mangle(label)
        assert text == expected
        assert text not in seen
        seen.add(text)


def test_export_cspm_rejects_cspmn_clauses():
    term = parse_cspmn("a -> STOP [| {a#2} |] a -> STOP [| {a#2} |] a -> STOP")
    with pytest.raises(io.CspmExportError) as err:
        io.export_cspm(term)
    assert "mn2csp" in str(err.value)


def test_export_cspm_rejects_restriction():
    term = parse_cspmn("a -> STOP |> {a}")
    with pytest.raises(io.CspmExportError):
        io.export_cspm(term)


def test_export_cspm_recursion_equations():
    term = parse_cspmn("rec X. a -> X")
    out = io.export_cspm(term)
    assert "REC0 = a -> REC0" in out
    assert "MAIN = REC0" in out

"""Elaboration of a#m interface clauses into plain CSP.

Two passes compile CSPmn into CSP that any multiway-synchronisation
tool can run:

  1. ix_csp gives every prefix a globally unique index (a becomes
     a_{i}); interfaces, hide sets and clause multiplicities follow.
  2. gsharp_proc replaces every claused prefix a_{i} by the external
     choice over its combination names a_{i1..im}, one per size-m group
     of potential synchronisation partners; interfaces become the
     combination names shared by the two sides.

The result contains no explicit multiplicities: a combination name is
shared by exactly its m participants, so plain multiway synchronisation
enforces the original m-among-n discipline.

Like the legacy translation, this cannot elaborate parallel composition
under recursion (each unfolding would need fresh indices).
"""

import itertools

from . import syntax as S
from .syntax import (
    Stop, Skip, Prefix, ExtChoice, IntChoice, IfacePar, Hide, RestrictCsp,
    Rename, Rec, Var, Label, SyncClause, STOP,
)
from .translate import ParallelUnderRecursion
from . import semantics


class UnsupportedConstruct(ValueError):
    """The elaboration handles plain-name CSPmn terms only."""


class IndexScheme:
    """Source of globally distinct prefix indices."""

    def __init__(self, start=1, excluded=()):
        self.next = start
        self.excluded = set(excluded)

    def issue(self):
        while self.next in self.excluded:
            self.next += 1
        value = self.next
        self.excluded.add(value)
        self.next += 1
        return value


def _check_supported(p, under_rec=False):
    if isinstance(p, (RestrictCsp, Rename)):
        raise UnsupportedConstruct(
            "restriction and renaming are not elaborated; term: %r" % (p,))
    if isinstance(p, Prefix) and p.label.kind not in (S.NAME, S.CONAME, S.TAUEVENT):
        raise UnsupportedConstruct(
            "only plain-name events can be indexed: %s" % p.label.to_text())
    if isinstance(p, Hide):
        for l in p.labels:
            if l.kind not in (S.NAME, S.CONAME, S.TAUEVENT):
                raise UnsupportedConstruct(
                    "only plain-name events can be hidden here: %s" % l.to_text())
    if isinstance(p, IfacePar):
        if under_rec:
            raise ParallelUnderRecursion(
                "parallel under recursion cannot be indexed; "
                "the term stays CSPmn")
        for c in p.clauses:
            if c.event.kind != S.NAME:
                raise UnsupportedConstruct(
                    "clauses over %s are not elaborated" % c.event.to_text())
    if isinstance(p, Rec):
        under_rec = True
    for c in S.children(p):
        _check_supported(c, under_rec)


def _resolve_defaults(p):
    """Replace default multiplicities by the arity of their (flattened)
    parallel composition, which is what the default means."""
    if isinstance(p, IfacePar):
        comps, _ = semantics.flatten_iface(p)
        arity = len(comps)
        clauses = frozenset(
            SyncClause(c.event, c.multiplicity if c.multiplicity is not None else arity)
            for c in p.clauses)

        def rewrite(q):
            if isinstance(q, IfacePar) and q.clauses == p.clauses:
                return IfacePar(rewrite(q.left), rewrite(q.right), clauses)
            return _resolve_defaults(q)

        return rewrite(p)
    if isinstance(p, Prefix):
        return Prefix(p.label, _resolve_defaults(p.body))
    if isinstance(p, (ExtChoice, IntChoice)):
        return type(p)(_resolve_defaults(p.left), _resolve_defaults(p.right))
    if isinstance(p, Hide):
        return Hide(_resolve_defaults(p.body), p.labels)
    if isinstance(p, Rec):
        return Rec(p.var, _resolve_defaults(p.body))
    return p


def ix_csp(p, scheme=None):
    """Uniquely index every name prefix; interfaces and hide sets follow
    the indexed alphabet."""
    scheme = scheme or IndexScheme()

    def walk(q):
        if isinstance(q, Prefix):
            label = q.label
            if label.kind in (S.NAME, S.CONAME):
                kind = S.INDEXED if label.kind == S.NAME else S.COINDEXED
                label = Label(kind, label.base, (scheme.issue(),))
            return Prefix(label, walk(q.body))
        if isinstance(q, (ExtChoice, IntChoice)):
            return type(q)(walk(q.left), walk(q.right))
        if isinstance(q, IfacePar):
            left = walk(q.left)
            right = walk(q.right)
            events = S.alphabet_csp(left) | S.alphabet_csp(right)
            clauses = set()
            for c in q.clauses:
                for e in events:
                    if e.kind == S.INDEXED and e.base == c.event.base:
                        clauses.add(SyncClause(e, c.multiplicity))
            return IfacePar(left, right, frozenset(clauses))
        if isinstance(q, Hide):
            body = walk(q.body)
            alphabet = S.alphabet_csp(body)
            bases = {l.base for l in q.labels if l.kind in (S.NAME, S.CONAME)}
            labels = {l for l in alphabet
                      if l.kind in (S.INDEXED, S.COINDEXED) and l.base in bases}
            labels |= {l for l in q.labels if l.kind == S.TAUEVENT}
            return Hide(body, frozenset(labels))
        if isinstance(q, Rec):
            return Rec(q.var, walk(q.body))
        return q

    return walk(p)


def gsharp_event(ctx, env, event):
    """Image of one indexed event under the combination renaming.

    With a clause a#m on the event, the image is every sorted m-tuple
    name containing the event's index whose other m-1 indices belong to
    same-base indexed events of the environment set; without a clause
    the event is kept."""
    if event not in ctx:
        return {event}
    m = ctx[event]
    i = event.indices[0]
    partners = sorted(l.indices[0] for l in env
                      if l.kind == S.INDEXED and l.base == event.base
                      and len(l.indices) == 1 and l.indices[0] != i)
    out = set()
    for group in itertools.combinations(partners, m - 1):
        out.add(S.indexed(event.base, tuple(sorted((i,) + group))))
    return out


def _ext_sum(procs):
    if not procs:
        return STOP
    ordered = sorted(procs)
    out = ordered[-1]
    for b in reversed(ordered[:-1]):
        out = ExtChoice(b, out)
    return out


def gsharp_proc(ctx, env, p):
    """Apply the combination renaming through an indexed term.  Parallel
    nodes extend the clause context, thread the partner's alphabet into
    the environment set, and take as plain interface the combination
    names common to both sides' images."""
    if isinstance(p, (Stop, Skip, Var)):
        return p
    if isinstance(p, Prefix):
        if p.label.kind == S.TAUEVENT:
            return Prefix(p.label, gsharp_proc(ctx, env, p.body))
        branches = gsharp_event(ctx, env, p.label)
        return _ext_sum([Prefix(b, gsharp_proc(ctx, env, p.body))
                         for b in sorted(branches)])
    if isinstance(p, (ExtChoice, IntChoice)):
        return type(p)(gsharp_proc(ctx, env, p.left), gsharp_proc(ctx, env, p.right))
    if isinstance(p, IfacePar):
        new_ctx = dict(ctx)
        for c in p.clauses:
            new_ctx[c.event] = c.multiplicity
        left = gsharp_proc(new_ctx, env | S.alphabet_csp(p.right), p.left)
        right = gsharp_proc(new_ctx, env | S.alphabet_csp(p.left), p.right)
        shared = {e for e in S.alphabet_csp(left) & S.alphabet_csp(right)
                  if e.kind == S.INDEXED}
        clauses = frozenset(SyncClause(e) for e in shared)
        return IfacePar(left, right, clauses)
    if isinstance(p, Hide):
        labels = set()
        for l in p.labels:
            labels |= gsharp_event(ctx, env, l) if l.kind == S.INDEXED else {l}
        return Hide(gsharp_proc(ctx, env, p.body), frozenset(labels))
    if isinstance(p, Rec):
        return Rec(p.var, gsharp_proc(ctx, env, p.body))
    raise TypeError("unexpected term in gsharp: %r" % (p,))


def mn2csp(p):
    """Compile a CSPmn term to plain CSP: gsharp after ix.

    Output clauses all carry the default multiplicity, so the term runs
    under ordinary multiway synchronisation and can be exported to CSPm."""
    _check_supported(p)
    indexed = ix_csp(_resolve_defaults(p))
    return gsharp_proc({}, frozenset(), indexed)

"""CCS-to-CSP translation pipelines.

Main pipeline (one synchronisation name per CCS name):

    CCS --c2ccstau--> CCSTau --g2--> --conm--> CCSTau --tl3--> CSPmn
    then hide the synthetic `tau` event and every a_S sync event.

Legacy pipeline (one synchronisation name per complementary prefix
pair, plain CSP output):

    CCS --c2ccstau--> CCSTau --ix--> --gstar--> --conm--> --tl-->
    hide tau --ai2a--> hide every a_{i,j}

The legacy pipeline cannot translate parallel composition under a
recursion binder: it would need unboundedly many prefix indices.

gstar2g2 renames a legacy result into main-pipeline shape (a_{i,j} to
a_S, pair interfaces to a_S#2 clauses).
"""

from . import syntax as S
from .syntax import (
    Nil, Stop, Skip, Prefix, Sum, ExtChoice, IntChoice, Par, TPar,
    Restrict, THide, IfacePar, Hide, RestrictCsp, Rename, Rec, Var,
    Label, SyncClause, NIL, STOP,
)


class ParallelUnderRecursion(ValueError):
    """Raised by the legacy pipeline on parallel under a rec binder."""


class PipelineOrderError(ValueError):
    """A stage saw labels that an earlier stage should have removed."""


# --------------------------------------------------------------------------
# CCS to CCSTau.

def c2ccstau(p):
    """Homomorphic except on parallel: the handshake pairs of the two
    sides become visible tau[a|'a] actions, hidden immediately."""
    if isinstance(p, Prefix):
        return Prefix(p.label, c2ccstau(p.body))
    if isinstance(p, Sum):
        return Sum(c2ccstau(p.left), c2ccstau(p.right))
    if isinstance(p, Par):
        left = c2ccstau(p.left)
        right = c2ccstau(p.right)
        pairs = _handshake_pairs(S.sort_ccs(left), S.sort_ccs(right))
        return THide(TPar(left, right), pairs)
    if isinstance(p, Restrict):
        return Restrict(c2ccstau(p.body), p.labels)
    if isinstance(p, Rec):
        return Rec(p.var, c2ccstau(p.body))
    if isinstance(p, (Nil, Var)):
        return p
    raise TypeError("not a CCS term: %r" % (p,))


def _handshake_pairs(sort_left, sort_right):
    pairs = set()
    for l in sort_left:
        if l.kind in (S.NAME, S.CONAME) and l.complement() in sort_right:
            pairs.add(S.taupair(l.base))
    return frozenset(pairs)


# --------------------------------------------------------------------------
# g2: one synchronisation name per CCS name.

def g2_action(env, action):
    """Image of one action (or a set of actions, unioned elementwise).

    A name expands with its sync name exactly when the environment set
    offers the complement; tau and tau pairs map to themselves."""
    if isinstance(action, (set, frozenset)):
        out = set()
        for a in action:
            out |= g2_action(env, a)
        return out
    k = action.kind
    if k in (S.TAU, S.TAUPAIR):
        return {action}
    if k == S.NAME or k == S.CONAME:
        out = {action}
        if action.complement() in env:
            out.add(Label(S.SYNC if k == S.NAME else S.COSYNC, action.base))
        return out
    raise PipelineOrderError("g2 is applied before sync names exist: %s"
                             % action.to_text())


def _g2_restrict_set(env, labels, scope_sort):
    """Restriction set image: the set as written plus the sync name of
    every base whose handshake could cross the restriction boundary
    (one polarity inside the restricted term, the other offered by the
    environment)."""
    out = set(labels)
    for l in labels:
        if l.kind not in (S.NAME, S.CONAME):
            continue
        pos, neg = S.name(l.base), S.coname(l.base)
        if (pos in scope_sort and neg in env) or (neg in scope_sort and pos in env):
            out.add(S.sync(l.base))
    return frozenset(out)


def _sum_of(branches, body_builder):
    procs = [Prefix(b, body_builder()) for b in sorted(branches)]
    out = procs[-1]
    for b in reversed(procs[:-1]):
        out = Sum(b, out)
    return out


def g2_proc(env, p):
    """Apply g2 through a CCSTau term, threading each parallel side's
    sort into the other side's environment set."""
    if isinstance(p, (Nil, Var)):
        return p
    if isinstance(p, Prefix):
        branches = g2_action(env, p.label)
        return _sum_of(branches, lambda: g2_proc(env, p.body))
    if isinstance(p, Sum):
        return Sum(g2_proc(env, p.left), g2_proc(env, p.right))
    if isinstance(p, (Par, TPar)):
        left_env = env | S.sort_ccs(p.right)
        right_env = env | S.sort_ccs(p.left)
        return type(p)(g2_proc(left_env, p.left), g2_proc(right_env, p.right))
    if isinstance(p, Restrict):
        return Restrict(g2_proc(env, p.body),
                        _g2_restrict_set(env, p.labels, S.sort_ccs(p.body)))
    if isinstance(p, THide):
        return THide(g2_proc(env, p.body), g2_action(env | p.labels, p.labels))
    if isinstance(p, Rec):
        return Rec(p.var, g2_proc(env, p.body))
    raise TypeError("not a CCSTau term: %r" % (p,))


def g2(p):
    return g2_proc(frozenset(), p)


# --------------------------------------------------------------------------
# conm: fold synchronising conames into names so CSP can match them.

def _conm_label(label):
    if label.kind == S.COSYNC:
        return S.sync(label.base)
    if label.kind == S.COINDEXED and len(label.indices) == 2:
        return S.indexed(label.base, label.indices)
    return label


def conm_rename(p):
    """Apply the coname fold to every prefix; structure unchanged."""
    if isinstance(p, Prefix):
        return Prefix(_conm_label(p.label), conm_rename(p.body))
    if isinstance(p, (Nil, Var)):
        return p
    if isinstance(p, Sum):
        return Sum(conm_rename(p.left), conm_rename(p.right))
    if isinstance(p, (Par, TPar)):
        return type(p)(conm_rename(p.left), conm_rename(p.right))
    if isinstance(p, Restrict):
        return Restrict(conm_rename(p.body), p.labels)
    if isinstance(p, THide):
        return THide(conm_rename(p.body), p.labels)
    if isinstance(p, Rec):
        return Rec(p.var, conm_rename(p.body))
    raise TypeError("not a CCSTau term: %r" % (p,))


# --------------------------------------------------------------------------
# tl3: CCSTau operators to CSPmn operators.

def _tl_common(p, recurse, par_case):
    if isinstance(p, Nil):
        return STOP
    if isinstance(p, Var):
        return p
    if isinstance(p, Prefix):
        label = p.label
        if label.kind == S.COSYNC or (label.kind == S.COINDEXED
                                      and len(label.indices) == 2):
            raise PipelineOrderError("apply conm before tl: %s" % label.to_text())
        if label.kind == S.TAU:
            label = S.tauevent()
        return Prefix(label, recurse(p.body))
    if isinstance(p, Sum):
        return ExtChoice(recurse(p.left), recurse(p.right))
    if isinstance(p, (Par, TPar)):
        return par_case(p)
    if isinstance(p, Restrict):
        return RestrictCsp(recurse(p.body), p.labels)
    if isinstance(p, THide):
        kept = frozenset(l for l in p.labels if l.kind != S.TAUPAIR)
        if not kept:
            return recurse(p.body)  # hiding tau pairs is vacuous here
        return Hide(recurse(p.body), kept)
    if isinstance(p, Rec):
        return Rec(p.var, recurse(p.body))
    raise TypeError("not a CCSTau term: %r" % (p,))


def tl3(p):
    """Translate a post-g2, post-conm CCSTau term into CSPmn.

    Parallel becomes interface parallel with one a_S#2 clause per name
    whose handshake actually crosses this composition (a on one side,
    'a on the other).  Plain shared names stay out of the interface (CCS
    never forces same-name synchronisation), and so do sync names that
    both sides acquired from a common outer partner: those must
    interleave through to the parallel that separates the real pair."""

    def par_case(q):
        crossing = _handshake_pairs(S.sort_ccs(q.left), S.sort_ccs(q.right))
        clauses = frozenset(SyncClause(S.sync(pair.base), 2) for pair in crossing)
        return IfacePar(tl3(q.left), tl3(q.right), clauses)

    return _tl_common(p, tl3, par_case)


def t2csp3(p):
    """CCSTau to CSPmn: tl3 after conm after g2, then hide `tau`."""
    return Hide(tl3(conm_rename(g2(p))), frozenset({S.tauevent()}))


def ccs2csp3(p):
    """CCS to CSPmn; finally hides every synchronisation name."""
    inner = t2csp3(c2ccstau(p))
    syncs = frozenset(l for l in S.alphabet_csp(inner) if l.kind == S.SYNC)
    return Hide(inner, syncs)


# --------------------------------------------------------------------------
# Legacy pipeline: unique indices per prefix, pair names per handshake.

def _check_no_par_under_rec(p, under_rec=False):
    if isinstance(p, (Par, TPar)) and under_rec:
        raise ParallelUnderRecursion(
            "parallel under recursion needs unboundedly many prefix indices; "
            "use the mn pipeline")
    if isinstance(p, Rec):
        under_rec = True
    for c in S.children(p):
        _check_no_par_under_rec(c, under_rec)


def ix(p):
    """Assign one globally unique index to every name prefix, in
    depth-first left-to-right order starting at 1."""
    counter = [0]

    def walk(q):
        if isinstance(q, Prefix):
            label = q.label
            if label.kind in (S.NAME, S.CONAME):
                counter[0] += 1
                kind = S.INDEXED if label.kind == S.NAME else S.COINDEXED
                label = Label(kind, label.base, (counter[0],))
            return Prefix(label, walk(q.body))
        if isinstance(q, Sum):
            return Sum(walk(q.left), walk(q.right))
        if isinstance(q, (Par, TPar)):
            return type(q)(walk(q.left), walk(q.right))
        if isinstance(q, Restrict):
            return Restrict(walk(q.body), q.labels)
        if isinstance(q, THide):
            return THide(walk(q.body), q.labels)
        if isinstance(q, Rec):
            return Rec(q.var, walk(q.body))
        return q

    return walk(p)


def _pair_name(base, i, j):
    return S.indexed(base, tuple(sorted((i, j))))


def _copair_name(base, i, j):
    return S.coindexed(base, tuple(sorted((i, j))))


def gstar_action(env, action):
    """Image of one indexed prefix: itself plus a pair name for every
    complementary indexed partner in the environment set."""
    k = action.kind
    if k in (S.TAU, S.TAUPAIR):
        return {action}
    if k in (S.INDEXED, S.COINDEXED) and len(action.indices) == 1:
        i = action.indices[0]
        out = {action}
        partner_kind = S.COINDEXED if k == S.INDEXED else S.INDEXED
        for l in env:
            if l.kind == partner_kind and l.base == action.base and len(l.indices) == 1:
                j = l.indices[0]
                make = _pair_name if k == S.INDEXED else _copair_name
                out.add(make(action.base, i, j))
        return out
    raise PipelineOrderError("gstar expects singly indexed prefixes: %s"
                             % action.to_text())


def _gstar_restrict_set(env, labels, scope_sort):
    """Mirror of the g2 restriction image: the written base names plus a
    (positive) pair name for every handshake that would cross the
    boundary between the restricted term and its environment."""
    out = set(labels)
    bases = {l.base for l in labels if l.kind in (S.NAME, S.CONAME)}
    for inside in scope_sort:
        if inside.kind not in (S.INDEXED, S.COINDEXED) or len(inside.indices) != 1:
            continue
        if inside.base not in bases:
            continue
        partner_kind = S.COINDEXED if inside.kind == S.INDEXED else S.INDEXED
        for outside in env:
            if (outside.kind == partner_kind and outside.base == inside.base
                    and len(outside.indices) == 1):
                out.add(_pair_name(inside.base, inside.indices[0],
                                   outside.indices[0]))
    return frozenset(out)


def gstar_proc(env, p):
    if isinstance(p, (Nil, Var)):
        return p
    if isinstance(p, Prefix):
        branches = gstar_action(env, p.label)
        return _sum_of(branches, lambda: gstar_proc(env, p.body))
    if isinstance(p, Sum):
        return Sum(gstar_proc(env, p.left), gstar_proc(env, p.right))
    if isinstance(p, (Par, TPar)):
        left_env = env | S.sort_ccs(p.right)
        right_env = env | S.sort_ccs(p.left)
        return type(p)(gstar_proc(left_env, p.left), gstar_proc(right_env, p.right))
    if isinstance(p, Restrict):
        return Restrict(gstar_proc(env, p.body),
                        _gstar_restrict_set(env, p.labels, S.sort_ccs(p.body)))
    if isinstance(p, THide):
        return THide(gstar_proc(env, p.body), p.labels)
    if isinstance(p, Rec):
        return Rec(p.var, gstar_proc(env, p.body))
    raise TypeError("not a CCSTau term: %r" % (p,))


def tl(p):
    """Legacy operator translation: parallel becomes interface parallel
    over the pair names shared by both sides (plain multiway interface,
    which over two components is the needed binary handshake)."""

    def par_case(q):
        shared = S.sort_ccs(q.left) & S.sort_ccs(q.right)
        clauses = frozenset(SyncClause(l) for l in shared
                            if l.kind == S.INDEXED and len(l.indices) == 2)
        return IfacePar(tl(q.left), tl(q.right), clauses)

    return _tl_common(p, tl, par_case)


def ai2a(p):
    """Erase single indices everywhere: a_{i} back to a, 'a_{i} to 'a."""

    def fix(label):
        if label.kind == S.INDEXED and len(label.indices) == 1:
            return S.name(label.base)
        if label.kind == S.COINDEXED and len(label.indices) == 1:
            return S.coname(label.base)
        return label

    def fixset(labels):
        return frozenset(fix(l) for l in labels)

    if isinstance(p, Prefix):
        return Prefix(fix(p.label), ai2a(p.body))
    if isinstance(p, (Stop, Nil, Var, Skip)):
        return p
    if isinstance(p, (Sum, ExtChoice, IntChoice, Par, TPar)):
        return type(p)(ai2a(p.left), ai2a(p.right))
    if isinstance(p, IfacePar):
        clauses = frozenset(SyncClause(fix(c.event), c.multiplicity)
                            for c in p.clauses)
        return IfacePar(ai2a(p.left), ai2a(p.right), clauses)
    if isinstance(p, (Restrict, THide)):
        return type(p)(ai2a(p.body), fixset(p.labels))
    if isinstance(p, (Hide, RestrictCsp)):
        return type(p)(ai2a(p.body), fixset(p.labels))
    if isinstance(p, Rec):
        return Rec(p.var, ai2a(p.body))
    raise TypeError("unexpected term in ai2a: %r" % (p,))


def t2csp_legacy(p):
    """Legacy CCSTau-to-CSP core: hide `tau` around tl of conm of gstar
    of ix."""
    return Hide(tl(conm_rename(gstar_proc(frozenset(), ix(p)))),
                frozenset({S.tauevent()}))


def ccs2csp_legacy(p):
    """Legacy CCS-to-CSP translation (plain CSP output).

    Fails with ParallelUnderRecursion when the input has parallel
    composition under a rec binder."""
    tau_term = c2ccstau(p)
    _check_no_par_under_rec(tau_term)
    inner = t2csp_legacy(tau_term)
    pairs = frozenset(l for l in S.alphabet_csp(inner)
                      if l.kind == S.INDEXED and len(l.indices) == 2)
    return ai2a(Hide(inner, pairs))


# --------------------------------------------------------------------------
# Bridge: legacy output shape to main-pipeline shape.

class NotCspGstar(ValueError):
    """gstar2g2 input is not a legacy-translation result."""


def gstar2g2(p):
    """Rename every pair name a_{i,j} to the sync name a_S and map pair
    interfaces to a_S#2 clauses; homomorphic elsewhere."""

    def fix(label):
        if label.kind == S.INDEXED and len(label.indices) == 2:
            return S.sync(label.base)
        if label.kind in (S.INDEXED, S.COINDEXED):
            raise NotCspGstar("unexpected indexed label %s" % label.to_text())
        return label

    def fixset(labels):
        return frozenset(fix(l) for l in labels)

    if isinstance(p, (Stop, Skip, Var)):
        return p
    if isinstance(p, Prefix):
        return Prefix(fix(p.label), gstar2g2(p.body))
    if isinstance(p, (ExtChoice, IntChoice)):
        return type(p)(gstar2g2(p.left), gstar2g2(p.right))
    if isinstance(p, IfacePar):
        clauses = set()
        for c in p.clauses:
            if not (c.event.kind == S.INDEXED and len(c.event.indices) == 2):
                raise NotCspGstar("legacy interfaces hold pair names only")
            clauses.add(SyncClause(S.sync(c.event.base), 2))
        return IfacePar(gstar2g2(p.left), gstar2g2(p.right), frozenset(clauses))
    if isinstance(p, Hide):
        return Hide(gstar2g2(p.body), fixset(p.labels))
    if isinstance(p, RestrictCsp):
        return RestrictCsp(gstar2g2(p.body), fixset(p.labels))
    if isinstance(p, Rec):
        return Rec(p.var, gstar2g2(p.body))
    raise NotCspGstar("not a legacy-translation construct: %r" % (p,))

"""Seeded random term generators shared by the property and acceptance
tests.  All generators take an explicit random.Random so every test run
is reproducible."""

from procalc import syntax as S
from procalc.syntax import (
    Nil, Prefix, Sum, Par, Restrict, Rec, Var,
    Stop, Skip, ExtChoice, IntChoice, IfacePar, Hide, SyncClause,
    NIL, STOP, SKIP,
)

NAMES = ("a", "b", "c")


def gen_ccs(rng, depth, par_budget, names=NAMES, par_under_rec=True,
            _in_rec=False, _guarded=frozenset(), _bound=frozenset(), _rec_no=0):
    """Well-formed CCS term: depth-bounded, at most par_budget parallel
    components, recursion always guarded.  par_under_rec=False keeps
    parallel composition out of rec bodies (the legacy pipeline's
    domain)."""
    options = ["nil", "prefix", "prefix", "prefix"]
    if _guarded:
        options += ["var", "var"]
    if depth > 0:
        options += ["sum", "sum", "restrict"]
        if par_budget[0] > 1 and (par_under_rec or not _in_rec):
            options += ["par", "par"]
        if _rec_no < 2 and depth > 1:
            options.append("rec")
    kind = rng.choice(options)
    if kind == "nil":
        return NIL
    if kind == "var":
        return Var(rng.choice(sorted(_guarded)))
    if kind == "prefix":
        roll = rng.random()
        if roll < 0.1:
            label = S.tau()
        elif roll < 0.55:
            label = S.name(rng.choice(names))
        else:
            label = S.coname(rng.choice(names))
        body = gen_ccs(rng, depth - 1, par_budget, names, par_under_rec,
                       _in_rec, _bound, _bound, _rec_no)
        return Prefix(label, body)
    if kind == "sum":
        return Sum(gen_ccs(rng, depth - 1, par_budget, names, par_under_rec,
                           _in_rec, _guarded, _bound, _rec_no),
                   gen_ccs(rng, depth - 1, par_budget, names, par_under_rec,
                           _in_rec, _guarded, _bound, _rec_no))
    if kind == "par":
        par_budget[0] -= 1
        return Par(gen_ccs(rng, depth - 1, par_budget, names, par_under_rec,
                           _in_rec, _guarded, _bound, _rec_no),
                   gen_ccs(rng, depth - 1, par_budget, names, par_under_rec,
                           _in_rec, _guarded, _bound, _rec_no))
    if kind == "restrict":
        body = gen_ccs(rng, depth - 1, par_budget, names, par_under_rec,
                       _in_rec, _guarded, _bound, _rec_no)
        chosen = rng.sample(names, rng.randint(1, min(2, len(names))))
        return Restrict(body, frozenset(S.name(n) for n in chosen))
    var = "V%d" % _rec_no
    body = gen_ccs(rng, depth - 1, par_budget, names, par_under_rec,
                   True, _guarded, _bound | {var}, _rec_no + 1)
    return Rec(var, body)


def random_ccs(rng, depth=5, max_par=4, names=NAMES, par_under_rec=True):
    term = gen_ccs(rng, depth, [max_par], names, par_under_rec)
    return S.check_well_formed(term)


def gen_csp_sequential(rng, depth, names=NAMES, _guarded=frozenset(),
                       _bound=frozenset(), _rec_no=0):
    """Parallel-free CSP term over plain-name events (plus tau and
    occasional SKIP)."""
    options = ["stop", "prefix", "prefix", "prefix"]
    if _guarded:
        options.append("var")
    if depth > 0:
        options += ["ext", "ext", "int", "skip"]
        if _rec_no < 2 and depth > 1:
            options.append("rec")
    kind = rng.choice(options)
    if kind == "stop":
        return STOP
    if kind == "skip":
        return SKIP
    if kind == "var":
        return Var(rng.choice(sorted(_guarded)))
    if kind == "prefix":
        roll = rng.random()
        if roll < 0.1:
            label = S.tauevent()
        elif roll < 0.6:
            label = S.name(rng.choice(names))
        else:
            label = S.coname(rng.choice(names))
        return Prefix(label, gen_csp_sequential(rng, depth - 1, names,
                                                _bound, _bound, _rec_no))
    if kind in ("ext", "int"):
        cls = ExtChoice if kind == "ext" else IntChoice
        return cls(gen_csp_sequential(rng, depth - 1, names, _guarded, _bound, _rec_no),
                   gen_csp_sequential(rng, depth - 1, names, _guarded, _bound, _rec_no))
    var = "V%d" % _rec_no
    body = gen_csp_sequential(rng, depth - 1, names, _guarded,
                              _bound | {var}, _rec_no + 1)
    return Rec(var, body)


def gen_cspmn(rng, depth, par_budget, names=NAMES):
    """General CSPmn term (may nest parallels, hiding, clauses)."""
    if depth == 0 or par_budget[0] <= 1 or rng.random() < 0.4:
        return gen_csp_sequential(rng, depth, names)
    roll = rng.random()
    if roll < 0.55:
        par_budget[0] -= 1
        left = gen_cspmn(rng, depth - 1, par_budget, names)
        right = gen_cspmn(rng, depth - 1, par_budget, names)
        clauses = set()
        for n in rng.sample(names, rng.randint(0, 2)):
            multiplicity = 2 if rng.random() < 0.6 else None
            clauses.add(SyncClause(S.name(n), multiplicity))
        return IfacePar(left, right, frozenset(clauses))
    if roll < 0.8:
        body = gen_cspmn(rng, depth - 1, par_budget, names)
        chosen = rng.sample(names, rng.randint(1, 2))
        return Hide(body, frozenset(S.name(n) for n in chosen))
    return gen_csp_sequential(rng, depth, names)


def random_cspmn(rng, depth=4, max_par=3, names=NAMES):
    return S.check_well_formed(gen_cspmn(rng, depth, [max_par], names))


def nary_parallel(components, clauses):
    """Left-associated chain sharing one clause set."""
    out = components[0]
    for comp in components[1:]:
        out = IfacePar(out, comp, clauses)
    return out


def gen_nary_clause_parallel(rng, names=NAMES, explicit=True, n=None):
    """n components chained with one clause set whose every multiplicity
    is the flattened arity (explicitly, or as the default)."""
    n = n or rng.randint(2, 4)
    comps = [gen_csp_sequential(rng, rng.randint(1, 3), names) for _ in range(n)]
    events = rng.sample(names, rng.randint(1, 2))
    clauses = frozenset(SyncClause(S.name(e), n if explicit else None)
                        for e in events)
    return nary_parallel(comps, clauses)


def map_clause_multiplicities(p, mapper):
    """Rewrite every clause multiplicity via mapper(arity, multiplicity);
    used to compare explicit-n against default interfaces."""
    from procalc import semantics

    if isinstance(p, IfacePar):
        comps, _ = semantics.flatten_iface(p)
        arity = len(comps)
        clauses = frozenset(SyncClause(c.event, mapper(arity, c.multiplicity))
                            for c in p.clauses)

        def rewrite(q):
            if isinstance(q, IfacePar) and q.clauses == p.clauses:
                return IfacePar(rewrite(q.left), rewrite(q.right), clauses)
            return map_clause_multiplicities(q, mapper)

        return rewrite(p)
    if isinstance(p, Prefix):
        return Prefix(p.label, map_clause_multiplicities(p.body, mapper))
    if isinstance(p, (ExtChoice, IntChoice)):
        return type(p)(map_clause_multiplicities(p.left, mapper),
                       map_clause_multiplicities(p.right, mapper))
    if isinstance(p, Hide):
        return Hide(map_clause_multiplicities(p.body, mapper), p.labels)
    if isinstance(p, Rec):
        return Rec(p.var, map_clause_multiplicities(p.body, mapper))
    return p

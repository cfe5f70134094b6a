"""One-step SOS transition functions and bounded LTS construction.

Three step functions share the label alphabet:

  * ccs_step     -- handshake on complementary names yields silent tau
  * ccstau_step  -- handshake yields the visible pair action tau[a|'a];
                    hiding maps listed actions to tau
  * cspmn_step   -- CSP rules plus m-among-n interface clauses: a#m lets
                    any m of the n parallel components synchronise on a

For the m/n rule, maximal chains of interface parallels with identical
clause sets are flattened into one n-ary composition.  The subset choice
is resolved atomically: one a-labelled transition per eligible size-m
subset, directly to that subset's residual (an internal choice over
subsets would insert silent steps that CCS's handshake does not have).
"""

import itertools
from collections import deque

from . import syntax as S
from .syntax import (
    Nil, Stop, Skip, Prefix, Sum, ExtChoice, IntChoice, Par, TPar,
    Restrict, THide, IfacePar, Hide, RestrictCsp, Rename, Rec, Var,
)


class SemanticsError(ValueError):
    """Ill-formed term reached the step functions."""


class Transition:
    __slots__ = ("source", "label", "target")

    def __init__(self, source, label, target):
        self.source = source
        self.label = label
        self.target = target

    def astuple(self):
        return (self.source, self.label, self.target)


class ExplorationBudget:
    __slots__ = ("max_states", "max_depth")

    def __init__(self, max_states=10000, max_depth=64):
        if max_states < 1 or max_depth < 1:
            raise ValueError("budget limits must be at least 1")
        self.max_states = max_states
        self.max_depth = max_depth


class Lts:
    """Finite labelled transition system over canonical terms.

    states maps state id -> canonical term; transitions hold state ids.
    complete is False when an exploration budget was hit."""

    def __init__(self, initial, states, transitions, complete):
        self.initial = initial
        self.states = states
        self.transitions = transitions
        self.complete = complete

    def successors(self, sid):
        return sorted((label, dst) for src, label, dst in self.transitions
                      if src == sid)

    def outgoing(self):
        out = {sid: [] for sid in self.states}
        for src, label, dst in sorted(self.transitions):
            out[src].append((label, dst))
        return out


# --------------------------------------------------------------------------
# CCS.

def _restrict_blocks(labels, label):
    """CCS-style restriction: both polarities of a listed base are
    blocked; sync names only when a sync form of the base is listed."""
    k = label.kind
    if k in (S.TAU, S.TAUPAIR, S.TAUEVENT, S.TICK):
        return False
    if label in labels:
        return True
    return label.is_complementable() and label.complement() in labels


def ccs_step(p):
    """Derivable one-step transitions of a CCS term."""
    if isinstance(p, (Nil, Var)):
        return set()
    if isinstance(p, Prefix):
        return {(p.label, p.body)}
    if isinstance(p, Sum):
        return ccs_step(p.left) | ccs_step(p.right)
    if isinstance(p, Par):
        return _par_step(p, ccs_step, lambda base: S.tau())
    if isinstance(p, Restrict):
        return {(l, Restrict(q, p.labels)) for l, q in ccs_step(p.body)
                if not _restrict_blocks(p.labels, l)}
    if isinstance(p, Rec):
        return ccs_step(S.substitute(p.body, p.var, p))
    raise SemanticsError("not a CCS term: %r" % (p,))


def _par_step(p, step, com_label):
    cls = type(p)
    left_steps = step(p.left)
    right_steps = step(p.right)
    out = set()
    for l, q in left_steps:
        out.add((l, cls(q, p.right)))
    for l, q in right_steps:
        out.add((l, cls(p.left, q)))
    for l1, q1 in left_steps:
        if l1.kind not in (S.NAME, S.CONAME):
            continue
        partner = l1.complement()
        for l2, q2 in right_steps:
            if l2 == partner:
                out.add((com_label(l1.base), cls(q1, q2)))
    return out


# --------------------------------------------------------------------------
# CCSTau.

def ccstau_step(p):
    """CCS rules with the CCSTau changes: handshake produces tau[a|'a],
    restriction lets tau pairs through unconditionally, hiding maps
    listed actions to silent tau."""
    if isinstance(p, (Nil, Var)):
        return set()
    if isinstance(p, Prefix):
        return {(p.label, p.body)}
    if isinstance(p, Sum):
        return ccstau_step(p.left) | ccstau_step(p.right)
    if isinstance(p, Par):
        return _par_step(p, ccstau_step, lambda base: S.tau())
    if isinstance(p, TPar):
        return _par_step(p, ccstau_step, lambda base: S.taupair(base))
    if isinstance(p, Restrict):
        out = set()
        for l, q in ccstau_step(p.body):
            if l.kind == S.TAUPAIR or not _restrict_blocks(p.labels, l):
                out.add((l, Restrict(q, p.labels)))
        return out
    if isinstance(p, THide):
        out = set()
        for l, q in ccstau_step(p.body):
            label = S.tau() if l in p.labels else l
            out.add((label, THide(q, p.labels)))
        return out
    if isinstance(p, Rec):
        return ccstau_step(S.substitute(p.body, p.var, p))
    raise SemanticsError("not a CCSTau term: %r" % (p,))


# --------------------------------------------------------------------------
# CSP with m-among-n clauses.

def flatten_iface(p):
    """Components of the maximal chain of IfacePar nodes sharing p's
    clause set, plus a rebuild function that restores the spine.

    Rec binders unfold during collection (a recursion's steps are its
    unfolding's steps, so the n-ary view must look through them);
    untouched components stay folded."""
    clauses = p.clauses

    def collect(q):
        unfolded = q
        while isinstance(unfolded, Rec):
            unfolded = S.substitute(unfolded.body, unfolded.var, unfolded)
        if isinstance(unfolded, IfacePar) and unfolded.clauses == clauses:
            left = collect(unfolded.left)
            right = collect(unfolded.right)
            return ("node", left, right)
        return ("leaf", q)

    spine = collect(p)
    comps = []

    def leaves(tree):
        if tree[0] == "leaf":
            comps.append(tree[1])
        else:
            leaves(tree[1])
            leaves(tree[2])

    leaves(spine)

    def rebuild(new_comps):
        it = iter(new_comps)

        def build(tree):
            if tree[0] == "leaf":
                return next(it)
            return IfacePar(build(tree[1]), build(tree[2]), clauses)

        return build(spine)

    return comps, rebuild


def _clause_for(clauses, label):
    for c in clauses:
        if c.event == label:
            return c
    return None


def cspmn_step(p, strict_premise=False):
    """Transitions per the CSP rules extended with a#m clauses.

    strict_premise switches the m/n rule to its literal premise: no
    synchronisation on a unless every component of the flattened
    composition can perform a."""
    step = lambda q: cspmn_step(q, strict_premise)
    if isinstance(p, (Stop, Var)):
        return set()
    if isinstance(p, Skip):
        return {(S.tick(), S.STOP)}
    if isinstance(p, Prefix):
        return {(p.label, p.body)}
    if isinstance(p, ExtChoice):
        out = set()
        for l, q in step(p.left):
            if l.kind == S.TAU:
                out.add((l, ExtChoice(q, p.right)))
            else:
                out.add((l, q))
        for l, q in step(p.right):
            if l.kind == S.TAU:
                out.add((l, ExtChoice(p.left, q)))
            else:
                out.add((l, q))
        return out
    if isinstance(p, IntChoice):
        return {(S.tau(), p.left), (S.tau(), p.right)}
    if isinstance(p, IfacePar):
        return _iface_step(p, step, strict_premise)
    if isinstance(p, Hide):
        out = set()
        for l, q in step(p.body):
            label = S.tau() if l in p.labels else l
            out.add((label, Hide(q, p.labels)))
        return out
    if isinstance(p, RestrictCsp):
        out = set()
        for l, q in step(p.body):
            if l.kind == S.TAU or not _restrict_blocks(p.labels, l):
                out.add((l, RestrictCsp(q, p.labels)))
        return out
    if isinstance(p, Rename):
        out = set()
        for l, q in step(p.body):
            if l.kind in (S.TAU, S.TICK):
                out.add((l, Rename(q, p.mapping)))
            else:
                for image in p.mapping.get(l, frozenset((l,))):
                    out.add((image, Rename(q, p.mapping)))
        return out
    if isinstance(p, Rec):
        return step(S.substitute(p.body, p.var, p))
    raise SemanticsError("not a CSP term: %r" % (p,))


def _iface_step(p, step, strict_premise):
    comps, rebuild = flatten_iface(p)
    n = len(comps)
    for clause in p.clauses:
        if clause.multiplicity is not None and clause.multiplicity > n:
            raise SemanticsError(
                "clause multiplicity %d exceeds arity %d" % (clause.multiplicity, n))
    succs = [step(c) for c in comps]
    out = set()

    # interleaving: silent steps always; events without a clause
    for i, comp_succs in enumerate(succs):
        for l, q in comp_succs:
            if l.kind == S.TICK:
                continue
            if l.kind == S.TAU or _clause_for(p.clauses, l) is None:
                out.add((l, rebuild(comps[:i] + [q] + comps[i + 1:])))

    # a#m synchronisation: one transition per eligible size-m subset
    for clause in sorted(p.clauses):
        m = clause.multiplicity if clause.multiplicity is not None else n
        targets = [sorted(q for l, q in succ if l == clause.event)
                   for succ in succs]
        ready = [i for i in range(n) if targets[i]]
        if len(ready) < m:
            continue
        if strict_premise and len(ready) < n:
            continue
        for members in itertools.combinations(ready, m):
            for choice in itertools.product(*(targets[i] for i in members)):
                new_comps = list(comps)
                for i, q in zip(members, choice):
                    new_comps[i] = q
                out.add((clause.event, rebuild(new_comps)))

    # tick: distributed termination, all components must terminate
    tick_targets = [sorted(q for l, q in succ if l.kind == S.TICK)
                    for succ in succs]
    if all(tick_targets):
        for choice in itertools.product(*tick_targets):
            out.add((S.tick(), rebuild(list(choice))))
    return out


# --------------------------------------------------------------------------
# Bounded LTS construction.

_STEPPERS = {
    "ccs": lambda p, cfg: ccs_step(p),
    "ccstau": lambda p, cfg: ccstau_step(p),
    "cspmn": lambda p, cfg: cspmn_step(p, cfg),
}


def step_function(calculus, strict_premise=False):
    stepper = _STEPPERS[calculus]
    return lambda p: stepper(p, strict_premise)


def build_lts(p, calculus, budget=None, strict_premise=False):
    """BFS closure of the step function from canonicalise(p).

    Stops with complete=False when max_states or max_depth is reached;
    transitions into undiscovered states are then dropped so that all
    endpoints stay within the state set."""
    budget = budget or ExplorationBudget()
    step = step_function(calculus, strict_premise)
    root = S.canonicalise(p)
    ids = {root: 0}
    states = {0: root}
    transitions = set()
    pending = []
    complete = True
    queue = deque([(root, 0)])
    while queue:
        term, depth = queue.popleft()
        src = ids[term]
        successors = sorted(step(term), key=lambda t: (t[0].key(), t[1].key()))
        if depth >= budget.max_depth:
            if successors:
                complete = False
            continue
        for label, target in successors:
            target = S.canonicalise(target)
            if target not in ids:
                if len(ids) >= budget.max_states:
                    complete = False
                    pending.append((src, label, target))
                    continue
                ids[target] = len(ids)
                states[ids[target]] = target
                queue.append((target, depth + 1))
            transitions.add((src, label, ids[target]))
    # budget-dropped targets that were discovered later along other paths
    for src, label, target in pending:
        if target in ids:
            transitions.add((src, label, ids[target]))
    return Lts(0, states, transitions, complete)

"""Action alphabet and process terms for CCS, CCSTau and CSP(mn).

Three term languages share one label type:

  * CCS        -- Nil, Prefix, Sum, Par, Restrict, Rec, Var
  * CCSTau     -- CCS plus TPar (visible-synchronisation parallel) and
                  THide (hiding, may hide tau-pair actions)
  * CSP / CSPmn -- Stop, Skip, Prefix, ExtChoice, IntChoice, IfacePar
                  (interface parallel with optional a#m clauses), Hide,
                  Rename, RestrictCsp, Rec, Var

All values are immutable.  Every node carries a precomputed structural
key (`key()`), which gives hashing, a total order and fast equality; the
key of a canonicalised term is the term's identity as an LTS state.
"""

import re

_IDENT_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")


class LabelError(ValueError):
    """Raised for malformed labels or undefined label operations."""


# Label kinds.  The string values double as sort keys and as tags in
# structural keys, so they are stable identifiers.
TAU = "tau"            # CCS silent action
NAME = "name"          # a
CONAME = "coname"      # 'a
TAUPAIR = "taupair"    # tau[a|'a]
SYNC = "sync"          # a_S
COSYNC = "cosync"      # 'a_S
INDEXED = "indexed"    # a_{i}, a_{i,j}, ...
COINDEXED = "coindexed"
TAUEVENT = "tauevent"  # the visible CSP event `tau`
TICK = "tick"          # CSP successful-termination event

_BASED_KINDS = (NAME, CONAME, TAUPAIR, SYNC, COSYNC, INDEXED, COINDEXED)
_COMPLEMENTS = {
    NAME: CONAME, CONAME: NAME,
    SYNC: COSYNC, COSYNC: SYNC,
    INDEXED: COINDEXED, COINDEXED: INDEXED,
}


def check_base_name(text):
    """Validate a base name; reserved spellings are rejected."""
    if not _IDENT_RE.match(text or ""):
        raise LabelError("base name must be an identifier: %r" % (text,))
    if text == "tau":
        raise LabelError("base name 'tau' is reserved")
    if text.endswith("_S"):
        raise LabelError("trailing '_S' is reserved for synchronisation names: %r" % (text,))
    return text


class Label:
    """One action/event.  Immutable; ordered by structural key."""

    __slots__ = ("kind", "base", "indices", "_key", "_hash")

    def __init__(self, kind, base="", indices=()):
        if kind in _BASED_KINDS:
            check_base_name(base)
        elif base or indices:
            raise LabelError("%s labels carry no base name" % kind)
        if kind in (INDEXED, COINDEXED):
            if not indices:
                raise LabelError("indexed labels need at least one index")
            if len(indices) >= 2 and any(a >= b for a, b in zip(indices, indices[1:])):
                raise LabelError("index sequence must be strictly increasing: %r" % (indices,))
        elif indices:
            raise LabelError("%s labels carry no indices" % kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "indices", tuple(indices))
        object.__setattr__(self, "_key", (kind, base, tuple(indices)))
        object.__setattr__(self, "_hash", hash(self._key))

    def __setattr__(self, name, value):
        raise AttributeError("Label is immutable")

    def key(self):
        return self._key

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Label) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __repr__(self):
        return "Label%r" % (self._key,)

    def complement(self):
        """Involutive complement; undefined for tau-like labels and tick."""
        other = _COMPLEMENTS.get(self.kind)
        if other is None:
            raise LabelError("complement undefined for %s" % self.kind)
        return Label(other, self.base, self.indices)

    def is_complementable(self):
        return self.kind in _COMPLEMENTS

    def to_text(self):
        """ASCII rendering, shared by printers and LTS exports."""
        k = self.kind
        if k == TAU or k == TAUEVENT:
            return "tau"
        if k == TICK:
            return "tick"
        if k == NAME:
            return self.base
        if k == CONAME:
            return "'" + self.base
        if k == TAUPAIR:
            return "tau[%s|'%s]" % (self.base, self.base)
        if k == SYNC:
            return self.base + "_S"
        if k == COSYNC:
            return "'" + self.base + "_S"
        idx = ",".join(str(i) for i in self.indices)
        if k == INDEXED:
            return "%s_{%s}" % (self.base, idx)
        return "'%s_{%s}" % (self.base, idx)


def tau():
    return Label(TAU)


def name(base):
    return Label(NAME, base)


def coname(base):
    return Label(CONAME, base)


def taupair(base):
    return Label(TAUPAIR, base)


def sync(base):
    return Label(SYNC, base)


def cosync(base):
    return Label(COSYNC, base)


def indexed(base, indices):
    return Label(INDEXED, base, tuple(indices))


def coindexed(base, indices):
    return Label(COINDEXED, base, tuple(indices))


def tauevent():
    return Label(TAUEVENT)


def tick():
    return Label(TICK)


class SyncClause:
    """An interface entry `a#m`.  multiplicity None means the default
    (n, the arity of the enclosing parallel composition)."""

    __slots__ = ("event", "multiplicity", "_key", "_hash")

    def __init__(self, event, multiplicity=None):
        if event.kind not in (NAME, SYNC, INDEXED):
            raise LabelError("clause events must be names, sync names or indexed names")
        if multiplicity is not None and multiplicity < 2:
            raise LabelError("clause multiplicity must be at least 2")
        object.__setattr__(self, "event", event)
        object.__setattr__(self, "multiplicity", multiplicity)
        object.__setattr__(self, "_key", (event.key(), -1 if multiplicity is None else multiplicity))
        object.__setattr__(self, "_hash", hash(self._key))

    def __setattr__(self, name, value):
        raise AttributeError("SyncClause is immutable")

    def key(self):
        return self._key

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, SyncClause) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __repr__(self):
        return "SyncClause(%r, %r)" % (self.event, self.multiplicity)


# --------------------------------------------------------------------------
# Process terms.

def _set_key(labels):
    return tuple(sorted(l.key() for l in labels))


class Proc:
    """Base class: immutable node with cached structural key."""

    __slots__ = ("_key", "_hash")

    def _seal(self, key):
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __setattr__(self, name, value):
        raise AttributeError("process terms are immutable")

    def key(self):
        return self._key

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Proc) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __repr__(self):
        from . import io
        return "<%s %s>" % (type(self).__name__, io.print_proc(self))


class Nil(Proc):
    __slots__ = ()

    def __init__(self):
        self._seal(("nil",))


class Stop(Proc):
    __slots__ = ()

    def __init__(self):
        self._seal(("stop",))


class Skip(Proc):
    __slots__ = ()

    def __init__(self):
        self._seal(("skip",))


class Prefix(Proc):
    __slots__ = ("label", "body")

    def __init__(self, label, body):
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "body", body)
        self._seal(("prefix", label.key(), body.key()))


class Sum(Proc):
    """CCS/CCSTau binary choice."""

    __slots__ = ("left", "right")

    def __init__(self, left, right):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        self._seal(("sum", left.key(), right.key()))


class ExtChoice(Proc):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        self._seal(("extchoice", left.key(), right.key()))


class IntChoice(Proc):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        self._seal(("intchoice", left.key(), right.key()))


class Par(Proc):
    """CCS parallel (handshake yields silent tau)."""

    __slots__ = ("left", "right")

    def __init__(self, left, right):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        self._seal(("par", left.key(), right.key()))


class TPar(Proc):
    """CCSTau parallel (handshake yields visible tau[a|'a])."""

    __slots__ = ("left", "right")

    def __init__(self, left, right):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        self._seal(("tpar", left.key(), right.key()))


class Restrict(Proc):
    """CCS/CCSTau restriction.  The stored set is taken as written; the
    semantics blocks both polarities of every listed base."""

    __slots__ = ("body", "labels")

    def __init__(self, body, labels):
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "labels", frozenset(labels))
        self._seal(("restrict", body.key(), _set_key(self.labels)))


class THide(Proc):
    """CCSTau hiding.  Sets are kept closed under complement for
    name/coname and sync/cosync members (hiding a hides 'a)."""

    __slots__ = ("body", "labels")

    def __init__(self, body, labels):
        closed = set()
        for l in labels:
            closed.add(l)
            if l.is_complementable():
                closed.add(l.complement())
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "labels", frozenset(closed))
        self._seal(("thide", body.key(), _set_key(self.labels)))


class IfacePar(Proc):
    """CSP interface parallel with a set of a#m clauses."""

    __slots__ = ("left", "right", "clauses")

    def __init__(self, left, right, clauses):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "clauses", frozenset(clauses))
        self._seal(("ifacepar", left.key(), right.key(),
                    tuple(sorted(c.key() for c in self.clauses))))


class Hide(Proc):
    """CSP hiding; exact event set, no complement closure."""

    __slots__ = ("body", "labels")

    def __init__(self, body, labels):
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "labels", frozenset(labels))
        self._seal(("hide", body.key(), _set_key(self.labels)))


class RestrictCsp(Proc):
    """CSP-side restriction: an LTS-level filter blocking the listed
    events and their complements.  Sync names are blocked only when
    explicitly listed."""

    __slots__ = ("body", "labels")

    def __init__(self, body, labels):
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "labels", frozenset(labels))
        self._seal(("restrictcsp", body.key(), _set_key(self.labels)))


class Rename(Proc):
    """CSP relational renaming: label -> set of labels."""

    __slots__ = ("body", "mapping")

    def __init__(self, body, mapping):
        frozen = {k: frozenset(v) for k, v in mapping.items()}
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "mapping", frozen)
        key = tuple(sorted((k.key(), _set_key(v)) for k, v in frozen.items()))
        self._seal(("rename", body.key(), key))


class Rec(Proc):
    __slots__ = ("var", "body")

    def __init__(self, var, body):
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "body", body)
        self._seal(("rec", var, body.key()))


class Var(Proc):
    __slots__ = ("var",)

    def __init__(self, var):
        object.__setattr__(self, "var", var)
        self._seal(("var", var))


NIL = Nil()
STOP = Stop()
SKIP = Skip()

_BINARY = (Sum, ExtChoice, IntChoice, Par, TPar, IfacePar)
_UNARY = (Restrict, THide, Hide, RestrictCsp, Rename)


def children(p):
    if isinstance(p, _BINARY):
        return (p.left, p.right)
    if isinstance(p, _UNARY):
        return (p.body,)
    if isinstance(p, (Prefix, Rec)):
        return (p.body,)
    return ()


class WellFormednessError(ValueError):
    """Unbound variables or unguarded recursion."""


def check_well_formed(p):
    """Check variable binding and guardedness; returns p."""

    def walk(q, bound, guarded):
        if isinstance(q, Var):
            if q.var not in bound:
                raise WellFormednessError("unbound variable %s" % q.var)
            if q.var not in guarded:
                raise WellFormednessError("unguarded recursion through %s" % q.var)
        elif isinstance(q, Rec):
            walk(q.body, bound | {q.var}, guarded - {q.var})
        elif isinstance(q, Prefix):
            walk(q.body, bound, bound)
        else:
            for c in children(q):
                walk(c, bound, guarded)

    walk(p, frozenset(), frozenset())
    return p


def substitute(p, var, replacement):
    """Capture-avoiding substitution of a recursion variable.

    Replacement terms are closed in practice (recursion unfolding), so
    capture cannot arise; inner binders of the same name shadow."""
    if isinstance(p, Var):
        return replacement if p.var == var else p
    if isinstance(p, Rec):
        if p.var == var:
            return p
        return Rec(p.var, substitute(p.body, var, replacement))
    if isinstance(p, Prefix):
        return Prefix(p.label, substitute(p.body, var, replacement))
    if isinstance(p, _BINARY):
        return type(p)._rebuild(p, substitute(p.left, var, replacement),
                                substitute(p.right, var, replacement))
    if isinstance(p, _UNARY):
        return type(p)._rebuild1(p, substitute(p.body, var, replacement))
    return p


def _rebuild_binary(old, left, right):
    if isinstance(old, IfacePar):
        return IfacePar(left, right, old.clauses)
    return type(old)(left, right)


def _rebuild_unary(old, body):
    if isinstance(old, Rename):
        return Rename(body, old.mapping)
    return type(old)(body, old.labels)


for _cls in _BINARY:
    _cls._rebuild = staticmethod(_rebuild_binary)
for _cls in _UNARY:
    _cls._rebuild1 = staticmethod(_rebuild_unary)


# --------------------------------------------------------------------------
# Sorts and alphabets.

def sort_ccs(p):
    """Syntactic sort of a CCS/CCSTau term: every non-tau prefix label,
    collected through all operators including Rec binders."""
    out = set()

    def walk(q):
        if isinstance(q, Prefix):
            if q.label.kind != TAU:
                out.add(q.label)
            walk(q.body)
        else:
            for c in children(q):
                walk(c)

    walk(p)
    return out


def _restrict_csp_blocked(labels):
    blocked = set()
    for l in labels:
        blocked.add(l)
        if l.is_complementable():
            blocked.add(l.complement())
    return blocked


def alphabet_csp(p):
    """Syntactic alphabet of a CSP term: prefix events (tau and tick
    excluded, the visible `tau` event included), renaming images applied,
    hidden and restricted events removed."""
    if isinstance(p, Prefix):
        rest = alphabet_csp(p.body)
        if p.label.kind not in (TAU, TICK):
            rest = rest | {p.label}
        return rest
    if isinstance(p, Hide):
        return alphabet_csp(p.body) - p.labels
    if isinstance(p, RestrictCsp):
        return alphabet_csp(p.body) - _restrict_csp_blocked(p.labels)
    if isinstance(p, Rename):
        out = set()
        for e in alphabet_csp(p.body):
            out |= p.mapping.get(e, frozenset((e,)))
        return out
    out = set()
    for c in children(p):
        out |= alphabet_csp(c)
    return out


# --------------------------------------------------------------------------
# Canonicalisation.

def may_tau_now(p):
    """Conservative: can p possibly take an immediate silent step?
    Used to guard choice-branch deduplication in canonical forms."""
    if isinstance(p, IntChoice):
        return True
    if isinstance(p, Hide):
        return bool(p.labels) or may_tau_now(p.body)
    if isinstance(p, (Prefix, Nil, Stop, Skip, Var)):
        return False
    if isinstance(p, Rec):
        return may_tau_now(p.body)
    return any(may_tau_now(c) for c in children(p))


def _flatten_choice(p, cls):
    if isinstance(p, cls):
        return _flatten_choice(p.left, cls) + _flatten_choice(p.right, cls)
    return [p]


def _rebuild_choice(branches, cls, empty):
    if not branches:
        return empty
    out = branches[-1]
    for b in reversed(branches[:-1]):
        out = cls(b, out)
    return out


def canonicalise(p, _env=None, _depth=0):
    """Deterministic normal form, used as the LTS state key.

    Normalisations (all transition-preserving):
      * Sum/ExtChoice chains flatten into a sorted right-nested list;
        duplicate branches collapse (for ExtChoice only when the branch
        cannot take an immediate silent step, where dropping a duplicate
        would change the residual).
      * IntChoice operands are sorted.
      * Directly nested Hide (and THide) nodes merge their sets.
      * Bound variables are renamed to depth-indexed canonical names.
    No other laws are applied: `a.0 + 0` stays distinct from `a.0`.
    """
    env = _env or {}
    if isinstance(p, (Nil, Stop, Skip)):
        return p
    if isinstance(p, Var):
        return Var(env.get(p.var, p.var))
    if isinstance(p, Rec):
        fresh = "X%d" % _depth
        return Rec(fresh, canonicalise(p.body, {**env, p.var: fresh}, _depth + 1))
    if isinstance(p, Prefix):
        return Prefix(p.label, canonicalise(p.body, env, _depth))
    if isinstance(p, (Sum, ExtChoice)):
        cls = type(p)
        branches = [canonicalise(b, env, _depth)
                    for b in _flatten_choice(p, cls)]
        deduped = []
        for b in sorted(branches):
            if deduped and deduped[-1] == b:
                if cls is Sum or not may_tau_now(b):
                    continue
            deduped.append(b)
        if len(deduped) == 1:
            return deduped[0]
        return _rebuild_choice(deduped, cls, p)
    if isinstance(p, IntChoice):
        a = canonicalise(p.left, env, _depth)
        b = canonicalise(p.right, env, _depth)
        if b < a:
            a, b = b, a
        return IntChoice(a, b)
    if isinstance(p, (Par, TPar)):
        return type(p)(canonicalise(p.left, env, _depth),
                       canonicalise(p.right, env, _depth))
    if isinstance(p, IfacePar):
        return IfacePar(canonicalise(p.left, env, _depth),
                        canonicalise(p.right, env, _depth), p.clauses)
    if isinstance(p, (Hide, THide)):
        body = canonicalise(p.body, env, _depth)
        labels = p.labels
        while isinstance(body, type(p)):
            labels = labels | body.labels
            body = body.body
        return type(p)(body, labels)
    if isinstance(p, Restrict):
        return Restrict(canonicalise(p.body, env, _depth), p.labels)
    if isinstance(p, RestrictCsp):
        return RestrictCsp(canonicalise(p.body, env, _depth), p.labels)
    if isinstance(p, Rename):
        return Rename(canonicalise(p.body, env, _depth), p.mapping)
    raise TypeError("not a process term: %r" % (p,))

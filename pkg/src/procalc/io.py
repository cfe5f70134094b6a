"""Concrete syntax for CCS, CCSTau and CSPmn terms, plus LTS serialisation.

ASCII surface syntax (see docs/grammar.md for the full grammar):

  CCS     0, a.P, 'a.P, tau.P, P + Q, P | Q, P \\ {a,b}, rec X. P, X
  CCSTau  additionally P |T Q, P \\T {a, tau[a|'a]}, sync names a_S / 'a_S
  CSPmn   STOP, SKIP, a -> P, P [] Q, P |~| Q, P [| {a#2, b} |] Q,
          P \\ {a}, P |> {a} (restriction), P [[ a <- b ]] (renaming),
          rec X. P

`'a` is the coname of `a`; `a_S` is a synchronisation name; `a_{1,2}` is
an indexed name.  `tau` is the silent action in CCS prefixes and the
visible non-synchronising event in CSP positions.
"""

import hashlib
import json as _json

from . import syntax as S
from .syntax import (
    Label, SyncClause,
    Nil, Stop, Skip, Prefix, Sum, ExtChoice, IntChoice, Par, TPar,
    Restrict, THide, IfacePar, Hide, RestrictCsp, Rename, Rec, Var,
    NIL, STOP, SKIP,
)


class SourceSpan:
    """Location of a token in the input text (1-based)."""

    __slots__ = ("line", "column", "length")

    def __init__(self, line, column, length=1):
        if line < 1 or column < 1:
            raise ValueError("line and column are 1-based")
        self.line = line
        self.column = column
        self.length = max(1, length)

    def __repr__(self):
        return "SourceSpan(%d, %d, %d)" % (self.line, self.column, self.length)

    def __eq__(self, other):
        return (isinstance(other, SourceSpan)
                and (self.line, self.column, self.length)
                == (other.line, other.column, other.length))


class ParseError(ValueError):
    def __init__(self, message, span):
        super().__init__("%s at line %d, column %d" % (message, span.line, span.column))
        self.span = span


# --------------------------------------------------------------------------
# Lexer.

_SYMBOLS = [
    "[|", "|]", "|~|", "[[", "]]", "[]", "->", "|>", "|T", "\\T",
    "(", ")", "{", "}", "[", "]", "\\", "|", "+", ".", ",", "#", "'", "<-",
]


class _Token:
    __slots__ = ("kind", "value", "span")

    def __init__(self, kind, value, span):
        self.kind = kind    # 'ident', 'nat', 'sym', 'eof'
        self.value = value
        self.span = span

    def __repr__(self):
        return "Token(%s, %r)" % (self.kind, self.value)


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        span = SourceSpan(line, col)
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            span.length = j - i
            tokens.append(_Token("nat", int(text[i:j]), span))
            col += j - i
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            # `a_{1,2}`: the identifier scan consumes `a_`; drop the
            # underscore and resume at the '{' so indices parse normally.
            if word.endswith("_") and j < n and text[j] == "{":
                word = word[:-1]
            span.length = j - i
            tokens.append(_Token("ident", word, span))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                span.length = len(sym)
                tokens.append(_Token("sym", sym, span))
                col += len(sym)
                i += len(sym)
                break
        else:
            raise ParseError("unexpected character %r" % c, span)
    tokens.append(_Token("eof", None, SourceSpan(line, col)))
    return tokens


# --------------------------------------------------------------------------
# Recursive-descent parser.
#
# Precedence, tightest first:
#   CCS/CCSTau:  atoms > postfix \ and \T > prefix . and rec > + > | and |T
#   CSPmn:       atoms > postfix \, |>, [[]] > prefix -> and rec
#                > [] > |~| > [| |]

class _Parser:
    def __init__(self, text, dialect):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.dialect = dialect  # 'ccs', 'ccstau', 'cspmn'

    def peek(self, ahead=0):
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, sym):
        tok = self.next()
        if tok.kind != "sym" or tok.value != sym:
            raise ParseError("expected %r" % sym, tok.span)
        return tok

    def at_sym(self, *syms):
        tok = self.peek()
        return tok.kind == "sym" and tok.value in syms

    def fail(self, message):
        raise ParseError(message, self.peek().span)

    # -- labels ------------------------------------------------------

    def parse_label(self, allow_taupair=False):
        """One label.  `'x` complements; `x_S` is a sync name; `x_{i,..}`
        an indexed name; `tau[a|'a]` a tau pair when allowed."""
        negate = False
        if self.at_sym("'"):
            self.next()
            negate = True
        tok = self.next()
        if tok.kind != "ident":
            raise ParseError("expected an action name", tok.span)
        word = tok.value
        if word == "tau":
            if negate:
                raise ParseError("tau has no complement", tok.span)
            if self.dialect == "cspmn" and not self.at_sym("["):
                return S.tauevent()  # `tau` is an ordinary event in CSP
            if self.at_sym("["):
                if not allow_taupair:
                    raise ParseError("tau[..|..] not allowed here", tok.span)
                self.next()
                base_tok = self.next()
                if base_tok.kind != "ident":
                    raise ParseError("expected a name inside tau[..]", base_tok.span)
                self.expect("|")
                self.expect("'")
                co_tok = self.next()
                if co_tok.kind != "ident" or co_tok.value != base_tok.value:
                    raise ParseError("tau pair must be tau[a|'a]",
                                     co_tok.span if co_tok.kind == "ident" else base_tok.span)
                self.expect("]")
                return S.taupair(base_tok.value)
            return S.tau()
        if self.at_sym("{"):
            self.next()
            indices = [self._nat()]
            while self.at_sym(","):
                self.next()
                indices.append(self._nat())
            self.expect("}")
            try:
                return (S.coindexed if negate else S.indexed)(word, tuple(indices))
            except S.LabelError as exc:
                raise ParseError(str(exc), tok.span)
        try:
            if word.endswith("_S"):
                return (S.cosync if negate else S.sync)(word[:-2])
            return (S.coname if negate else S.name)(word)
        except S.LabelError as exc:
            raise ParseError(str(exc), tok.span)

    def _nat(self):
        tok = self.next()
        if tok.kind != "nat":
            raise ParseError("expected a number", tok.span)
        return tok.value

    def parse_label_set(self, allow_taupair=False, names_only=False):
        self.expect("{")
        labels = set()
        if not self.at_sym("}"):
            while True:
                span = self.peek().span
                label = self.parse_label(allow_taupair=allow_taupair)
                if names_only and label.kind != S.NAME:
                    raise ParseError("restriction sets contain plain names", span)
                labels.add(label)
                if not self.at_sym(","):
                    break
                self.next()
        self.expect("}")
        return frozenset(labels)

    # -- CCS / CCSTau ------------------------------------------------

    def parse_ccs_proc(self):
        left = self.parse_ccs_sum()
        while self.at_sym("|", "|T"):
            op = self.next().value
            if op == "|T" and self.dialect == "ccs":
                self.fail("|T is a CCSTau operator")
            right = self.parse_ccs_sum()
            left = TPar(left, right) if op == "|T" else Par(left, right)
        return left

    def parse_ccs_sum(self):
        left = self.parse_ccs_prefix()
        while self.at_sym("+"):
            self.next()
            left = Sum(left, self.parse_ccs_prefix())
        return left

    def parse_ccs_prefix(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.value == "rec":
            self.next()
            var_tok = self.next()
            if var_tok.kind != "ident":
                raise ParseError("expected a variable after rec", var_tok.span)
            self.expect(".")
            return Rec(var_tok.value, self.parse_ccs_prefix())
        if self._label_prefix_ahead():
            label = self.parse_label()
            if label.kind not in (S.TAU, S.NAME, S.CONAME, S.SYNC, S.COSYNC):
                raise ParseError("bad prefix label", tok.span)
            if label.kind in (S.SYNC, S.COSYNC) and self.dialect == "ccs":
                raise ParseError("sync names are CCSTau labels", tok.span)
            self.expect(".")
            return Prefix(label, self.parse_ccs_prefix())
        return self.parse_ccs_postfix()

    def _label_prefix_ahead(self):
        """A label followed by '.' starts a prefix; a bare identifier is
        a recursion variable."""
        tok = self.peek()
        if tok.kind == "sym" and tok.value == "'":
            return True
        if tok.kind != "ident":
            return False
        nxt = self.peek(1)
        if nxt.kind == "sym" and nxt.value in (".", "["):
            return True
        if nxt.kind == "sym" and nxt.value == "{":
            return True  # indexed name a_{..}.P
        return False

    def parse_ccs_postfix(self):
        p = self.parse_ccs_atom()
        while self.at_sym("\\", "\\T"):
            op = self.next().value
            if op == "\\T":
                if self.dialect == "ccs":
                    self.fail("\\T is a CCSTau operator")
                p = THide(p, self.parse_label_set(allow_taupair=True))
            else:
                p = Restrict(p, self.parse_label_set(
                    names_only=(self.dialect == "ccs")))
        return p

    def parse_ccs_atom(self):
        tok = self.peek()
        if tok.kind == "nat" and tok.value == 0:
            self.next()
            return NIL
        if self.at_sym("("):
            self.next()
            p = self.parse_ccs_proc()
            self.expect(")")
            return p
        if tok.kind == "ident":
            if tok.value in ("rec",):
                self.fail("unexpected keyword")
            self.next()
            return Var(tok.value)
        raise ParseError("expected a process", tok.span)

    # -- CSPmn -------------------------------------------------------

    def parse_csp_proc(self):
        left = self.parse_csp_ichoice()
        while self.at_sym("[|"):
            self.next()
            clauses = self.parse_clause_set()
            self.expect("|]")
            right = self.parse_csp_ichoice()
            left = IfacePar(left, right, clauses)
        return left

    def parse_clause_set(self):
        self.expect("{")
        clauses = set()
        if not self.at_sym("}"):
            while True:
                span = self.peek().span
                event = self.parse_label()
                if event.kind not in (S.NAME, S.SYNC, S.INDEXED):
                    raise ParseError("interface events must be names, sync or indexed names", span)
                multiplicity = None
                if self.at_sym("#"):
                    self.next()
                    mtok = self.peek()
                    multiplicity = self._nat()
                    if multiplicity < 2:
                        raise ParseError("multiplicity must be at least 2", mtok.span)
                clauses.add(SyncClause(event, multiplicity))
                if not self.at_sym(","):
                    break
                self.next()
        self.expect("}")
        return frozenset(clauses)

    def parse_csp_ichoice(self):
        left = self.parse_csp_echoice()
        while self.at_sym("|~|"):
            self.next()
            left = IntChoice(left, self.parse_csp_echoice())
        return left

    def parse_csp_echoice(self):
        left = self.parse_csp_prefix()
        while self.at_sym("[]"):
            self.next()
            left = ExtChoice(left, self.parse_csp_prefix())
        return left

    def parse_csp_prefix(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.value == "rec":
            self.next()
            var_tok = self.next()
            if var_tok.kind != "ident":
                raise ParseError("expected a variable after rec", var_tok.span)
            self.expect(".")
            return Rec(var_tok.value, self.parse_csp_prefix())
        if self._event_prefix_ahead():
            span = self.peek().span
            event = self.parse_label()
            if event.kind == S.TAUPAIR:
                raise ParseError("tau pairs are not CSP events", span)
            self.expect("->")
            return Prefix(event, self.parse_csp_prefix())
        return self.parse_csp_postfix()

    def _event_prefix_ahead(self):
        tok = self.peek()
        if tok.kind == "sym" and tok.value == "'":
            return True
        if tok.kind != "ident" or tok.value in ("STOP", "SKIP", "rec"):
            return False
        nxt = self.peek(1)
        if nxt.kind == "sym" and nxt.value == "->":
            return True
        if nxt.kind == "sym" and nxt.value == "{":
            return True  # a_{1,2} -> P
        return False

    def parse_csp_postfix(self):
        p = self.parse_csp_atom()
        while self.at_sym("\\", "|>", "[["):
            op = self.next().value
            if op == "\\":
                p = Hide(p, self.parse_label_set())
            elif op == "|>":
                p = RestrictCsp(p, self.parse_label_set())
            else:
                p = Rename(p, self.parse_rename_map())
        return p

    def parse_rename_map(self):
        mapping = {}
        while True:
            source = self.parse_label()
            self.expect("<-")
            target = self.parse_label()
            mapping.setdefault(source, set()).add(target)
            if not self.at_sym(","):
                break
            self.next()
        self.expect("]]")
        return mapping

    def parse_csp_atom(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.value == "STOP":
            self.next()
            return STOP
        if tok.kind == "ident" and tok.value == "SKIP":
            self.next()
            return SKIP
        if self.at_sym("("):
            self.next()
            p = self.parse_csp_proc()
            self.expect(")")
            return p
        if tok.kind == "ident":
            self.next()
            return Var(tok.value)
        raise ParseError("expected a process", tok.span)


def _finish(parser, p):
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError("unexpected trailing input", tok.span)
    return S.check_well_formed(p)


def parse_ccs(text):
    parser = _Parser(text, "ccs")
    return _finish(parser, parser.parse_ccs_proc())


def parse_ccstau(text):
    parser = _Parser(text, "ccstau")
    return _finish(parser, parser.parse_ccs_proc())


def parse_cspmn(text):
    parser = _Parser(text, "cspmn")
    return _finish(parser, parser.parse_csp_proc())


# --------------------------------------------------------------------------
# Pretty printer.

_CSP_ONLY = (Stop, Skip, ExtChoice, IntChoice, IfacePar, Hide, RestrictCsp, Rename)


def detect_dialect(p):
    if isinstance(p, _CSP_ONLY):
        return "cspmn"
    for c in S.children(p):
        if detect_dialect(c) == "cspmn":
            return "cspmn"
    return "ccs"


def _fmt_label_set(labels):
    """Hide/restrict set text; complement-closed pairs print once."""
    shown = []
    for l in sorted(labels):
        if l.kind in (S.CONAME, S.COSYNC, S.COINDEXED) and l.complement() in labels:
            continue
        shown.append(l.to_text())
    return "{" + ", ".join(shown) + "}"


def _fmt_clauses(clauses):
    parts = []
    for c in sorted(clauses):
        text = c.event.to_text()
        if c.multiplicity is not None:
            text += "#%d" % c.multiplicity
        parts.append(text)
    return "{" + ", ".join(parts) + "}"


# precedence levels: atom 100, postfix 90, prefix 80, sum/[] 70,
# |~| 60, parallel 50
_PAR_CLASSES = (Par, TPar, IfacePar)


def print_proc(p, dialect=None):
    """Render a term; parse(print(p)) equals p up to canonicalisation."""
    if dialect is None:
        dialect = detect_dialect(p)
    csp = dialect == "cspmn"

    def render(q, min_prec):
        text, prec = go(q)
        if prec < min_prec:
            return "(" + text + ")"
        return text

    def chain(q, cls):
        # maximal same-class chain printed flat; reparsing associates
        # to the left, which is equal up to canonicalisation
        parts = []

        def collect(r):
            if isinstance(r, cls):
                collect(r.left)
                collect(r.right)
            else:
                parts.append(r)

        collect(q)
        return parts

    def go(q):
        if isinstance(q, Nil):
            return "0", 100
        if isinstance(q, Stop):
            return "STOP", 100
        if isinstance(q, Skip):
            return "SKIP", 100
        if isinstance(q, Var):
            return q.var, 100
        if isinstance(q, Prefix):
            arrow = " -> " if csp else "."
            return q.label.to_text() + arrow + render(q.body, 80), 80
        if isinstance(q, Rec):
            return "rec %s. %s" % (q.var, render(q.body, 80)), 80
        if isinstance(q, (Sum, ExtChoice)):
            op = " [] " if isinstance(q, ExtChoice) else " + "
            parts = [render(b, 71) for b in chain(q, type(q))]
            return op.join(parts), 70
        if isinstance(q, IntChoice):
            # shape-preserving: canonicalisation does not reassociate
            # internal choice, so neither does the printer
            return render(q.left, 60) + " |~| " + render(q.right, 61), 60
        if isinstance(q, (Par, TPar)):
            op = " |T " if isinstance(q, TPar) else " | "
            left = render(q.left, 50)
            right = render(q.right, 51)
            return left + op + right, 50
        if isinstance(q, IfacePar):
            left = render(q.left, 50)
            right = render(q.right, 51)
            return "%s [| %s |] %s" % (left, _fmt_clauses(q.clauses), right), 50
        if isinstance(q, Restrict):
            return render(q.body, 90) + " \\ " + _fmt_label_set(q.labels), 90
        if isinstance(q, THide):
            return render(q.body, 90) + " \\T " + _fmt_label_set(q.labels), 90
        if isinstance(q, Hide):
            return render(q.body, 90) + " \\ " + _fmt_label_set(q.labels), 90
        if isinstance(q, RestrictCsp):
            return render(q.body, 90) + " |> " + _fmt_label_set(q.labels), 90
        if isinstance(q, Rename):
            pairs = []
            for src in sorted(q.mapping):
                for dst in sorted(q.mapping[src]):
                    pairs.append("%s <- %s" % (src.to_text(), dst.to_text()))
            return render(q.body, 90) + " [[ " + ", ".join(pairs) + " ]]", 90
        raise TypeError("not a process term: %r" % (q,))

    return render(p, 0)


# --------------------------------------------------------------------------
# LTS export.

def state_hash(term):
    return hashlib.sha1(print_proc(term).encode()).hexdigest()[:12]


def export_lts(lts, format):
    """Serialise a finite LTS to DOT or JSON (deterministic output)."""
    ids = {sid: state_hash(term) for sid, term in lts.states.items()}
    order = sorted(lts.states, key=lambda sid: (sid != lts.initial, ids[sid]))
    edges = sorted((ids[src], label.to_text(), ids[dst])
                   for src, label, dst in lts.transitions)
    if format == "json":
        doc = {
            "initial": ids[lts.initial],
            "complete": lts.complete,
            "states": [{"id": ids[sid], "term": print_proc(lts.states[sid])}
                       for sid in order],
            "transitions": [list(e) for e in edges],
        }
        return _json.dumps(doc, indent=2) + "\n"
    if format == "dot":
        lines = ["digraph lts {"]
        lines.append('  rankdir=LR;')
        lines.append('  __start [shape=point];')
        lines.append('  __start -> "%s";' % ids[lts.initial])
        for sid in order:
            lines.append('  "%s" [shape=ellipse];  // %s'
                         % (ids[sid], print_proc(lts.states[sid])))
        for src, label, dst in edges:
            lines.append('  "%s" -> "%s" [label="%s"];' % (src, dst, label))
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError("unknown LTS format %r" % (format,))


def import_lts_json(text):
    """Reload an exported JSON LTS as (initial, states, transitions)."""
    doc = _json.loads(text)
    states = {entry["id"]: entry["term"] for entry in doc["states"]}
    transitions = {tuple(t) for t in doc["transitions"]}
    return doc["initial"], states, transitions


# --------------------------------------------------------------------------
# CSPm (machine-readable CSP) export.

class CspmExportError(ValueError):
    pass


def _mangle(label):
    base = label.base.replace("_", "__")
    k = label.kind
    if k == S.TAUEVENT:
        return "tau"
    if k == S.NAME:
        return base
    if k == S.CONAME:
        return base + "_bar"
    if k == S.SYNC:
        return base + "_S"
    if k == S.COSYNC:
        return base + "_bar_S"
    if k == S.INDEXED:
        return base + "_" + "_".join(str(i) for i in label.indices)
    if k == S.COINDEXED:
        return base + "_bar_" + "_".join(str(i) for i in label.indices)
    raise CspmExportError("cannot export label %s" % label.to_text())


def _mentioned_events(p):
    """Every event occurring anywhere in the term (prefixes, hide sets,
    interfaces, renamings); hidden events still need declarations."""
    out = set()
    if isinstance(p, Prefix):
        if p.label.kind not in (S.TAU, S.TICK):
            out.add(p.label)
    elif isinstance(p, Hide):
        out |= p.labels
    elif isinstance(p, IfacePar):
        out |= {c.event for c in p.clauses}
    elif isinstance(p, Rename):
        for src, dsts in p.mapping.items():
            out.add(src)
            out |= dsts
    for c in S.children(p):
        out |= _mentioned_events(c)
    return out


def export_cspm(p):
    """Emit FDR-compatible CSPm: channel declarations, one equation per
    recursion binder, and a MAIN definition.

    The term must be plain CSP: no a#m clause below the arity of its
    parallel composition (elaborate with mn2csp first), no restriction,
    no tau-pair labels.
    """
    from . import semantics

    def check(q):
        if isinstance(q, RestrictCsp):
            raise CspmExportError(
                "CSPm has no restriction operator: %s" % print_proc(q))
        if isinstance(q, (Nil, Par, TPar, Restrict, THide)):
            raise CspmExportError("not a CSP term: %s" % print_proc(q))
        if isinstance(q, Prefix) and q.label.kind == S.TAUPAIR:
            raise CspmExportError(
                "tau-pair labels cannot be exported: %s" % print_proc(q))
        if isinstance(q, IfacePar):
            comps, _ = semantics.flatten_iface(q)
            for clause in q.clauses:
                if clause.multiplicity is not None and clause.multiplicity < len(comps):
                    raise CspmExportError(
                        "a#m clause below arity; elaborate with mn2csp first: %s"
                        % print_proc(q))
        for c in S.children(q):
            check(c)

    check(p)

    equations = []
    counter = [0]

    def fmt_events(labels):
        return "{" + ", ".join(sorted(_mangle(l) for l in labels)) + "}"

    def render(q, env, min_prec):
        text, prec = go(q, env)
        if prec < min_prec:
            return "(" + text + ")"
        return text

    def go(q, env):
        if isinstance(q, Stop):
            return "STOP", 100
        if isinstance(q, Skip):
            return "SKIP", 100
        if isinstance(q, Var):
            return env[q.var], 100
        if isinstance(q, Rec):
            pname = "REC%d" % counter[0]
            counter[0] += 1
            body = render(q.body, {**env, q.var: pname}, 0)
            equations.append("%s = %s" % (pname, body))
            return pname, 100
        if isinstance(q, Prefix):
            return "%s -> %s" % (_mangle(q.label), render(q.body, env, 80)), 80
        if isinstance(q, ExtChoice):
            return "%s [] %s" % (render(q.left, env, 70), render(q.right, env, 71)), 70
        if isinstance(q, IntChoice):
            return "%s |~| %s" % (render(q.left, env, 60), render(q.right, env, 61)), 60
        if isinstance(q, IfacePar):
            events = fmt_events({c.event for c in q.clauses})
            return "%s [| %s |] %s" % (render(q.left, env, 50), events,
                                       render(q.right, env, 51)), 50
        if isinstance(q, Hide):
            return "%s \\ %s" % (render(q.body, env, 90), fmt_events(q.labels)), 90
        if isinstance(q, Rename):
            pairs = []
            for src in sorted(q.mapping):
                for dst in sorted(q.mapping[src]):
                    pairs.append("%s <- %s" % (_mangle(src), _mangle(dst)))
            return "%s[[%s]]" % (render(q.body, env, 90), ", ".join(pairs)), 90
        raise CspmExportError("cannot export %s" % print_proc(q))

    main = render(p, {}, 0)
    channels = sorted(_mangle(e) for e in _mentioned_events(p))
    lines = []
    for ch in channels:
        lines.append("channel %s" % ch)
    if channels:
        lines.append("")
    for eq in equations:
        lines.append(eq)
    if equations:
        lines.append("")
    lines.append("MAIN = %s" % main)
    return "\n".join(lines) + "\n"

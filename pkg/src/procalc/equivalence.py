"""Strong bisimulation checking and labelled operational correspondence.

strong_bisim runs signature-based partition refinement over the
disjoint union of the two systems; round r of the refinement computes
exactly the bisimilarity-up-to-r classes, which also gives shortest
distinguishing traces.  Verdicts come with either a witness relation
(checkable independently with replay_witness) or a counterexample.

Label maps: the map is applied to the FIRST system's labels before
comparison in strong_bisim, and to the TARGET system's labels in
check_correspondence (matching the direction of translation theorems:
a source step a is matched by some target step that the map sends back
to a).
"""

import json as _json

from . import syntax as S


class IncompleteLts(ValueError):
    """Bisimulation checking needs fully explored systems."""


class LabelMap:
    """Total label function with a printable name."""

    def __init__(self, fn, name):
        self.fn = fn
        self.name = name

    def __call__(self, label):
        return self.fn(label)


IDENTITY = LabelMap(lambda l: l, "identity")


def _erase(label):
    if label.kind == S.INDEXED:
        return S.name(label.base)
    if label.kind == S.COINDEXED:
        return S.coname(label.base)
    return label


ERASE_INDICES = LabelMap(_erase, "erase-indices")


class BisimResult:
    def __init__(self, verdict, witness=None, counterexample=None):
        self.verdict = verdict
        self.witness = witness          # frozenset of (left id, right id)
        self.counterexample = counterexample

    def to_json(self):
        doc = {"verdict": self.verdict}
        if self.witness is not None:
            doc["witness_size"] = len(self.witness)
        if self.counterexample is not None:
            doc["counterexample"] = {
                "labels": [l.to_text() for l in self.counterexample.labels],
                "missing_side": self.counterexample.missing_side,
            }
        return doc


class Counterexample:
    """A distinguishing experiment: following `labels`, the run reaches
    a pair whose final label is enabled on only one side.  `pairs` holds
    the (left, right) state ids along the run, one pair per step."""

    def __init__(self, labels, pairs, missing_side):
        self.labels = labels
        self.pairs = pairs
        self.missing_side = missing_side


def _require_complete(lts, which):
    if not lts.complete:
        raise IncompleteLts(
            "%s system hit its exploration budget; raise --max-states or use "
            "a bounded check" % which)


def _refinement_rounds(succ, states):
    """Signature refinement; returns the per-round block assignments.
    rounds[r][s] is s's bisimilarity-up-to-r class."""
    blocks = {s: 0 for s in states}
    rounds = [blocks]
    while True:
        signatures = {}
        for s in states:
            sig = frozenset((label.key(), blocks[t]) for label, t in succ[s])
            signatures[s] = (blocks[s], sig)
        renumber = {}
        new_blocks = {}
        for s in sorted(states):
            key = signatures[s]
            if key not in renumber:
                renumber[key] = len(renumber)
            new_blocks[s] = renumber[key]
        if new_blocks == blocks:
            return rounds
        blocks = new_blocks
        rounds.append(blocks)


def _union_successors(l1, l2, f):
    succ = {}
    for sid in l1.states:
        succ[("L", sid)] = []
    for sid in l2.states:
        succ[("R", sid)] = []
    for src, label, dst in sorted(l1.transitions):
        succ[("L", src)].append((f(label), ("L", dst)))
    for src, label, dst in sorted(l2.transitions):
        succ[("R", src)].append((label, ("R", dst)))
    return succ


def strong_bisim(l1, l2, f=IDENTITY):
    """Partition-refinement strong bisimulation check of two complete
    LTSs; f is applied to l1's labels before comparison."""
    _require_complete(l1, "left")
    _require_complete(l2, "right")
    succ = _union_successors(l1, l2, f)
    states = list(succ)
    rounds = _refinement_rounds(succ, states)
    final = rounds[-1]
    left_init = ("L", l1.initial)
    right_init = ("R", l2.initial)
    if final[left_init] == final[right_init]:
        witness = frozenset(
            (a, b)
            for a in l1.states for b in l2.states
            if final[("L", a)] == final[("R", b)])
        return BisimResult(True, witness=witness)
    cex = _distinguish(succ, rounds, left_init, right_init)
    return BisimResult(False, counterexample=cex)


def _sep_level(rounds, s, t):
    for r, blocks in enumerate(rounds):
        if blocks[s] != blocks[t]:
            return r
    return None


def _distinguish(succ, rounds, s, t):
    """Shortest distinguishing trace between separated union states."""
    labels = []
    pairs = []
    while True:
        pairs.append((s[1], t[1]))
        level = _sep_level(rounds, s, t)
        assert level is not None and level >= 1
        s_by_label = {}
        for label, target in succ[s]:
            s_by_label.setdefault(label, []).append(target)
        t_by_label = {}
        for label, target in succ[t]:
            t_by_label.setdefault(label, []).append(target)
        if level == 1:
            one_sided = sorted(set(s_by_label) - set(t_by_label))
            if one_sided:
                labels.append(one_sided[0])
                return Counterexample(labels, pairs, "right")
            labels.append(sorted(set(t_by_label) - set(s_by_label))[0])
            return Counterexample(labels, pairs, "left")
        prev = rounds[level - 1]
        for label in sorted(set(s_by_label) | set(t_by_label)):
            s_classes = {prev[x] for x in s_by_label.get(label, [])}
            t_classes = {prev[x] for x in t_by_label.get(label, [])}
            split = sorted(s_classes.symmetric_difference(t_classes))
            if not split:
                continue
            cls = split[0]
            if cls in s_classes:
                nxt = min(x for x in s_by_label[label] if prev[x] == cls)
                # every t-answer is separated strictly earlier
                best = min(t_by_label[label],
                           key=lambda x: (_sep_level(rounds, nxt, x), x))
                labels.append(label)
                s, t = nxt, best
            else:
                nxt = min(x for x in t_by_label[label] if prev[x] == cls)
                best = min(s_by_label[label],
                           key=lambda x: (_sep_level(rounds, x, nxt), x))
                labels.append(label)
                s, t = best, nxt
            break
        else:
            raise AssertionError("separated pair with no splitting label")


def replay_witness(l1, l2, f, witness):
    """Independent check that a claimed relation is a strong bisimulation
    containing the initial pair: every step of one side is answered by an
    equally labelled step of the other into a related pair.  Returns the
    list of violations (empty means the witness is sound)."""
    violations = []
    if (l1.initial, l2.initial) not in witness:
        violations.append(("initial-pair-missing", l1.initial, l2.initial))
    left_out = l1.outgoing()
    right_out = l2.outgoing()
    related_right = {}
    related_left = {}
    for a, b in witness:
        related_right.setdefault(a, set()).add(b)
        related_left.setdefault(b, set()).add(a)
    for a, b in sorted(witness):
        for label, a2 in left_out[a]:
            answers = [b2 for rl, b2 in right_out[b]
                       if rl == f(label) and b2 in related_right.get(a2, ())]
            if not answers:
                violations.append(("left-step-unmatched", a, b, label.to_text()))
        for label, b2 in right_out[b]:
            answers = [a2 for ll, a2 in left_out[a]
                       if f(ll) == label and a2 in related_left.get(b2, ())]
            if not answers:
                violations.append(("right-step-unmatched", a, b, label.to_text()))
    return violations


# --------------------------------------------------------------------------
# Labelled operational correspondence.

class CorrespondenceReport:
    def __init__(self, passed, violations, checked_pairs):
        self.passed = passed
        self.violations = violations
        self.checked_pairs = checked_pairs

    def to_json(self):
        return {
            "passed": self.passed,
            "checked_pairs": self.checked_pairs,
            "violations": [list(v) for v in self.violations],
        }


def check_correspondence(source_lts, target_lts, f=IDENTITY):
    """Soundness and completeness of step matching between a system and
    its translation, up to strong bisimulation computed on the union.

    f maps target labels back to source labels.  Soundness: every source
    step with label a is answered by a target step that f sends to a,
    into a bisimulation-related state.  Completeness: the converse."""
    _require_complete(source_lts, "source")
    _require_complete(target_lts, "target")
    succ = _union_successors(target_lts, source_lts, f)  # relabel target
    states = list(succ)
    classes = _refinement_rounds(succ, states)[-1]
    src_out = source_lts.outgoing()
    tgt_out = target_lts.outgoing()
    violations = []
    start = (source_lts.initial, target_lts.initial)
    seen = {start}
    frontier = [start]
    checked = 0
    while frontier:
        s, t = frontier.pop()
        checked += 1
        for label, s2 in src_out[s]:
            matches = [t2 for tl, t2 in tgt_out[t]
                       if f(tl) == label
                       and classes[("R", s2)] == classes[("L", t2)]]
            if not matches:
                violations.append(("sound", s, t, label.to_text()))
                continue
            for t2 in matches:
                if (s2, t2) not in seen:
                    seen.add((s2, t2))
                    frontier.append((s2, t2))
        for tlabel, t2 in tgt_out[t]:
            mapped = f(tlabel)
            matches = [s2 for sl, s2 in src_out[s]
                       if sl == mapped
                       and classes[("R", s2)] == classes[("L", t2)]]
            if not matches:
                violations.append(("complete", s, t, tlabel.to_text()))
    return CorrespondenceReport(not violations, violations, checked)


# --------------------------------------------------------------------------
# Bounded (depth-limited) bisimulation, for systems that do not close.

class BoundedResult:
    def __init__(self, verdict, depth, violation=None):
        self.verdict = verdict
        self.depth = depth
        self.violation = violation  # (left term, right term, label text)

    def to_json(self):
        doc = {"verdict": self.verdict, "depth": self.depth,
               "authoritative": False}
        if self.violation is not None:
            from . import io
            left, right, label = self.violation
            doc["violation"] = {
                "left": io.print_proc(left),
                "right": io.print_proc(right),
                "label": label,
            }
        return doc


def bounded_bisim(left, step_left, right, step_right, depth, f=IDENTITY):
    """Bisimulation up to the given depth, computed on the fly from the
    step functions.  Not authoritative: states at the horizon are deemed
    related.  f is applied to the right system's labels."""
    memo = {}
    violation = []

    def related(p, q, k):
        if k == 0:
            return True
        key = (p, q, k)
        if key in memo:
            return memo[key]
        memo[key] = True
        left_steps = sorted((l, S.canonicalise(t)) for l, t in step_left(p))
        right_steps = sorted((l, S.canonicalise(t)) for l, t in step_right(q))
        ok = True
        for label, p2 in left_steps:
            if not any(f(rl) == label and related(p2, q2, k - 1)
                       for rl, q2 in right_steps):
                if not violation:
                    violation.append((p, q, label.to_text()))
                ok = False
                break
        if ok:
            for rlabel, q2 in right_steps:
                if not any(sl == f(rlabel) and related(p2, q2, k - 1)
                           for sl, p2 in left_steps):
                    if not violation:
                        violation.append((p, q, rlabel.to_text()))
                    ok = False
                    break
        memo[key] = ok
        return ok

    verdict = related(S.canonicalise(left), S.canonicalise(right), depth)
    return BoundedResult(verdict, depth, violation[0] if violation else None)


def report_to_text(doc):
    return _json.dumps(doc, indent=2, sort_keys=True) + "\n"

"""Behavioural equivalences on timed transition systems.

* :func:`step_bisim` - step bisimulation with the time clauses (unit ticks
  matched by ticks, ↑, termination and horizon cuts preserved), decided by
  partition refinement over the disjoint union of both systems.
* :func:`rb_step_bisim` - rooted branching step bisimulation.  The
  observable part of a step is its multiset without τ; a step made only of
  τ is silent.  Silent steps inside a block are inert; ticks are matched
  strictly; termination and ↑ are weak (reachable through inert steps).  The root condition is then
  checked on the initial states (and on states reached from them by ticks).
* :func:`pomset_bisim_small`, :func:`hp_bisim_small` - brute-force checkers
  for small acyclic systems.  A path of steps denotes the pomset in which
  every event of an earlier step precedes every event of a later step.

Every report carries either a relation (verdict true) or a distinguishing
observation (verdict false) that :func:`replay` can re-execute.
"""

from itertools import permutations, product

from . import terms as T
from .errors import ModeMismatch, TooLarge
from .graphs import tarjan_scc
from .sos import SINK_ID


class EquivalenceReport:
    """Verdict plus witness.

    ``relation``: sorted list of related state pairs (``-1`` is the sink)
    when the verdict is true.  ``observation``: list of observations (step
    labels such as ``{a,b}``, ``tick``, or a final predicate ``deadlock``,
    ``terminate``, ``cut``) distinguishing the initial states when false;
    ``witness_kind`` says how to replay it (``strong-trace``,
    ``weak-trace``, ``root`` or ``level``).
    """

    def __init__(self, kind, verdict, relation=None, observation=None,
                 witness_kind=None, detail=""):
        self.kind = kind
        self.verdict = verdict
        self.relation = relation
        self.observation = observation
        self.witness_kind = witness_kind
        self.detail = detail

    def __bool__(self):
        return self.verdict

    def text(self):
        lines = ["equivalence: %s" % self.kind,
                 "verdict: %s" % ("true" if self.verdict else "false")]
        if self.verdict:
            lines.append("relation-size: %d" % len(self.relation or ()))
        else:
            lines.append("distinguish: %s" % " ".join(self.observation or ["?"]))
            lines.append("witness-kind: %s" % self.witness_kind)
        if self.detail:
            lines.append("detail: %s" % self.detail)
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return "EquivalenceReport(%s, %s)" % (self.kind, self.verdict)


def label_text(labels):
    return "{%s}" % ",".join(labels)


def observable(labels):
    """Multiset without τ (empty tuple for a silent step)."""
    return tuple(a for a in labels if a != T.TAU)


class _Joint:
    """Disjoint union of two systems with one shared termination sink."""

    def __init__(self, l1, l2):
        if l1.mode != l2.mode:
            raise ModeMismatch("cannot compare %s with %s" % (l1.mode, l2.mode))
        self.l1, self.l2 = l1, l2
        self.off2 = l1.n
        self.sink = l1.n + l2.n
        N = self.sink + 1
        self.N = N
        self.succ = [None] * N
        self.tick = [None] * N
        self.dead = [False] * N
        self.cut = [False] * N
        for lts, off in ((l1, 0), (l2, self.off2)):
            for s in range(lts.n):
                v = off + s
                self.succ[v] = [(l, self.sink if d == SINK_ID else off + d)
                                for l, d in lts.succ[s]]
                if lts.tick[s] is not None:
                    self.tick[v] = off + lts.tick[s]
                self.dead[v] = s in lts.deadlocked
                self.cut[v] = s in lts.cut
        self.succ[self.sink] = []
        self.init1 = l1.initial
        self.init2 = self.off2 + l2.initial

    def local(self, v):
        if v == self.sink:
            return SINK_ID
        return v if v < self.off2 else v - self.off2

    def preds(self, v):
        out = []
        if v == self.sink:
            out.append("terminate")
        if self.dead[v]:
            out.append("deadlock")
        if self.cut[v]:
            out.append("cut")
        return out


def _renumber(keys):
    ids = {}
    out = []
    for k in keys:
        i = ids.get(k)
        if i is None:
            i = len(ids)
            ids[k] = i
        out.append(i)
    return out, len(ids)


# ------------------------------------------------------------------ strong

def _strong_partition(J):
    B, count = _renumber([(v == J.sink, J.dead[v], J.cut[v]) for v in range(J.N)])
    hist = [B]
    while True:
        sigs = []
        for v in range(J.N):
            t = J.tick[v]
            sigs.append((B[v], frozenset((l, B[d]) for l, d in J.succ[v]),
                         -1 if t is None else B[t]))
        nb, ncount = _renumber(sigs)
        if ncount == count:
            return B, hist
        B, count = nb, ncount
        hist.append(B)


def _pairs(J, B):
    by_block = {}
    for v in range(J.off2, J.sink):
        by_block.setdefault(B[v], []).append(v)
    rel = []
    for v in range(J.off2):
        for w in by_block.get(B[v], ()):
            rel.append((J.local(v), J.local(w)))
    rel.append((SINK_ID, SINK_ID))
    return sorted(rel)


def _level_explain(J, hist, p, q):
    """Follow refinement levels to a move available on one side only."""
    obs = []
    while True:
        k = next(i for i, P in enumerate(hist) if P[p] != P[q])
        if k == 0:
            pp, pq = J.preds(p), J.preds(q)
            diff = sorted(set(pp) ^ set(pq))
            obs.append(diff[0])
            return obs
        P = hist[k - 1]
        tp, tq = J.tick[p], J.tick[q]
        if (tp is None) != (tq is None):
            obs.append("tick")
            return obs
        if tp is not None and P[tp] != P[tq]:
            obs.append("tick")
            p, q = tp, tq
            continue
        sp = {(l, P[d]) for l, d in J.succ[p]}
        sq = {(l, P[d]) for l, d in J.succ[q]}
        if not (sp - sq):
            p, q = q, p
            sp, sq = sq, sp
        l, blk = min(sp - sq)
        p2 = min(d for ll, d in J.succ[p] if ll == l and P[d] == blk)
        qs = sorted(d for ll, d in J.succ[q] if ll == l)
        obs.append(label_text(l))
        if not qs:
            return obs
        p, q = p2, qs[0]


def _trace_explain(J, a, b, weak, limit=50000):
    """Shortest (weak) trace after which one side offers what the other lacks."""

    def closure(S):
        if not weak:
            return frozenset(S)
        seen = set(S)
        stack = list(S)
        while stack:
            v = stack.pop()
            for l, d in J.succ[v]:
                if not observable(l) and d not in seen:
                    seen.add(d)
                    stack.append(d)
        return frozenset(seen)

    def letters(S):
        out = {}
        for v in S:
            for l, d in J.succ[v]:
                key = observable(l) if weak else l
                if weak and not key:
                    continue
                out.setdefault(label_text(key), set()).add(d)
            if J.tick[v] is not None:
                out.setdefault("tick", set()).add(J.tick[v])
        return out

    start = (closure([a]), closure([b]))
    seen = {start}
    frontier = [(start, [])]
    while frontier:
        nxt = []
        for (A, Bs), trace in frontier:
            for pred in ("terminate", "deadlock", "cut"):
                ha = any(pred in J.preds(v) for v in A)
                hb = any(pred in J.preds(v) for v in Bs)
                if ha != hb:
                    return trace + [pred]
            la, lb = letters(A), letters(Bs)
            for name in sorted(set(la) ^ set(lb)):
                return trace + [name]
            for name in sorted(la):
                pair = (closure(la[name]), closure(lb[name]))
                if pair not in seen:
                    if len(seen) >= limit:
                        return None
                    seen.add(pair)
                    nxt.append((pair, trace + [name]))
        frontier = nxt
    return None


def step_bisim(l1, l2):
    """Step bisimilarity of the initial states (time-aware)."""
    J = _Joint(l1, l2)
    B, hist = _strong_partition(J)
    if B[J.init1] == B[J.init2]:
        return EquivalenceReport("step", True, relation=_pairs(J, B))
    obs = _trace_explain(J, J.init1, J.init2, weak=False)
    if obs is not None:
        return EquivalenceReport("step", False, observation=obs, witness_kind="strong-trace")
    obs = _level_explain(J, hist, J.init1, J.init2)
    return EquivalenceReport("step", False, observation=obs, witness_kind="level",
                             detail="systems are trace equivalent; branching structure differs")


# --------------------------------------------------------------- branching

def _branching_partition(J):
    B, count = _renumber([J.cut[v] for v in range(J.N)])
    while True:
        def inert(v):
            return [d for l, d in J.succ[v] if not observable(l) and B[d] == B[v]]

        sig = [None] * J.N
        for comp in tarjan_scc(range(J.N), inert):
            members = set(comp)
            acc = set()
            for v in comp:
                for l, d in J.succ[v]:
                    o = observable(l)
                    if not o and B[d] == B[v]:
                        if d not in members:
                            acc |= sig[d]
                        continue
                    acc.add(("a", o, B[d]))
                if J.tick[v] is not None:
                    acc.add(("t", B[J.tick[v]]))
                if v == J.sink:
                    acc.add(("s",))
                if J.dead[v]:
                    acc.add(("d",))
            fs = frozenset(acc)
            for v in comp:
                sig[v] = fs
        nb, ncount = _renumber([(B[v], sig[v]) for v in range(J.N)])
        if ncount == count:
            return B
        B, count = nb, ncount


def _root_ok(J, B, p, q, seen=None):
    """Root condition: initial moves matched directly (no stuttering)."""
    seen = seen if seen is not None else set()
    if (p, q) in seen:
        return None
    seen.add((p, q))
    if J.dead[p] != J.dead[q] or J.cut[p] != J.cut[q] or (p == J.sink) != (q == J.sink):
        return "predicate"
    for x, y in ((p, q), (q, p)):
        moves_y = {(observable(l), B[d]) for l, d in J.succ[y]}
        for l, d in J.succ[x]:
            if (observable(l), B[d]) not in moves_y:
                return label_text(observable(l) or (T.TAU,))
    tp, tq = J.tick[p], J.tick[q]
    if (tp is None) != (tq is None):
        return "tick"
    if tp is not None:
        if B[tp] != B[tq]:
            return "tick"
        r = _root_ok(J, B, tp, tq, seen)
        if r is not None:
            return "tick " + r
    return None


def rb_step_bisim(l1, l2):
    """Rooted branching step bisimilarity of the initial states."""
    J = _Joint(l1, l2)
    B = _branching_partition(J)
    if B[J.init1] == B[J.init2]:
        bad = _root_ok(J, B, J.init1, J.init2)
        if bad is None:
            return EquivalenceReport("rb-step", True, relation=_pairs(J, B))
        return EquivalenceReport("rb-step", False, observation=bad.split(" "),
                                 witness_kind="root",
                                 detail="branching bisimilar but the root condition fails")
    obs = _trace_explain(J, J.init1, J.init2, weak=True)
    if obs is not None:
        return EquivalenceReport("rb-step", False, observation=obs, witness_kind="weak-trace")
    return EquivalenceReport("rb-step", False, observation=["branching"], witness_kind="level",
                             detail="weak-trace equivalent but not branching bisimilar")


def branching_blocks(lts):
    """Branching-bisimulation block of every state of one system."""
    J = _Joint(lts, lts)
    B = _branching_partition(J)
    return [B[s] for s in range(lts.n)], B[J.sink]


# ------------------------------------------------------------------ replay

def replay(l1, l2, report):
    """Re-execute a distinguishing observation; True if the outcomes diverge."""
    if report.verdict:
        return False
    J = _Joint(l1, l2)
    obs = report.observation
    if report.witness_kind in ("strong-trace", "weak-trace"):
        weak = report.witness_kind == "weak-trace"
        A, Bs = {J.init1}, {J.init2}

        def closure(S):
            S = set(S)
            if weak:
                stack = list(S)
                while stack:
                    v = stack.pop()
                    for l, d in J.succ[v]:
                        if not observable(l) and d not in S:
                            S.add(d)
                            stack.append(d)
            return S

        def move(S, name):
            out = set()
            for v in S:
                if name == "tick":
                    if J.tick[v] is not None:
                        out.add(J.tick[v])
                    continue
                for l, d in J.succ[v]:
                    key = observable(l) if weak else l
                    if (key or not weak) and label_text(key) == name:
                        out.add(d)
            return out

        A, Bs = closure(A), closure(Bs)
        for name in obs[:-1]:
            A, Bs = closure(move(A, name)), closure(move(Bs, name))
            if not A or not Bs:
                return False
        last = obs[-1]
        if last in ("terminate", "deadlock", "cut"):
            return any(last in J.preds(v) for v in A) != any(last in J.preds(v) for v in Bs)
        return bool(move(A, last)) != bool(move(Bs, last))
    if report.witness_kind == "root":
        B = _branching_partition(J)
        return _root_ok(J, B, J.init1, J.init2) is not None
    return not step_bisim(l1, l2).verdict if report.kind == "step" else \
        not rb_step_bisim(l1, l2).verdict


# ------------------------------------------------------------ validators

def validate_step_relation(l1, l2, relation):
    """Check that ``relation`` is a step bisimulation containing the roots."""
    J = _Joint(l1, l2)
    R = set()
    for a, b in relation:
        R.add((J.sink if a == SINK_ID else a, J.sink if b == SINK_ID else J.off2 + b))
    if (J.init1, J.init2) not in R:
        return False
    for p, q in R:
        if J.preds(p) != J.preds(q):
            return False
        for x, y, fwd in ((p, q, True), (q, p, False)):
            for l, d in J.succ[x]:
                if not any(ll == l and ((d, e) in R if fwd else (e, d) in R)
                           for ll, e in J.succ[y]):
                    return False
        tp, tq = J.tick[p], J.tick[q]
        if (tp is None) != (tq is None):
            return False
        if tp is not None and (tp, tq) not in R:
            return False
    return True


# ------------------------------------------------------ small brute force

def _acyclic_events(lts, max_events):
    """Longest event count along paths; TooLarge if cyclic or too many."""
    memo = {}
    state = {}

    def longest(s):
        if s == SINK_ID:
            return 0
        if s in memo:
            return memo[s]
        if state.get(s) == 1:
            raise TooLarge("system is cyclic")
        state[s] = 1
        best = 0
        for l, d in lts.succ[s]:
            best = max(best, len(l) + longest(d))
        if lts.tick[s] is not None:
            best = max(best, longest(lts.tick[s]))
        state[s] = 2
        memo[s] = best
        return best

    n = longest(lts.initial)
    if n > max_events:
        raise TooLarge("%d events exceed the limit %d" % (n, max_events))
    return n


def _preds(lts, s):
    if s == SINK_ID:
        return ("terminate",)
    return tuple(p for p, flag in (("deadlock", s in lts.deadlocked), ("cut", s in lts.cut))
                 if flag)


def _succ(lts, s):
    return [] if s == SINK_ID else lts.succ[s]


def _tick(lts, s):
    return None if s == SINK_ID else lts.tick[s]


def _paths(lts, s):
    """All nonempty action paths from ``s``: (list of steps, end state)."""
    out = []

    def walk(v, steps):
        for l, d in _succ(lts, v):
            nsteps = steps + [l]
            out.append((nsteps, d))
            walk(d, nsteps)

    walk(s, [])
    return out


def _poset(steps):
    """Events ``(layer, label)`` of a step sequence (layered order)."""
    return [(i, a) for i, step in enumerate(steps) for a in step]


def _isomorphic(P, Q):
    """Brute-force labelled-poset isomorphism; returns a bijection or None."""
    if len(P) != len(Q) or sorted(a for _, a in P) != sorted(a for _, a in Q):
        return None
    labels = sorted(set(a for _, a in P))
    idx_p = {a: [i for i, (_, b) in enumerate(P) if b == a] for a in labels}
    idx_q = {a: [i for i, (_, b) in enumerate(Q) if b == a] for a in labels}
    for choice in product(*(permutations(idx_q[a]) for a in labels)):
        f = {}
        for a, perm in zip(labels, choice):
            for i, j in zip(idx_p[a], perm):
                f[i] = j
        if all((P[i][0] < P[k][0]) == (Q[f[i]][0] < Q[f[k]][0])
               for i in range(len(P)) for k in range(len(P))):
            return f
    return None


def pomset_bisim_small(l1, l2, max_events=6):
    """Pomset bisimilarity by exhaustive search on small acyclic systems."""
    if l1.mode != l2.mode:
        raise ModeMismatch("cannot compare %s with %s" % (l1.mode, l2.mode))
    _acyclic_events(l1, max_events)
    _acyclic_events(l2, max_events)
    memo = {}

    def related(p, q):
        key = (p, q)
        if key in memo:
            return memo[key]
        memo[key] = True
        ok = _preds(l1, p) == _preds(l2, q)
        if ok:
            tp, tq = _tick(l1, p), _tick(l2, q)
            ok = (tp is None) == (tq is None) and (tp is None or related(tp, tq))
        if ok:
            paths_p, paths_q = _paths(l1, p), _paths(l2, q)
            ok = all(any(_isomorphic(_poset(sp), _poset(sq)) is not None and related(ep, eq)
                         for sq, eq in paths_q) for sp, ep in paths_p) and \
                all(any(_isomorphic(_poset(sq), _poset(sp)) is not None and related(ep, eq)
                        for sp, ep in paths_p) for sq, eq in paths_q)
        memo[key] = ok
        return ok

    verdict = related(l1.initial, l2.initial)
    if verdict:
        rel = sorted(k for k, v in memo.items() if v)
        return EquivalenceReport("pomset", True, relation=rel)
    return EquivalenceReport("pomset", False, observation=["pomset"], witness_kind="level")


def validate_pomset_relation(l1, l2, relation):
    """Re-check the pomset bisimulation clauses on a returned relation."""
    R = set(relation)
    if (l1.initial, l2.initial) not in R:
        return False
    for p, q in R:
        if _preds(l1, p) != _preds(l2, q):
            return False
        tp, tq = _tick(l1, p), _tick(l2, q)
        if (tp is None) != (tq is None) or (tp is not None and (tp, tq) not in R):
            return False
        paths_p, paths_q = _paths(l1, p), _paths(l2, q)
        for sp, ep in paths_p:
            if not any((ep, eq) in R and _isomorphic(_poset(sp), _poset(sq)) is not None
                       for sq, eq in paths_q):
                return False
        for sq, eq in paths_q:
            if not any((ep, eq) in R and _isomorphic(_poset(sp), _poset(sq)) is not None
                       for sp, ep in paths_p):
                return False
    return True


def _extend_ok(h1, h2, f):
    """``f`` (index map h1→h2) is a label- and order-preserving bijection."""
    if len(f) != len(h1) or sorted(f.values()) != list(range(len(h2))):
        return False
    for i in range(len(h1)):
        if h1[i][1] != h2[f[i]][1]:
            return False
        for k in range(len(h1)):
            if (h1[i][0] < h1[k][0]) != (h2[f[i]][0] < h2[f[k]][0]):
                return False
    return True


def _step_bijections(s1, s2):
    if sorted(s1) != sorted(s2):
        return
    n = len(s1)
    for perm in permutations(range(n)):
        if all(s1[i] == s2[perm[i]] for i in range(n)):
            yield perm


def hp_bisim_small(l1, l2, max_events=6):
    """History-preserving bisimilarity by exhaustive search (acyclic, small).

    Triples are ``(p, q, f)`` where ``f`` maps the events of the history of
    ``p`` to those of ``q``; histories are the layered posets of the paths.
    """
    if l1.mode != l2.mode:
        raise ModeMismatch("cannot compare %s with %s" % (l1.mode, l2.mode))
    _acyclic_events(l1, max_events)
    _acyclic_events(l2, max_events)
    memo = {}

    def related(p, q, h1, h2, f):
        key = (p, q, h1, h2, f)
        if key in memo:
            return memo[key]
        memo[key] = True
        ok = _preds(l1, p) == _preds(l2, q)
        if ok:
            tp, tq = _tick(l1, p), _tick(l2, q)
            ok = (tp is None) == (tq is None) and (tp is None or related(tp, tq, h1, h2, f))
        if ok:
            for x_is_p in (True, False):
                xs = _succ(l1, p) if x_is_p else _succ(l2, q)
                ys = _succ(l2, q) if x_is_p else _succ(l1, p)
                for lx, dx in xs:
                    found = False
                    for ly, dy in ys:
                        for perm in _step_bijections(lx, ly):
                            if x_is_p:
                                n1, n2, s1, s2, pp = h1, h2, lx, ly, perm
                            else:
                                n1, n2, s1, s2 = h1, h2, ly, lx
                                pp = tuple(perm.index(i) for i in range(len(perm)))
                            layer1 = (max((e[0] for e in n1), default=-1) + 1)
                            layer2 = (max((e[0] for e in n2), default=-1) + 1)
                            nh1 = n1 + tuple((layer1, a) for a in s1)
                            nh2 = n2 + tuple((layer2, a) for a in s2)
                            nf = f + tuple(len(n2) + pp[i] for i in range(len(s1)))
                            if not _extend_ok(nh1, nh2, dict(enumerate(nf))):
                                continue
                            np_, nq = (dx, dy) if x_is_p else (dy, dx)
                            if related(np_, nq, nh1, nh2, nf):
                                found = True
                                break
                        if found:
                            break
                    if not found:
                        ok = False
                        break
                if not ok:
                    break
        memo[key] = ok
        return ok

    verdict = related(l1.initial, l2.initial, (), (), ())
    if verdict:
        rel = sorted(k for k, v in memo.items() if v)
        return EquivalenceReport("hp", True, relation=rel)
    return EquivalenceReport("hp", False, observation=["history"], witness_kind="level")


def validate_hp_relation(l1, l2, relation):
    """Re-check the hp-bisimulation clauses on a returned set of triples."""
    R = set(relation)
    if (l1.initial, l2.initial, (), (), ()) not in R:
        return False
    for p, q, h1, h2, f in R:
        if not _extend_ok(h1, h2, dict(enumerate(f))):
            return False
        if _preds(l1, p) != _preds(l2, q):
            return False
        tp, tq = _tick(l1, p), _tick(l2, q)
        if (tp is None) != (tq is None) or (tp is not None and (tp, tq, h1, h2, f) not in R):
            return False
        for x_is_p in (True, False):
            xs = _succ(l1, p) if x_is_p else _succ(l2, q)
            ys = _succ(l2, q) if x_is_p else _succ(l1, p)
            for lx, dx in xs:
                ok = False
                for ly, dy in ys:
                    s1, s2 = (lx, ly) if x_is_p else (ly, lx)
                    d1, d2 = (dx, dy) if x_is_p else (dy, dx)
                    l1_ = max((e[0] for e in h1), default=-1) + 1
                    l2_ = max((e[0] for e in h2), default=-1) + 1
                    nh1 = h1 + tuple((l1_, a) for a in s1)
                    nh2 = h2 + tuple((l2_, a) for a in s2)
                    for (pp, qq, hh1, hh2, ff) in R:
                        if (pp, qq, hh1, hh2) == (d1, d2, nh1, nh2) and ff[:len(f)] == f:
                            ok = True
                            break
                    if ok:
                        break
                if not ok:
                    return False
    return True

"""Structural operational semantics and timed transition systems.

For relative timing (drt) a state is a term; for absolute timing (dat) a
state is a term paired with the absolute clock.  :class:`Semantics` derives
the outgoing behaviour of a single state directly from the transition rule
tables; :func:`build_lts` closes a term under it.

Time edges are unit slices ("tick").  Termination goes to a single sink.
"""

from . import terms as T
from .conflict import blockers, theta_push, unfold_once
from .errors import BoundExceeded, ModeMismatch, OpenTermError, UnguardedRecursion

SINK = None
SINK_ID = -1

DEFAULT_BOUNDS = {"max_states": 200000, "horizon": 50, "unfold_depth": 64}


class Semantics:
    """Rule-table interpreter for one configuration (results are memoized)."""

    def __init__(self, config, unfold_depth=64):
        self.config = config
        self.mode = config.mode
        self.unfold_depth = unfold_depth
        self._drt = {}
        self._dat = {}
        self._active = []
        self._dead_active = []

    # ------------------------------------------------------------ helpers
    def _rec(self, t):
        if t in self._active or len(self._active) >= self.unfold_depth:
            raise UnguardedRecursion("unguarded recursion through <%s|%s>"
                                     % (t.attr[0], t.attr[1].name))
        self._active.append(t)

    def _guarded(self, arg, thunk):
        if arg.tag != "RecConst":
            return thunk()
        self._rec(arg)
        try:
            return thunk()
        finally:
            self._active.pop()

    @staticmethod
    def _join(t1, t2):
        if t1 is SINK:
            return t2
        if t2 is SINK:
            return t1
        return T.WholeParallel(t1, t2)

    def _par_acts(self, ax, ay):
        out = set()
        for l1, t1 in ax:
            for l2, t2 in ay:
                out.add((tuple(sorted(l1 + l2)), self._join(t1, t2)))
        return out

    def _comm_acts(self, ax, ay):
        out = set()
        for l1, t1 in ax:
            if len(l1) != 1:
                continue
            for l2, t2 in ay:
                if len(l2) != 1:
                    continue
                c = self.config.comm(l1[0], l2[0])
                if c is not None:
                    out.add(((c,), self._join(t1, t2)))
        return out

    def _map_acts(self, acts, fn, wrap):
        out = set()
        for labels, tgt in acts:
            new = fn(labels)
            if new is None:
                continue
            out.add((new, SINK if tgt is SINK else wrap(tgt)))
        return out

    def _label_fn(self, t):
        tag = t.tag
        if tag == "Encapsulate":
            H = set(t.attr)
            return lambda ls: None if any(a in H for a in ls) else ls
        if tag == "Abstract":
            I = set(t.attr)
            return lambda ls: tuple(sorted(T.TAU if a in I else a for a in ls))
        if tag == "Rename":
            f = dict(t.attr)
            return lambda ls: tuple(sorted(f.get(a, a) for a in ls))
        if tag == "Unless":
            bl = blockers(t.args[1])
            cfg = self.config
            return lambda ls: tuple(sorted(cfg.unless_label(a, bl) for a in ls))
        raise ValueError(tag)

    # ------------------------------------------------------------ deadlock
    def _dead_rec(self, t, check):
        # separate stack: ↑ of a constant may be asked while deriving it
        if t in self._dead_active or len(self._dead_active) >= self.unfold_depth:
            raise UnguardedRecursion("unguarded recursion through <%s|%s>"
                                     % (t.attr[0], t.attr[1].name))
        self._dead_active.append(t)
        try:
            return check(unfold_once(t.attr[1], t.attr[0]))
        finally:
            self._dead_active.pop()

    def dead(self, t):
        """drt ↑ alone; unlike :meth:`derive` it never looks below a delay."""
        tag = t.tag
        if tag == "RelDelay":
            return t.attr == 0 and self.dead(t.args[0])
        if tag == "RelInit":
            return t.attr == 0 and self.dead(t.args[0])
        if tag == "RelTimeout":
            return t.attr == 0 or self.dead(t.args[0])
        if tag == "Alt":
            return all(self.dead(a) for a in t.args)
        if tag in ("Seq", "Encapsulate", "Abstract", "Rename", "Unless"):
            return self.dead(t.args[0])
        if tag in ("Parallel", "CommMerge", "WholeParallel"):
            return any(self.dead(a) for a in t.args)
        if tag == "RecConst":
            return self._dead_rec(t, lambda u: self.dead(u))
        return self.derive(t)[2]

    def dead_at(self, t, k):
        """dat ↑ at clock ``k``; never looks below a pending delay."""
        tag = t.tag
        if tag == "UndelayableAction":
            return k >= 1
        if tag == "AbsDelay":
            return k >= t.attr and self.dead_at(t.args[0], k - t.attr)
        if tag == "AbsInit":
            return t.attr <= k and self.dead_at(t.args[0], k)
        if tag == "AbsTimeout":
            return t.attr <= k or self.dead_at(t.args[0], k)
        if tag == "Alt":
            return all(self.dead_at(a, k) for a in t.args)
        if tag in ("Seq", "Encapsulate", "Abstract", "Rename", "Unless"):
            return self.dead_at(t.args[0], k)
        if tag in ("Parallel", "CommMerge", "WholeParallel"):
            return any(self.dead_at(a, k) for a in t.args)
        if tag == "RecConst":
            return self._dead_rec(t, lambda u: self.dead_at(u, k))
        return self.derive_at(t, k)[2]

    # --------------------------------------------------------------- drt
    def derive(self, t):
        """drt: ``(actions, tick_successor_or_None, deadlocked)``.

        ``actions`` is a frozenset of ``(labels, target)`` where labels is a
        sorted tuple and target is a term or ``SINK``.
        """
        r = self._drt.get(t)
        if r is None:
            r = self._derive_drt(t)
            self._drt[t] = r
        return r

    def _derive_drt(self, t):
        tag = t.tag
        d = self.derive
        if tag == "DeadlockedProcess":
            return frozenset(), None, True
        if tag == "UndelayableAction":
            if t.attr == T.DELTA:
                return frozenset(), None, False
            return frozenset({((t.attr,), SINK)}), None, False
        if tag == "Alt":
            acts, ticks, dead = set(), [], True
            for a in t.args:
                ax, tx, dx = d(a)
                acts |= ax
                if tx is not None:
                    ticks.append(tx)
                dead = dead and dx
            return frozenset(acts), (T.alt(*ticks) if ticks else None), dead
        if tag == "Seq":
            x, y = t.args
            ax, tx, dx = d(x)
            acts = frozenset((l, y if tg is SINK else T.Seq(tg, y)) for l, tg in ax)
            return acts, (T.Seq(tx, y) if tx is not None else None), dx
        if tag in ("Parallel", "CommMerge", "WholeParallel"):
            if tag == "Parallel":
                x, y = t.args[0], T.par(*t.args[1:])
            else:
                x, y = t.args
            ax, tx, dx = d(x)
            ay, ty, dy = d(y)
            acts = set()
            if tag != "CommMerge":
                acts |= self._par_acts(ax, ay)
            if tag != "Parallel":
                acts |= self._comm_acts(ax, ay)
            tick = None
            if tx is not None and ty is not None:
                tick = T.par(tx, ty) if tag == "Parallel" else T.rebuild(t, [tx, ty])
            return frozenset(acts), tick, dx or dy
        if tag == "RelDelay":
            n, x = t.attr, t.args[0]
            if n == 0:
                return d(x)
            if n >= 2:
                return frozenset(), T.RelDelay(n - 1, x), False
            return frozenset(), (None if self.dead(x) else x), False
        if tag == "RelTimeout":
            n, x = t.attr, t.args[0]
            if n == 0:
                return frozenset(), None, True
            ax, tx, dx = d(x)
            tick = T.RelTimeout(n - 1, tx) if (n >= 2 and tx is not None) else None
            return ax, tick, dx
        if tag == "RelInit":
            n, x = t.attr, t.args[0]
            ax, tx, dx = d(x)
            if n == 0:
                return ax, tx, dx
            if n == 1:
                return frozenset(), tx, False
            if tx is not None:
                return frozenset(), T.RelInit(n - 1, tx), False
            return frozenset(), T.RelInit(n - 1, T.DEADLOCKED), False
        if tag in ("Encapsulate", "Abstract", "Rename", "Unless"):
            x = t.args[0]
            ax, tx, dx = d(x)
            wrap = (lambda u: T.rebuild(t, [u] + list(t.args[1:])))
            acts = self._map_acts(ax, self._label_fn(t), wrap)
            return frozenset(acts), (wrap(tx) if tx is not None else None), dx
        if tag == "ConflictElim":
            return self._guarded(t.args[0], lambda: d(theta_push(t.args[0], self.mode)[0]))
        if tag == "RecConst":
            self._rec(t)
            try:
                return d(unfold_once(t.attr[1], t.attr[0]))
            finally:
                self._active.pop()
        if tag == "RecVar":
            raise OpenTermError("free variable %s" % t.attr)
        if tag in T.TIMED_TAGS:
            raise ModeMismatch("%s in a drt derivation" % tag)
        raise ValueError(tag)

    # --------------------------------------------------------------- dat
    def derive_at(self, t, k):
        """dat: ``(actions, can_idle, deadlocked)`` for state ``⟨t, k⟩``."""
        key = (t, k)
        r = self._dat.get(key)
        if r is None:
            r = self._derive_dat(t, k)
            self._dat[key] = r
        return r

    def _derive_dat(self, t, k):
        tag = t.tag
        d = self.derive_at
        if tag == "DeadlockedProcess":
            return frozenset(), False, True
        if tag == "UndelayableAction":
            if k >= 1:
                return frozenset(), False, True
            if t.attr == T.DELTA:
                return frozenset(), False, False
            return frozenset({((t.attr,), SINK)}), False, False
        if tag == "Alt":
            acts, idle, dead = set(), False, True
            for a in t.args:
                ax, ix, dx = d(a, k)
                acts |= ax
                idle = idle or ix
                dead = dead and dx
            return frozenset(acts), idle, dead
        if tag == "Seq":
            x, y = t.args
            ax, ix, dx = d(x, k)
            acts = frozenset((l, y if tg is SINK else T.Seq(tg, y)) for l, tg in ax)
            return acts, ix, dx
        if tag in ("Parallel", "CommMerge", "WholeParallel"):
            if tag == "Parallel":
                x, y = t.args[0], T.par(*t.args[1:])
            else:
                x, y = t.args
            ax, ix, dx = d(x, k)
            ay, iy, dy = d(y, k)
            acts = set()
            if tag != "CommMerge":
                acts |= self._par_acts(ax, ay)
            if tag != "Parallel":
                acts |= self._comm_acts(ax, ay)
            return frozenset(acts), ix and iy, dx or dy
        if tag == "AbsDelay":
            j, x = t.attr, t.args[0]
            if k >= j:
                ax, ix, dx = d(x, k - j)
                if j == 0:
                    return ax, ix, dx
                acts = frozenset((l, SINK if tg is SINK else T.AbsDelay(j, tg))
                                 for l, tg in ax)
                return acts, ix, dx
            if k + 1 < j:
                return frozenset(), True, False
            return frozenset(), not self.dead_at(x, 0), False
        if tag == "AbsTimeout":
            j, x = t.attr, t.args[0]
            if j <= k:
                return frozenset(), False, True
            ax, ix, dx = d(x, k)
            return ax, (j > k + 1 and ix), dx
        if tag == "AbsInit":
            j, x = t.attr, t.args[0]
            ax, ix, dx = d(x, k)
            idle = (k + 1 < j) or (k + 1 == j and not self.dead_at(x, j)) or (ix and j <= k + 1)
            if j <= k:
                return ax, idle, dx
            return frozenset(), idle, False
        if tag in ("Encapsulate", "Abstract", "Rename", "Unless"):
            x = t.args[0]
            ax, ix, dx = d(x, k)
            wrap = (lambda u: T.rebuild(t, [u] + list(t.args[1:])))
            return frozenset(self._map_acts(ax, self._label_fn(t), wrap)), ix, dx
        if tag == "ConflictElim":
            return self._guarded(t.args[0], lambda: d(theta_push(t.args[0], self.mode)[0], k))
        if tag == "RecConst":
            self._rec(t)
            try:
                return d(unfold_once(t.attr[1], t.attr[0]), k)
            finally:
                self._active.pop()
        if tag == "RecVar":
            raise OpenTermError("free variable %s" % t.attr)
        if tag in T.TIMED_TAGS:
            raise ModeMismatch("%s in a dat derivation" % tag)
        raise ValueError(tag)


def derive(state, config, semantics=None):
    """Outgoing behaviour of one state (a term, or ``(term, clock)`` in dat)."""
    sem = semantics or Semantics(config)
    if config.mode == T.DRT:
        return sem.derive(state)
    t, k = state
    return sem.derive_at(t, k)


class TimedLTS:
    """Finite timed transition system with a single termination sink.

    ``aedges``: list of ``(src, labels, dst)`` with ``dst == SINK_ID`` for
    termination; ``tedges``: list of unit time edges ``(src, dst)``;
    ``deadlocked``: states satisfying ↑; ``cut``: dat states at the horizon
    that could still idle (their time edge was not explored).
    """

    def __init__(self, mode, states, initial, aedges, tedges, deadlocked, cut=()):
        self.mode = mode
        self.states = list(states)
        self.initial = initial
        self.aedges = sorted(aedges, key=lambda e: (e[0], _label_text(e[1]), _dst_key(e[2])))
        self.tedges = sorted(tedges)
        self.deadlocked = frozenset(deadlocked)
        self.cut = frozenset(cut)
        self.succ = [[] for _ in self.states]
        for s, l, dst in self.aedges:
            self.succ[s].append((l, dst))
        self.tick = [None] * len(self.states)
        for s, dst in self.tedges:
            self.tick[s] = dst

    @property
    def n(self):
        return len(self.states)

    def export(self):
        """Deterministic text serialization (bytes)."""
        lines = ["timedlts (initial=%d, states=%d, aedges=%d, tedges=%d)"
                 % (self.initial, self.n, len(self.aedges), len(self.tedges))]
        for s in range(self.n):
            for l, dst in self.succ[s]:
                lines.append('%d "%s" %s' % (s, _label_text(l),
                                             "SINK" if dst == SINK_ID else dst))
            if self.tick[s] is not None:
                lines.append('%d "tick" %d' % (s, self.tick[s]))
        for s in sorted(self.deadlocked):
            lines.append("deadlock %d" % s)
        for s in sorted(self.cut):
            lines.append("cut %d" % s)
        return ("\n".join(lines) + "\n").encode("utf-8")

    def __repr__(self):
        return "TimedLTS(%s, states=%d, aedges=%d, tedges=%d)" % (
            self.mode, self.n, len(self.aedges), len(self.tedges))


def _label_text(labels):
    return "{%s}" % ",".join(labels)


def _dst_key(d):
    return (1, 0) if d == SINK_ID else (0, d)


def _succ_order(item):
    labels, tgt = item
    if tgt is SINK:
        return (labels, 0)
    return (labels, 1, tgt.key)


def build_lts(t, config, bounds=None, semantics=None):
    """Breadth-first closure of ``derive`` from ``t``.

    ``bounds`` may set ``max_states`` (BoundExceeded when passed),
    ``horizon`` (dat only: time edges leaving clock ``horizon`` are not
    explored and the state is marked ``cut``) and ``unfold_depth``.
    """
    b = dict(DEFAULT_BOUNDS)
    b.update(bounds or {})
    T.require_closed(t)
    t = T.canonicalize(t)
    m = T.mode_of(t)
    if m is not None and m != config.mode:
        raise ModeMismatch("term is %s but config is %s" % (m, config.mode))
    sem = semantics or Semantics(config, b["unfold_depth"])
    dat = config.mode == T.DAT
    horizon = b["horizon"]
    start = (t, 0) if dat else t
    index = {start: 0}
    states = [start]
    aedges, tedges, dead, cut = [], [], [], []
    i = 0
    while i < len(states):
        st = states[i]
        if dat:
            acts, idle, dd = sem.derive_at(st[0], st[1])
            tick = None
            if idle:
                if st[1] >= horizon:
                    cut.append(i)
                else:
                    tick = (st[0], st[1] + 1)
        else:
            acts, tick, dd = sem.derive(st)
        if dd:
            dead.append(i)
        for labels, tgt in sorted(acts, key=_succ_order):
            if tgt is SINK:
                aedges.append((i, labels, SINK_ID))
                continue
            key = (tgt, st[1]) if dat else tgt
            j = index.get(key)
            if j is None:
                j = len(states)
                if j >= b["max_states"]:
                    raise BoundExceeded("max_states", b["max_states"])
                index[key] = j
                states.append(key)
            aedges.append((i, labels, j))
        if tick is not None:
            j = index.get(tick)
            if j is None:
                j = len(states)
                if j >= b["max_states"]:
                    raise BoundExceeded("max_states", b["max_states"])
                index[tick] = j
                states.append(tick)
            tedges.append((i, j))
        i += 1
    return TimedLTS(config.mode, states, 0, aedges, tedges, dead, cut)


def export_lts(lts):
    return lts.export()

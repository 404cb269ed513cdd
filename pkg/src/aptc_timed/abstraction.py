"""Abstraction on transition systems: hiding and branching minimization."""

from . import terms as T
from .equivalence import branching_blocks, observable
from .sos import SINK_ID, TimedLTS


def hide_labels(labels, I):
    """A step with every event in ``I`` becomes ``{τ}``; otherwise rename per event."""
    I = set(I)
    if all(a in I or a == T.TAU for a in labels):
        return (T.TAU,)
    return tuple(sorted(T.TAU if a in I else a for a in labels))


def hide(lts, I):
    """τ_I on a transition system (same states, relabelled steps)."""
    edges = [(s, hide_labels(l, I), d) for s, l, d in lts.aedges]
    return TimedLTS(lts.mode, lts.states, lts.initial, sorted(set(edges), key=_ekey),
                    lts.tedges, lts.deadlocked, lts.cut)


def _ekey(e):
    s, l, d = e
    return (s, l, (1, 0) if d == SINK_ID else (0, d))


def _blocks(lts):
    """Branching blocks, split further where members tick to different blocks."""
    B, sink_block = branching_blocks(lts)
    ticks = {}
    for s in range(lts.n):
        if lts.tick[s] is not None:
            ticks.setdefault(B[s], set()).add(B[lts.tick[s]])
    clash = {b for b, ts in ticks.items() if len(ts) > 1}
    if not clash:
        return B, sink_block
    key = [(B[s], B[lts.tick[s]] if B[s] in clash and lts.tick[s] is not None else None)
           for s in range(lts.n)]
    ids = {}
    out = [ids.setdefault(k, len(ids)) for k in key]
    # the sink block is never split: it holds no state that can tick
    sink_ids = {out[s] for s in range(lts.n) if B[s] == sink_block}
    return out, (sink_ids.pop() if sink_ids else len(ids))


def rb_minimize(lts):
    """Quotient by branching bisimilarity, rooted-branching equivalent to ``lts``.

    Inert silent steps inside a block are dropped.  The initial state and
    its chain of time successors are kept as root copies with all their own
    steps, unless a copy coincides with its block.
    """
    B, sink_block = _blocks(lts)

    def target(d):
        return "sink" if d == SINK_ID or B[d] == sink_block else ("b", B[d])

    # a time step may lead into the sink's block: that state just terminates silently
    block_moves = {sink_block: {((T.TAU,), "sink")}}
    block_tick, block_dead, block_cut = {}, {sink_block: False}, {sink_block: False}
    for s in range(lts.n):
        b = B[s]
        if b == sink_block:
            continue
        mv = block_moves.setdefault(b, set())
        for l, d in lts.succ[s]:
            if not observable(l) and d != SINK_ID and B[d] == b:
                continue
            mv.add((l, target(d)))
        if lts.tick[s] is not None:
            block_tick[b] = ("b", B[lts.tick[s]])
        block_dead[b] = block_dead.get(b, False) or s in lts.deadlocked
        block_cut[b] = block_cut.get(b, False) or s in lts.cut

    # root copies along the time chain of the initial state
    chain, seen = [], {}
    s = lts.initial
    while s is not None and s not in seen:
        seen[s] = len(chain)
        chain.append(s)
        s = lts.tick[s]
    loop = seen.get(s) if s is not None else None
    nodes = {}
    for i in reversed(range(len(chain))):
        s = chain[i]
        mv = {(l, target(d)) for l, d in lts.succ[s]}
        if i + 1 < len(chain):
            tk = nodes[("r", i + 1)]
        elif loop is not None:
            tk = ("r", loop)
        else:
            tk = None
        pred = (s in lts.deadlocked, s in lts.cut)
        b = B[s]
        same = (b != sink_block and loop is None and mv == block_moves[b]
                and tk == block_tick.get(b) and pred == (block_dead[b], block_cut[b]))
        nodes[("r", i)] = ("b", b) if same else ("r", i)
        if not same:
            block_moves[("r", i)] = mv
            block_tick[("r", i)] = tk
            block_dead[("r", i)], block_cut[("r", i)] = pred

    def resolve(node):
        if node is None or node == "sink":
            return node
        if node[0] == "r":
            return nodes[node] if nodes[node] != node else node
        return node

    def info(node):
        key = node[1] if node[0] == "b" else node
        return key

    start = resolve(("r", 0))
    index, order = {start: 0}, [start]
    aedges, tedges, dead, cut = [], [], [], []
    i = 0
    while i < len(order):
        node = order[i]
        k = info(node)
        for l, d in sorted(block_moves[k], key=lambda m: (m[0], str(m[1]))):
            d = resolve(d)
            if d == "sink":
                aedges.append((i, l, SINK_ID))
                continue
            if d not in index:
                index[d] = len(order)
                order.append(d)
            aedges.append((i, l, index[d]))
        tk = resolve(block_tick.get(k))
        if tk is not None and tk != "sink":
            if tk not in index:
                index[tk] = len(order)
                order.append(tk)
            tedges.append((i, index[tk]))
        if block_dead.get(k):
            dead.append(i)
        if block_cut.get(k):
            cut.append(i)
        i += 1
    return TimedLTS(lts.mode, [str(n) for n in order], 0, aedges, tedges, dead, cut)

"""Random closed terms and configurations for property checks."""

import random

from . import terms as T

UNARY_TIMED = ("delay", "timeout", "init")


def sweep_config(kind, mode):
    """The two fixed configurations used by the sweeps (alphabet {a, b, c}).

    ``"comm"``: γ(a, b) = c, no conflict or causality.
    ``"priority"``: ♯(a, b) and b ≤ c, no communication.
    """
    if kind == "comm":
        return T.AlgebraConfig.make("abc", {("a", "b"): "c"}, mode=mode)
    if kind == "priority":
        return T.AlgebraConfig.make("abc", {}, [("a", "b")], [("b", "c")], mode=mode)
    raise ValueError(kind)


class TermGen:
    """Random closed, RecConst-free terms over a configuration.

    ``depth`` bounds the nesting, ``max_delay`` the time amounts.  The
    operator mix covers every constructor except recursion.
    """

    def __init__(self, config, seed=0, depth=5, max_delay=3, tau=True,
                 operators=None, stop=0.25):
        self.config = config
        self.mode = config.mode
        self.rng = random.Random(seed)
        self.depth = depth
        self.max_delay = max_delay
        self.labels = sorted(config.alphabet)
        self.tau = tau
        self.stop = stop
        self.operators = operators or ("alt", "seq", "par", "comm", "whole", "delay",
                                       "timeout", "init", "encap", "abstract", "rename",
                                       "theta", "unless")

    def atom(self):
        r = self.rng.random()
        if r < 0.06:
            return T.DEADLOCKED
        if r < 0.12:
            return T.DEADLOCK
        if self.tau and r < 0.2:
            return T.SILENT
        return T.act(self.rng.choice(self.labels))

    def label_set(self):
        k = self.rng.randint(1, max(1, len(self.labels) - 1))
        return self.rng.sample(self.labels, k)

    def term(self, depth=None):
        depth = self.depth if depth is None else depth
        if depth <= 1 or self.rng.random() < self.stop:
            return self.atom()
        op = self.rng.choice(self.operators)
        sub = lambda: self.term(depth - 1)
        n = lambda: self.rng.randint(0, self.max_delay)
        if op == "alt":
            return T.Alt(sub(), sub())
        if op == "seq":
            return T.Seq(sub(), sub())
        if op == "par":
            return T.Parallel(sub(), sub())
        if op == "comm":
            return T.CommMerge(sub(), sub())
        if op == "whole":
            return T.WholeParallel(sub(), sub())
        if op == "delay":
            return T.delay(self.mode, n(), sub())
        if op == "timeout":
            return T.timeout(self.mode, n(), sub())
        if op == "init":
            return T.init(self.mode, n(), sub())
        if op == "encap":
            return T.Encapsulate(self.label_set(), sub())
        if op == "abstract":
            return T.Abstract(self.label_set(), sub())
        if op == "rename":
            return T.Rename({a: self.rng.choice(self.labels) for a in self.labels}, sub())
        if op == "theta":
            return T.ConflictElim(sub())
        if op == "unless":
            return T.Unless(sub(), sub())
        raise ValueError(op)

    def terms(self, count):
        return [self.term() for _ in range(count)]


# ---------------------------------------------------------------- recursion

def _step(rng, labels, size=2):
    return T.par(*[T.act(rng.choice(labels)) for _ in range(rng.randint(1, size))])


def random_linear_spec(config, seed=0, max_vars=4, max_summands=3, max_delay=2, name="E"):
    """A guarded linear specification ``X0 ... Xn`` over the configuration's alphabet.

    Summands are ``P``, ``P·Y`` or ``σ^n(P·Y)`` with ``n ≥ 1`` (relative or
    absolute according to the mode), so every occurrence is guarded.
    """
    rng = random.Random(seed)
    labels = sorted(config.alphabet)
    names = ["X%d" % i for i in range(rng.randint(1, max_vars))]
    eqs = []
    for v in names:
        summands = []
        for _ in range(rng.randint(1, max_summands)):
            r = rng.random()
            p = _step(rng, labels)
            if r < 0.2:
                summands.append(p)
            elif r < 0.8:
                summands.append(T.Seq(p, T.RecVar(rng.choice(names))))
            else:
                summands.append(T.delay(config.mode, rng.randint(1, max_delay),
                                        T.Seq(p, T.RecVar(rng.choice(names)))))
        eqs.append((v, T.alt(*summands)))
    return T.LinearRecSpec(eqs, name)


def random_cluster_spec(config, internal, seed=0, max_members=3, name="C"):
    """A specification whose variable ``X0`` lies in a cluster for ``internal``.

    Members ``X0 ... Xk`` form a cycle of internal steps (plus random extra
    internal steps); exits are steps with at least one external label,
    leading to ``Z`` (which may return to ``X0`` externally) or terminating.
    """
    rng = random.Random(seed)
    internal = sorted(internal)
    external = sorted(set(config.alphabet) - set(internal))
    k = rng.randint(1, max_members)
    members = ["X%d" % i for i in range(k)]
    body = {v: [] for v in members}
    for i, v in enumerate(members):
        body[v].append(T.Seq(_step(rng, internal), T.RecVar(members[(i + 1) % k])))
        if rng.random() < 0.3:
            body[v].append(T.Seq(_step(rng, internal), T.RecVar(rng.choice(members))))
    for v in members:
        for _ in range(rng.randint(0, 2)):
            p = T.act(rng.choice(external))
            if rng.random() < 0.3:
                p = T.par(p, T.act(rng.choice(internal)))
            body[v].append(T.Seq(p, T.RecVar("Z")) if rng.random() < 0.5 else p)
    exits = [s for v in members for s in body[v]
             if not (s.tag == "Seq" and s.args[1].tag == "RecVar" and s.args[1].attr in members)]
    if not exits:
        body[members[0]].append(T.act(rng.choice(external)))
    z = T.alt(T.Seq(T.act(rng.choice(external)), T.RecVar("X0")), T.act(rng.choice(external)))
    eqs = [(v, T.alt(*body[v])) for v in members] + [("Z", z)]
    return T.LinearRecSpec(eqs, name)

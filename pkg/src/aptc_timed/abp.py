"""The alternating bit protocol in discrete relative and absolute timing.

Sender ``S_b``/``T_db``/``U_db`` and receiver ``R_b``/``R'_b``/``Q_b`` are
built as one recursive specification over the data set Δ, composed as
``τ_I(∂_H(R_0 ≬ S_0))`` and compared with the one-variable specification
``X = Σ_{d,d'} (r_A1(d) ‖ r_A2(d)) · (s_C1(d') ‖ s_C2(d')) · X``.
"""

from dataclasses import dataclass

from . import equivalence as E
from . import terms as T
from .abstraction import rb_minimize
from .errors import ConfigError, ConfigOverflow
from .sos import build_lts

BOT = "bot"


@dataclass(frozen=True)
class AbpParams:
    """Data set, processing times ``t1``, ``t2``, time-outs ``t1p``, ``t2p``."""

    data: tuple = ("d1",)
    t1: int = 1
    t2: int = 1
    t1p: int = 2
    t2p: int = 2
    mode: str = T.DRT
    horizon: int = 30
    max_alphabet: int = 512

    def validate(self):
        if not self.data:
            raise ConfigError("data set must be nonempty", "data")
        for d in self.data:
            if not d.isidentifier() or d == BOT:
                raise ConfigError("bad datum name %r" % d, "data")
        if len(set(self.data)) != len(self.data):
            raise ConfigError("duplicate datum", "data")
        for name in ("t1", "t2", "t1p", "t2p"):
            if getattr(self, name) < 0:
                raise ConfigError("must be a natural number", name)
        if self.t1p < 1 or self.t2p < 1:
            raise ConfigError("time-outs must be positive", "t1p" if self.t1p < 1 else "t2p")
        if self.mode not in (T.DRT, T.DAT):
            raise ConfigError("mode must be drt or dat", "mode")


# label names: channel, then datum and bit (or "bot" for the corrupted message)
def lab(kind, *parts):
    return "_".join((kind,) + tuple(str(p) for p in parts))


def alphabet_parts(data):
    """``(alphabet, gamma, H, I)`` for the given data set."""
    alpha, gamma, H, I = set(), {}, set(), set()
    msgs = [(d, b) for d in data for b in (0, 1)] + [(BOT,)]
    acks = [(0,), (1,), (BOT,)]
    for ch, items in (("B", msgs), ("D", acks)):
        for it in items:
            s, r, c = lab("s" + ch, *it), lab("r" + ch, *it), lab("c" + ch, *it)
            alpha |= {s, r, c}
            gamma[(s, r)] = c
            H |= {s, r}
            I.add(c)
    for d in data:
        alpha |= {lab("rA1", d), lab("rA2", d), lab("sC1", d), lab("sC2", d)}
    return alpha, gamma, H, I


def build_abp(params, sabotage=False):
    """``(system, spec, config)`` for the protocol.

    ``sabotage=True`` drops the communications ``γ(s_D(b), r_D(b))`` on the
    acknowledgement channel (the corrupted acknowledgement still works).
    """
    params.validate()
    data = tuple(params.data)
    alpha, gamma, H, I = alphabet_parts(data)
    if len(alpha) > params.max_alphabet:
        raise ConfigOverflow("alphabet of %d labels exceeds cap %d"
                             % (len(alpha), params.max_alphabet))
    if sabotage:
        for b in (0, 1):
            gamma.pop((lab("sD", b), lab("rD", b)))
    config = T.AlgebraConfig.make(alpha, gamma, mode=params.mode)
    mode = params.mode
    a = T.act
    V = T.RecVar
    sig = lambda n, x: T.delay(mode, n, x)

    eqs = []
    for b in (0, 1):
        nb = 1 - b
        eqs.append(("S%d" % b, T.alt(*[T.Seq(a(lab("rA1", d)), V("T_%s_%d" % (d, b)))
                                       for d in data])))
        for d in data:
            send = T.alt(*([T.Seq(a(lab("sB", d2, b)), a(lab("sC1", d2))) for d2 in data]
                           + [a(lab("sB", BOT))]))
            eqs.append(("T_%s_%d" % (d, b),
                        T.Alt(T.Seq(send, sig(params.t1, V("U_%s_%d" % (d, b)))),
                              sig(1, V("T_%s_%d" % (d, b))))))
            ok = [T.Seq(sig(k, a(lab("rD", b))), V("S%d" % nb)) for k in range(params.t1p)]
            bad = [T.Seq(sig(k, T.Alt(a(lab("rD", nb)), a(lab("rD", BOT)))),
                         sig(params.t1p, V("T_%s_%d" % (d, b)))) for k in range(params.t1p)]
            eqs.append(("U_%s_%d" % (d, b), T.alt(*(ok + bad))))
    for b in (0, 1):
        nb = 1 - b
        eqs.append(("R%d" % b, T.alt(*[T.Seq(a(lab("rA2", d)), V("Rp%d" % b)) for d in data])))
        body = []
        for d2 in data:
            body.append(T.Seq(a(lab("rB", d2, b)),
                              T.Seq(sig(params.t2, a(lab("sC2", d2))), V("Q%d" % b))))
            body.append(T.Seq(a(lab("rB", d2, nb)), V("Q%d" % nb)))
        body.append(T.Seq(a(lab("rB", BOT)), V("Q%d" % nb)))
        body.append(sig(1, V("Rp%d" % b)))
        eqs.append(("Rp%d" % b, T.alt(*body)))
        eqs.append(("Q%d" % b, T.Seq(sig(params.t2p, T.Alt(a(lab("sD", b)), a(lab("sD", BOT)))),
                                     V("R%d" % nb))))
    spec = T.LinearRecSpec(eqs, "ABP")
    system = T.Abstract(sorted(I), T.Encapsulate(sorted(H), T.WholeParallel(
        T.RecConst("R0", spec), T.RecConst("S0", spec))))

    ext = T.alt(*[T.Seq(T.par(a(lab("rA1", d)), a(lab("rA2", d))),
                        T.Seq(T.par(a(lab("sC1", d2)), a(lab("sC2", d2))), V("X")))
                  for d in data for d2 in data])
    xspec = T.LinearRecSpec([("X", ext)], "ABPSPEC")
    return system, T.RecConst("X", xspec), config


def _bounds(params, bounds):
    b = {"max_states": 200000, "horizon": params.horizon}
    b.update(bounds or {})
    return b


def verify_abp(params, bounds=None, sabotage=False):
    """rb-step comparison of the minimized protocol with its external specification."""
    system, spec, config = build_abp(params, sabotage)
    b = _bounds(params, bounds)
    sys_lts = rb_minimize(build_lts(system, config, b))
    spec_lts = build_lts(spec, config, b)
    return E.rb_step_bisim(sys_lts, spec_lts)


def abp_diagnostics(params, bounds=None, sabotage=False):
    """Sizes and reachable deadlocks of the protocol's transition system (text lines)."""
    system, spec, config = build_abp(params, sabotage)
    b = _bounds(params, bounds)
    raw = build_lts(system, config, b)
    mini = rb_minimize(raw)
    stuck = [s for s in range(raw.n) if not raw.succ[s] and raw.tick[s] is None
             and s not in raw.cut]
    lines = ["states %d (minimized %d)" % (raw.n, mini.n),
             "action edges %d, time edges %d" % (len(raw.aedges), len(raw.tedges)),
             "deadlocked states %d, stuck states %d, cut states %d"
             % (len(raw.deadlocked), len(stuck), len(raw.cut))]
    path = _path_to(raw, set(stuck) | set(raw.deadlocked))
    if path is not None:
        lines.append("shortest path to a stuck state: " + " ".join(path))
    return lines


def _path_to(lts, targets):
    """Shortest observation sequence (steps and ticks) from the initial state."""
    from collections import deque
    prev = {lts.initial: None}
    q = deque([lts.initial])
    while q:
        s = q.popleft()
        if s in targets:
            out = []
            while prev[s] is not None:
                s, step = prev[s]
                out.append(step)
            return out[::-1]
        moves = [(E.label_text(l), d) for l, d in lts.succ[s] if d >= 0]
        if lts.tick[s] is not None:
            moves.append(("tick", lts.tick[s]))
        for step, d in moves:
            if d not in prev:
                prev[d] = (s, step)
                q.append(d)
    return None

"""Directed axiom rewriting and elimination to basic terms.

The axioms are oriented left to right.  Commutativity and associativity of
``+`` and ``‖`` (A1, A2, P2, P3) and idempotence of ``+`` (A3) are handled by
canonicalization: every ``+``/``‖`` node built here goes through
:func:`terms.alt` / :func:`terms.par`.

Rule tags are axiom names.  A tag ending in ``*`` marks a generalization of
the named axiom (for example DRT3 applied to delays of different length, or
P4DR applied to a step instead of a single action); tags that are not axiom
names are listed in :data:`EXTENSIONS`.

Normal forms have the shape::

    NF  := δ̇ | B + ... + B [+ σ^n(NF)]        (n > 0, at least one part)
    B   := P | P · NF | δ̲                     (δ̲ only as the whole sum)
    P   := a | a ‖ ... ‖ a                     (a step; τ allowed)

The argument of Θ and the right operand of ◁ are *frozen*: they are never
rewritten, because Θ and ◁ only inspect their syntax.
"""

import sys

from . import terms as T
from .conflict import THETA_EXTENSIONS, theta_push
from .errors import NonTermination

DRT, DAT = T.DRT, T.DAT

# Axiom names of the in-scope tables, per timing mode.
_COMMON = ["A1", "A2", "A3", "A4", "A5", "A6ID", "A7ID", "P1", "P2", "P3", "P7", "P8",
           "PID12", "PID13", "C18", "C19", "CID23", "CID24", "CE27", "CE28", "CE29",
           "CE30", "U36", "U37", "U38", "U39", "U40", "U41", "U42", "U43", "D4", "D5",
           "D6", "B1", "B3", "TI0", "TI1", "TI2", "TI4", "TI5", "TI6", "RN3", "RN4", "RN5"]

AXIOMS = {
    DRT: _COMMON + [
        "DRT1", "DRT2", "DRT3", "DRT4", "DRT7", "A6DRa",
        "DRTO0", "DRTO1", "DRTO2", "DRTO3", "DRTO4", "DRTO5",
        "DRI0", "DRI1", "DRI2", "DRI3", "DRI4", "DRI5",
        "P4DR", "P5DR", "P6DR", "DRP9ID", "DRP10ID", "DRP11",
        "C14DR", "C15DR", "C16DR", "C17DR", "DRC20ID", "DRC21ID", "DRC22",
        "CE25DR", "CE26DRID", "U31DRID", "U32DRID", "U33DRID", "U34DRID", "U35DRID",
        "D1DRID", "D2DRID", "D3DRID", "DRD7",
        "DRTB1", "DRTB2", "DRTB3", "DRTI",
        "DRTRN1", "DRTRN2", "DRTRN3", "DRTRN"],
    DAT: _COMMON + [
        "DAT1", "DAT2", "DAT3", "DAT4", "DAT5", "DAT6", "DAT7", "A6DAa",
        "DATO0", "DATO1", "DATO2", "DATO3", "DATO4", "DATO5",
        "DAI0", "DAI1", "DAI2", "DAI3", "DAI4", "DAI5",
        "P4DA", "P5DA", "P6DA", "DAP9ID", "DAP10ID", "DAP11",
        "C14DA", "C15DA", "C16DA", "C17DA", "DAC20ID", "DAC21ID", "DAC22",
        "CE25DA", "CE26DAID", "U31DAID", "U32DAID", "U33DAID", "U34DAID", "U35DAID",
        "D1DAID", "D2DAID", "D3DAID", "DAD7",
        "DATB1", "DATB2", "DATB3", "DATI",
        "DATRN1", "DATRN2", "DATRN3", "DATRN"],
}

# Axioms realized by canonicalization instead of a directed rule.
AC_AXIOMS = ("A1", "A2", "A3", "P2", "P3")

EXTENSIONS = {
    "DELTA-SEQ": "δ̲ · x = δ̲ (derived from DRT7/DAT7 with DRT4/DAT6 and A7ID)",
    "DELTA-PAR": "δ̲ ‖ x = δ̲ for x a step, sequential term or δ̲",
    "COMM-BLOCK": "p | q = δ̲ when the heads are not two single actions with γ defined "
                  "(γ undefined, τ, δ̲ or a multi-action step)",
    "U-DOT": "x ◁ δ̇ = x, and x ◁ τ = x (no blocking label)",
    "U-TIME": "op^n(x) ◁ y = op^n(x ◁ y) for a delay, and δ̇ ◁ y = δ̇",
    "DAI0*": "ῡ^0_abs(x) = x (the operator is the identity at time 0)",
}
EXTENSIONS.update(THETA_EXTENSIONS)


def _mode_name(mode, drt, dat):
    return drt if mode == DRT else dat


# --------------------------------------------------------------- shape tests

def _opaque(u):
    return u.tag in ("RecVar", "RecConst")


def _undelayable(u):
    """A summand without an initial delay: action, step, step · x, or a sum of them."""
    tag = u.tag
    if tag == "UndelayableAction":
        return True
    if tag == "Parallel":
        return T.is_step(u)
    if tag == "Seq":
        return T.is_step(u.args[0]) or u.args[0] == T.DEADLOCK
    if tag == "Alt":
        return all(_undelayable(a) for a in u.args)
    return False


def _head(u):
    """``(step, continuation_or_None)`` of a sequential summand, else None."""
    if T.is_step(u):
        return u, None
    if u.tag == "Seq" and T.is_step(u.args[0]):
        return u.args[0], u.args[1]
    return None


def _seq(p, rest):
    return p if rest is None else T.Seq(p, rest)


def _upper(y, n, dtag):
    """The part ``z`` of a normal form ``y = υ^n(y) + σ^n(z)``; None if empty.

    Returns ``False`` when ``y`` has a summand whose timing is unknown.
    """
    later = None
    for s in T.summands(y):
        if s is T.DEADLOCKED:
            continue
        if s.tag == dtag:
            later = s
        elif not _undelayable(s):
            return False
    if later is None:
        return None
    m, w = later.attr, later.args[0]
    if m >= n:
        return w if m == n else T._make(dtag, m - n, (w,))
    return _upper(w, n - m, dtag)


# --------------------------------------------------------------- rule sets

class Rule:
    """A directed axiom: ``apply(ruleset, t)`` returns ``(term, tag)`` or None."""

    def __init__(self, head, tags, apply):
        self.head = head
        self.tags = tuple(tags)
        self.apply = apply

    def __repr__(self):
        return "Rule(%s: %s)" % (self.head, "/".join(self.tags))


class RuleSet:
    """The ordered rules of one configuration.

    ``tau_laws`` enables the τ-axioms B1 and DRTB1–3/DATB1–3, which are
    sound for rooted branching bisimilarity only.  ``b3`` enables
    ``x ‖ τ = x`` (for undelayable ``x``); it is off by default because it is
    not a congruence for ``|`` (``b ‖ τ`` cannot communicate, ``b`` can).
    """

    def __init__(self, config, tau_laws=True, b3=False):
        self.config = config
        self.mode = config.mode
        self.tau_laws = tau_laws
        self.b3 = b3
        self.dtag = T.DELAY[self.mode]
        self.rules = _build_rules(self.mode)
        self._by_head = {}
        for r in self.rules:
            self._by_head.setdefault(r.head, []).append(r)
        self._cache = {}

    def name(self, drt, dat):
        return _mode_name(self.mode, drt, dat)

    def delay(self, n, x):
        return T.delay(self.mode, n, x)

    def frozen(self, t):
        """Indices of the arguments of ``t`` that are never rewritten."""
        if t.tag == "ConflictElim":
            return (0,)
        if t.tag == "Unless":
            return (1,)
        return ()

    def apply_root(self, t):
        """First rule applicable at the root of ``t``."""
        for r in self._by_head.get(t.tag, ()):
            res = r.apply(self, t)
            if res is not None:
                return res
        return None

    def tags(self):
        out = set()
        for r in self.rules:
            out.update(tg.rstrip("*") for tg in r.tags)
        return out


# ---- +

def _alt_dot(rs, t):
    if T.DEADLOCKED in t.args:
        return T.alt(*[a for a in t.args if a is not T.DEADLOCKED]), "A6ID"
    return None


def _alt_delta(rs, t):
    if T.DEADLOCK not in t.args:
        return None
    others = [a for a in t.args if a is not T.DEADLOCK]
    if not any(not _opaque(a) for a in others):
        return None
    tag = rs.name("A6DRa", "A6DAa")
    if not all(a.tag == "UndelayableAction" for a in others):
        tag += "*"
    return T.alt(*others), tag


def _alt_delays(rs, t):
    ds = [a for a in t.args if a.tag == rs.dtag]
    if len(ds) < 2:
        return None
    d1, d2 = ds[0], ds[1]
    if d1.attr > d2.attr:
        d1, d2 = d2, d1
    n, m = d1.attr, d2.attr
    y = d2.args[0] if n == m else rs.delay(m - n, d2.args[0])
    merged = rs.delay(n, T.alt(d1.args[0], y))
    rest = [a for a in t.args if a is not ds[0] and a is not ds[1]]
    tag = rs.name("DRT3", "DAT3") + ("" if n == m else "*")
    return T.alt(merged, *rest), tag


# ---- ·

def _seq_struct(rs, t):
    x, y = t.args
    if x is T.DEADLOCKED:
        return T.DEADLOCKED, "A7ID"
    if x.tag == "Alt":
        return T.alt(*[T.Seq(a, y) for a in x.args]), "A4"
    if x.tag == "Seq":
        return T.Seq(x.args[0], T.Seq(x.args[1], y)), "A5"
    if x is T.DEADLOCK:
        return T.DEADLOCK, "DELTA-SEQ"
    return None


def _seq_delay(rs, t):
    x, y = t.args
    if x.tag != rs.dtag:
        return None
    n, x1 = x.attr, x.args[0]
    if rs.mode == DRT:
        return rs.delay(n, T.Seq(x1, y)), "DRT4"
    if x1 is T.DEADLOCKED:
        return x, "DAT6"
    z = _upper(y, n, rs.dtag)
    if z is False:
        return None
    if z is None:
        return rs.delay(n, T.Seq(x1, T.DEADLOCKED)), "DAT4"
    return rs.delay(n, T.Seq(x1, T.AbsInit(0, z))), "DAT5"


def _seq_tau(rs, t):
    if not rs.tau_laws:
        return None
    x, y = t.args
    if not T.is_step(x):
        return None
    if y is T.SILENT:
        return x, "B1" if x.tag == "UndelayableAction" else "B1*"
    sums = T.summands(y)
    for s in sums:
        if s.tag == "Seq" and s.args[0] is T.SILENT and s.args[1] is not T.DEADLOCKED:
            w = s.args[1]
            rest = [v for v in sums if v is not s]
            if set(rest) <= set(T.summands(w)):
                tag = rs.name("DRTB1", "DATB1") if all(_undelayable(v) for v in rest) \
                    else rs.name("DRTB2", "DATB2")
                return T.Seq(x, w), tag
    for s in sums:
        if s.tag == rs.dtag:
            inner = s.args[0]
            if inner.tag == "Seq" and inner.args[0] is T.SILENT \
                    and inner.args[1] is not T.DEADLOCKED:
                rest = [v for v in sums if v is not s]
                if all(_undelayable(v) for v in rest):
                    tag = rs.name("DRTB3", "DATB3") + ("" if s.attr == 1 else "*")
                    return T.Seq(x, T.alt(rs.delay(s.attr, inner.args[1]), *rest)), tag
    return None


# ---- delays, time-outs, initializations

def _delay(rs, t):
    n, x = t.attr, t.args[0]
    if n == 0:
        if rs.mode == DRT:
            return x, "DRT1"
        return T.AbsInit(0, x), "DAT1"
    if x.tag == rs.dtag:
        return rs.delay(n + x.attr, x.args[0]), rs.name("DRT2", "DAT2")
    if x is T.DEADLOCKED:
        if n == 1:
            return T.DEADLOCK, rs.name("DRT7", "DAT7")
        return rs.delay(n - 1, T.DEADLOCK), rs.name("DRT7*", "DAT7*")
    return None


def _timeout(rs, t):
    n, x = t.attr, t.args[0]
    nm = lambda s: rs.name("DRTO" + s, "DATO" + s)
    if x is T.DEADLOCKED:
        return T.DEADLOCKED, nm("0")
    if n == 0:
        return T.DEADLOCKED, nm("1")
    if x.tag == "UndelayableAction":
        return x, nm("2")
    if T.is_step(x):
        return x, nm("2") + "*"
    if x.tag == rs.dtag:
        k, x1 = x.attr, x.args[0]
        if n >= k:
            return rs.delay(k, T.timeout(rs.mode, n - k, x1)), nm("3")
        return rs.delay(n, T.DEADLOCKED), nm("3") + "*"
    if x.tag == "Alt":
        return T.alt(*[T.timeout(rs.mode, n, a) for a in x.args]), nm("4")
    if x.tag == "Seq":
        return T.Seq(T.timeout(rs.mode, n, x.args[0]), x.args[1]), nm("5")
    return None


def _init_drt(rs, t):
    n, x = t.attr, t.args[0]
    if n == 0:
        return x, "DRI1"
    if x is T.DEADLOCKED:
        return rs.delay(n, T.DEADLOCKED), "DRI0"
    if x.tag == "UndelayableAction" or T.is_step(x):
        tag = "DRI2" if x.tag == "UndelayableAction" else "DRI2*"
        return rs.delay(n - 1, T.DEADLOCK), tag
    if x.tag == rs.dtag:
        k, x1 = x.attr, x.args[0]
        if n >= k:
            return rs.delay(k, T.RelInit(n - k, x1)), "DRI3"
        return x, "DRI3*"
    if x.tag == "Alt":
        return T.alt(*[T.RelInit(n, a) for a in x.args]), "DRI4"
    if x.tag == "Seq":
        return T.Seq(T.RelInit(n, x.args[0]), x.args[1]), "DRI5"
    return None


def _init_dat(rs, t):
    n, x = t.attr, t.args[0]
    if n == 0:
        return x, "DAI0" if x is T.DEADLOCKED else "DAI0*"
    if x is T.DEADLOCKED:
        return rs.delay(n, T.DEADLOCKED), "DAI1"
    if x.tag == "UndelayableAction" or T.is_step(x):
        tag = "DAI2" if x.tag == "UndelayableAction" else "DAI2*"
        return rs.delay(n, T.DEADLOCKED), tag
    if x.tag == rs.dtag:
        k, x1 = x.attr, x.args[0]
        if n >= k:
            return rs.delay(k, T.AbsInit(n - k, T.AbsInit(0, x1))), "DAI3"
        return x, "DAI3*"
    if x.tag == "Alt":
        return T.alt(*[T.AbsInit(n, a) for a in x.args]), "DAI4"
    if x.tag == "Seq":
        return T.Seq(T.AbsInit(n, x.args[0]), x.args[1]), "DAI5"
    return None


# ---- ‖

def _par_struct(rs, t):
    comps = t.args
    if T.DEADLOCKED in comps:
        return T.DEADLOCKED, "PID12" if comps[0] is T.DEADLOCKED else "PID13"
    for i, c in enumerate(comps):
        if c.tag == "Alt":
            rest = comps[:i] + comps[i + 1:]
            return T.alt(*[T.par(s, *rest) for s in c.args]), "P7" if i == 0 else "P8"
    return None


def _par_delay(rs, t):
    comps = t.args
    idx = [i for i, c in enumerate(comps) if c.tag == rs.dtag]
    if len(idx) >= 2:
        i, j = idx[0], idx[1]
        d1, d2 = comps[i], comps[j]
        if d1.attr > d2.attr:
            d1, d2 = d2, d1
        n, m = d1.attr, d2.attr
        y = d2.args[0] if n == m else rs.delay(m - n, d2.args[0])
        rest = [c for k, c in enumerate(comps) if k not in (i, j)]
        tag = rs.name("DRP11", "DAP11") + ("" if n == m else "*")
        return T.par(rs.delay(n, T.par(d1.args[0], y)), *rest), tag
    if idx:
        i = idx[0]
        for j, c in enumerate(comps):
            if j != i and _undelayable(c):
                tag = rs.name("DRP10ID*", "DAP10ID*") if i < j \
                    else rs.name("DRP9ID*", "DAP9ID*")
                return T.DEADLOCK, tag
    return None


def _par_delta(rs, t):
    comps = t.args
    if T.DEADLOCK in comps and all(_undelayable(c) for c in comps):
        return T.DEADLOCK, "DELTA-PAR"
    return None


def _par_tau(rs, t):
    if not rs.b3:
        return None
    comps = list(t.args)
    if T.SILENT in comps and all(_undelayable(c) for c in comps):
        comps.remove(T.SILENT)
        return T.par(*comps), "B3"
    return None


def _par_seq(rs, t):
    comps = t.args
    for i, s in enumerate(comps):
        if s.tag != "Seq" or not T.is_step(s.args[0]):
            continue
        for j, o in enumerate(comps):
            if j == i or _head(o) is None:
                continue
            rest = [c for k, c in enumerate(comps) if k not in (i, j)]
            p, x = s.args
            q, y = _head(o)
            sfx = rs.name("DR", "DA")
            if y is None:
                tag = ("P5" if i < j else "P4") + sfx
                new = T.Seq(T.par(p, q), x)
            else:
                tag = "P6" + sfx
                first, second = (x, y) if i < j else (y, x)
                new = T.Seq(T.par(p, q), T.WholeParallel(first, second))
            if p.tag != "UndelayableAction" or q.tag != "UndelayableAction":
                tag += "*"
            return T.par(new, *rest), tag
    return None


# ---- | and ≬

def _comm(rs, t):
    x, y = t.args
    if x is T.DEADLOCKED:
        return T.DEADLOCKED, "CID23"
    if y is T.DEADLOCKED:
        return T.DEADLOCKED, "CID24"
    if x.tag == "Alt":
        return T.alt(*[T.CommMerge(a, y) for a in x.args]), "C18"
    if y.tag == "Alt":
        return T.alt(*[T.CommMerge(x, a) for a in y.args]), "C19"
    dx, dy = x.tag == rs.dtag, y.tag == rs.dtag
    if dx and dy:
        n, m = x.attr, y.attr
        if n <= m:
            inner = T.CommMerge(x.args[0], y.args[0] if n == m else rs.delay(m - n, y.args[0]))
        else:
            inner = T.CommMerge(rs.delay(n - m, x.args[0]), y.args[0])
            n = m
        return rs.delay(n, inner), rs.name("DRC22", "DAC22") + ("" if x.attr == y.attr else "*")
    if dx and _undelayable(y):
        return T.DEADLOCK, rs.name("DRC21ID*", "DAC21ID*")
    if dy and _undelayable(x):
        return T.DEADLOCK, rs.name("DRC20ID*", "DAC20ID*")
    if not (_undelayable(x) and _undelayable(y)):
        return None
    hx, hy = _head(x), _head(y)
    if hx and hy and hx[0].tag == "UndelayableAction" and hy[0].tag == "UndelayableAction":
        a, b = hx[0].attr, hy[0].attr
        c = rs.config.comm(a, b) if T.TAU not in (a, b) else None
        if c is not None:
            rx, ry = hx[1], hy[1]
            sfx = rs.name("DR", "DA")
            if rx is None and ry is None:
                return T.act(c), "C14" + sfx
            if rx is None:
                return T.Seq(T.act(c), ry), "C15" + sfx
            if ry is None:
                return T.Seq(T.act(c), rx), "C16" + sfx
            return T.Seq(T.act(c), T.WholeParallel(rx, ry)), "C17" + sfx
    return T.DEADLOCK, "COMM-BLOCK"


def _whole(rs, t):
    x, y = t.args
    return T.alt(T.par(x, y), T.CommMerge(x, y)), "P1"


# ---- Θ and ◁

def _theta(rs, t):
    x = t.args[0]
    if _opaque(x):
        return None
    return theta_push(x, rs.mode)


def _unless(rs, t):
    x, y = t.args
    if y.tag == "Alt":
        return T.Unless(T.Unless(x, y.args[0]), T.alt(*y.args[1:])), "U40"
    if y.tag in ("Seq", "CommMerge", "WholeParallel"):
        tag = {"Seq": "U41", "CommMerge": "U43", "WholeParallel": "U43*"}[y.tag]
        return T.Unless(T.Unless(x, y.args[0]), y.args[1]), tag
    if y.tag == "Parallel":
        return T.Unless(T.Unless(x, y.args[0]), T.par(*y.args[1:])), "U42"
    if y is T.DEADLOCKED or y is T.SILENT:
        return x, "U-DOT"
    if y.tag != "UndelayableAction":
        labels = sorted(T.labels_of(y))
        if not labels:
            return x, "U-DOT"
        return T.Unless(x, T.alt(*[T.act(l) for l in labels])), "U40*"
    # y is a single action
    sfx = rs.name("DRID", "DAID")
    if x is T.DEADLOCK:
        return x, "U35" + sfx
    if y is T.DEADLOCK:
        return x, "U34" + sfx
    if x.tag == "UndelayableAction":
        if x is T.SILENT:
            return x, "U-DOT"
        e, l = x.attr, y.attr
        cfg = rs.config
        new = cfg.unless_label(e, (l,))
        if new == T.TAU:
            return T.SILENT, ("U31" if (e, l) in cfg.conflict else "U33") + sfx
        related = any((e, b) in cfg.conflict and (b, l) in cfg.causality
                      for b in cfg.alphabet)
        return x, "U32" + sfx + ("" if related else "*")
    if x.tag == "Alt":
        return T.alt(*[T.Unless(a, y) for a in x.args]), "U36"
    if x.tag == "Seq":
        return T.Seq(T.Unless(x.args[0], y), T.Unless(x.args[1], y)), "U37"
    if x.tag == "Parallel":
        return T.par(*[T.Unless(a, y) for a in x.args]), "U38"
    if x.tag == "CommMerge":
        return T.CommMerge(T.Unless(x.args[0], y), T.Unless(x.args[1], y)), "U39"
    if x.tag == rs.dtag:
        return rs.delay(x.attr, T.Unless(x.args[0], y)), "U-TIME"
    if x is T.DEADLOCKED:
        return x, "U-TIME"
    return None


# ---- ∂_H, τ_I, ρ_f

def _push(rs, t, wrap, leaf, names):
    """Shared distribution of a unary label operator over normal forms."""
    x = t.args[0]
    if x is T.DEADLOCKED:
        return x, names["dot"]
    if x.tag == "UndelayableAction":
        return leaf(x)
    if x.tag == "Alt":
        return T.alt(*[wrap(a) for a in x.args]), names["alt"]
    if x.tag == "Seq":
        return T.Seq(wrap(x.args[0]), wrap(x.args[1])), names["seq"]
    if x.tag == "Parallel":
        return T.par(*[wrap(a) for a in x.args]), names["par"]
    if x.tag == rs.dtag:
        return rs.delay(x.attr, wrap(x.args[0])), names["delay"]
    return None


def _encap(rs, t):
    H = set(t.attr)
    wrap = lambda u: T.Encapsulate(H, u)
    sfx = rs.name("DRID", "DAID")

    def leaf(a):
        if a.attr in H:
            return T.DEADLOCK, "D2" + sfx
        return a, "D1" + sfx
    names = {"dot": "D3" + sfx, "alt": "D4", "seq": "D5", "par": "D6",
             "delay": rs.name("DRD7", "DAD7")}
    return _push(rs, t, wrap, leaf, names)


def _abstract(rs, t):
    I = set(t.attr)
    wrap = lambda u: T.Abstract(I, u)

    def leaf(a):
        if a.attr in I:
            return T.SILENT, "TI2"
        return a, "TI1"
    names = {"dot": "TI0", "alt": "TI4", "seq": "TI5", "par": "TI6",
             "delay": rs.name("DRTI", "DATI")}
    return _push(rs, t, wrap, leaf, names)


def _rename(rs, t):
    f = dict(t.attr)
    wrap = lambda u: T.Rename(f, u)
    pre = rs.name("DRTRN", "DATRN")

    def leaf(a):
        if a is T.SILENT:
            return a, pre + "3"
        return T.act(f.get(a.attr, a.attr)), pre + "1"
    names = {"dot": pre + "2", "alt": "RN3", "seq": "RN4", "par": "RN5", "delay": pre}
    return _push(rs, t, wrap, leaf, names)


def _build_rules(mode):
    n = lambda drt, dat: _mode_name(mode, drt, dat)
    sfx = n("DR", "DA")
    idsfx = n("DRID", "DAID")
    dl = T.DELAY[mode]
    rules = [
        Rule("Alt", ["A6ID"], _alt_dot),
        Rule("Alt", [n("A6DRa", "A6DAa")], _alt_delta),
        Rule("Alt", [n("DRT3", "DAT3")], _alt_delays),
        Rule("Seq", ["A7ID", "A4", "A5", "DELTA-SEQ"], _seq_struct),
        Rule("Seq", ["DRT4"] if mode == DRT else ["DAT4", "DAT5", "DAT6"], _seq_delay),
        Rule("Seq", ["B1", n("DRTB1", "DATB1"), n("DRTB2", "DATB2"), n("DRTB3", "DATB3")],
             _seq_tau),
        Rule(dl, [n("DRT1", "DAT1"), n("DRT2", "DAT2"), n("DRT7", "DAT7")], _delay),
        Rule(T.TIMEOUT[mode], [n("DRTO", "DATO") + str(i) for i in range(6)], _timeout),
        Rule(T.INIT[mode], [n("DRI", "DAI") + str(i) for i in range(6)],
             _init_drt if mode == DRT else _init_dat),
        Rule("Parallel", ["PID12", "PID13", "P7", "P8"], _par_struct),
        Rule("Parallel", [n("DRP9ID", "DAP9ID"), n("DRP10ID", "DAP10ID"),
                          n("DRP11", "DAP11")], _par_delay),
        Rule("Parallel", ["DELTA-PAR"], _par_delta),
        Rule("Parallel", ["B3"], _par_tau),
        Rule("Parallel", ["P4" + sfx, "P5" + sfx, "P6" + sfx], _par_seq),
        Rule("CommMerge", ["CID23", "CID24", "C18", "C19", n("DRC20ID", "DAC20ID"),
                           n("DRC21ID", "DAC21ID"), n("DRC22", "DAC22"), "COMM-BLOCK"]
             + ["C%d%s" % (i, sfx) for i in (14, 15, 16, 17)], _comm),
        Rule("WholeParallel", ["P1"], _whole),
        Rule("ConflictElim", ["CE25" + sfx, "CE26" + idsfx, "CE27", "CE28", "CE29", "CE30"]
             + sorted(THETA_EXTENSIONS), _theta),
        Rule("Unless", ["U%d%s" % (i, idsfx) for i in range(31, 36)]
             + ["U%d" % i for i in range(36, 44)] + ["U-DOT", "U-TIME"], _unless),
        Rule("Encapsulate", ["D1" + idsfx, "D2" + idsfx, "D3" + idsfx, "D4", "D5", "D6",
                             n("DRD7", "DAD7")], _encap),
        Rule("Abstract", ["TI0", "TI1", "TI2", "TI4", "TI5", "TI6", n("DRTI", "DATI")],
             _abstract),
        Rule("Rename", [n("DRTRN", "DATRN") + s for s in ("1", "2", "3", "")]
             + ["RN3", "RN4", "RN5"], _rename),
    ]
    return rules


_RULESETS = {}


def ruleset(config, tau_laws=True, b3=False):
    """Shared :class:`RuleSet` for a configuration."""
    key = (config, tau_laws, b3)
    rs = _RULESETS.get(key)
    if rs is None:
        rs = RuleSet(config, tau_laws, b3)
        _RULESETS[key] = rs
    return rs


# --------------------------------------------------------------- rewriting

def _reassemble(t, args):
    if t.tag == "Alt":
        return T.alt(*args)
    if t.tag == "Parallel":
        return T.par(*args)
    return T.rebuild(t, args)


def rewrite_step(t, rules, config=None):
    """One leftmost-innermost rewrite step: ``(term, tag)`` or None."""
    t = T.canonicalize(t)
    return _step(t, rules)


def _step(t, rules):
    if _opaque(t):
        return None
    frozen = rules.frozen(t)
    for i, a in enumerate(t.args):
        if i in frozen:
            continue
        r = _step(a, rules)
        if r is not None:
            args = list(t.args)
            args[i] = r[0]
            return _reassemble(t, args), r[1]
    return rules.apply_root(t)


class _Normalizer:
    def __init__(self, rules, budget, trace):
        self.rules = rules
        self.budget = budget
        self.steps = 0
        self.trace = trace
        self.memo = rules._cache if trace is None else {}

    def nf(self, t):
        r = self.memo.get(t)
        if r is not None:
            return r
        if _opaque(t):
            return t
        frozen = self.rules.frozen(t)
        args = [a if i in frozen else self.nf(a) for i, a in enumerate(t.args)]
        u = _reassemble(t, args)
        res = self.rules.apply_root(u)
        if res is None:
            out = u
        else:
            new, tag = res
            self.steps += 1
            if self.steps > self.budget:
                raise NonTermination(self.budget)
            if self.trace is not None:
                self.trace.append((tag, u, new))
            out = self.nf(new)
        self.memo[t] = out
        self.memo[out] = out
        return out


def normalize(t, config, budget=100000, trace=None, tau_laws=True):
    """Rewrite ``t`` to its normal form.

    Elimination runs first without τ-laws; when ``tau_laws`` is set, B1 and
    DRTB1–3/DATB1–3 are then applied to the basic term only.  (Inside ``‖``
    the τ-laws are not congruences: ``a·τ·δ̇ ‖ b·c`` can perform ``{b}``
    after ``{a,c}`` while ``a·δ̇ ‖ b·c`` cannot.)

    ``trace``, when a list, receives one ``(tag, redex, contractum)`` triple
    per rule application.  Raises :class:`NonTermination` once more than
    ``budget`` rules have been applied.
    """
    old = sys.getrecursionlimit()
    if old < 20000:
        sys.setrecursionlimit(20000)
    try:
        first = _Normalizer(ruleset(config, False), budget, trace)
        out = first.nf(T.canonicalize(t))
        if tau_laws:
            second = _Normalizer(ruleset(config, True), budget - first.steps, trace)
            out = second.nf(out)
        return out
    finally:
        sys.setrecursionlimit(old)


def prove_equal(t1, t2, config, budget=100000, tau_laws=True):
    """True when both terms have the same normal form."""
    return normalize(t1, config, budget, tau_laws=tau_laws) is \
        normalize(t2, config, budget, tau_laws=tau_laws)


def format_trace(trace):
    """Trace lines ``tag TAB before TAB after``."""
    return "\n".join("%s\t%s\t%s" % (tag, T.pretty(a), T.pretty(b)) for tag, a, b in trace)


def used_tau_laws(trace):
    """True if a τ-law (sound for rooted branching bisimilarity only) fired."""
    return any(tag.rstrip("*") in ("B1", "B3", "DRTB1", "DRTB2", "DRTB3",
                                   "DATB1", "DATB2", "DATB3") for tag, _, _ in trace)

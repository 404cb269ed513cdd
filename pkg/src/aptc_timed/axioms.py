"""Axiom instances for the soundness sweep.

Each axiom of the in-scope tables is written here as a pair of term
builders, independently of the rewriter's directed rules.  A sweep samples
instances, builds both transition systems from the SOS and checks them for
step bisimilarity (rooted branching step bisimilarity for the τ-laws).
"""

import zlib

from . import terms as T
from . import equivalence as E
from .gen import TermGen
from .sos import build_lts

# Axioms sound for rooted branching bisimilarity only.
TAU_LAWS = ("B1", "B3", "DRTB1", "DRTB2", "DRTB3", "DATB1", "DATB2", "DATB3")


class Sampler:
    """Random ingredients of an axiom instance."""

    def __init__(self, config, seed=0, depth=3, max_delay=3):
        self.config = config
        self.mode = config.mode
        self.gen = TermGen(config, seed=seed, depth=depth, max_delay=max_delay)
        self.rng = self.gen.rng
        self.labels = sorted(config.alphabet)
        self.max_delay = max_delay

    def x(self):
        return self.gen.term()

    def a(self):
        """A visible action."""
        return T.act(self.rng.choice(self.labels))

    def ad(self):
        """An action of A_δ (visible or δ)."""
        return T.DEADLOCK if self.rng.random() < 0.15 else self.a()

    def e(self):
        """An action of A_τδ."""
        r = self.rng.random()
        return T.SILENT if r < 0.15 else self.ad()

    def n(self, lo=0):
        return self.rng.randint(lo, self.max_delay)

    def labset(self):
        return self.gen.label_set()

    def renaming(self):
        return {a: self.rng.choice(self.labels) for a in self.labels}

    def undelayable(self, tries=50):
        """A term whose initial state cannot idle (``None`` if none found)."""
        for _ in range(tries):
            t = self.x()
            lts = build_lts(t, self.config)
            if lts.tick[lts.initial] is None and lts.initial not in lts.cut:
                return t
        return None


def _table(mode):
    """``name -> builder(sampler) -> (lhs, rhs) or None`` for one mode."""
    D = lambda n, x: T.delay(mode, n, x)
    TO = lambda n, x: T.timeout(mode, n, x)
    IN = lambda n, x: T.init(mode, n, x)
    dr = mode == T.DRT
    n = lambda drt, dat: drt if dr else dat
    sfx = n("DR", "DA")
    idsfx = n("DRID", "DAID")
    dd, dl, tau = T.DEADLOCKED, T.DEADLOCK, T.SILENT
    A, S, P, C, W = T.Alt, T.Seq, T.Parallel, T.CommMerge, T.WholeParallel
    Th, U = T.ConflictElim, T.Unless
    tab = {}

    def ax(name):
        def reg(fn):
            tab[name] = fn
            return fn
        return reg

    # ---- BATC
    ax("A1")(lambda s: (lambda x, y: (A(x, y), A(y, x)))(s.x(), s.x()))
    ax("A2")(lambda s: (lambda x, y, z: (A(A(x, y), z), A(x, A(y, z))))(s.x(), s.x(), s.x()))
    ax("A3")(lambda s: (lambda x: (A(x, x), x))(s.x()))
    ax("A4")(lambda s: (lambda x, y, z: (S(A(x, y), z), A(S(x, z), S(y, z))))(
        s.x(), s.x(), s.x()))
    ax("A5")(lambda s: (lambda x, y, z: (S(S(x, y), z), S(x, S(y, z))))(s.x(), s.x(), s.x()))
    ax("A6ID")(lambda s: (lambda x: (A(x, dd), x))(s.x()))
    ax("A7ID")(lambda s: (lambda x: (S(dd, x), dd))(s.x()))
    ax(n("A6DRa", "A6DAa"))(lambda s: (lambda a: (A(a, dl), a))(s.ad()))
    if dr:
        ax("DRT1")(lambda s: (lambda x: (D(0, x), x))(s.x()))
    else:
        ax("DAT1")(lambda s: (lambda x: (D(0, x), IN(0, x)))(s.x()))
    ax(n("DRT2", "DAT2"))(lambda s: (lambda m, k, x: (D(m, D(k, x)), D(m + k, x)))(
        s.n(), s.n(), s.x()))
    ax(n("DRT3", "DAT3"))(lambda s: (lambda k, x, y: (A(D(k, x), D(k, y)), D(k, A(x, y))))(
        s.n(), s.x(), s.x()))
    if dr:
        ax("DRT4")(lambda s: (lambda k, x, y: (S(D(k, x), y), D(k, S(x, y))))(
            s.n(), s.x(), s.x()))
    else:
        ax("DAT4")(lambda s: (lambda k, x, y: (S(D(k, x), TO(k, y)), D(k, S(x, dd))))(
            s.n(), s.x(), s.x()))
        ax("DAT5")(lambda s: (lambda k, x, y, z: (S(D(k, x), A(TO(k, y), D(k, z))),
                                                  D(k, S(x, IN(0, z)))))(
            s.n(), s.x(), s.x(), s.x()))
        ax("DAT6")(lambda s: (lambda k, x: (S(D(k, dd), x), D(k, dd)))(s.n(), s.x()))
    ax(n("DRT7", "DAT7"))(lambda s: (D(1, dd), dl))
    o = n("DRTO", "DATO")
    ax(o + "0")(lambda s: (lambda k: (TO(k, dd), dd))(s.n()))
    ax(o + "1")(lambda s: (lambda x: (TO(0, x), dd))(s.x()))
    ax(o + "2")(lambda s: (lambda k, a: (TO(k + 1, a), a))(s.n(), s.ad()))
    ax(o + "3")(lambda s: (lambda m, k, x: (TO(m + k, D(k, x)), D(k, TO(m, x))))(
        s.n(), s.n(), s.x()))
    ax(o + "4")(lambda s: (lambda k, x, y: (TO(k, A(x, y)), A(TO(k, x), TO(k, y))))(
        s.n(), s.x(), s.x()))
    ax(o + "5")(lambda s: (lambda k, x, y: (TO(k, S(x, y)), S(TO(k, x), y)))(
        s.n(), s.x(), s.x()))
    if dr:
        ax("DRI0")(lambda s: (lambda k: (IN(k, dd), D(k, dd)))(s.n()))
        ax("DRI1")(lambda s: (lambda x: (IN(0, x), x))(s.x()))
        ax("DRI2")(lambda s: (lambda k, a: (IN(k + 1, a), D(k, dl)))(s.n(), s.ad()))
        ax("DRI3")(lambda s: (lambda m, k, x: (IN(m + k, D(k, x)), D(k, IN(m, x))))(
            s.n(), s.n(), s.x()))
    else:
        ax("DAI0")(lambda s: (IN(0, dd), dd))
        ax("DAI1")(lambda s: (lambda k: (IN(k + 1, dd), D(k + 1, dd)))(s.n()))
        ax("DAI2")(lambda s: (lambda k, a: (IN(k + 1, a), D(k + 1, dd)))(s.n(), s.ad()))
        ax("DAI3")(lambda s: (lambda m, k, x: (IN(m + k, D(k, x)), D(k, IN(m, IN(0, x)))))(
            s.n(), s.n(), s.x()))
    i = n("DRI", "DAI")
    ax(i + "4")(lambda s: (lambda k, x, y: (IN(k, A(x, y)), A(IN(k, x), IN(k, y))))(
        s.n(), s.x(), s.x()))
    ax(i + "5")(lambda s: (lambda k, x, y: (IN(k, S(x, y)), S(IN(k, x), y)))(
        s.n(), s.x(), s.x()))

    # ---- APTC
    ax("P1")(lambda s: (lambda x, y: (W(x, y), A(P(x, y), C(x, y))))(s.x(), s.x()))
    ax("P2")(lambda s: (lambda x, y: (P(x, y), P(y, x)))(s.x(), s.x()))
    ax("P3")(lambda s: (lambda x, y, z: (P(P(x, y), z), P(x, P(y, z))))(s.x(), s.x(), s.x()))
    ax("P4" + sfx)(lambda s: (lambda a, b, y: (P(a, S(b, y)), S(P(a, b), y)))(
        s.ad(), s.ad(), s.x()))
    ax("P5" + sfx)(lambda s: (lambda a, b, x: (P(S(a, x), b), S(P(a, b), x)))(
        s.ad(), s.ad(), s.x()))
    ax("P6" + sfx)(lambda s: (lambda a, b, x, y: (P(S(a, x), S(b, y)), S(P(a, b), W(x, y))))(
        s.ad(), s.ad(), s.x(), s.x()))
    ax("P7")(lambda s: (lambda x, y, z: (P(A(x, y), z), A(P(x, z), P(y, z))))(
        s.x(), s.x(), s.x()))
    ax("P8")(lambda s: (lambda x, y, z: (P(x, A(y, z)), A(P(x, y), P(x, z))))(
        s.x(), s.x(), s.x()))
    ax(n("DRP9ID", "DAP9ID"))(lambda s: (lambda x, k, y: (P(A(TO(1, x), dl), D(k + 1, y)), dl))(
        s.x(), s.n(), s.x()))
    ax(n("DRP10ID", "DAP10ID"))(lambda s: (lambda x, k, y: (P(D(k + 1, x), A(TO(1, y), dl)),
                                                            dl))(s.x(), s.n(), s.x()))
    ax(n("DRP11", "DAP11"))(lambda s: (lambda k, x, y: (P(D(k, x), D(k, y)), D(k, P(x, y))))(
        s.n(), s.x(), s.x()))
    ax("PID12")(lambda s: (lambda x: (P(dd, x), dd))(s.x()))
    ax("PID13")(lambda s: (lambda x: (P(x, dd), dd))(s.x()))

    def comm_pair(s):
        pairs = [(a, b) for (a, b), _ in s.config.gamma]
        if not pairs:
            return None
        a, b = s.rng.choice(pairs)
        return T.act(a), T.act(b), T.act(s.config.comm(a, b))

    def c_rule(build):
        def fn(s):
            p = comm_pair(s)
            return None if p is None else build(s, *p)
        return fn

    ax("C14" + sfx)(c_rule(lambda s, a, b, c: (C(a, b), c)))
    ax("C15" + sfx)(c_rule(lambda s, a, b, c: (lambda y: (C(a, S(b, y)), S(c, y)))(s.x())))
    ax("C16" + sfx)(c_rule(lambda s, a, b, c: (lambda x: (C(S(a, x), b), S(c, x)))(s.x())))
    ax("C17" + sfx)(c_rule(lambda s, a, b, c: (lambda x, y: (C(S(a, x), S(b, y)),
                                                             S(c, W(x, y))))(s.x(), s.x())))
    ax("C18")(lambda s: (lambda x, y, z: (C(A(x, y), z), A(C(x, z), C(y, z))))(
        s.x(), s.x(), s.x()))
    ax("C19")(lambda s: (lambda x, y, z: (C(x, A(y, z)), A(C(x, y), C(x, z))))(
        s.x(), s.x(), s.x()))
    ax(n("DRC20ID", "DAC20ID"))(lambda s: (lambda x, k, y: (C(A(TO(1, x), dl), D(k + 1, y)),
                                                            dl))(s.x(), s.n(), s.x()))
    ax(n("DRC21ID", "DAC21ID"))(lambda s: (lambda x, k, y: (C(D(k + 1, x), A(TO(1, y), dl)),
                                                            dl))(s.x(), s.n(), s.x()))
    ax(n("DRC22", "DAC22"))(lambda s: (lambda k, x, y: (C(D(k, x), D(k, y)), D(k, C(x, y))))(
        s.n(), s.x(), s.x()))
    ax("CID23")(lambda s: (lambda x: (C(dd, x), dd))(s.x()))
    ax("CID24")(lambda s: (lambda x: (C(x, dd), dd))(s.x()))

    # ---- conflict elimination and unless
    ax("CE25" + sfx)(lambda s: (lambda a: (Th(a), a))(s.ad()))
    ax("CE26" + idsfx)(lambda s: (Th(dd), dd))
    ax("CE27")(lambda s: (lambda x, y: (Th(A(x, y)), A(U(Th(x), y), U(Th(y), x))))(
        s.x(), s.x()))
    ax("CE28")(lambda s: (lambda x, y: (Th(S(x, y)), S(Th(x), Th(y))))(s.x(), s.x()))
    ax("CE29")(lambda s: (lambda x, y: (Th(P(x, y)), A(P(U(Th(x), y), y),
                                                       P(U(Th(y), x), x))))(s.x(), s.x()))
    ax("CE30")(lambda s: (lambda x, y: (Th(C(x, y)), A(C(U(Th(x), y), y),
                                                       C(U(Th(y), x), x))))(s.x(), s.x()))

    def conflict_pair(s):
        pairs = sorted(s.config.conflict)
        return s.rng.choice(pairs) if pairs else None

    def caus_triple(s):
        out = [(a, b, c) for (a, b) in sorted(s.config.conflict)
               for (b2, c) in sorted(s.config.causality) if b2 == b]
        return s.rng.choice(out) if out else None

    def u31(s):
        p = conflict_pair(s)
        return None if p is None else (U(T.act(p[0]), T.act(p[1])), tau)

    def u32(s):
        p = caus_triple(s)
        return None if p is None else (U(T.act(p[0]), T.act(p[2])), T.act(p[0]))

    def u33(s):
        p = caus_triple(s)
        return None if p is None else (U(T.act(p[2]), T.act(p[0])), tau)

    ax("U31" + idsfx)(u31)
    ax("U32" + idsfx)(u32)
    ax("U33" + idsfx)(u33)
    ax("U34" + idsfx)(lambda s: (lambda a: (U(a, dl), a))(s.ad()))
    ax("U35" + idsfx)(lambda s: (lambda a: (U(dl, a), dl))(s.ad()))
    ax("U36")(lambda s: (lambda x, y, z: (U(A(x, y), z), A(U(x, z), U(y, z))))(
        s.x(), s.x(), s.x()))
    ax("U37")(lambda s: (lambda x, y, z: (U(S(x, y), z), S(U(x, z), U(y, z))))(
        s.x(), s.x(), s.x()))
    ax("U38")(lambda s: (lambda x, y, z: (U(P(x, y), z), P(U(x, z), U(y, z))))(
        s.x(), s.x(), s.x()))
    ax("U39")(lambda s: (lambda x, y, z: (U(C(x, y), z), C(U(x, z), U(y, z))))(
        s.x(), s.x(), s.x()))
    ax("U40")(lambda s: (lambda x, y, z: (U(x, A(y, z)), U(U(x, y), z)))(s.x(), s.x(), s.x()))
    ax("U41")(lambda s: (lambda x, y, z: (U(x, S(y, z)), U(U(x, y), z)))(s.x(), s.x(), s.x()))
    ax("U42")(lambda s: (lambda x, y, z: (U(x, P(y, z)), U(U(x, y), z)))(s.x(), s.x(), s.x()))
    ax("U43")(lambda s: (lambda x, y, z: (U(x, C(y, z)), U(U(x, y), z)))(s.x(), s.x(), s.x()))

    # ---- encapsulation
    def d12(inside):
        def fn(s):
            H = s.labset()
            a = s.a()
            if (a.attr in H) != inside:
                return None
            return T.Encapsulate(H, a), (dl if inside else a)
        return fn

    ax("D1" + idsfx)(d12(False))
    ax("D2" + idsfx)(d12(True))
    ax("D3" + idsfx)(lambda s: (T.Encapsulate(s.labset(), dd), dd))
    E_ = lambda H, x: T.Encapsulate(H, x)
    ax("D4")(lambda s: (lambda H, x, y: (E_(H, A(x, y)), A(E_(H, x), E_(H, y))))(
        s.labset(), s.x(), s.x()))
    ax("D5")(lambda s: (lambda H, x, y: (E_(H, S(x, y)), S(E_(H, x), E_(H, y))))(
        s.labset(), s.x(), s.x()))
    ax("D6")(lambda s: (lambda H, x, y: (E_(H, P(x, y)), P(E_(H, x), E_(H, y))))(
        s.labset(), s.x(), s.x()))
    ax(n("DRD7", "DAD7"))(lambda s: (lambda H, k, x: (E_(H, D(k, x)), D(k, E_(H, x))))(
        s.labset(), s.n(), s.x()))

    # ---- τ and abstraction
    ax("B1")(lambda s: (lambda e: (S(e, tau), e))(s.e()))

    def b3(s):
        x = s.undelayable()
        return None if x is None else (P(x, tau), x)

    ax("B3")(b3)
    # In dat the prefix x must end at time 0: after σ^2_abs(b) the τ of
    # DATB1–3 is already dead (an undelayable action at time ≥ 1), while the
    # right-hand side may still offer a delayed z.  The rewriter applies
    # these laws with x a step only, so that is the instance checked here.
    px = (lambda s: s.x()) if dr else (lambda s: s.e())
    ax(n("DRTB1", "DATB1"))(lambda s: (lambda x, y, z: (
        S(x, A(S(tau, A(TO(1, y), z, dl)), TO(1, y))), S(x, A(TO(1, y), z, dl))))(
        px(s), s.x(), s.x()))
    ax(n("DRTB2", "DATB2"))(lambda s: (lambda x, y, z: (
        S(x, A(S(tau, A(TO(1, y), z, dl)), z)), S(x, A(TO(1, y), z, dl))))(
        px(s), s.x(), s.x()))
    ax(n("DRTB3", "DATB3"))(lambda s: (lambda x, y, z: (
        S(x, A(D(1, S(tau, A(y, dl))), TO(1, z))), S(x, A(D(1, A(y, dl)), TO(1, z)))))(
        px(s), s.x(), s.x()))
    TI = lambda I, x: T.Abstract(I, x)
    ax("TI0")(lambda s: (TI(s.labset(), dd), dd))

    def ti12(inside):
        def fn(s):
            I = s.labset()
            a = s.a()
            if (a.attr in I) != inside:
                return None
            return TI(I, a), (tau if inside else a)
        return fn

    ax("TI1")(ti12(False))
    ax("TI2")(ti12(True))
    ax(n("DRTI", "DATI"))(lambda s: (lambda I, k, x: (TI(I, D(k, x)), D(k, TI(I, x))))(
        s.labset(), s.n(), s.x()))
    ax("TI4")(lambda s: (lambda I, x, y: (TI(I, A(x, y)), A(TI(I, x), TI(I, y))))(
        s.labset(), s.x(), s.x()))
    ax("TI5")(lambda s: (lambda I, x, y: (TI(I, S(x, y)), S(TI(I, x), TI(I, y))))(
        s.labset(), s.x(), s.x()))
    ax("TI6")(lambda s: (lambda I, x, y: (TI(I, P(x, y)), P(TI(I, x), TI(I, y))))(
        s.labset(), s.x(), s.x()))

    # ---- renaming
    R = lambda f, x: T.Rename(f, x)
    rn = n("DRTRN", "DATRN")
    ax(rn + "1")(lambda s: (lambda f, a: (R(f, a), T.act(f[a.attr])))(s.renaming(), s.a()))
    ax(rn + "2")(lambda s: (R(s.renaming(), dd), dd))
    ax(rn + "3")(lambda s: (R(s.renaming(), tau), tau))
    ax(rn)(lambda s: (lambda f, k, x: (R(f, D(k, x)), D(k, R(f, x))))(
        s.renaming(), s.n(), s.x()))
    ax("RN3")(lambda s: (lambda f, x, y: (R(f, A(x, y)), A(R(f, x), R(f, y))))(
        s.renaming(), s.x(), s.x()))
    ax("RN4")(lambda s: (lambda f, x, y: (R(f, S(x, y)), S(R(f, x), R(f, y))))(
        s.renaming(), s.x(), s.x()))
    ax("RN5")(lambda s: (lambda f, x, y: (R(f, P(x, y)), P(R(f, x), R(f, y))))(
        s.renaming(), s.x(), s.x()))
    return tab


_TABLES = {}


def axiom_table(mode):
    """Instance builders of every axiom of ``mode`` (name -> builder)."""
    if mode not in _TABLES:
        _TABLES[mode] = _table(mode)
    return _TABLES[mode]


class AxiomResult:
    """Outcome of sweeping one axiom: instance counts and a counterexample."""

    def __init__(self, name, checked=0, failures=0, example=None, observation=None):
        self.name = name
        self.checked = checked
        self.failures = failures
        self.example = example
        self.observation = observation

    @property
    def ok(self):
        return self.failures == 0

    def __repr__(self):
        return "AxiomResult(%s, checked=%d, failures=%d)" % (self.name, self.checked,
                                                              self.failures)


def check_instance(lhs, rhs, config, name="", bounds=None):
    """Compare one instance; returns the equivalence report."""
    l1 = build_lts(lhs, config, bounds)
    l2 = build_lts(rhs, config, bounds)
    if name in TAU_LAWS:
        return E.rb_step_bisim(l1, l2)
    return E.step_bisim(l1, l2)


def sweep(config, instances=50, seed=0, names=None, depth=3, bounds=None):
    """Check ``instances`` random instances of each axiom; dict name -> result."""
    table = axiom_table(config.mode)
    out = {}
    for name in sorted(names or table):
        # per-axiom stream: independent of which other axioms are swept
        s = Sampler(config, seed=seed * 1000003 + zlib.crc32(name.encode()), depth=depth)
        res = AxiomResult(name)
        tries = 0
        while res.checked < instances and tries < instances * 4:
            tries += 1
            inst = table[name](s)
            if inst is None:
                continue
            lhs, rhs = inst
            rep = check_instance(lhs, rhs, config, name, bounds)
            res.checked += 1
            if not rep.verdict:
                res.failures += 1
                if res.example is None:
                    res.example = (lhs, rhs)
                    res.observation = rep.observation
        out[name] = res
    return out

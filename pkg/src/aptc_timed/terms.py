"""Term language, algebra configuration and structural canonicalization.

Terms are immutable and hash-consed: building the same constructor with the
same (identical) children twice returns the same object, so equality is
identity and terms can be used freely as dictionary keys.  A total order on
terms (``Term.key``) is used to sort the arguments of the associative and
commutative operators ``+`` and ``||``.

The undelayable deadlock and the silent step are ordinary undelayable
actions carrying the reserved labels ``DELTA`` and ``TAU``.
"""

from dataclasses import dataclass, field

from .errors import (ConfigError, InvalidRenaming, ModeMixError,
                     OpenTermError, UnknownLabel)

TAU = "tau"
DELTA = "delta"
RESERVED = (TAU, DELTA)

DRT = "drt"
DAT = "dat"

# Constructor tags in the order used by the total term order.
TAGS = (
    "DeadlockedProcess", "UndelayableAction", "Seq", "Parallel", "CommMerge",
    "WholeParallel", "Alt", "RelDelay", "AbsDelay", "RelTimeout", "AbsTimeout",
    "RelInit", "AbsInit", "ConflictElim", "Unless", "Encapsulate", "Abstract",
    "Rename", "RecVar", "RecConst",
)
RANK = {tag: i for i, tag in enumerate(TAGS)}

DELAY = {DRT: "RelDelay", DAT: "AbsDelay"}
TIMEOUT = {DRT: "RelTimeout", DAT: "AbsTimeout"}
INIT = {DRT: "RelInit", DAT: "AbsInit"}
TIMED_TAGS = {"RelDelay": DRT, "RelTimeout": DRT, "RelInit": DRT,
              "AbsDelay": DAT, "AbsTimeout": DAT, "AbsInit": DAT}
DELAY_TAGS = frozenset(DELAY.values())
TIMEOUT_TAGS = frozenset(TIMEOUT.values())
INIT_TAGS = frozenset(INIT.values())


class Term:
    """A node of the abstract syntax tree.

    ``tag`` names the constructor, ``attr`` holds its non-term data (a label,
    a time amount, a label set, a renaming, a variable name) and ``args`` is
    the tuple of sub-terms.  Build terms with the constructor functions of
    this module, never by calling ``Term`` directly.
    """

    __slots__ = ("tag", "attr", "args", "_hash", "_key", "canon", "__weakref__")

    def __init__(self, tag, attr, args, h):
        self.tag = tag
        self.attr = attr
        self.args = args
        self._hash = h
        self._key = None
        self.canon = _is_canonical_node(tag, attr, args)

    def __hash__(self):
        return self._hash

    @property
    def key(self):
        """Sort key realizing the frozen total order on terms."""
        k = self._key
        if k is None:
            if self.tag == "RecConst":
                ak = (self.attr[0], self.attr[1].key)
            elif self.attr is None:
                ak = 0
            else:
                ak = self.attr
            k = (RANK[self.tag], ak, tuple(a.key for a in self.args))
            self._key = k
        return k

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return pretty(self)

    def __reduce__(self):
        return (_make, (self.tag, self.attr, self.args))


_TABLE = {}


def _make(tag, attr, args):
    k = (tag, attr, args)
    t = _TABLE.get(k)
    if t is None:
        t = Term(tag, attr, args, hash((tag, attr, tuple(a._hash for a in args))))
        _TABLE[k] = t
    return t


def _is_canonical_node(tag, attr, args):
    for a in args:
        if not a.canon:
            return False
    if tag == "Alt":
        if len(args) < 2:
            return False
        for a in args:
            if a.tag == "Alt":
                return False
        return all(args[i].key < args[i + 1].key for i in range(len(args) - 1))
    if tag == "Parallel":
        if len(args) < 2:
            return False
        for a in args:
            if a.tag == "Parallel":
                return False
        return all(not (args[i + 1].key < args[i].key) for i in range(len(args) - 1))
    if tag == "RecConst":
        return attr[1].canon
    return True


# ---------------------------------------------------------------- constructors

def DeadlockedProcess():
    """The deadlocked process (absorbed by +)."""
    return _make("DeadlockedProcess", None, ())


def UndelayableAction(label):
    """Undelayable action; labels TAU and DELTA give the silent step and δ."""
    if not isinstance(label, str) or not label:
        raise UnknownLabel("action label must be a nonempty string: %r" % (label,))
    return _make("UndelayableAction", label, ())


def Alt(x, y, *more):
    return _make("Alt", None, (x, y) + more)


def Seq(x, y):
    return _make("Seq", None, (x, y))


def _amount(n):
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError("time amount must be a natural number: %r" % (n,))
    return n


def RelDelay(n, x):
    return _make("RelDelay", _amount(n), (x,))


def AbsDelay(n, x):
    return _make("AbsDelay", _amount(n), (x,))


def RelTimeout(n, x):
    return _make("RelTimeout", _amount(n), (x,))


def AbsTimeout(n, x):
    return _make("AbsTimeout", _amount(n), (x,))


def RelInit(n, x):
    return _make("RelInit", _amount(n), (x,))


def AbsInit(n, x):
    return _make("AbsInit", _amount(n), (x,))


def WholeParallel(x, y):
    return _make("WholeParallel", None, (x, y))


def Parallel(x, y, *more):
    return _make("Parallel", None, (x, y) + more)


def CommMerge(x, y):
    return _make("CommMerge", None, (x, y))


def ConflictElim(x):
    return _make("ConflictElim", None, (x,))


def Unless(x, y):
    return _make("Unless", None, (x, y))


def Encapsulate(H, x):
    return _make("Encapsulate", tuple(sorted(set(H))), (x,))


def Abstract(I, x):
    return _make("Abstract", tuple(sorted(set(I))), (x,))


def Rename(f, x):
    """Renaming; ``f`` is a mapping (or pairs).  Identity entries are dropped."""
    pairs = dict(f).items() if not isinstance(f, dict) else f.items()
    moved = tuple(sorted((a, b) for a, b in pairs if a != b))
    return _make("Rename", moved, (x,))


def RecVar(name):
    return _make("RecVar", name, ())


def RecConst(name, spec):
    if name not in spec.variables:
        from .errors import UnknownVariable
        raise UnknownVariable(name)
    return _make("RecConst", (name, spec), ())


def act(label):
    """Shorthand for an undelayable action."""
    return UndelayableAction(label)


DEADLOCKED = DeadlockedProcess()
DEADLOCK = UndelayableAction(DELTA)
SILENT = UndelayableAction(TAU)


def delay(mode, n, x):
    return _make(DELAY[mode], _amount(n), (x,))


def timeout(mode, n, x):
    return _make(TIMEOUT[mode], _amount(n), (x,))


def init(mode, n, x):
    return _make(INIT[mode], _amount(n), (x,))


def rebuild(t, args):
    """Same constructor as ``t`` with new arguments."""
    if args == t.args:
        return t
    return _make(t.tag, t.attr, tuple(args))


# ------------------------------------------------------- smart constructors

def alt(*xs):
    """Canonical sum: flatten, remove duplicates (x + x = x) and sort."""
    items = {}
    for x in xs:
        if x.tag == "Alt":
            for y in x.args:
                items[y] = None
        else:
            items[x] = None
    ordered = sorted(items, key=_key_of)
    if len(ordered) == 1:
        return ordered[0]
    return _make("Alt", None, tuple(ordered))


def par(*xs):
    """Canonical parallel composition: flatten and sort (a multiset)."""
    items = []
    for x in xs:
        if x.tag == "Parallel":
            items.extend(x.args)
        else:
            items.append(x)
    items.sort(key=_key_of)
    if len(items) == 1:
        return items[0]
    return _make("Parallel", None, tuple(items))


def _key_of(t):
    return t.key


def summands(t):
    """Top-level summands of a (canonical) term."""
    return t.args if t.tag == "Alt" else (t,)


def components(t):
    """Top-level parallel components of a (canonical) term."""
    return t.args if t.tag == "Parallel" else (t,)


def canonicalize(t):
    """Flatten and sort + and ||, and drop duplicate summands, everywhere."""
    if t.canon:
        return t
    if t.tag == "RecConst":
        name, spec = t.attr
        return RecConst(name, spec.canonical())
    args = [canonicalize(a) for a in t.args]
    if t.tag == "Alt":
        return alt(*args)
    if t.tag == "Parallel":
        return par(*args)
    return rebuild(t, args)


# --------------------------------------------------------------- recursion

class LinearRecSpec:
    """A recursive specification: ordered equations ``X = t_X``.

    The class name follows the domain vocabulary; linearity itself is checked
    by :func:`aptc_timed.recursion.is_linear`, since general guarded
    specifications are accepted for exploration.
    """

    _specs = {}

    def __new__(cls, equations, name="E"):
        eqs = tuple((str(v), rhs) for v, rhs in equations)
        k = (eqs, name)
        s = cls._specs.get(k)
        if s is None:
            s = object.__new__(cls)
            s.equations = eqs
            s.name = name
            s.variables = tuple(v for v, _ in eqs)
            s._rhs = dict(eqs)
            s._key = None
            s._canonical = None
            s.canon = all(r.canon for _, r in eqs)
            s._hash = hash(k)
            cls._specs[k] = s
        return s

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (LinearRecSpec, (self.equations, self.name))

    def rhs(self, var):
        return self._rhs[var]

    @property
    def key(self):
        if self._key is None:
            self._key = (self.name, tuple((v, r.key) for v, r in self.equations))
        return self._key

    def canonical(self):
        if self.canon:
            return self
        if self._canonical is None:
            self._canonical = LinearRecSpec(
                [(v, canonicalize(r)) for v, r in self.equations], self.name)
        return self._canonical

    def const(self, var):
        return RecConst(var, self)

    def __repr__(self):
        body = "; ".join("%s = %s" % (v, pretty(r)) for v, r in self.equations)
        return "LinearRecSpec(%s: %s)" % (self.name, body)


def substitute(t, mapping):
    """Replace free recursion variables by terms (``mapping``: name → Term)."""
    if t.tag == "RecVar":
        return mapping.get(t.attr, t)
    if not t.args:
        return t
    return rebuild(t, [substitute(a, mapping) for a in t.args])


def free_vars(t):
    """Names of recursion variables occurring free in ``t``."""
    out = set()
    stack = [t]
    seen = set()
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        if u.tag == "RecVar":
            out.add(u.attr)
        stack.extend(u.args)
    return out


def is_closed(t):
    return not free_vars(t)


# ------------------------------------------------------------ inspection

def labels_of(t, with_reserved=False):
    """Action labels occurring syntactically in ``t`` (through specs too)."""
    out = set()
    stack = [t]
    seen = set()
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        if u.tag == "UndelayableAction":
            if with_reserved or u.attr not in RESERVED:
                out.add(u.attr)
        elif u.tag == "RecConst":
            stack.extend(r for _, r in u.attr[1].equations)
        stack.extend(u.args)
    return out


def mode_of(t):
    """Timing family used by ``t``: 'drt', 'dat' or None if untimed."""
    found = set()
    stack = [t]
    seen = set()
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        m = TIMED_TAGS.get(u.tag)
        if m:
            found.add(m)
        if u.tag == "RecConst":
            stack.extend(r for _, r in u.attr[1].equations)
        stack.extend(u.args)
    if len(found) > 1:
        raise ModeMixError("term mixes relative and absolute timing operators")
    return found.pop() if found else None


def size(t):
    return 1 + sum(size(a) for a in t.args)


def depth(t):
    return 1 + max((depth(a) for a in t.args), default=0)


def is_step(t):
    """An undelayable action other than δ, or a parallel composition of them."""
    if t.tag == "UndelayableAction":
        return t.attr != DELTA
    if t.tag == "Parallel":
        return all(a.tag == "UndelayableAction" and a.attr != DELTA for a in t.args)
    return False


def step_labels(t):
    """Sorted label tuple of a step term."""
    return tuple(sorted(a.attr for a in components(t)))


def is_basic(t, mode):
    """Membership in the basic terms of the given timing mode.

    Basic terms are δ̇ or level-0 terms; level-0 terms are level-1 terms,
    positive delays of level-0 terms, or a level-1 term plus a positive delay
    of a level-0 term; level-1 terms are actions (including δ and τ), a step
    followed by a basic term, sums and parallel compositions of level-1 terms.
    """
    dtag = DELAY[mode]

    def b1(u):
        if u.tag == "UndelayableAction":
            return True
        if u.tag == "Seq":
            return is_step(u.args[0]) and b(u.args[1])
        if u.tag in ("Alt", "Parallel"):
            return all(b1(a) for a in u.args)
        return False

    def b0(u):
        if b1(u):
            return True
        if u.tag == dtag:
            return u.attr > 0 and b0(u.args[0])
        if u.tag == "Alt":
            delayed = [a for a in u.args if not b1(a)]
            return len(delayed) == 1 and delayed[0].tag == dtag \
                and delayed[0].attr > 0 and b0(delayed[0].args[0])
        return False

    def b(u):
        return u.tag == "DeadlockedProcess" or b0(u)

    return b(t)


# ------------------------------------------------------------ configuration

@dataclass(frozen=True)
class AlgebraConfig:
    """Alphabet, communication function, conflict, causality and mode.

    ``gamma`` maps unordered label pairs (stored both ways) to labels;
    ``conflict`` is symmetric and irreflexive; ``causality`` holds pairs
    ``(b, c)`` meaning ``b ≤ c`` and is a strict partial order.
    """

    alphabet: frozenset
    gamma: tuple = ()
    conflict: frozenset = frozenset()
    causality: frozenset = frozenset()
    mode: str = DRT
    _gamma_map: dict = field(default=None, compare=False, repr=False, hash=False)

    @staticmethod
    def make(alphabet, gamma=None, conflict=(), causality=(), mode=DRT):
        """Validate and close the relations; raises ConfigError."""
        alphabet = frozenset(alphabet)
        for a in alphabet:
            if a in RESERVED:
                raise ConfigError("reserved label %r in alphabet" % a, "alphabet")
        if mode not in (DRT, DAT):
            raise ConfigError("mode must be drt or dat, got %r" % (mode,), "mode")
        gmap = {}
        for (a, b), c in (gamma or {}).items():
            for lab in (a, b, c):
                if lab in RESERVED:
                    raise ConfigError("gamma may not involve %r" % lab, "gamma")
                if lab not in alphabet:
                    raise ConfigError("unknown label %r" % lab, "gamma")
            for pair in ((a, b), (b, a)):
                if gmap.get(pair, c) != c:
                    raise ConfigError("gamma%r defined twice" % (pair,), "gamma")
                gmap[pair] = c
        conf = set()
        for a, b in conflict:
            if a == b:
                raise ConfigError("conflict must be irreflexive (%s)" % a, "conflict")
            for lab in (a, b):
                if lab not in alphabet:
                    raise ConfigError("unknown label %r" % lab, "conflict")
            conf.add((a, b))
            conf.add((b, a))
        caus = set()
        for a, b in causality:
            for lab in (a, b):
                if lab not in alphabet:
                    raise ConfigError("unknown label %r" % lab, "causality")
            caus.add((a, b))
        changed = True
        while changed:
            changed = False
            for (a, b) in list(caus):
                for (c, d) in list(caus):
                    if b == c and (a, d) not in caus:
                        caus.add((a, d))
                        changed = True
        for a, b in caus:
            if a == b:
                raise ConfigError("causality must be irreflexive (cycle through %s)" % a,
                                  "causality")
        return AlgebraConfig(alphabet, tuple(sorted(gmap.items())), frozenset(conf),
                             frozenset(caus), mode)

    def with_mode(self, mode):
        return AlgebraConfig(self.alphabet, self.gamma, self.conflict, self.causality, mode)

    def comm(self, a, b):
        """γ(a, b) or None when undefined."""
        g = self._gamma_map
        if g is None:
            g = dict(self.gamma)
            object.__setattr__(self, "_gamma_map", g)
        return g.get((a, b))

    def unless_label(self, e, blockers):
        """Label of event ``e`` under ◁ with right-operand labels ``blockers``.

        ``e`` becomes τ if it conflicts with a blocker, or if a blocker is in
        conflict with some ``b ≤ e``; otherwise it is kept.
        """
        if e in RESERVED:
            return e
        for l in blockers:
            if (e, l) in self.conflict:
                return TAU
            for (x, b) in self.conflict:
                if x == l and (b, e) in self.causality:
                    return TAU
        return e


# ------------------------------------------------------------- validation

def validate(t, config):
    """Check the term invariants against ``config``; returns ``t``."""
    m = mode_of(t)
    if m is not None and m != config.mode:
        raise ModeMixError("term uses %s operators but config mode is %s" % (m, config.mode))
    seen = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        if u.tag == "UndelayableAction":
            if u.attr not in RESERVED and u.attr not in config.alphabet:
                raise UnknownLabel(u.attr)
        elif u.tag in ("Encapsulate", "Abstract"):
            for a in u.attr:
                if a in RESERVED:
                    raise UnknownLabel("reserved label %r not allowed in %s set" % (a, u.tag))
                if a not in config.alphabet:
                    raise UnknownLabel(a)
        elif u.tag == "Rename":
            for a, b in u.attr:
                if a in RESERVED or b in RESERVED:
                    raise InvalidRenaming("renaming may not move or produce %r" % (a if a in RESERVED else b))
                if a not in config.alphabet or b not in config.alphabet:
                    raise InvalidRenaming("renaming %s->%s leaves the alphabet" % (a, b))
        elif u.tag == "RecConst":
            stack.extend(r for _, r in u.attr[1].equations)
        stack.extend(u.args)
    return t


_CONSTRUCTORS = {
    "DeadlockedProcess": DeadlockedProcess, "UndelayableAction": UndelayableAction,
    "Alt": Alt, "Seq": Seq, "RelDelay": RelDelay, "AbsDelay": AbsDelay,
    "RelTimeout": RelTimeout, "AbsTimeout": AbsTimeout, "RelInit": RelInit,
    "AbsInit": AbsInit, "WholeParallel": WholeParallel, "Parallel": Parallel,
    "CommMerge": CommMerge, "ConflictElim": ConflictElim, "Unless": Unless,
    "Encapsulate": Encapsulate, "Abstract": Abstract, "Rename": Rename,
    "RecVar": RecVar, "RecConst": RecConst,
}


def mk_term(constructor, children, config):
    """Build and validate a term.

    ``constructor`` is a constructor name or function; ``children`` is the
    list of its positional arguments (data first, then sub-terms).
    """
    fn = _CONSTRUCTORS[constructor] if isinstance(constructor, str) else constructor
    if fn is Rename:
        f = dict(children[0])
        for a in config.alphabet:
            if a not in f:
                raise InvalidRenaming("renaming is not total: %r unmapped" % a)
        for a, b in f.items():
            if a in RESERVED and a != b:
                raise InvalidRenaming("renaming may not move %r" % a)
    return validate(fn(*children), config)


def require_closed(t):
    fv = free_vars(t)
    if fv:
        raise OpenTermError("free variables: %s" % ", ".join(sorted(fv)))


# ---------------------------------------------------------------- printing

_PREC = {"Alt": 0, "WholeParallel": 1, "Parallel": 2, "CommMerge": 2, "Seq": 3}
_OPS = {"Alt": " + ", "WholeParallel": " >< ", "Parallel": " || ",
        "CommMerge": " | ", "Seq": " . "}
_PREFIX = {"RelDelay": "sigma", "AbsDelay": "sigma", "RelTimeout": "timeout",
           "AbsTimeout": "timeout", "RelInit": "init", "AbsInit": "init"}


def _prec(t):
    return _PREC.get(t.tag, 9)


def pretty(t):
    """Surface syntax accepted by :func:`aptc_timed.parser.parse_term`."""
    tag = t.tag
    if tag == "DeadlockedProcess":
        return "deadlocked"
    if tag == "UndelayableAction":
        return {TAU: "tau", DELTA: "deadlock"}.get(t.attr, t.attr)
    if tag in _OPS:
        p = _PREC[tag]
        parts = []
        for i, a in enumerate(t.args):
            s = pretty(a)
            q = _prec(a)
            need = q < p or (q == p and not (i == 0 and a.tag == tag) and tag != "Alt")
            parts.append("(%s)" % s if need else s)
        return _OPS[tag].join(parts)
    if tag in _PREFIX:
        return "%s[%d](%s)" % (_PREFIX[tag], t.attr, pretty(t.args[0]))
    if tag == "ConflictElim":
        return "theta(%s)" % pretty(t.args[0])
    if tag == "Unless":
        return "(%s <| %s)" % (pretty(t.args[0]), pretty(t.args[1]))
    if tag == "Encapsulate":
        return "encap{%s}(%s)" % (",".join(t.attr), pretty(t.args[0]))
    if tag == "Abstract":
        return "abstract{%s}(%s)" % (",".join(t.attr), pretty(t.args[0]))
    if tag == "Rename":
        return "rename{%s}(%s)" % (",".join("%s->%s" % p for p in t.attr), pretty(t.args[0]))
    if tag == "RecVar":
        return t.attr
    if tag == "RecConst":
        return "<%s|%s>" % (t.attr[0], t.attr[1].name)
    raise ValueError(tag)

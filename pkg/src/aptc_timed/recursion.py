"""Recursive specifications: guardedness, unfolding, RSP and CFAR.

Right-hand sides are normalized with the recursion variables kept opaque;
the rewriter has no rule that looks inside a ``RecVar``.
"""

from . import terms as T
from .errors import NotACluster, NotLinear, UnknownVariable
from .graphs import tarjan_scc
from .rewriter import normalize
from .sos import build_lts
from . import equivalence as E


def _nf(t, config):
    return normalize(t, config, tau_laws=False)


def normalized_rhs(spec, config):
    """Ordered ``(variable, normal form of its right-hand side)`` pairs."""
    return [(v, _nf(r, config)) for v, r in spec.equations]


# ----------------------------------------------------------------- linearity

def _linear_sum(t, dtag):
    if t is T.DEADLOCKED:
        return True
    for s in T.summands(t):
        if T.is_step(s) or s is T.DEADLOCK:
            continue
        if s.tag == "Seq" and T.is_step(s.args[0]) and s.args[1].tag == "RecVar":
            continue
        if s.tag == dtag and s.attr > 0 and _linear_sum(s.args[0], dtag):
            continue
        return False
    return True


def is_linear(spec, config):
    """Every normalized right-hand side is a sum of ``P``, ``P·X`` or delays of such sums."""
    dtag = T.DELAY[config.mode]
    return all(_linear_sum(r, dtag) for _, r in normalized_rhs(spec, config))


def require_linear(spec, config):
    dtag = T.DELAY[config.mode]
    for v, r in normalized_rhs(spec, config):
        if not _linear_sum(r, dtag):
            raise NotLinear("right-hand side of %s is not linear: %s" % (v, T.pretty(r)))


# ---------------------------------------------------------------- guardedness

def unguarded_occurrences(t, mode):
    """Variables occurring in ``t`` outside every guard ``P·_`` or ``σ^n(_)``, n > 0."""
    dtag = T.DELAY[mode]
    out = []

    def walk(u, guarded):
        if u.tag == "RecVar":
            if not guarded:
                out.append(u.attr)
            return
        if u.tag == "Seq":
            walk(u.args[0], guarded)
            walk(u.args[1], guarded or T.is_step(u.args[0]))
            return
        if u.tag == dtag:
            walk(u.args[0], guarded or u.attr > 0)
            return
        for a in u.args:
            walk(a, guarded)

    walk(t, False)
    return sorted(set(out))


def check_guarded(spec, config):
    """``(guarded, diagnostics)`` for a specification.

    An occurrence counts as guarded if it is guarded syntactically, after
    normalizing the right-hand side, or after replacing unguarded variables
    by their (normalized) right-hand sides a bounded number of times.
    """
    mode = config.mode
    rhs = dict(normalized_rhs(spec, config))
    diags = []
    for v, raw in spec.equations:
        if not unguarded_occurrences(raw, mode):
            continue
        body = rhs[v]
        bad = unguarded_occurrences(body, mode)
        rounds = 0
        while bad and rounds < len(spec.variables):
            rounds += 1
            body = _nf(T.substitute(body, {y: rhs[y] for y in bad}), config)
            bad = unguarded_occurrences(body, mode)
        for y in bad:
            diags.append("%s: unguarded occurrence of %s" % (v, y))
    return not diags, diags


# ------------------------------------------------------------------ unfolding

def unfold(spec, var, depth):
    """RDP applied ``depth`` times: ``⟨var|E⟩`` with right-hand sides substituted."""
    if var not in spec.variables:
        raise UnknownVariable(var)
    if depth <= 0:
        return T.RecConst(var, spec)
    mapping = {y: unfold(spec, y, depth - 1) for y in T.free_vars(spec.rhs(var))}
    return T.substitute(spec.rhs(var), mapping)


def rsp_check(spec, candidate, config, bounds=None):
    """The premise of RSP: each candidate is step bisimilar to its equation."""
    for v in spec.variables:
        if v not in candidate:
            raise UnknownVariable(v)
        lhs = candidate[v]
        rhs = T.substitute(spec.rhs(v), dict(candidate))
        if not E.step_bisim(build_lts(lhs, config, bounds), build_lts(rhs, config, bounds)):
            return False
    return True


# ----------------------------------------------------------------------- CFAR

def _internal(step, I):
    return all(l in I for l in T.step_labels(step))


def cluster_of(spec, I, var, config):
    """``(members, exits)`` of the cluster for ``I`` containing ``var``.

    Raises :class:`NotACluster` when ``var`` lies on no cycle of I-labelled
    summands, when a cluster member has a delayed summand or a non-I
    summand leading back into the cluster, or when the cluster has no exit.
    """
    if var not in spec.variables:
        raise UnknownVariable(var)
    require_linear(spec, config)
    I = set(I)
    rhs = dict(normalized_rhs(spec, config))
    dtag = T.DELAY[config.mode]

    def i_edges(v):
        out = []
        for s in T.summands(rhs[v]):
            if s.tag == "Seq" and _internal(s.args[0], I):
                out.append(s.args[1].attr)
        return sorted(set(out))

    comps = tarjan_scc(spec.variables, i_edges)
    comp = next(c for c in comps if var in c)
    members = set(comp)
    if len(comp) == 1 and var not in i_edges(var):
        raise NotACluster("%s is on no cycle of %s-labelled steps" % (var, sorted(I)))
    exits = []
    for v in spec.variables:
        if v not in members:
            continue
        for s in T.summands(rhs[v]):
            if s is T.DEADLOCKED or s is T.DEADLOCK:
                continue
            if s.tag == dtag:
                raise NotACluster("cluster member %s has a delayed summand" % v)
            if s.tag == "Seq":
                inside = s.args[1].attr in members
                if inside and _internal(s.args[0], I):
                    continue
                if inside:
                    raise NotACluster("non-internal step from %s back into the cluster" % v)
            exits.append(s)
    if not exits:
        raise NotACluster("the cluster of %s has no exit" % var)
    return sorted(members), exits


def cfar_eliminate(spec, I, var, config):
    """CFAR: ``τ · τ_I(sum of the cluster's exits)``, exits closed with ``⟨Y|E⟩``."""
    _, exits = cluster_of(spec, I, var, config)
    mapping = {v: T.RecConst(v, spec) for v in spec.variables}
    body = T.alt(*[T.substitute(e, mapping) for e in exits])
    return T.Seq(T.SILENT, T.Abstract(sorted(I), body))

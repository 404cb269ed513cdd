"""Conflict elimination Θ and the unless operator ◁.

The usual transition rules for Θ and ◁ do not agree with their axioms (the
Θ rules only let conflicting actions through, contradicting Θ(a) = a, and
the ◁ axioms derive a ◁ (δ·b) equal to both a and τ).  The workbench
therefore fixes one reading and uses it in both the rewriter and the SOS:

* ``x ◁ y`` behaves like ``x`` (actions, idling, deadlock and termination),
  with each event ``e`` renamed to τ when it is blocked by a label occurring
  syntactically in ``y`` (see :meth:`AlgebraConfig.unless_label`).  ``y``
  never evolves.
* ``Θ(x)`` is defined by pushing Θ through ``x`` with the CE axioms, plus
  the extension rules listed in :data:`THETA_EXTENSIONS`.  Over an n-ary
  sum or parallel composition every component takes the role of ``x`` in
  CE27/CE29 once, so the result does not depend on bracketing or order.
  (CE29 itself is not compatible with P3 once ♯ is non-trivial: with
  ♯(a, b), CE29 applied to ``b ‖ (a ‖ a)`` offers ``{b, τ, τ}``, applied to
  ``a ‖ (a ‖ b)`` it does not.)
"""

from . import terms as T

THETA_EXTENSIONS = {
    "THETA-TIME": "Θ(op^n(x)) = op^n(Θ(x)) for delay, time-out and initialization",
    "THETA-OP": "Θ commutes with ∂_H, τ_I, ρ_f and with the left operand of ◁",
    "THETA-THETA": "Θ(Θ(x)) is computed by first pushing the inner Θ",
    "THETA-REC": "Θ(⟨X|E⟩) = Θ(t_X) (unfolding, used by the SOS only)",
}

_TIMED = T.DELAY_TAGS | T.TIMEOUT_TAGS | T.INIT_TAGS


def theta_push(x, mode):
    """One push step for ``Θ(x)``; returns ``(term, tag)``."""
    tag = x.tag
    Th = T.ConflictElim
    if tag == "UndelayableAction":
        return x, "CE25DR" if mode == T.DRT else "CE25DA"
    if tag == "DeadlockedProcess":
        return x, "CE26DRID" if mode == T.DRT else "CE26DAID"
    if tag == "Alt":
        parts = T.summands(T.alt(*x.args))
        out = [T.Unless(Th(p), T.alt(*(q for j, q in enumerate(parts) if j != i)))
               for i, p in enumerate(parts)]
        return T.alt(*out), "CE27"
    if tag == "Seq":
        return T.Seq(Th(x.args[0]), Th(x.args[1])), "CE28"
    if tag == "Parallel":
        parts = T.components(T.par(*x.args))
        out = []
        for i, p in enumerate(parts):
            rest = T.par(*(q for j, q in enumerate(parts) if j != i))
            out.append(T.par(T.Unless(Th(p), rest), rest))
        return T.alt(*out), "CE29" if len(parts) == 2 else "CE29*"
    if tag == "CommMerge":
        a, b = x.args
        return T.alt(T.CommMerge(T.Unless(Th(a), b), b),
                     T.CommMerge(T.Unless(Th(b), a), a)), "CE30"
    if tag == "WholeParallel":
        a, b = x.args
        return Th(T.alt(T.par(a, b), T.CommMerge(a, b))), "P1"
    if tag in _TIMED:
        return T.rebuild(x, [Th(x.args[0])]), "THETA-TIME"
    if tag == "Unless":
        return T.Unless(Th(x.args[0]), x.args[1]), "THETA-OP"
    if tag in ("Encapsulate", "Abstract", "Rename"):
        return T.rebuild(x, [Th(x.args[0])]), "THETA-OP"
    if tag == "ConflictElim":
        inner, _ = theta_push(x.args[0], mode)
        return Th(inner), "THETA-THETA"
    if tag == "RecConst":
        name, spec = x.attr
        return Th(unfold_once(spec, name)), "THETA-REC"
    raise ValueError("cannot push Θ through %s" % tag)


def unfold_once(spec, var):
    """Right-hand side of ``var`` with variables replaced by their constants."""
    mapping = {v: T.RecConst(v, spec) for v in spec.variables}
    return T.canonicalize(T.substitute(spec.rhs(var), mapping))


def blockers(y):
    """Labels of the right operand of ◁ (reserved labels excluded)."""
    return frozenset(T.labels_of(y))


def unless_step(labels, y, config):
    """Apply ◁ to a step label tuple."""
    bl = blockers(y)
    return tuple(sorted(config.unless_label(e, bl) for e in labels))

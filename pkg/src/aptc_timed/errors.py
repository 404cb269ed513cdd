"""Exception hierarchy shared by all modules."""


class AptcError(Exception):
    """Base class of every error raised by the workbench."""


class ModeMixError(AptcError):
    """Relative and absolute timing operators were mixed in one term."""


class UnknownLabel(AptcError):
    """An action label is not in the configured alphabet."""


class InvalidRenaming(AptcError):
    """A renaming map is not total or moves a reserved label."""


class OpenTermError(AptcError):
    """An operation needing a closed term received free variables."""


class SourceSpan:
    """Position of a syntax problem (1-based line and column)."""

    def __init__(self, line, column, length=1):
        self.line = line
        self.column = column
        self.length = length

    def __repr__(self):
        return "SourceSpan(line=%d, column=%d, length=%d)" % (
            self.line, self.column, self.length)


class SyntaxError(AptcError):  # noqa: A001 - deliberately mirrors the grammar error name
    """Malformed surface syntax; ``span`` locates the offending token."""

    def __init__(self, message, span):
        super().__init__("%s at line %d, column %d" % (message, span.line, span.column))
        self.span = span


class DuplicateEquation(AptcError):
    """A recursive specification defines the same variable twice."""


class UnboundVariable(AptcError):
    """A recursive specification mentions a variable with no equation."""


class ConfigError(AptcError):
    """A configuration file is malformed or violates an invariant."""

    def __init__(self, message, field=""):
        super().__init__("%s: %s" % (field, message) if field else message)
        self.field = field


class NonTermination(AptcError):
    """The rewriter exceeded its step budget."""


class UnguardedRecursion(AptcError):
    """Deriving transitions required unbounded unfolding of a specification."""


class BoundExceeded(AptcError):
    """State-space exploration exceeded a user bound."""

    def __init__(self, which, limit):
        super().__init__("bound exceeded: %s > %s" % (which, limit))
        self.which = which
        self.limit = limit


class ModeMismatch(AptcError):
    """Two transition systems of different timing modes were compared."""


class TooLarge(AptcError):
    """A brute-force checker was given a system above its size limit."""


class NotACluster(AptcError):
    """The requested variable does not lie in a cluster for the given set."""


class NotLinear(AptcError):
    """A recursive specification is not linear."""


class UnknownVariable(AptcError):
    """A variable is not defined by the specification."""


class ConfigOverflow(AptcError):
    """Generated alphabet is larger than the configured cap."""

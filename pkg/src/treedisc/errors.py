"""Exception hierarchy shared by all engine modules.

Every error carries a stable ``code`` string that the HTTP layer and the
CLI surface verbatim, so callers can switch on it without parsing messages.
"""


class EngineError(Exception):
    """Base class for all errors raised by this package."""

    code = "EngineError"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


# --- event log ---------------------------------------------------------


class MalformedXml(EngineError):
    code = "MalformedXml"


class MissingActivity(EngineError):
    code = "MissingActivity"

    def __init__(self, trace_index: int):
        self.trace_index = trace_index
        super().__init__(f"event without concept:name in trace {trace_index}")


# --- process tree ------------------------------------------------------


class InvalidTree(EngineError):
    code = "InvalidTree"


class BudgetExceeded(EngineError):
    code = "BudgetExceeded"


class InvalidPath(EngineError):
    code = "InvalidPath"


class BelowLeaf(EngineError):
    code = "BelowLeaf"


class LeftOfRoot(EngineError):
    """Sibling insertion next to the root (the root has no siblings)."""

    code = "LeftOfRoot"


class CannotRemoveRoot(EngineError):
    code = "CannotRemoveRoot"


class NoSibling(EngineError):
    code = "NoSibling"


class MalformedPtml(EngineError):
    code = "MalformedPtml"


class UnknownNodeKind(EngineError):
    code = "UnknownNodeKind"


class DanglingEdge(EngineError):
    code = "DanglingEdge"


# --- petri net ---------------------------------------------------------


class NotEnabled(EngineError):
    code = "NotEnabled"


# --- alignment ---------------------------------------------------------


class SearchBudgetExceeded(EngineError):
    code = "SearchBudgetExceeded"


# --- discovery ---------------------------------------------------------


class EmptyInput(EngineError):
    code = "EmptyInput"


class EmptySelection(EngineError):
    code = "EmptySelection"


# --- incremental discovery ---------------------------------------------


class InconsistentInput(EngineError):
    code = "InconsistentInput"


class TraceFits(EngineError):
    code = "TraceFits"


# --- session service ----------------------------------------------------


class UnknownSession(EngineError):
    code = "UnknownSession"


class UnknownVariant(EngineError):
    code = "UnknownVariant"


class NoModel(EngineError):
    code = "NoModel"


class InconsistentModel(EngineError):
    code = "InconsistentModel"


class NothingToUndo(EngineError):
    code = "NothingToUndo"


class NothingToRedo(EngineError):
    code = "NothingToRedo"

"""Exception types shared across immlab."""


class ImmlabError(Exception):
    """Base class for all immlab errors."""


class MissingEdge(ImmlabError):
    pass


class LoopForbidden(ImmlabError):
    pass


class EmptySide(ImmlabError):
    pass


class EmptyGraph(ImmlabError):
    pass


class SimpleOnly(ImmlabError):
    """Raised when a simple-graph-only format is asked to carry parallel edges."""


class AdjacentVertices(ImmlabError):
    pass


class InfeasibleParams(ImmlabError):
    pass


class NotFull(ImmlabError):
    def __init__(self, deficient):
        self.deficient = sorted(deficient)
        super().__init__(f"bay vertices below degree threshold: {self.deficient}")


class CrossBayAttachment(ImmlabError):
    pass


class HypothesisViolated(ImmlabError):
    def __init__(self, what, detail=None):
        self.what = what
        self.detail = detail
        msg = what if detail is None else f"{what}: {detail}"
        super().__init__(msg)


class BudgetExceeded(ImmlabError):
    def __init__(self, message="node budget exhausted", spent=None):
        self.spent = spent
        super().__init__(message)


class ParseError(ImmlabError):
    pass

"""Exception hierarchy shared by every module of the package."""


class SepMonError(Exception):
    """Base class for all errors raised by sepmon."""


class ParseError(SepMonError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = f" (line {line}, col {col})" if line is not None else ""
        super().__init__(f"{message}{where}")


class DuplicateToken(SepMonError):
    pass


class DanglingEndpoint(SepMonError):
    pass


class GroupNotPartition(SepMonError):
    def __init__(self, vertex, edge, message):
        self.vertex = vertex
        self.edge = edge
        super().__init__(f"vertex {vertex!r}, edge {edge!r}: {message}")


class UnknownVertex(SepMonError):
    pass


class NotAdaptable(SepMonError):
    REASONS = (
        "MultiVertexComponentWithSeparation",
        "RegularVertexTooFewEdges",
        "FreeGroupMissingLoop",
        "FreeGroupNoConnector",
        "ConnectorNotDescending",
        "MinimalFreeNotSink",
    )

    def __init__(self, reason, detail=""):
        assert reason in self.REASONS, reason
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class NotHereditary(SepMonError):
    pass


class NotSaturated(SepMonError):
    pass


class NotLower(SepMonError):
    pass


class InvalidChoice(SepMonError):
    pass


class PreconditionViolated(SepMonError):
    def __init__(self, which, detail=""):
        self.which = which
        super().__init__(f"{which}: {detail}" if detail else which)


class PreconditionUnverified(SepMonError):
    pass


class UnknownGenerator(SepMonError):
    pass


class IllDefined(SepMonError):
    pass


class IllDefinedAtGroupLevel(SepMonError):
    pass


class InvalidPair(SepMonError):
    pass


class InvalidIndex(SepMonError):
    pass

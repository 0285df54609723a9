"""Exception hierarchy shared by every module of the package."""


class ShadowError(Exception):
    """Base class; ``code`` is the stable machine-readable name."""

    code = "ShadowError"

    def __init__(self, message: str = "", **context):
        super().__init__(message or self.code)
        self.context = context


def _error(name: str, doc: str = "") -> type:
    return type(name, (ShadowError,), {"code": name, "__doc__": doc or name})


class GraphSyntaxError(ShadowError):
    code = "SyntaxError"

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}", line=line)
        self.line = line


DuplicateId = _error("DuplicateId")
UnknownKind = _error("UnknownKind")
BadSlot = _error("BadSlot")
UnknownVertex = _error("UnknownVertex")
UnknownEdge = _error("UnknownEdge")
GenerationExhausted = _error("GenerationExhausted")

NotAcyclicAmbient = _error("NotAcyclicAmbient")

NotInternalRegion = _error("NotInternalRegion")
UnknownRegion = _error("UnknownRegion")
DuplicateAssignment = _error("DuplicateAssignment")
StaleRecord = _error("StaleRecord")

PatternMismatch = _error("PatternMismatch")
WrongSlot = _error("WrongSlot")
SpliceDegenerate = _error("SpliceDegenerate")
InvariantViolation = _error("InvariantViolation", "a checked-mode assertion failed")

NotAcyclic = _error("NotAcyclic")
NotConnected = _error("NotConnected")
NoDiskPiece = _error("NoDiskPiece")
NoHomologyS1Subtree = _error("NoHomologyS1Subtree")
NoBoundaryVertex = _error("NoBoundaryVertex")
AdjacentBoundaryPair = _error("AdjacentBoundaryPair")
InternalNoProgress = _error("InternalNoProgress")

BoundExceeded = _error("BoundExceeded")
MalformedGraph = _error("MalformedGraph", "input graph failed validation")

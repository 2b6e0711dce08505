"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateWorld(EngineError):
    pass


class DanglingWorldRef(EngineError):
    pass


class UnknownWorld(EngineError):
    pass


class UnknownAgent(EngineError):
    pass


class AgentMismatch(EngineError):
    pass


class DanglingEventRef(EngineError):
    pass


class DepthExceeded(EngineError):
    def __init__(self, event: str, depth: int, bound: int):
        super().__init__(
            f"precondition of event {event!r} has modal depth {depth}, bound is {bound}"
        )
        self.event = event
        self.depth = depth
        self.bound = bound


class NotApplicable(EngineError):
    pass


class UnknownActionName(EngineError):
    pass


class FormulaSyntaxError(EngineError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NotAMatch(EngineError):
    pass


class IllegalFlavor(EngineError):
    pass


class UnknownShorthand(EngineError):
    pass


class InvalidProblem(EngineError):
    pass


class NotEuclidean(EngineError):
    pass


class NotSingleAgent(EngineError):
    pass

"""Exception hierarchy shared by the engine, strategies and solvers."""


class GameError(Exception):
    """Base class for every error raised by this package."""


class EdgeAlreadyColored(GameError):
    pass


class WhiteForbidden(GameError):
    pass


class WindowCapExceeded(GameError):
    pass


class NoWhiteEdge(GameError):
    pass


class UnsupportedSemantics(GameError):
    pass


class UniverseTooLarge(GameError):
    pass


class ScriptEdgeNotWhite(GameError):
    pass


class HorizonExhausted(GameError):
    pass


class MalformedTranscript(GameError):
    pass

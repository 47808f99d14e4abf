"""Exception hierarchy shared by every module."""


class PrisparseError(Exception):
    """Base class for all library errors."""


class GraphError(PrisparseError):
    """Malformed graph: self-loop, parallel edge, bad weight or priority."""


class Unreachable(PrisparseError):
    def __init__(self, u, v):
        super().__init__(f"no path between {u!r} and {v!r}")
        self.u = u
        self.v = v


class Disconnected(PrisparseError):
    def __init__(self, vertices, message=None):
        self.vertices = tuple(vertices)
        super().__init__(message or f"vertices not mutually connected: {list(self.vertices)!r}")


class UnknownEdge(PrisparseError):
    def __init__(self, edge):
        super().__init__(f"edge {edge!r} is not in the graph")
        self.edge = edge


class NoTerminals(PrisparseError):
    pass


class InvalidStrategyForFamily(PrisparseError):
    pass


class IncompatibleSolver(PrisparseError):
    pass


class PruningDisconnected(PrisparseError):
    """Tree-merge pruning separated terminals. Signals a bug, never user error."""


class BudgetExceeded(PrisparseError):
    pass


class Infeasible(PrisparseError):
    pass


class FormatError(PrisparseError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)

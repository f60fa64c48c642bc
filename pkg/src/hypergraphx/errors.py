"""Exception types raised by hypergraphx."""

from __future__ import annotations


class HypergraphError(Exception):
    """Base class for every error raised by this package."""


class GraphSyntaxError(HypergraphError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DanglingEndpointError(HypergraphError):
    pass


class DuplicateIdentifierError(HypergraphError):
    pass


class DisconnectedGraphError(HypergraphError):
    pass


class DegenerateGraphError(HypergraphError):
    """Graph with no vertices or no edges."""


class PointNotInGraphError(HypergraphError):
    pass


class ArcGraphError(HypergraphError):
    pass


class CircleGraphError(HypergraphError):
    pass


class NotAnEndpointError(HypergraphError):
    pass


class NotOrdinaryError(HypergraphError):
    pass


class InvalidSubcontinuumError(HypergraphError):
    pass


class MismatchedGraphError(HypergraphError):
    """A subcontinuum refers to vertices or edges the host graph lacks."""


class PointNotInSubcontinuumError(HypergraphError):
    pass


class BudgetExceeded(HypergraphError):
    pass


class FamilyParameterError(HypergraphError):
    pass


class InternalConsistencyError(HypergraphError):
    """An invariant the theory guarantees was violated; indicates a bug."""

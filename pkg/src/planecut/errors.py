"""Exception hierarchy shared by every planecut module."""

from __future__ import annotations


class PlanecutError(Exception):
    """Base class for all planecut errors."""


class MalformedInput(PlanecutError, ValueError):
    """Input data does not describe a valid rotation system or instance."""


class NonPlanarEmbedding(PlanecutError):
    """Face tracing of the rotation system violates Euler's formula."""


class DisconnectedGraph(PlanecutError):
    """The graph has more than one connected component."""


class NonpositiveCost(PlanecutError):
    """An edge cost is zero or negative."""


class DartInTree(PlanecutError):
    """A fundamental cycle was requested for a tree dart."""


class SelfCrossingCycle(PlanecutError):
    """A closed walk crosses itself, so its enclosed weight is undefined."""


class NoCut(PlanecutError):
    """No bipartition with positive weight on both sides exists."""


class OddTotalWeight(PlanecutError):
    """Total weight is odd, so no perfectly balanced cut exists."""


class NoBalancedCut(PlanecutError):
    """No subset reaches exactly half of the total weight."""


class LengthMismatch(PlanecutError):
    """Input sequences have different lengths."""


class ClaimViolated(PlanecutError):
    """A structural claim checked by a verifier does not hold."""

    def __init__(self, message: str, counterexample: object = None) -> None:
        super().__init__(message)
        self.counterexample = counterexample


class BudgetExceeded(PlanecutError):
    """An oracle input is larger than its configured budget."""


class NoPositiveDart(PlanecutError):
    """Weight reduction found no positive dart although weight remains."""

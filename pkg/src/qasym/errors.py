"""Exception taxonomy shared by every qasym module.

The CLI maps these onto exit statuses: SpecError -> 1, HypothesisError -> 2,
everything else derived from QasymError -> 3.
"""

from __future__ import annotations


class QasymError(Exception):
    """Base class for all qasym errors."""


class DomainError(QasymError):
    """Argument outside the mathematical domain of an operation."""


class IndexOverflowError(QasymError):
    """Requested order exceeds a precomputed table's size."""


class ConvergenceError(QasymError):
    """A series, product or quadrature failed (or would fail) to converge."""


class PoleError(QasymError):
    """Evaluation at a pole (vanishing Pochhammer factor, Gamma pole)."""


class SpecError(QasymError):
    """Invalid series description: violated invariant or unparseable input."""


class BranchError(QasymError):
    """Tail-term preconditions unmet; the tail contribution is zero instead."""


class HypothesisError(QasymError):
    """The increasing-near-zero hypothesis fails; asymptotics are refused."""


class DegenerateError(QasymError):
    """A stationary point (or expansion branch) could not be classified."""


class SignError(QasymError):
    """Peak-width normalizer undefined: even derivative has the wrong sign."""

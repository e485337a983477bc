"""Numerical toolkit for the degenerate third Painleve equation.

Covers the full small-tau solution landscape: monodromy-data handling and
classification, regime-specific leading asymptotics for u(tau) and
exp(i*phi(tau)), the three local expansion families (power-like, regular
logarithmic, irregular logarithmic) with their closed-form generating
functions, Backlund transformations at the data and function level, and
adaptive complex-plane integration with pole/zero continuation.
"""

from dp3.monodromy import (
    ProblemParams,
    MonodromyData,
    BranchingParams,
    Regime,
    RegimeTag,
    residuals,
    complete_from_G,
    complete_special,
    classify,
    backlund_data,
    branching,
)

__version__ = "0.1.0"

__all__ = [
    "ProblemParams",
    "MonodromyData",
    "BranchingParams",
    "Regime",
    "RegimeTag",
    "residuals",
    "complete_from_G",
    "complete_special",
    "classify",
    "backlund_data",
    "branching",
    "__version__",
]

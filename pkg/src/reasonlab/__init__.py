"""reasonlab: non-monotonic reasoning with decision-tree fallback,
incremental axiom induction, and minimal planning with diagnosis on
simulated domains."""

__version__ = "0.1.0"

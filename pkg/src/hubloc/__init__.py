"""Exact solver for the capacitated multiple-allocation hub location problem
under scenario uncertainty (deterministic, per-scenario stochastic and
minimax-regret models)."""

from .core import AllocationPlan, HubSet, Instance, Solution, Violation, expected_demand, validate_instance

__version__ = "0.1.0"

__all__ = ["AllocationPlan", "HubSet", "Instance", "Solution", "Violation", "expected_demand", "validate_instance"]

"""Supplier selection for a repairable series-parallel multi-state system."""
from .scenario import Assignment, Scenario, apply_override, load_scenario, parse_scenario

__all__ = ["Assignment", "Scenario", "apply_override", "load_scenario", "parse_scenario"]
__version__ = "0.1.0"

"""Edge-indexed CSS code for summoning a qubit across causal diamonds."""

__version__ = "0.1.0"

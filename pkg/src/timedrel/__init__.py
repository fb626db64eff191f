"""Timed bisimulation, prebisimulation and time-abstracted relations for timed automata."""

__version__ = "0.1.0"

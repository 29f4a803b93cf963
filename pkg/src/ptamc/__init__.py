"""Exact model checking of one-clock priced timed automata."""

from .intervals import Interval, IntervalSet
from .model import OneClockPTA, load_model, run_cost, serialize

__all__ = ["Interval", "IntervalSet", "OneClockPTA", "load_model", "run_cost", "serialize"]

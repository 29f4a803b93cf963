"""Existential model checking of linear cost-constrained formulas (one stopwatch cost)."""

from .ata import ATA, to_ata
from .search import UndecidableInput, WmtlResult, decide_exists
from .words import ConfigWord, JointConfig, decode, encode, is_subword

__all__ = ["ATA", "ConfigWord", "JointConfig", "UndecidableInput", "WmtlResult", "decide_exists",
           "decode", "encode", "is_subword", "to_ata"]

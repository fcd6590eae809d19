"""Matching engines over marked point configurations."""

from .base import Matching
from .core import core_match
from .directed import random_direction_match
from .iterated import iterated_stable_match
from .schemes import opposite_stub_match, seed_group_match
from .stable import stable_multimatch

__all__ = [
    "Matching",
    "core_match",
    "iterated_stable_match",
    "opposite_stub_match",
    "random_direction_match",
    "seed_group_match",
    "stable_multimatch",
]

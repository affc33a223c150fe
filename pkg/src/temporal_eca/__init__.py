"""Asynchronous elementary cellular automata driven by temporal rules."""

from .engine import Configuration, StateMap, apply_sequence, iterate, parse_config, state_map, sweep
from .errors import DomainError
from .rulespace import WolframRule, enumerate_families, family_of
from .synthesis import FunctionTable, builtin, representable, synthesize, verify_certificate
from .temporal import TemporalRule, parse, schedule

__version__ = "0.1.0"

__all__ = [
    "Configuration", "DomainError", "FunctionTable", "StateMap", "TemporalRule", "WolframRule",
    "apply_sequence", "builtin", "enumerate_families", "family_of", "iterate", "parse",
    "parse_config", "representable", "schedule", "state_map", "sweep", "synthesize",
    "verify_certificate", "__version__",
]

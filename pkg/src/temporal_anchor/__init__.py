"""Resolve temporal expressions in scheduling dialogs to calendar dates."""

from .calendar import CivilDate, DateRange
from .corpus import Dialog, DialogError, Utterance, load_corpus, load_dialog
from .evaluation import EvalCounts, EvalReport, kappa, score, score_dialog
from .model import EvalVector, TemporalUnit, TimePoint, to_eval_vector
from .normalizer import normalize
from .parser import parse_text, tokenize
from .resolver import CapExceeded, ResolverConfig, resolve_dialog
from .rules import RuleEngine

__all__ = [
    "CivilDate", "DateRange", "Dialog", "DialogError", "Utterance", "load_corpus",
    "load_dialog", "EvalCounts", "EvalReport", "kappa", "score", "score_dialog",
    "EvalVector", "TemporalUnit", "TimePoint", "to_eval_vector", "normalize",
    "parse_text", "tokenize", "CapExceeded", "ResolverConfig", "resolve_dialog",
    "RuleEngine",
]

__version__ = "0.1.0"

"""Field-by-field scoring, chance-corrected agreement and rule usage counts."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .corpus import Dialog
from .model import NULL_VECTOR, VECTOR_FIELDS, VECTOR_LABELS, EvalVector, to_eval_vector
from .normalizer import normalize
from .parser import parse_temporal, tokenize
from .rules import RULE_IDS


@dataclass
class EvalCounts:
    correct: int = 0
    incorrect: int = 0
    missing: int = 0
    extra: int = 0
    null_agree: int = 0

    @property
    def possible(self) -> int:
        return self.correct + self.incorrect + self.missing + self.null_agree

    @property
    def actual(self) -> int:
        return self.correct + self.incorrect + self.extra + self.null_agree

    @property
    def accuracy(self) -> float:
        # nothing to find counts as a perfect score
        return (self.correct + self.null_agree) / self.possible if self.possible else 1.0

    @property
    def precision(self) -> float:
        return (self.correct + self.null_agree) / self.actual if self.actual else 1.0

    def __add__(self, other: "EvalCounts") -> "EvalCounts":
        return EvalCounts(self.correct + other.correct, self.incorrect + other.incorrect,
                          self.missing + other.missing, self.extra + other.extra,
                          self.null_agree + other.null_agree)

    def tally(self, pred, gold) -> None:
        if pred is None and gold is None:
            self.null_agree += 1
        elif pred is None:
            self.missing += 1
        elif gold is None:
            self.extra += 1
        elif pred == gold:
            self.correct += 1
        else:
            self.incorrect += 1

    def to_dict(self) -> dict:
        return {"correct": self.correct, "incorrect": self.incorrect, "missing": self.missing,
                "extra": self.extra, "null": self.null_agree, "possible": self.possible,
                "actual": self.actual, "accuracy": round(self.accuracy, 6),
                "precision": round(self.precision, 6)}


@dataclass
class EvalReport:
    fields: Dict[str, EvalCounts] = field(default_factory=lambda: {f: EvalCounts() for f in VECTOR_FIELDS})

    @property
    def overall(self) -> EvalCounts:
        total = EvalCounts()
        for c in self.fields.values():
            total = total + c
        return total

    def __add__(self, other: "EvalReport") -> "EvalReport":
        return EvalReport({f: self.fields[f] + other.fields[f] for f in VECTOR_FIELDS})

    def to_dict(self) -> dict:
        out = {f: c.to_dict() for f, c in self.fields.items()}
        out["overall"] = self.overall.to_dict()
        return out


def score(pred: Sequence[EvalVector], gold: Sequence[EvalVector]) -> EvalReport:
    """Compare aligned prediction and key vectors cell by cell."""
    if len(pred) != len(gold):
        raise ValueError(f"length mismatch: {len(pred)} predicted vs {len(gold)} gold")
    rep = EvalReport()
    for p, g in zip(pred, gold):
        for f in VECTOR_FIELDS:
            rep.fields[f].tally(getattr(p, f), getattr(g, f))
    return rep


def _pad(a: Sequence[EvalVector], b: Sequence[EvalVector]):
    n = max(len(a), len(b))
    return (list(a) + [NULL_VECTOR] * (n - len(a)), list(b) + [NULL_VECTOR] * (n - len(b)))


def score_aligned(pairs: Iterable[Tuple[Sequence[EvalVector], Sequence[EvalVector]]]) -> EvalReport:
    """Score (pred, gold) vector lists per utterance; a shorter list is padded with nulls."""
    rep = EvalReport()
    for pred, gold in pairs:
        p, g = _pad(pred, gold)
        rep = rep + score(p, g)
    return rep


def score_dialog(result, dialog: Dialog) -> EvalReport:
    """Score a resolve_dialog result on the utterances of ``dialog`` that carry gold."""
    pairs = []
    for rec, utt in zip(result.records, dialog.utterances):
        if utt.gold is None:
            continue
        pairs.append(([to_eval_vector(t) for t in rec.tus], list(utt.gold)))
    return score_aligned(pairs)


def baseline_predictions(dialog: Dialog) -> List[List[EvalVector]]:
    """Normalized input with no rules applied, one vector list per utterance."""
    out = []
    for u in dialog.utterances:
        parse = parse_temporal(tokenize(u.text))
        tense = u.tense or parse.tense
        if tense == "past":
            out.append([])
            continue
        raw = u.alternatives[0] if u.alternatives else parse.tus
        out.append([to_eval_vector(t) for t in normalize(list(raw), dialog.dialog_date)])
    return out


def baseline_score(dialog: Dialog) -> EvalReport:
    preds = baseline_predictions(dialog)
    return score_aligned((p, list(u.gold)) for p, u in zip(preds, dialog.utterances)
                         if u.gold is not None)


# agreement


@dataclass(frozen=True)
class KappaResult:
    pa: float
    pe: float
    kappa: Optional[float]  # None when Pe == 1

    def to_dict(self) -> dict:
        return {"pa": self.pa, "pe": self.pe, "kappa": self.kappa}


def kappa_from_agreement(pa: float, pe: float) -> Optional[float]:
    if pe >= 1.0:
        return None
    return (pa - pe) / (1.0 - pe)


def kappa(matrix: Sequence[Sequence[Hashable]]) -> KappaResult:
    """Multi-coder kappa over an N x K matrix of category labels.

    Pa averages, over objects, the share of coder pairs that agree; Pe
    sums the squared overall category proportions.
    """
    if not matrix:
        raise ValueError("empty annotation matrix")
    k = len(matrix[0])
    if k < 2:
        raise ValueError("need at least two coders")
    if any(len(row) != k for row in matrix):
        raise ValueError("every object needs the same number of labels")
    n = len(matrix)
    totals: Counter = Counter()
    s_sum = 0.0
    pairs = comb(k, 2)
    for row in matrix:
        counts = Counter(row)
        totals.update(counts)
        s_sum += sum(comb(c, 2) for c in counts.values()) / pairs
    pa = s_sum / n
    pe = sum((c / (n * k)) ** 2 for c in totals.values())
    return KappaResult(pa, pe, kappa_from_agreement(pa, pe))


# rule usage


def rule_usage_report(traces: Iterable[dict]) -> List[Tuple[str, int, int]]:
    """(rule, Used, Fires) counted over per-utterance rule traces."""
    used = Counter()
    fires = Counter()
    for tr in traces:
        if not tr:
            continue
        for rid, t in tr.items():
            fires[rid] += bool(t["fired"])
            used[rid] += bool(t["used"])
    return [(rid, used[rid], fires[rid]) for rid in RULE_IDS]


# text report

_HEADER = ("Field", "Cor", "Inc", "Mis", "Ext", "Nul", "Poss", "Act", "Acc", "Prec")


def format_field_table(report: EvalReport) -> str:
    """A plain-text table: one row per field plus an Overall row."""
    rows = []
    for f, label in zip(VECTOR_FIELDS, VECTOR_LABELS * 2):
        side = f.split("_", 1)[0]
        rows.append((f"{side} {label}", report.fields[f]))
    rows.append(("Overall", report.overall))
    return format_counts_rows(rows)


def format_counts_rows(rows: Sequence[Tuple[str, EvalCounts]]) -> str:
    lines = ["{:<16}{:>6}{:>6}{:>6}{:>6}{:>6}{:>7}{:>7}{:>8}{:>8}".format(*_HEADER)]
    for name, c in rows:
        lines.append("{:<16}{:>6}{:>6}{:>6}{:>6}{:>6}{:>7}{:>7}{:>8.3f}{:>8.3f}".format(
            name, c.correct, c.incorrect, c.missing, c.extra, c.null_agree, c.possible,
            c.actual, c.accuracy, c.precision))
    return "\n".join(lines)

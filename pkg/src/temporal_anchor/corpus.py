"""Dialog files: loading, validation and the bundled example corpus."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import List, Optional, Sequence

from .calendar import CivilDate
from .model import EvalVector, TemporalUnit


class DialogError(ValueError):
    """Malformed dialog input."""


@dataclass(frozen=True)
class Utterance:
    speaker: str
    text: str
    tense: Optional[str] = None
    gold: Optional[Sequence[EvalVector]] = None
    alternatives: Optional[Sequence[Sequence[TemporalUnit]]] = None


@dataclass(frozen=True)
class Dialog:
    dialog_date: CivilDate
    utterances: Sequence[Utterance]
    name: str = ""
    notes: str = ""

    def has_gold(self) -> bool:
        return any(u.gold is not None for u in self.utterances)


def _parse_alternatives(raw, where: str):
    if raw is None:
        return None
    if not isinstance(raw, list):
        raise DialogError(f"{where}: alternatives must be a list")
    # a flat list of TU objects is a single reading
    if all(isinstance(x, dict) for x in raw):
        raw = [raw]
    out = []
    for alt in raw:
        if not isinstance(alt, list):
            raise DialogError(f"{where}: each alternative must be a list of TU objects")
        try:
            out.append(tuple(TemporalUnit.from_dict(tu) for tu in alt))
        except (TypeError, ValueError, KeyError) as exc:
            raise DialogError(f"{where}: bad TU: {exc}") from None
    return tuple(out)


def dialog_from_dict(data: dict, name: str = "") -> Dialog:
    if not isinstance(data, dict):
        raise DialogError("dialog must be a JSON object")
    try:
        date = CivilDate.parse(str(data["dialog_date"]))
    except KeyError:
        raise DialogError("missing dialog_date") from None
    except ValueError as exc:
        raise DialogError(f"bad dialog_date: {exc}") from None
    raw_utts = data.get("utterances")
    if not isinstance(raw_utts, list) or not raw_utts:
        raise DialogError("utterances must be a non-empty list")
    utts: List[Utterance] = []
    for i, u in enumerate(raw_utts):
        where = f"utterance {i}"
        if not isinstance(u, dict) or not isinstance(u.get("text"), str) \
                or not isinstance(u.get("speaker"), str):
            raise DialogError(f"{where}: needs string speaker and text")
        tense = u.get("tense")
        if tense not in (None, "past", "nonpast"):
            raise DialogError(f"{where}: tense must be past or nonpast")
        gold = u.get("gold")
        if gold is not None:
            try:
                gold = tuple(EvalVector.from_dict(v) for v in gold)
            except (TypeError, ValueError) as exc:
                raise DialogError(f"{where}: bad gold vector: {exc}") from None
        utts.append(Utterance(u["speaker"], u["text"], tense, gold,
                              _parse_alternatives(u.get("alternatives"), where)))
    return Dialog(date, tuple(utts), name or str(data.get("name", "")), str(data.get("notes", "")))


def load_dialog(path: str) -> Dialog:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DialogError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DialogError(f"{path}: invalid JSON: {exc}") from None
    return dialog_from_dict(data, name=data.get("name", "") if isinstance(data, dict) else "")


def corpus_names() -> List[str]:
    root = resources.files("temporal_anchor").joinpath("data/corpus")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_corpus() -> List[Dialog]:
    """The bundled mini-corpus, in file-name order."""
    root = resources.files("temporal_anchor").joinpath("data/corpus")
    out = []
    for name in corpus_names():
        with root.joinpath(name + ".json").open(encoding="utf-8") as fh:
            out.append(dialog_from_dict(json.load(fh), name=name))
    return out

import json
import random

import pytest

from temporal_anchor.calendar import CivilDate
from temporal_anchor.model import TemporalUnit, TimePoint, merge
from temporal_anchor.rules import (
    ANAPHORIC_RULES, CF_TABLE_ENV, DEICTIC_RULES, RULE_IDS, FocusEntry, ResolutionContext,
    RuleEngine, distance_factor, is_deictic, load_cf_table,
)
from temporal_anchor.parser import parse_text

import rule_fixtures as rf


@pytest.mark.parametrize("case", rf.POSITIVE, ids=lambda c: f"{c.rule}-{c.text}")
def test_rule_fires_on_example(case):
    results = rf.run(case)
    assert rf.check(case, results), [[t.to_dict() for t in r.tus] for r in results]


@pytest.mark.parametrize("case", rf.NEGATIVE, ids=lambda c: f"{c.rule}-{c.text}")
def test_rule_guard_blocks(case):
    assert rf.run(case) == []


def test_every_rule_has_both_kinds_of_fixture():
    assert {c.rule for c in rf.POSITIVE} == set(RULE_IDS)
    assert {c.rule for c in rf.NEGATIVE} == set(RULE_IDS)


def test_default_cf_values():
    cf = load_cf_table()
    assert cf["D1"] == 0.9 and cf["D2i"] == 0.2 and cf["D2ii"] == 0.3
    assert cf["A3i_week"] == 0.4 and cf["A3i"] == 0.3 and cf["A3ii"] == 0.35
    assert cf["A4"] == 0.35 and cf["A7"] == 0.7 and cf["A8"] == 0.7


def test_cf_and_antecedent_shape():
    engine = RuleEngine()
    for case in rf.POSITIVE:
        for r in rf.run(case, engine):
            assert r.cf <= r.base_cf
            if r.rule_id in ANAPHORIC_RULES:
                assert r.antecedent_ref is not None
            else:
                assert r.antecedent_ref is None


def test_distance_factor():
    assert distance_factor(0) == 0.0
    assert distance_factor(3) == pytest.approx(0.15)
    assert distance_factor(100) == 0.4


def test_distance_lowers_cf():
    focus = [[rf.day(1996, 1, 30)]] + [[rf.day(1996, 2, d)] for d in (5, 6, 7)]
    case = rf.RuleCase("A1", "How about Tuesday the 30th at 2?", CivilDate(1996, 1, 29), focus)
    (r,) = rf.run(case)
    assert r.antecedent_ref == (0, 0)
    assert r.cf == pytest.approx(0.8 - 0.15)
    (r,) = rf.run(case, RuleEngine(use_distance=False))
    assert r.cf == 0.8


def test_cf_table_override(tmp_path, monkeypatch):
    path = tmp_path / "cf.json"
    path.write_text(json.dumps({"A4": 0.5}))
    assert load_cf_table(str(path))["A4"] == 0.5
    monkeypatch.setenv(CF_TABLE_ENV, str(path))
    assert load_cf_table()["A4"] == 0.5
    path.write_text(json.dumps({"Z9": 1}))
    with pytest.raises(ValueError):
        load_cf_table(str(path))


def test_unknown_rule():
    with pytest.raises(ValueError):
        RuleEngine().apply_rule("A9", TemporalUnit(), ResolutionContext(rf.SEP23))


def test_is_deictic():
    def first(text):
        return parse_text(text).tus[0]
    assert is_deictic(first("tomorrow"))
    assert is_deictic(first("next week"))
    assert not is_deictic(first("that week"))
    assert not is_deictic(first("next weekend"))
    assert not is_deictic(first("Thursday"))


def test_deictic_rules_ignore_focus_list():
    engine = RuleEngine()
    noise = [[rf.day(1996, 9, 24, hour=3, minute=0, am_pm="pm")], [rf.span(1996, 10, 7, 1996, 10, 11)]]
    for text in ("tomorrow", "next Thursday", "Monday", "the rest of the week", "next weekend",
                 "Friday the 27th"):
        base = rf.RuleCase("D1", text, rf.SEP23)
        busy = rf.RuleCase("D1", text, rf.SEP23, noise)
        for rid in ("D1", "D2i", "D2ii", "D3", "D4", "D6"):
            base.rule = busy.rule = rid
            assert rf.run(base, engine) == rf.run(busy, engine)


def test_only_deictic_rules_without_focus():
    tus, ctx = rf.context(rf.RuleCase("D1", "how about tomorrow at 2", rf.SEP23))
    assert {r.rule_id for r in RuleEngine().apply_all_rules(tus, ctx)} <= set(DEICTIC_RULES)


def test_multi_tu_utterance_pins_focus_entry():
    focus = [[rf.day(1996, 9, 30)], [rf.day(1996, 10, 7)]]
    case = rf.RuleCase("A3ii", "I can meet Monday or Tuesday", rf.SEP23, focus)
    results = rf.run(case)
    assert len(results) == 2
    assert {r.antecedent_ref[0] for r in results} == {1}
    assert [r.tu.start.date for r in results] == [7, 8]


def test_a1_picks_most_recent_compatible_antecedent():
    rng = random.Random(3)
    engine = RuleEngine(use_distance=False)
    for _ in range(200):
        n = rng.randrange(1, 8)
        days = [rng.randrange(1, 29) for _ in range(n)]
        focus = [[rf.day(1996, 2, d)] for d in days]
        want = rng.randrange(1, 29)
        tu = TemporalUnit(start=TimePoint(month=2, date=want, hour=2, minute=0))
        fl = tuple(FocusEntry(i, "s1", tuple(e)) for i, e in enumerate(focus))
        ctx = ResolutionContext(CivilDate(1996, 2, 1), fl, ("at", "2"), (tu,))
        got = engine.apply_rule("A1", tu, ctx)
        brute = [i for i, d in enumerate(days) if merge(focus[i][0], tu) is not None]
        if not brute:
            assert got is None
        else:
            assert got.antecedent_ref == (brute[-1], 0)


def test_a1_beats_a3ii_at_any_distance():
    cf = load_cf_table()
    rng = random.Random(1)
    for _ in range(1000):
        k = rng.randrange(0, 10_000)
        assert cf["A1"] - distance_factor(k) > cf["A3ii"] - distance_factor(0)


def test_a7_skips_exactly_one_range():
    focus = [[rf.day(1996, 9, 23)], [rf.day(1996, 9, 24)], [rf.day(1996, 9, 26)]]
    (r,) = rf.run(rf.RuleCase("A7", "the other day", rf.SEP23, focus))
    assert r.tu.start.date == 24


def test_a8_needs_same_speaker():
    case = rf.RuleCase("A8", "Those days sound fine.", rf.SEP23,
                       [[rf.day(1996, 9, 24)], [rf.day(1996, 9, 25)]])
    tus, ctx = rf.context(case, speakers=["s1", "s2"])
    assert RuleEngine().apply_all_rules(tus, ctx, ("A8",)) == []


def test_a3_week_subcase_uses_week_cf():
    case = rf.RuleCase("A3i", "the following week", rf.SEP23, [[rf.day(1996, 10, 2)]])
    got = rf.run(case)
    assert got and got[0].base_cf == 0.4
    assert (got[0].tu.start.date, got[0].tu.end.date) == (7, 11)

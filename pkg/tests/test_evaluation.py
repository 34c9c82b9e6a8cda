import random
from dataclasses import replace

import pytest

from temporal_anchor.corpus import dialog_from_dict, load_corpus
from temporal_anchor.evaluation import (
    EvalCounts, baseline_score, format_field_table, kappa, kappa_from_agreement,
    rule_usage_report, score, score_aligned, score_dialog,
)
from temporal_anchor.model import NULL_VECTOR, VECTOR_FIELDS, EvalVector
from temporal_anchor.resolver import resolve_dialog
from temporal_anchor.rules import RULE_IDS

import oracles

REFERENCE_COUNTS = EvalCounts(correct=323, incorrect=28, missing=87, extra=17, null_agree=165)

# two coders, two labels: Pa = .98 and Pe = .9^2 + .1^2 = .82
HOURMIN_LABELS = [("A", "A")] * 89 + [("B", "B")] * 9 + [("A", "B")] * 2


def test_reference_counts():
    assert REFERENCE_COUNTS.possible == 603 and REFERENCE_COUNTS.actual == 533
    assert round(REFERENCE_COUNTS.accuracy, 3) == 0.809
    assert round(REFERENCE_COUNTS.precision, 3) == 0.916


def test_empty_counts_score_perfectly():
    assert EvalCounts().accuracy == 1.0 and EvalCounts().precision == 1.0


def vec(**kw):
    return EvalVector(**kw)


def test_score_cells():
    gold = [vec(start_month=9, start_date=30, start_day_of_week="Thu", start_hour_min=840)]
    pred = [vec(start_month=9, start_date=29, end_month=9)]
    rep = score(pred, gold)
    f = rep.fields
    assert f["start_month"].correct == 1
    assert f["start_date"].incorrect == 1
    assert f["start_day_of_week"].missing == 1
    assert f["end_month"].extra == 1
    assert f["end_time_of_day"].null_agree == 1
    o = rep.overall
    assert (o.correct, o.incorrect, o.missing, o.extra, o.null_agree) == (1, 1, 2, 1, 5)


def test_misplaced_values_count_twice():
    gold = [vec(end_month=8, end_date=19, end_day_of_week="Mon")]
    pred = [vec(start_month=8, start_date=19, start_day_of_week="Mon")]
    o = score(pred, gold).overall
    assert (o.correct, o.missing, o.extra) == (0, 3, 3)


def test_identical_vectors_are_perfect():
    v = [vec(start_month=1, start_hour_min=600, end_hour_min=660)]
    o = score(v, v).overall
    assert o.accuracy == 1.0 and o.precision == 1.0


def test_length_mismatch():
    with pytest.raises(ValueError):
        score([NULL_VECTOR], [])


def test_aligned_scoring_pads_with_nulls():
    g = [vec(start_date=1), vec(start_date=2)]
    o = score_aligned([([vec(start_date=1)], g)]).overall
    assert (o.correct, o.missing) == (1, 1)


def _random_vec(rng):
    return vec(**{f: rng.choice([None, 1, 2]) for f in VECTOR_FIELDS})


def test_score_invariants_and_symmetry():
    rng = random.Random(4)
    for _ in range(200):
        n = rng.randrange(0, 5)
        a = [_random_vec(rng) for _ in range(n)]
        b = [_random_vec(rng) for _ in range(n)]
        ab, ba = score(a, b).overall, score(b, a).overall
        assert ab.correct + ab.incorrect + ab.missing + ab.null_agree == ab.possible
        assert 0 <= ab.accuracy <= 1 and 0 <= ab.precision <= 1
        assert (ab.missing, ab.extra) == (ba.extra, ba.missing)
        assert (ab.correct, ab.incorrect, ab.null_agree) == (ba.correct, ba.incorrect, ba.null_agree)


def test_baseline_below_full_system():
    full = base = None
    for d in load_corpus():
        f, b = score_dialog(resolve_dialog(d), d), baseline_score(d)
        full = f if full is None else full + f
        base = b if base is None else base + b
    assert base.overall.accuracy < full.overall.accuracy


def test_empty_dialog_baseline():
    d = dialog_from_dict({"dialog_date": "1996-09-23",
                          "utterances": [{"speaker": "a", "text": "hello", "gold": []}]})
    o = baseline_score(d).overall
    assert o.possible == 0 and o.accuracy == 1.0


def test_anaphoric_only_dialog_baseline_scores_nulls_only():
    d = dialog_from_dict({"dialog_date": "1996-09-23", "utterances": [
        {"speaker": "a", "text": "that week", "gold": [{"start_month": 10}]}]})
    o = baseline_score(d).overall
    assert o.correct == 0 and o.missing == 1 and o.null_agree == 9


def test_kappa_from_known_agreement():
    assert kappa_from_agreement(0.98, 0.82) == pytest.approx(0.889, abs=1e-3)
    r = kappa(HOURMIN_LABELS)
    assert r.pa == pytest.approx(0.98) and r.pe == pytest.approx(0.82)
    assert round(r.kappa, 2) == 0.89


def test_kappa_hand_example():
    r = kappa([("A", "A"), ("A", "B")])
    assert (r.pa, r.pe) == (0.5, 0.625)
    assert r.kappa == -1 / 3


def test_kappa_edge_cases():
    assert kappa([("A", "A"), ("B", "B")]).kappa == 1.0
    assert kappa([("A", "A"), ("A", "A")]).kappa is None
    # Pa == Pe
    assert kappa([("A", "B"), ("A", "B"), ("A", "A"), ("B", "B")]).kappa == 0.0
    with pytest.raises(ValueError):
        kappa([])
    with pytest.raises(ValueError):
        kappa([("A",)])
    with pytest.raises(ValueError):
        kappa([("A", "B"), ("A",)])


def random_matrix(rng):
    n, k, m = rng.randrange(1, 21), rng.randrange(2, 6), rng.randrange(1, 5)
    labels = "ABCD"[:m]
    return [tuple(rng.choice(labels) for _ in range(k)) for _ in range(n)]


def test_kappa_matches_pairwise_oracle():
    rng = random.Random(11)
    for _ in range(500):
        m = random_matrix(rng)
        r = kappa(m)
        pa, pe, kap = oracles.kappa_pairwise(m)
        assert abs(r.pa - pa) < 1e-12 and abs(r.pe - pe) < 1e-12
        assert (r.kappa is None) == (kap is None)
        if kap is not None:
            assert abs(r.kappa - kap) < 1e-12


def test_kappa_relabeling_invariant():
    rng = random.Random(12)
    for _ in range(100):
        m = random_matrix(rng)
        relabeled = [tuple(x.lower() for x in row) for row in m]
        assert kappa(m) == kappa(relabeled)


def test_rule_usage():
    assert rule_usage_report([]) == [(r, 0, 0) for r in RULE_IDS]
    traces = [t for d in load_corpus() for t in resolve_dialog(d).traces()]
    rows = rule_usage_report(traces)
    assert all(fires >= used for _, used, fires in rows)
    used = {r: u for r, u, _ in rows}
    top = used["A1"] + used["A3ii"] + used["A4"] + used["D2ii"]
    assert top * 2 > sum(used.values())


def test_format_field_table():
    rep = score([NULL_VECTOR], [NULL_VECTOR])
    rep.fields["start_month"] = replace(REFERENCE_COUNTS)
    text = format_field_table(rep)
    lines = text.splitlines()
    assert lines[0].split()[:3] == ["Field", "Cor", "Inc"]
    assert len(lines) == 1 + len(VECTOR_FIELDS) + 1
    assert "0.809" in lines[1] and "0.916" in lines[1]
    assert lines[-1].startswith("Overall")

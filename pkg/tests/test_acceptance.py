"""The nine acceptance criteria, one test each.

Every test prints a single ``PASS criterion N: ...`` or ``FAIL criterion N: ...``
line (shown even under output capture) and then asserts.
"""

import random
import time

import pytest

from temporal_anchor import calendar as cal
from temporal_anchor.calendar import CivilDate, DateRange
from temporal_anchor.cli import ablation_rows
from temporal_anchor.corpus import load_corpus
from temporal_anchor.evaluation import (
    EvalCounts, EvalReport, kappa, kappa_from_agreement, score_dialog,
)
from temporal_anchor.model import to_eval_vector
from temporal_anchor.parser import parse_text
from temporal_anchor.resolver import ResolverConfig, fold, maximal_mergings, resolve_dialog
from temporal_anchor.rules import RULE_IDS, distance_factor, load_cf_table

import clique_cases
import grammar_fuzz
import oracles
import rule_fixtures as rf
from test_calendar import check_against_oracle, random_dates
from test_evaluation import HOURMIN_LABELS, random_matrix
from test_parser import PRODUCTIONS, fuzz_failures


@pytest.fixture
def report(capsys):
    def _report(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail
    return _report


def test_criterion_1_scorer_formulas(report):
    t = time.perf_counter()
    c = EvalCounts(correct=323, incorrect=28, missing=87, extra=17, null_agree=165)
    acc, prec = c.accuracy, c.precision
    elapsed = time.perf_counter() - t
    ok = round(acc, 3) == 0.809 and round(prec, 3) == 0.916 and elapsed < 1e-3
    report(1, ok, f"Acc={acc:.3f} Prec={prec:.3f} in {elapsed * 1e6:.0f} us")


def test_criterion_2_kappa(report):
    t = time.perf_counter()
    k1 = kappa_from_agreement(0.98, 0.82)
    hourmin = kappa(HOURMIN_LABELS).kappa
    toy = kappa([("A", "A"), ("A", "B")])
    rng = random.Random(2)
    worst = 0.0
    undefined_agree = True
    for _ in range(500):
        m = random_matrix(rng)
        r = kappa(m)
        pa, pe, kap = oracles.kappa_pairwise(m)
        worst = max(worst, abs(r.pa - pa), abs(r.pe - pe))
        if kap is None or r.kappa is None:
            undefined_agree &= kap is None and r.kappa is None
        else:
            worst = max(worst, abs(r.kappa - kap))
    elapsed = time.perf_counter() - t
    ok = (abs(k1 - 0.889) <= 1e-3 and round(hourmin, 2) == 0.89
          and (toy.pa, toy.pe, toy.kappa) == (0.5, 0.625, -1 / 3)
          and worst < 1e-12 and undefined_agree and elapsed < 1.0)
    report(2, ok, f"k(.98,.82)={k1:.4f} toy={toy.kappa:.6f} max|d|={worst:.1e} "
                  f"in {elapsed:.3f} s")


def test_criterion_3_mini_corpus(report):
    dialogs = load_corpus()
    t = time.perf_counter()
    results = [resolve_dialog(d) for d in dialogs]
    total = EvalReport()
    for d, res in zip(dialogs, results):
        total = total + score_dialog(res, d)
    elapsed = time.perf_counter() - t
    o = total.overall

    def vectors(name, i):
        k = [d.name for d in dialogs].index(name)
        return [to_eval_vector(tu) for tu in results[k].records[i].tus]

    thursday = any(v.start_hour_min == 840 and v.end_hour_min == 960 and v.start_date == 30
               and v.start_month == 9 and v.start_day_of_week == "Thu"
               for i in range(len(dialogs[0].utterances)) for v in vectors(dialogs[0].name, i))
    lunch = vectors("02_lunch_on_wednesday", 8)[0]
    slot = vectors("04_deliberation", 15)[0]
    anchors = (thursday
               and (lunch.start_month, lunch.start_date, lunch.start_day_of_week,
                    lunch.start_hour_min, lunch.end_hour_min) == (5, 12, "Wed", 720, 780)
               and (slot.start_month, slot.start_date, slot.start_day_of_week,
                    slot.start_hour_min) == (4, 17, "Thu", 720))
    ok = o.accuracy == 1.0 and o.precision == 1.0 and anchors and elapsed < 1.0
    report(3, ok, f"{len(dialogs)} dialogs, Acc={o.accuracy:.3f} over {o.possible} cells, "
                  f"anchors={'ok' if anchors else 'wrong'} in {elapsed:.3f} s")


def test_criterion_4_rules(report):
    bad = [f"+{c.rule} {c.text!r}" for c in rf.POSITIVE if not rf.check(c, rf.run(c))]
    bad += [f"-{c.rule} {c.text!r}" for c in rf.NEGATIVE if rf.run(c)]
    covered = ({c.rule for c in rf.POSITIVE} == set(RULE_IDS)
               and {c.rule for c in rf.NEGATIVE} == set(RULE_IDS))
    ok = not bad and covered
    report(4, ok, f"{len(RULE_IDS)} rules, {len(rf.POSITIVE)} positive and "
                  f"{len(rf.NEGATIVE)} negative fixtures, failures={bad}")


def test_criterion_5_cliques(report):
    mismatches = order_fail = cliques = 0
    for partials, rng in clique_cases.instances(1000, seed=5, max_n=12):
        got = maximal_mergings(partials)
        want = oracles.brute_force_maximal(
            len(partials), lambda i, j: clique_cases.compatible(partials[i], partials[j]))
        mismatches += [c for c, _ in got] != want
        for clique, folded in got:
            cliques += 1
            members = [partials[i] for i in clique]
            rng.shuffle(members)
            order_fail += fold(members) != folded
    ok = mismatches == 0 and order_fail == 0
    report(5, ok, f"1000 instances, {cliques} cliques, {mismatches} mismatches, "
                  f"{order_fail} order-dependent folds")


def test_criterion_6_calendar(report):
    failures = 0
    for c in random_dates(10_000, seed=6):
        try:
            check_against_oracle(c)
        except AssertionError:
            failures += 1
    d = CivilDate
    anchored = (cal.next("monday", d(1994, 8, 19)) == d(1994, 8, 22)
                and cal.last("week", d(1996, 8, 20)) == DateRange(d(1996, 8, 12), d(1996, 8, 16))
                and cal.next("week", d(1997, 4, 11)) == DateRange(d(1997, 4, 14), d(1997, 4, 18)))
    ok = failures == 0 and anchored
    report(6, ok, f"10000 dates, {failures} oracle disagreements; anchored examples "
                  f"{'reproduce' if anchored else 'differ'}")


def test_criterion_7_grammar(report):
    uncovered = []
    for name, (text, intent) in PRODUCTIONS.items():
        if not any(grammar_fuzz.tu_matches(t, intent) for t in parse_text(text).tus):
            uncovered.append(name)
    fuzz = fuzz_failures(1000, seed=7)
    ok = not uncovered and not fuzz
    report(7, ok, f"{len(PRODUCTIONS)} productions ({len(uncovered)} failing), "
                  f"1000 fuzzed sentences ({len(fuzz)} failing)")


def test_criterion_8_focus(report):
    violations = 0
    dialogs = load_corpus()
    for d in dialogs:
        hist = resolve_dialog(d).focus_history
        for before, after in zip(hist, hist[1:]):
            violations += after[:len(before)] != before or len(after) < len(before)
    cf = load_cf_table()
    rng = random.Random(8)
    inverted = sum(cf["A1"] - distance_factor(rng.randrange(0, 1_000_000))
                   <= cf["A3ii"] - distance_factor(0) for _ in range(10_000))
    ok = violations == 0 and inverted == 0
    report(8, ok, f"{len(dialogs)} dialogs with {violations} focus edits; "
                  f"{inverted}/10000 distances where A3ii outranks A1")


def test_criterion_9_ablation(report):
    dialogs = load_corpus()
    first = ablation_rows(dialogs)
    second = ablation_rows(dialogs)
    rows = dict(first)
    deterministic = first == second
    zero_differs = False
    for d in dialogs:
        a = [r.tus for r in resolve_dialog(d).records]
        b = [r.tus for r in resolve_dialog(d, ResolverConfig(cf_all_zero=True)).records]
        zero_differs |= a != b
    ok = len(first) == 7 and deterministic and zero_differs
    summary = " ".join(f"{n}={c.accuracy:.3f}" for n, c in first)
    report(9, ok, f"{len(rows)} rows ({summary}), deterministic={deterministic}, "
                  f"cf_all_zero differs={zero_differs}")

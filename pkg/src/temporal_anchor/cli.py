"""Command-line entry point: ``temporal-anchor <command> ...``.

Exit codes: 0 success, 2 bad input or usage, 3 an internal size cap was hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import List, Optional, Sequence

from .calendar import CivilDate
from .corpus import Dialog, DialogError, dialog_from_dict, load_corpus, load_dialog
from .evaluation import (
    EvalCounts, EvalReport, baseline_score, format_counts_rows, format_field_table, kappa,
    rule_usage_report, score_aligned, score_dialog,
)
from .model import EvalVector, to_eval_vector
from .normalizer import normalize
from .parser import parse_temporal, tokenize
from .resolver import ABLATIONS, CapExceeded, ResolverConfig, resolve_dialog

EXIT_OK, EXIT_INPUT, EXIT_CAP = 0, 2, 3


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _round(x: float) -> float:
    return round(x, 6) + 0.0


def record_to_dict(rec) -> dict:
    return {
        "index": rec.index,
        "speaker": rec.speaker,
        "text": rec.text,
        "skipped": rec.skipped,
        "alternative": rec.alternative,
        "tus": [{"tu": t.to_dict(), "vector": to_eval_vector(t).to_dict()} for t in rec.tus],
        "cf": _round(rec.cf),
        "cfs": [_round(c) for c in rec.cfs],
        "contributing_rules": [list(r) for r in rec.contributing_rules],
        "critic_notes": list(rec.critic_notes),
        "focus_len": rec.focus_len,
    }


def _add_resolver_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("resolver")
    g.add_argument("--cf-all-one", action="store_true", help="set every rule CF to 1.0")
    g.add_argument("--cf-all-zero", action="store_true", help="set every rule CF to 0.0")
    g.add_argument("--no-merge", action="store_true", help="score single rule results only")
    g.add_argument("--no-critics", action="store_true", help="skip the past/jump critics")
    g.add_argument("--no-distance", action="store_true", help="drop the focus distance penalty")
    g.add_argument("--combo", action="store_true",
                   help="cf-all-one + no-merge + no-critics + no-distance")
    g.add_argument("--max-sequences", type=int, default=125,
                   help="alternative readings tried per speaker turn (default 125)")
    g.add_argument("--week", choices=("mon-fri", "mon-sun"), default="mon-fri",
                   help="what a week spans (default mon-fri)")
    g.add_argument("--cf-table", metavar="PATH",
                   help="JSON of rule CF overrides (or set TEMPORAL_ANCHOR_CF_TABLE)")


def _config(args) -> ResolverConfig:
    return ResolverConfig(
        max_sequences=args.max_sequences, cf_all_one=args.cf_all_one,
        cf_all_zero=args.cf_all_zero, no_merge=args.no_merge, no_critics=args.no_critics,
        no_distance=args.no_distance, combo=args.combo, week=args.week,
        cf_table_path=args.cf_table)


def _dialogs(paths: Optional[Sequence[str]]) -> List[Dialog]:
    if paths:
        return [load_dialog(p) for p in paths]
    return load_corpus()


def _write(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# commands


def cmd_resolve(args) -> int:
    dialog = load_dialog(args.dialog)
    result = resolve_dialog(dialog, _config(args))
    lines = [_dumps(record_to_dict(r)) for r in result.records]
    _write("\n".join(lines) + "\n", args.out)
    usage = [{"rule": r, "used": u, "fires": f} for r, u, f in rule_usage_report(result.traces())]
    trace_path = args.trace or (args.out + ".usage.json" if args.out else None)
    if trace_path:
        with open(trace_path, "w", encoding="utf-8") as fh:
            fh.write(_dumps(usage) + "\n")
    return EXIT_OK


def _read_records(path: str) -> List[List[EvalVector]]:
    out = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = json.loads(line)
                    out.append([EvalVector.from_dict(t["vector"]) for t in rec["tus"]])
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise DialogError(f"{path}: bad prediction records: {exc}") from None
    return out


def _counts_report(path: str) -> List:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        c = data.get("counts", data)
        counts = EvalCounts(int(c["correct"]), int(c["incorrect"]), int(c["missing"]),
                            int(c["extra"]), int(c["null"]))
    except (OSError, ValueError, KeyError, TypeError, AttributeError) as exc:
        raise DialogError(f"{path}: bad counts file: {exc}") from None
    if min(counts.correct, counts.incorrect, counts.missing, counts.extra, counts.null_agree) < 0:
        raise DialogError(f"{path}: counts must be non-negative")
    return counts


def cmd_eval(args) -> int:
    if args.counts:
        counts = _counts_report(args.counts)
        if args.format == "table":
            _write(format_counts_rows([("Overall", counts)]) + "\n", args.out)
        else:
            _write(_dumps({"overall": counts.to_dict()}) + "\n", args.out)
        return EXIT_OK
    if args.pred or args.gold:
        if not (args.pred and args.gold):
            raise DialogError("--pred and --gold go together")
        gold = load_dialog(args.gold)
        preds = _read_records(args.pred)
        if len(preds) != len(gold.utterances):
            raise DialogError("prediction records do not match the gold utterances")
        report = score_aligned((p, list(u.gold)) for p, u in zip(preds, gold.utterances)
                               if u.gold is not None)
    else:
        dialogs = _dialogs(args.dialog)
        report = EvalReport()
        cfg = _config(args)
        for d in dialogs:
            if args.baseline:
                report = report + baseline_score(d)
            else:
                report = report + score_dialog(resolve_dialog(d, cfg), d)
    if args.format == "table":
        _write(format_field_table(report) + "\n", args.out)
    else:
        _write(_dumps(report.to_dict()) + "\n", args.out)
    return EXIT_OK


def read_annotations(path: str):
    """CSV with columns field,item,coder_1..coder_K -> {field: N x K matrix}."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DialogError(f"cannot read {path}: {exc}") from None
    if not rows or len(rows[0]) < 4 or rows[0][:2] != ["field", "item"]:
        raise DialogError(f"{path}: header must be field,item,coder_1,...,coder_K")
    k = len(rows[0]) - 2
    fields = {}
    for n, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != k + 2:
            raise DialogError(f"{path}:{n}: expected {k} labels")
        fields.setdefault(row[0], []).append(tuple(row[2:]))
    return fields


def cmd_kappa(args) -> int:
    fields = read_annotations(args.annotations)
    out = {}
    for name in sorted(fields):
        r = kappa(fields[name])
        out[name] = {"pa": _round(r.pa), "pe": _round(r.pe),
                     "kappa": None if r.kappa is None else _round(r.kappa),
                     "undefined": r.kappa is None}
    if args.format == "table":
        lines = ["{:<20}{:>8}{:>8}{:>10}".format("field", "Pa", "Pe", "kappa")]
        for name, v in out.items():
            k = "undefined" if v["kappa"] is None else f"{v['kappa']:.3f}"
            lines.append("{:<20}{:>8.3f}{:>8.3f}{:>10}".format(name, v["pa"], v["pe"], k))
        _write("\n".join(lines) + "\n", args.out)
    else:
        _write(_dumps(out) + "\n", args.out)
    return EXIT_OK


def ablation_rows(dialogs: Sequence[Dialog], base: ResolverConfig = ResolverConfig()):
    """(variant, counts) for the default run and the six degraded variants."""
    from dataclasses import replace
    rows = []
    for name, flags in ABLATIONS.items():
        cfg = replace(base, **flags)
        report = EvalReport()
        for d in dialogs:
            report = report + score_dialog(resolve_dialog(d, cfg), d)
        rows.append((name, report.overall))
    return rows


def cmd_ablate(args) -> int:
    base = ResolverConfig(max_sequences=args.max_sequences, week=args.week,
                          cf_table_path=args.cf_table)
    rows = ablation_rows(_dialogs(args.dialog), base)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["variant", "correct", "incorrect", "missing", "extra", "null", "accuracy",
                "precision"])
    for name, c in rows:
        w.writerow([name, c.correct, c.incorrect, c.missing, c.extra, c.null_agree,
                    f"{c.accuracy:.3f}", f"{c.precision:.3f}"])
    _write(buf.getvalue(), args.out)
    if args.figure:
        from .plotting import ablation_figure
        ablation_figure([(n, c.accuracy, c.precision) for n, c in rows], args.figure)
    return EXIT_OK


def cmd_usage(args) -> int:
    cfg = _config(args)
    traces = []
    for d in _dialogs(args.dialog):
        traces.extend(resolve_dialog(d, cfg).traces())
    rows = rule_usage_report(traces)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rule", "used", "fires"])
    w.writerows(rows)
    _write(buf.getvalue(), args.out)
    if args.figure:
        from .plotting import usage_figure
        usage_figure(rows, args.figure)
    return EXIT_OK


def cmd_parse(args) -> int:
    date = CivilDate.parse(args.date) if args.date else None
    parse = parse_temporal(tokenize(args.text))
    tus = normalize(parse, date) if args.normalize else parse.tus
    out = {"tense": parse.tense, "tus": [t.to_dict() for t in tus],
           "alternatives": len(parse.alternatives)}
    _write(_dumps(out) + "\n", None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="temporal-anchor",
                                description="Resolve temporal expressions in scheduling dialogs.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("resolve", help="resolve a dialog file to JSON-lines records")
    r.add_argument("--dialog", required=True, help="dialog JSON file")
    r.add_argument("--out", help="output path (default stdout)")
    r.add_argument("--trace", help="rule-usage JSON path (default OUT.usage.json when --out is set)")
    _add_resolver_flags(r)
    r.set_defaults(func=cmd_resolve)

    e = sub.add_parser("eval", help="score predictions against gold vectors")
    e.add_argument("--pred", help="JSON-lines records written by resolve")
    e.add_argument("--gold", help="dialog JSON file with gold vectors")
    e.add_argument("--dialog", action="append",
                   help="dialog with gold to resolve and score (repeatable; default bundled corpus)")
    e.add_argument("--baseline", action="store_true", help="score normalized input, no rules")
    e.add_argument("--counts", help="JSON with correct/incorrect/missing/extra/null counts")
    e.add_argument("--format", choices=("json", "table"), default="json")
    e.add_argument("--out", help="output path (default stdout)")
    _add_resolver_flags(e)
    e.set_defaults(func=cmd_eval)

    k = sub.add_parser("kappa", help="inter-annotator agreement per field")
    k.add_argument("--annotations", required=True, help="CSV: field,item,coder_1..coder_K")
    k.add_argument("--format", choices=("json", "table"), default="json")
    k.add_argument("--out", help="output path (default stdout)")
    k.set_defaults(func=cmd_kappa)

    a = sub.add_parser("ablate", help="default run plus six degraded variants")
    a.add_argument("--dialog", action="append", help="dialog file (repeatable; default bundled corpus)")
    a.add_argument("--out", help="CSV output path (default stdout)")
    a.add_argument("--figure", help="also write a PNG bar chart here")
    a.add_argument("--max-sequences", type=int, default=125)
    a.add_argument("--week", choices=("mon-fri", "mon-sun"), default="mon-fri")
    a.add_argument("--cf-table", metavar="PATH")
    a.set_defaults(func=cmd_ablate)

    u = sub.add_parser("usage", help="how often each rule fires and is used")
    u.add_argument("--dialog", action="append", help="dialog file (repeatable; default bundled corpus)")
    u.add_argument("--out", help="CSV output path (default stdout)")
    u.add_argument("--figure", help="also write a PNG bar chart here")
    _add_resolver_flags(u)
    u.set_defaults(func=cmd_usage)

    s = sub.add_parser("parse", help="show the TUs parsed from one utterance")
    s.add_argument("--text", required=True)
    s.add_argument("--date", help="dialog date (ISO) used for obvious inference")
    s.add_argument("--normalize", action="store_true", help="fold fragments first")
    s.set_defaults(func=cmd_parse)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DialogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

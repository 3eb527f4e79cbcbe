"""Command-line entry point: ``nounforge train|analyze|eval|inspect``.

Exit status is 0 on success, 1 for bad input and 2 when an internal
invariant check fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from .analyzer import DEFAULT_MAX_N, UNKNOWN_POLICIES, Compound, analyze
from .errors import NounforgeError
from .evaluation import evaluate, read_gold
from .lexicon import load_thesaurus
from .model import (
    DEFAULT_EPSILON, extract_pairs_from_text, ingest_pair_counts, load_model, save_model, train,
)

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


class InputError(NounforgeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, "%s: error: %s\n" % (self.prog, message))


def _emit(obj, out):
    out.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _read_thesaurus(path):
    with open(path, encoding="utf-8") as f:
        return load_thesaurus(f)


def _read_model(model_path, thesaurus_path):
    t = _read_thesaurus(thesaurus_path)
    with open(model_path, encoding="utf-8") as f:
        return load_model(f, t)


def cmd_train(args, out):
    if not args.epsilon > 0:
        raise InputError("--epsilon must be positive, got %r" % args.epsilon)
    t = _read_thesaurus(args.thesaurus)
    if args.pairs:
        with open(args.pairs, encoding="utf-8") as f:
            counts = ingest_pair_counts(f)
    else:
        with open(args.corpus, encoding="utf-8") as f:
            counts = extract_pairs_from_text(f, t)
    model = train(counts, t, args.epsilon)
    directory = os.path.dirname(os.path.abspath(args.out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".nounforge-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            save_model(model, f)
        os.replace(tmp, args.out)
    except BaseException:
        os.unlink(tmp)
        raise
    known = sum(n for (w1, w2), n in counts.counts.items() if w1 in t and w2 in t)
    _emit({
        "categories": t.class_count,
        "pairs_ingested": len(counts),
        "pair_tokens": counts.total,
        "pair_tokens_used": known,
        "nonzero_cells": len(model.link_prob),
        "epsilon": model.epsilon,
        "thesaurus_digest": t.digest(),
    }, out)
    return EXIT_OK


def cmd_analyze(args, out):
    model = _read_model(args.model, args.thesaurus)
    failed = False
    for lineno, raw in enumerate(sys.stdin, 1):
        words = raw.split()
        if not words:
            continue
        record = {"line": lineno, "words": [w.lower() for w in words]}
        try:
            if len(words) < 2:
                raise InputError("a compound needs at least 2 words, got %d" % len(words))
            c = Compound(tuple(words))
            ranked = analyze(model, c, unknown_words=args.unknown_words, max_n=args.max_n)
        except NounforgeError as e:
            failed = True
            record["error"] = str(e)
            _emit(record, out)
            continue
        record["chosen"] = ranked[0].bracket(c)
        record["analyses"] = [
            {"bracket": a.bracket(c), "score": a.score, "log_score": a.log_score}
            for a in ranked[:args.top_k]
        ]
        _emit(record, out)
    return EXIT_INPUT if failed else EXIT_OK


def cmd_eval(args, out):
    model = _read_model(args.model, args.thesaurus)
    with open(args.gold, encoding="utf-8") as f:
        gold = read_gold(f)
    report = evaluate(model, gold, unknown_words=args.unknown_words, max_n=args.max_n)
    _emit(report.to_dict(), out)
    return EXIT_INPUT if report.errors else EXIT_OK


def cmd_inspect(args, out):
    model = _read_model(args.model, args.thesaurus)
    column = model.column(args.head)
    ranked = sorted(column.items(), key=lambda kv: (-kv[1], kv[0]))
    _emit({
        "head": args.head,
        "modifiers": [{"category": s1, "probability": p} for s1, p in ranked[:args.top_k]],
    }, out)
    return EXIT_OK


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser():
    parser = _Parser(prog="nounforge", description="Probabilistic bracketing of compound nouns.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="estimate association parameters")
    p.add_argument("--thesaurus", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--pairs", help="word1<TAB>word2<TAB>count file")
    src.add_argument("--corpus", help="plain text; two-word runs of thesaurus words are counted")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    def model_args(p):
        p.add_argument("--model", required=True)
        p.add_argument("--thesaurus", required=True, help="the thesaurus the model was trained on")

    def analysis_args(p):
        p.add_argument("--unknown-words", choices=UNKNOWN_POLICIES, default="singleton")
        p.add_argument("--max-n", type=_positive_int, default=DEFAULT_MAX_N)

    p = sub.add_parser("analyze", help="bracket compounds read from stdin, one per line")
    model_args(p)
    analysis_args(p)
    p.add_argument("--top-k", type=_positive_int, default=5)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("eval", help="accuracy against a gold bracketing file")
    model_args(p)
    analysis_args(p)
    p.add_argument("--gold", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("inspect", help="strongest modifier categories of a head category")
    model_args(p)
    p.add_argument("--head", required=True)
    p.add_argument("--top-k", type=_positive_int, default=10)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (NounforgeError, OSError, UnicodeDecodeError) as e:
        print("nounforge %s: %s" % (args.command, e), file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as e:
        print("nounforge %s: internal error: %s" % (args.command, e), file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

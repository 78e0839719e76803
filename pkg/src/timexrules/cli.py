"""Command line: learn, apply, capture, eval."""

from __future__ import annotations

import argparse
import logging
import sys

from .capture import CaptureTask, capture
from .corpus import IngestStats, evaluate, ingest
from .errors import CorpusError, EmptyCorpus, NoSequenceFound, TemporalError
from .lexicon import Lexicon
from .normalizer import FAILED, _as_base, try_normalize
from .operations import format_sequence
from .rules import LearnStats, RuleStore, learn
from .temporal import parse_timex_value

EXIT_OK, EXIT_USAGE, EXIT_CORPUS = 0, 1, 2

log = logging.getLogger("timexrules")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _lexicon(args) -> Lexicon:
    try:
        return Lexicon.load(args.lexicon, args.stopwords)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot load lexicon: {exc}") from None


def _store(path) -> RuleStore:
    try:
        return RuleStore.load(path)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot load rules: {exc}") from None


def _corpus(args, lexicon):
    stats = IngestStats()
    exprs = ingest(args.corpus, args.format, lexicon, stats)
    if stats.files and len(stats.malformed_files) == stats.files:
        raise CorpusError("no readable corpus file")
    log.info("read %d expressions from %d documents (%d unsupported values)",
             len(exprs), stats.documents, stats.unsupported_values)
    return exprs


def cmd_learn(args) -> int:
    lexicon = _lexicon(args)
    exprs = _corpus(args, lexicon)
    stats = LearnStats()
    store = learn(exprs, stats=stats)
    store.save(args.out)
    print(f"rules\t{len(store)}\nexpressions\t{stats.expressions}\ncaptured\t{stats.captured}\n"
          f"mean_candidates\t{stats.mean_candidates:.2f}", file=sys.stderr)
    return EXIT_OK


def _apply_line(text, dct, store, lexicon) -> str:
    try:
        base = _as_base(dct)
    except (TemporalError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    res = try_normalize(text, base, store, lexicon)
    if res.via == FAILED:
        return f"-\tFAILED\tvia={FAILED}"
    return f"{res.timex_type}\t{res.value}\tvia={res.via}"


def cmd_apply(args) -> int:
    store = _store(args.rules)
    lexicon = _lexicon(args)
    if args.expr is not None:
        if args.dct is None:
            raise UsageError("--expr needs --dct")
        print(_apply_line(args.expr, args.dct, store, lexicon))
        return EXIT_OK
    try:
        fh = sys.stdin if args.batch in (None, "-") else open(args.batch, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read batch file: {exc}") from None
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                if args.dct is None:
                    raise UsageError(f"line {lineno}: expected expr<TAB>dct")
                cols = [line, args.dct]
            print(_apply_line(cols[0], cols[1], store, lexicon))
    return EXIT_OK


def _pool(items) -> tuple:
    out = []
    for item in items or ():
        for part in item.replace(",", " ").split():
            try:
                out.append(int(part))
            except ValueError:
                raise UsageError(f"pool values must be integers, got {part!r}") from None
    return tuple(out)


def cmd_capture(args) -> int:
    try:
        base = _as_base(args.base)
        target = parse_timex_value(args.target)
    except (TemporalError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    try:
        result = capture(CaptureTask(base, target, _pool(args.pool)))
    except NoSequenceFound:
        return EXIT_OK
    for line in sorted(format_sequence(s) for s in result.sequences):
        print(line)
    return EXIT_OK


def cmd_eval(args) -> int:
    store = _store(args.rules)
    lexicon = _lexicon(args)
    exprs = _corpus(args, lexicon)
    report = evaluate(store, exprs, lexicon)
    sys.stdout.write(report.to_json() if args.report == "json" else report.to_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="timexrules", description="Learn and apply time-expression normalization rules.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def lexicon_args(sp):
        sp.add_argument("--lexicon", help="lexicon override file (TYPE<TAB>canonical<TAB>v1|v2)")
        sp.add_argument("--stopwords", help="stop-word file, one per line")

    sp = sub.add_parser("learn", help="learn rules from an annotated corpus")
    sp.add_argument("--corpus", nargs="+", required=True)
    sp.add_argument("--format", choices=("timeml", "tsv"), required=True)
    sp.add_argument("--out", required=True)
    lexicon_args(sp)
    sp.set_defaults(func=cmd_learn)

    sp = sub.add_parser("apply", help="normalize expressions with a rule file")
    sp.add_argument("--rules", required=True)
    sp.add_argument("--dct", help="reference date, e.g. 2021-05-17")
    sp.add_argument("--expr", help="a single expression")
    sp.add_argument("--batch", help="TSV of expr<TAB>dct lines ('-' for stdin, the default)")
    lexicon_args(sp)
    sp.set_defaults(func=cmd_apply)

    sp = sub.add_parser("capture", help="list operation sequences from base to target")
    sp.add_argument("--base", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--pool", nargs="*", default=[], help="integers usable as parameters")
    sp.set_defaults(func=cmd_capture)

    sp = sub.add_parser("eval", help="accuracy of a rule file on gold mentions")
    sp.add_argument("--rules", required=True)
    sp.add_argument("--corpus", nargs="+", required=True)
    sp.add_argument("--format", choices=("timeml", "tsv"), required=True)
    sp.add_argument("--report", choices=("json", "text"), default="text")
    lexicon_args(sp)
    sp.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"timexrules: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusError, EmptyCorpus, OSError) as exc:
        print(f"timexrules: corpus unreadable: {exc}", file=sys.stderr)
        return EXIT_CORPUS


if __name__ == "__main__":
    sys.exit(main())

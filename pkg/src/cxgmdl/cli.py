"""Command-line entry point: ``cxgmdl <subcommand> ...``."""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence

from . import builders as b
from .grammar import GrammarError, load_grammar, render
from .lexicalize import lexicalize
from .mdl import (ComparisonError, DataError, comparison_items, compare, data_dl,
                  dl_items, format_kv, format_table, grammar_dl)
from .parser import ParseError, enumerate_sentences, interpret, parse
from .repro import format_claims, number_corpus, run_all
from .semantics import show

EXIT_OK, EXIT_FAIL, EXIT_REJECT, EXIT_USAGE = 0, 1, 2, 64


def _int_range(lo: int, hi: int):
    def conv(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if not lo <= v <= hi:
            raise argparse.ArgumentTypeError(f"must be in {lo}..{hi}, got {v}")
        return v
    return conv


def _add_source(p: argparse.ArgumentParser):
    p.add_argument("--grammar", "-g", help="grammar file")
    p.add_argument("--family", choices=("number", "lpp"), help="build a family grammar instead")
    p.add_argument("--base", type=_int_range(2, 1000), default=10)
    p.add_argument("--ascending", action="store_true", help="number family: strictly ascending digits")
    p.add_argument("--lexicon", help="lpp family: lexicon file (default: bundled fixture)")
    p.add_argument("--nouns", type=_int_range(1, 100000),
                   help="lpp family: synthetic lexicon with this many typed nouns")
    p.add_argument("--lexicalized", action="store_true",
                   help="with --family, use the lexicalized grammar")


def _lexicon(args):
    if args.nouns:
        return b.synthetic_lexicon(args.nouns)
    if args.lexicon:
        return b.load_lexicon(args.lexicon)
    return b.fixture_lexicon()


def _grammar(args):
    if args.grammar:
        if args.family:
            raise SystemExit("use either --grammar or --family, not both")
        return load_grammar(args.grammar)
    if args.family == "number":
        build = b.build_number_lexicalized if args.lexicalized else b.build_number_construction
        return build(args.base, args.ascending)
    if args.family == "lpp":
        g = b.build_lpp_construction(_lexicon(args))
        return lexicalize(g) if args.lexicalized else g
    raise SystemExit("a grammar is required: --grammar FILE or --family number|lpp")


def _read_corpus(path) -> List[List[str]]:
    with open(path, encoding="utf-8") as fh:
        return [line.split() for line in fh if line.strip() and not line.lstrip().startswith("#")]


def _sentences(args) -> List[List[str]]:
    if args.tokens:
        return [args.tokens]
    if args.corpus:
        return _read_corpus(args.corpus)
    raise SystemExit("give tokens on the command line or --corpus FILE")


def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(args, items) -> str:
    return format_kv(items) if args.format == "kv" else format_table(items)


# ---------------------------------------------------------------- subcommands

def cmd_parse(args) -> int:
    g = _grammar(args)
    lines = []
    status = EXIT_OK
    for sent in _sentences(args):
        ds = parse(g, sent)
        if not ds:
            status = EXIT_REJECT
        lines.append(f"# {' '.join(sent)}: {len(ds)} derivation(s)")
        lines.extend(d.tree() for d in ds)
    _emit(args, "\n".join(lines) + "\n")
    return status


def cmd_interpret(args) -> int:
    g = _grammar(args)
    out = []
    status = EXIT_OK
    for i, sent in enumerate(_sentences(args)):
        meanings = sorted(show(v) for v in interpret(g, sent))
        if not meanings:
            status = EXIT_REJECT
        if args.format == "kv":
            out.append(f"sentence.{i}={' '.join(sent)}")
            out.append(f"accepted.{i}={'true' if meanings else 'false'}")
            out.extend(f"meaning.{i}.{k}={m}" for k, m in enumerate(meanings))
        else:
            out.extend(meanings or ["REJECT"])
    _emit(args, "\n".join(out) + "\n")
    return status


def cmd_build(args) -> int:
    if not args.family:
        raise SystemExit("build needs --family number|lpp")
    _emit(args, render(_grammar(args)))
    return EXIT_OK


def cmd_lexicalize(args) -> int:
    _emit(args, render(lexicalize(_grammar(args))))
    return EXIT_OK


def cmd_mdl(args) -> int:
    g = _grammar(args)
    items = dl_items(grammar_dl(g))
    if args.corpus:
        items.append(("dataBits", data_dl(g, _read_corpus(args.corpus))))
    _emit(args, _fmt(args, items))
    return EXIT_OK


def cmd_compare(args) -> int:
    if args.grammar and args.grammar2:
        ga, gb = load_grammar(args.grammar), load_grammar(args.grammar2)
    elif args.family and not args.grammar:
        args.lexicalized = False
        ga = _grammar(args)
        gb = lexicalize(ga)
    else:
        raise SystemExit("compare needs --grammar A --grammar2 B, or --family")
    if args.corpus:
        corpus = _read_corpus(args.corpus)
    elif args.family == "number":
        corpus = number_corpus()
    else:
        raise SystemExit("compare needs --corpus FILE")
    _emit(args, _fmt(args, comparison_items(compare(ga, gb, corpus))))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    g = _grammar(args)
    lines = []
    for s in enumerate_sentences(g, args.max_tokens):
        meanings = " | ".join(sorted(show(v) for v in interpret(g, s)))
        lines.append(f"{' '.join(s)}\t{meanings}")
    _emit(args, "".join(line + "\n" for line in lines))
    return EXIT_OK


def cmd_repro(args) -> int:
    claims = run_all()
    if args.format == "kv":
        items = []
        for c in claims:
            items += [(f"{c.key}.ok", str(c.ok).lower()), (f"{c.key}.measured", c.measured)]
        text = format_kv(items)
    else:
        text = format_claims(claims)
    _emit(args, text)
    return EXIT_OK if all(c.ok for c in claims) else EXIT_FAIL


class _ArgParser(argparse.ArgumentParser):
    # keep exit status 2 for REJECT
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _ArgParser(prog="cxgmdl",
                    description="Construction grammars, lexicalization and MDL.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    def add(name, fn, help, source=True, tokens=False, out=True, fmt=False):
        p = sub.add_parser(name, help=help)
        if source:
            _add_source(p)
        if tokens:
            p.add_argument("tokens", nargs="*", help="whitespace-separated tokens")
            p.add_argument("--corpus", help="file with one sentence per line")
        if out:
            p.add_argument("--out", "-o", help="write output here instead of stdout")
        if fmt:
            p.add_argument("--format", choices=("text", "kv"), default="text")
        p.set_defaults(func=fn)
        return p

    add("parse", cmd_parse, "tokens -> derivations", tokens=True)
    add("interpret", cmd_interpret, "tokens -> meanings or REJECT", tokens=True, fmt=True)
    add("build", cmd_build, "emit a family grammar")
    add("lexicalize", cmd_lexicalize, "lexicalize a grammar and emit it")
    p = add("mdl", cmd_mdl, "grammar description length", fmt=True)
    p.add_argument("--corpus", help="also cost this corpus")
    p = add("compare", cmd_compare, "compare two grammars on a corpus", fmt=True)
    p.add_argument("--grammar2", help="second grammar file")
    p.add_argument("--corpus", help="file with one sentence per line")
    p = add("enumerate", cmd_enumerate, "list the language up to a length bound")
    p.add_argument("--max-tokens", type=_int_range(1, 12), default=3)
    add("repro", cmd_repro, "run the claim checks and print the table", source=False, fmt=True)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GrammarError, ParseError, DataError, ComparisonError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front door to the pipeline.

Exit codes: 0 success, 1 domain error (no matches, unparsable input),
2 usage error, 3 I/O or resource error. Primary payloads go to stdout
in machine-parseable formats; diagnostics go to stderr.
"""

import argparse
import json
import signal
import sys
from pathlib import Path

from . import errors
from .extract import (extract_candidates, extract_descriptions,
                      format_description_record, normalize_key, run_pipeline,
                      weed_candidates)
from .fd import compile_fd, fd_to_text, parse_fd, realize, aggregate, select_by_category
from .resources import default_lexdb, default_np_grammar, default_tagger_resources
from .service import build_config, load_config, serve
from .store import ProfileStore, export_profile_text, import_profile_text
from .text import (Tag, Token, read_corpus_dir, read_corpus_file, render_tagged,
                   sentence_spans, tag, tokenize)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _read_corpus(path_text: str, jobs: int = 1):
    path = Path(path_text)
    if not path.exists():
        raise errors.MissingResource(f"no such corpus path: {path}")
    if path.is_dir():
        return read_corpus_dir(path)
    return read_corpus_file(path)


def cmd_tag(args) -> int:
    lexicon, rules = default_tagger_resources()
    tokens = tag(tokenize(sys.stdin.read()), lexicon, rules)
    for start, end in sentence_spans(tokens):
        print(render_tagged(tokens[start:end]))
    return EXIT_OK


def cmd_entities(args) -> int:
    corpus = _read_corpus(args.corpus)
    before = extract_candidates(corpus)
    after = weed_candidates(before, default_lexdb())
    from .extract import candidate_report
    print(candidate_report(before, after).format_table())
    return EXIT_OK


def cmd_describe(args) -> int:
    corpus = _read_corpus(args.corpus)
    descs = extract_descriptions(args.entity.split(), corpus,
                                 default_np_grammar(), jobs=args.jobs)
    for desc in descs:
        print(format_description_record(desc))
    return EXIT_OK if descs else EXIT_DOMAIN


def cmd_ingest(args) -> int:
    corpus = _read_corpus(args.corpus)
    lex = default_lexdb()
    result = run_pipeline(corpus, lex, default_np_grammar(), jobs=args.jobs)
    store = ProfileStore(args.store, categories=lex.categories())
    for item in result.descriptions:
        store.upsert(item.description, item.categories)
    store.commit()
    store.close()
    print(result.report.format_table())
    print(f"descriptions\t{len(result.descriptions)}", file=sys.stderr)
    return EXIT_OK


def cmd_profile(args) -> int:
    store = ProfileStore(args.store)
    if args.action == "import":
        profile = import_profile_text(sys.stdin.read())
        from .extract import Description
        for entry in profile.entries:
            for _ in range(entry.frequency):
                store.upsert(Description(entity_key=profile.key, tokens=entry.description,
                                         kind=entry.kind or "apposition",
                                         source=profile.source, date=profile.created,
                                         doc_id="import"), entry.categories)
        store.commit()
        store.close()
        print(profile.key)
        return EXIT_OK
    profile = store.get(args.key)
    if profile is None:
        print(f"no profile for {normalize_key(args.key)!r}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.action == "export" and args.format == "fig3":
        sys.stdout.write(export_profile_text(profile))
    else:
        from .service import _profile_json
        print(json.dumps(_profile_json(profile), ensure_ascii=False, indent=2))
    return EXIT_OK


def cmd_fd(args) -> int:
    if args.action == "realize":
        fd = parse_fd(sys.stdin.read())
        print(realize(fd))
        return EXIT_OK
    if args.action == "aggregate":
        fds = [parse_fd(Path(p).read_text(encoding="utf-8")) for p in args.files]
        if len(fds) < 2:
            print("aggregate needs two FD files", file=sys.stderr)
            return EXIT_USAGE
        merged = fds[0]
        for other in fds[1:]:
            merged = aggregate(merged, other)
        print(fd_to_text(merged))
        return EXIT_OK
    # compile
    store = ProfileStore(args.store)
    entries = store.query(args.key)
    if not entries:
        print(f"no descriptions stored for {normalize_key(args.key)!r}", file=sys.stderr)
        return EXIT_DOMAIN
    entry = select_by_category(entries, args.category) if args.category else entries[0]
    entity_tokens = [Token(w[:1].upper() + w[1:], Tag.NP)
                     for w in normalize_key(args.key).split()]
    fd = compile_fd(list(entry.description), entry.kind or "apposition", entity_tokens)
    print(fd_to_text(fd))
    return EXIT_OK


def cmd_serve(args) -> int:
    config = load_config(args.config) if args.config else build_config({})
    handle = serve(config)
    print(f"listening on {handle.address}", file=sys.stderr)

    def stop(signum, frame):
        handle.shutdown()

    signal.signal(signal.SIGINT, stop)
    signal.signal(signal.SIGTERM, stop)
    handle.wait()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="profiledb")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("tag", help="tag plain text from stdin").set_defaults(func=cmd_tag)

    p = sub.add_parser("entities", help="candidate report for a corpus")
    p.add_argument("--corpus", required=True)
    p.set_defaults(func=cmd_entities)

    p = sub.add_parser("describe", help="extract descriptions for one entity")
    p.add_argument("--entity", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("ingest", help="run the pipeline and store everything")
    p.add_argument("--corpus", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("profile", help="store access")
    p.add_argument("action", choices=["show", "export", "import"])
    p.add_argument("--key")
    p.add_argument("--store", required=True)
    p.add_argument("--format", choices=["json", "fig3"], default="json")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("fd", help="generation chain")
    p.add_argument("action", choices=["compile", "realize", "aggregate"])
    p.add_argument("files", nargs="*")
    p.add_argument("--key")
    p.add_argument("--category")
    p.add_argument("--store")
    p.set_defaults(func=cmd_fd)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "profile" and args.action != "import" and not args.key:
        parser.error("--key is required for profile show/export")
    if args.command == "fd" and args.action == "compile" and not (args.key and args.store):
        parser.error("fd compile requires --key and --store")
    try:
        return args.func(args)
    except (errors.UnparsableDescription, errors.NotAggregatable,
            errors.UnrealizableFD, errors.UnknownCategory, errors.EmptyEntity) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (errors.MissingResource, errors.StorageError, errors.BindError,
            errors.ConfigError, errors.FormatError, errors.ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

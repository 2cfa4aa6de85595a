"""Loaders for the data files shipped inside the package."""

from functools import lru_cache
from importlib import resources

from .lexicon import LexDB, load_lexdb
from .patterns import PatternSet, parse_pattern_defs
from .text import SuffixRule, Tag, load_suffix_rules, load_tag_lexicon

_DATA = resources.files(__package__) / "data"


def data_path(name: str):
    return _DATA / name


@lru_cache(maxsize=1)
def default_lexdb() -> LexDB:
    with resources.as_file(_DATA) as root:
        return load_lexdb(root / "dictionary.txt", root / "taxonomy.txt",
                          root / "categories.txt")


@lru_cache(maxsize=1)
def default_tagger_resources() -> tuple[dict[str, Tag], list[SuffixRule]]:
    with resources.as_file(_DATA) as root:
        return load_tag_lexicon(root / "tagger_lexicon.txt"), \
            load_suffix_rules(root / "suffix_rules.txt")


@lru_cache(maxsize=1)
def default_np_grammar() -> PatternSet:
    return parse_pattern_defs(data_path("noun_phrase.pat").read_text(encoding="utf-8"))

"""Entity description extraction, profile storage, and generation.

The pipeline: tag news text, find proper-noun entity candidates, weed
them against a common-word dictionary, extract noun-phrase descriptions
(premodifiers and appositions) around entity mentions, categorize them
by hypernym triggers, and store them as per-entity profiles that can be
queried, exported, compiled into feature structures, and realized back
into English. An HTTP service with a query cache serves the store.
"""

from .errors import ProfileDBError
from .extract import (Description, EntityCandidate, extract_candidates,
                      extract_descriptions, normalize_key, run_pipeline,
                      weed_candidates)
from .fd import (FD, aggregate, compile_fd, description_fd, enhance_former,
                 entity_fd, fd_to_text, parse_fd, realize, select_by_category)
from .lexicon import Categorization, CategoryRule, LexDB, load_lexdb
from .patterns import (MatchSpan, PatternSet, compile_entity_pattern,
                       find_matches, parse_pattern_defs)
from .resources import default_lexdb, default_np_grammar, default_tagger_resources
from .store import Profile, ProfileEntry, ProfileStore, export_profile_text, import_profile_text
from .text import (Tag, TaggedDoc, Token, detokenize, parse_corpus, parse_tagged,
                   render_corpus, render_tagged, tag, tokenize)

__version__ = "0.1.0"

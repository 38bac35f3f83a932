"""silverner: build silver-standard NER corpora from MediaWiki dumps.

A batch pipeline that matches catalog entity names and interlink anchors in
cleaned article text, optionally merges predictions from an auxiliary
tagger, and writes BIO-tagged sentences, plus statistics and entity-level
scoring utilities.
"""

__version__ = "0.1.0"

from .catalog import (
    CatalogError,
    EntityCatalog,
    EntityClass,
    EntityRecord,
    NameIndex,
    build_name_index,
    load_catalog,
    normalize_name,
    normalize_title,
)
from .corpus import Corpus, CorpusFormatError, filter_annotated, read_corpus, write_corpus
from .dump import Article, DumpError, Interlink, extract_interlinks, stream_articles
from .linking import ArticleEntityContext, link_article
from .mentions import (
    Mention,
    Origin,
    match_mentions,
    mentions_from_anchors,
    merge_annotated,
    merge_predicted,
    run_aux_tagger,
)
from .scoring import Score, TokenMismatchError, f1_score, score
from .spans import Span
from .stats import CorpusStats, compute_stats, entity_shares, render_report, tag_shares
from .tokenization import (
    AlignmentError,
    BioTag,
    SentenceSpan,
    TaggedSentence,
    TaggedToken,
    TokenSpan,
    project_bio,
    repair_cross_sentence,
    repair_subword,
    split_sentences,
    split_words,
)
from .wikitext import (
    CleanArticle,
    TemplateBlocklist,
    clean_article,
    filter_sections,
    render_plain,
    strip_elements,
)

__all__ = [
    "__version__",
    "AlignmentError",
    "Article",
    "ArticleEntityContext",
    "BioTag",
    "CatalogError",
    "CleanArticle",
    "Corpus",
    "CorpusFormatError",
    "CorpusStats",
    "DumpError",
    "EntityCatalog",
    "EntityClass",
    "EntityRecord",
    "Interlink",
    "Mention",
    "NameIndex",
    "Origin",
    "Score",
    "SentenceSpan",
    "Span",
    "TaggedSentence",
    "TaggedToken",
    "TemplateBlocklist",
    "TokenMismatchError",
    "TokenSpan",
    "build_name_index",
    "clean_article",
    "compute_stats",
    "entity_shares",
    "extract_interlinks",
    "f1_score",
    "filter_annotated",
    "filter_sections",
    "link_article",
    "load_catalog",
    "match_mentions",
    "mentions_from_anchors",
    "merge_annotated",
    "merge_predicted",
    "normalize_name",
    "normalize_title",
    "project_bio",
    "read_corpus",
    "render_plain",
    "render_report",
    "repair_cross_sentence",
    "repair_subword",
    "run_aux_tagger",
    "score",
    "split_sentences",
    "split_words",
    "stream_articles",
    "strip_elements",
    "tag_shares",
    "write_corpus",
]

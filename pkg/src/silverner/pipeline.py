"""End-to-end corpus build: stream, clean, link, tag, tokenize, write.

Articles flow from a single reader through N workers to a single writer that
preserves dump order, so the corpus bytes do not depend on the worker count.
Per-article failures are quarantined (counted and logged), never fatal.
Alongside the corpus the build writes a stats report, a provenance sidecar,
and report figures.
"""

from __future__ import annotations

import json
import logging
import multiprocessing
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from . import __version__
from .aux import ResilientAuxTagger
from .catalog import EntityCatalog, build_name_index, load_catalog
from .corpus import Corpus, filter_annotated, read_corpus, write_corpus
from .dump import Article, stream_articles
from .linking import link_article
from .mentions import (
    match_mentions,
    mentions_from_anchors,
    merge_annotated,
    merge_predicted,
    run_aux_tagger,
)
from .plots import save_class_shares, save_length_histogram
from .scoring import Score, score
from .stats import CorpusStats, StatsAccumulator, render_report
from .tokenization import (
    SentenceSpan,
    TaggedSentence,
    default_abbreviations,
    load_abbreviations,
    project_bio,
    repair_cross_sentence,
    repair_subword,
    split_sentences,
    split_words,
)
from .wikitext import TemplateBlocklist, clean_article, default_blocklist

logger = logging.getLogger(__name__)


class PipelineError(RuntimeError):
    """Fatal configuration or input problem; maps to exit code 1."""


@dataclass
class PipelineConfig:
    """Everything run_build needs; field names match the CLI flags."""

    dump: str
    catalog: str
    out: str
    workers: int = 1
    aux_cmd: str | None = None
    with_origin: bool = False
    blocklist: str | None = None
    abbrev: str | None = None
    global_match: bool = False
    figures: bool = True
    chunk_size: int = 16

    def to_manifest(self) -> dict:
        return {
            "dump": str(self.dump),
            "catalog": str(self.catalog),
            "out": str(self.out),
            "workers": self.workers,
            "aux_cmd": self.aux_cmd,
            "with_origin": self.with_origin,
            "blocklist": str(self.blocklist) if self.blocklist else None,
            "abbrev": str(self.abbrev) if self.abbrev else None,
            "global_match": self.global_match,
            "figures": self.figures,
        }


@dataclass
class BuildResult:
    articles: int
    quarantined: int
    sentences: int
    tokens: int
    counters: Counter = field(default_factory=Counter)
    stats: CorpusStats | None = None
    output: Path | None = None


# Per-process pipeline state, set up once by _init_worker.
_STATE: dict = {}


@dataclass
class _WorkerOptions:
    global_match: bool
    aux_cmd: str | None
    blocklist: TemplateBlocklist
    abbreviations: frozenset[str]


def _init_worker(catalog: EntityCatalog, options: _WorkerOptions) -> None:
    _STATE.clear()
    _STATE["catalog"] = catalog
    _STATE["options"] = options
    _STATE["index"] = build_name_index(catalog) if options.global_match else None
    _STATE["aux"] = (
        ResilientAuxTagger(options.aux_cmd) if options.aux_cmd else None
    )


def _close_worker() -> None:
    aux = _STATE.get("aux")
    if aux is not None:
        aux.close()
    _STATE.clear()


def article_sentences(
    article: Article, catalog: EntityCatalog, options: _WorkerOptions,
    index, aux, counters: Counter,
) -> list[TaggedSentence]:
    """The whole per-article path: clean text in, kept tagged sentences out."""
    clean = clean_article(article, options.blocklist, counters)
    context = link_article(article, clean, catalog)
    if index is None:
        index = build_name_index(catalog, restrict_to=context.candidate_entities)
    exact = match_mentions(clean.text, index)
    anchors = mentions_from_anchors(context, catalog)
    annotated = merge_annotated(exact, anchors)
    counters["mentions_exact"] += len(exact)
    counters["mentions_anchor"] += len(anchors)
    if aux is not None:
        predicted = run_aux_tagger(clean.text, aux, counters)
        counters["mentions_predicted"] += len(predicted)
    else:
        predicted = []
    mentions = merge_predicted(annotated, predicted, counters)
    sentences = split_sentences(clean.text, options.abbreviations)
    sentences = repair_cross_sentence(sentences, mentions)
    tokenized = [
        split_words(s, clean.text, mentions, options.abbreviations) for s in sentences
    ]
    repaired = [
        SentenceSpan(s.span, tuple(repair_subword(s.tokens, mentions)))
        for s in tokenized
    ]
    repaired = [s for s in repaired if s.tokens]
    tagged = project_bio(repaired, mentions)
    kept = filter_annotated(tagged)
    counters["sentences_seen"] += len(tagged)
    counters["sentences_kept"] += len(kept)
    return kept


def _process_article(article: Article):
    counters: Counter = Counter()
    try:
        sentences = article_sentences(
            article,
            _STATE["catalog"],
            _STATE["options"],
            _STATE["index"],
            _STATE.get("aux"),
            counters,
        )
        return article.article_id, sentences, counters, None
    except Exception as exc:  # quarantine the article, keep the build alive
        return article.article_id, None, counters, f"{type(exc).__name__}: {exc}"


def _preflight_aux(aux_cmd: str) -> None:
    """Fail fast on a broken tagger command, before any worker starts.

    A command that cannot even reach the ready handshake would otherwise kill
    pool initializers, which the pool restarts forever.
    """
    from .aux import AuxTaggerClient, WorkerError

    try:
        AuxTaggerClient(aux_cmd).close()
    except WorkerError as exc:
        raise PipelineError(f"aux tagger command failed: {exc}") from exc


def _require_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise PipelineError(f"{what} not found: {p}")
    return p


def _resolve_options(config: PipelineConfig) -> _WorkerOptions:
    blocklist = (
        TemplateBlocklist.load(_require_file(config.blocklist, "template blocklist"))
        if config.blocklist
        else default_blocklist()
    )
    abbreviations = (
        load_abbreviations(_require_file(config.abbrev, "abbreviation list"))
        if config.abbrev
        else default_abbreviations()
    )
    return _WorkerOptions(
        global_match=config.global_match,
        aux_cmd=config.aux_cmd,
        blocklist=blocklist,
        abbreviations=abbreviations,
    )


def _result_stream(
    config: PipelineConfig, catalog: EntityCatalog, options: _WorkerOptions,
    articles: Iterable[Article],
) -> Iterator:
    if config.workers <= 1:
        _init_worker(catalog, options)
        try:
            for article in articles:
                yield _process_article(article)
        finally:
            _close_worker()
        return
    pool = multiprocessing.get_context().Pool(
        processes=config.workers,
        initializer=_init_worker,
        initargs=(catalog, options),
    )
    try:
        yield from pool.imap(_process_article, articles, chunksize=config.chunk_size)
        pool.close()
        pool.join()
    finally:
        pool.terminate()


def run_build(config: PipelineConfig) -> BuildResult:
    """Build a corpus according to config; returns totals and final stats."""
    dump_path = _require_file(config.dump, "dump")
    _require_file(config.catalog, "catalog")
    if config.workers < 1:
        raise PipelineError(f"workers must be >= 1, got {config.workers}")
    try:
        catalog = load_catalog(config.catalog)
    except (OSError, ValueError) as exc:
        raise PipelineError(f"cannot load catalog: {exc}") from exc
    if not catalog.records:
        logger.warning("catalog is empty; every article will be dropped")
    options = _resolve_options(config)
    if config.aux_cmd:
        _preflight_aux(config.aux_cmd)

    out_path = Path(config.out)
    if out_path.parent and not out_path.parent.exists():
        out_path.parent.mkdir(parents=True, exist_ok=True)

    counters: Counter = Counter()
    acc = StatsAccumulator()
    quarantined = 0
    articles = stream_articles(dump_path, counters)
    with open(out_path, "wb") as sink:
        for article_id, sentences, article_counters, error in _result_stream(
            config, catalog, options, articles
        ):
            counters.update(article_counters)
            if error is not None:
                quarantined += 1
                logger.warning("article %d quarantined: %s", article_id, error)
                continue
            for sentence in sentences:
                acc.add(sentence)
            write_corpus(sentences, sink, with_origin=config.with_origin)

    stats = acc.finalize()
    _write_sidecars(config, out_path, stats, counters, quarantined)
    logger.info(
        "built %s: %d articles in, %d quarantined, %d sentences, %d tokens",
        out_path,
        counters.get("articles", 0),
        quarantined,
        stats.sentences,
        stats.tokens,
    )
    return BuildResult(
        articles=counters.get("articles", 0),
        quarantined=quarantined,
        sentences=stats.sentences,
        tokens=stats.tokens,
        counters=counters,
        stats=stats,
        output=out_path,
    )


def _write_sidecars(
    config: PipelineConfig,
    out_path: Path,
    stats: CorpusStats,
    counters: Counter,
    quarantined: int,
) -> None:
    stats_path = out_path.with_name(out_path.name + ".stats.json")
    stats_path.write_text(render_report(stats, "json"), encoding="utf-8")
    provenance = {
        "tool": {"name": "silverner", "version": __version__},
        "config": config.to_manifest(),
        "articles": counters.get("articles", 0),
        "articles_quarantined": quarantined,
        "sentences": stats.sentences,
        "tokens": stats.tokens,
        "counters": {k: counters[k] for k in sorted(counters)},
    }
    provenance_path = out_path.with_name(out_path.name + ".provenance.json")
    provenance_path.write_text(
        json.dumps(provenance, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    if config.figures and stats.sentences:
        save_length_histogram(stats, out_path.with_name(out_path.name + ".lengths.png"))
        save_class_shares(stats, out_path.with_name(out_path.name + ".classes.png"))


def run_stats(
    corpus_path: str, format: str = "json", figures: bool = False
) -> str:
    """Read a corpus and render its report; optionally write figures next to it."""
    path = _require_file(corpus_path, "corpus")
    corpus = read_corpus(path)
    stats = acc_stats(corpus)
    if figures and stats.sentences:
        save_length_histogram(stats, path.with_name(path.name + ".lengths.png"))
        save_class_shares(stats, path.with_name(path.name + ".classes.png"))
    return render_report(stats, format)


def acc_stats(corpus: Corpus) -> CorpusStats:
    acc = StatsAccumulator()
    for sentence in corpus.sentences:
        acc.add(sentence)
    return acc.finalize()


def run_score(gold_path: str, pred_path: str, mode: str = "strict") -> Score:
    gold = read_corpus(_require_file(gold_path, "gold corpus"))
    pred = read_corpus(_require_file(pred_path, "predicted corpus"))
    return score(gold, pred, mode=mode)


def run_inspect(corpus_path: str, start: int = 0, stop: int | None = None) -> str:
    """Human-readable sentence listing with inline entity markup."""
    corpus = read_corpus(_require_file(corpus_path, "corpus"))
    stop = len(corpus.sentences) if stop is None else min(stop, len(corpus.sentences))
    lines = []
    for i in range(max(start, 0), stop):
        sentence = corpus.sentences[i]
        parts = []
        j = 0
        tokens = sentence.tokens
        while j < len(tokens):
            token = tokens[j]
            if token.tag.is_begin:
                k = j + 1
                cls = token.tag.entity_class
                while (
                    k < len(tokens)
                    and tokens[k].tag.is_inside
                    and tokens[k].tag.entity_class is cls
                ):
                    k += 1
                words = " ".join(t.text for t in tokens[j:k])
                origin = f"/{token.origin.value}" if token.origin else ""
                parts.append(f"[{words}]({cls.value}{origin})")
                j = k
            else:
                parts.append(token.text)
                j += 1
        lines.append(f"#{i}\t{' '.join(parts)}")
    return "\n".join(lines) + ("\n" if lines else "")

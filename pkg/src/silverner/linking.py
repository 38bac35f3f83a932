"""Resolution of an article's subject and interlink anchors to catalog entities."""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import EntityCatalog, normalize_title
from .dump import Article
from .spans import Span
from .wikitext import CleanArticle


@dataclass(frozen=True)
class ArticleEntityContext:
    """Catalog entities visible from one article.

    anchor_mentions holds (span in clean text, entity id) for every anchor
    whose target resolved; candidate_entities is the subject plus all
    resolved anchor targets.
    """

    article_id: int
    subject_entity: str | None
    candidate_entities: frozenset[str]
    anchor_mentions: tuple[tuple[Span, str], ...]


def link_article(
    article: Article, clean: CleanArticle, catalog: EntityCatalog
) -> ArticleEntityContext:
    """Resolve subject and anchors.  Unresolvable anchors are silently skipped.

    The subject is matched by wiki id first, then by normalized title; the
    wiki id wins when the two disagree.
    """
    if article.article_id != clean.article_id:
        raise ValueError(
            f"article id mismatch: {article.article_id} != {clean.article_id}"
        )
    subject = catalog.by_wiki_id.get(article.article_id)
    if subject is None:
        subject = catalog.by_title.get(normalize_title(article.title))
    candidates: set[str] = set()
    anchors: list[tuple[Span, str]] = []
    if subject is not None:
        candidates.add(subject)
    for target, span in clean.anchors:
        entity_id = catalog.by_title.get(normalize_title(target))
        if entity_id is None:
            continue
        candidates.add(entity_id)
        anchors.append((span, entity_id))
    return ArticleEntityContext(
        article_id=article.article_id,
        subject_entity=subject,
        candidate_entities=frozenset(candidates),
        anchor_mentions=tuple(anchors),
    )

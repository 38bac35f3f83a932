"""Sentence splitting, mention-aware tokenization, repairs, BIO projection.

Sentence boundaries are rule-based: terminal punctuation, optional closing
quotes or brackets, whitespace, then an uppercase letter or digit.  A bare
period is suppressed after known abbreviations, single-letter initials, and
dotted acronyms.  Paragraph breaks (blank lines) always end a sentence.

Tokenization is mention-first: inside a mention span only whitespace splits,
outside it leading and trailing punctuation is peeled off.  Two repairs keep
mentions token-aligned: merging sentences a mention crosses, and splitting
or re-merging tokens whose boundaries disagree with a mention's.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .catalog import EntityClass
from .mentions import Mention, Origin
from .spans import Span

_TERMINAL_RX = re.compile(r"[.!?…]+[\"')\]»”’]*")
_PARAGRAPH_RX = re.compile(r"\n\s*\n")
_WORD_RUN_RX = re.compile(r"\S+")

_OPEN_PUNCT = set("([{\"'«“‘‚„‹¿¡")
_CLOSE_PUNCT = set(".,;:!?…)]}\"'»”’›")
_LEAD_TRIM = "([{\"'«“‘‚„‹¿¡"


class AlignmentError(RuntimeError):
    """A mention failed to align with token or sentence boundaries."""


class BioTag(Enum):
    """BIO tags over the three entity classes; values match the corpus format."""

    O = "O"
    B_PER = "B-PER"
    I_PER = "I-PER"
    B_ORG = "B-ORG"
    I_ORG = "I-ORG"
    B_LOC = "B-LOC"
    I_LOC = "I-LOC"

    @property
    def entity_class(self) -> EntityClass | None:
        return None if self is BioTag.O else EntityClass(self.value[2:])

    @property
    def is_begin(self) -> bool:
        return self.value.startswith("B-")

    @property
    def is_inside(self) -> bool:
        return self.value.startswith("I-")

    @staticmethod
    def begin(cls: EntityClass) -> "BioTag":
        return BioTag(f"B-{cls.value}")

    @staticmethod
    def inside(cls: EntityClass) -> "BioTag":
        return BioTag(f"I-{cls.value}")


@dataclass(frozen=True)
class TokenSpan:
    """One token: its span in the article text and the covered text."""

    span: Span
    text: str


@dataclass(frozen=True)
class SentenceSpan:
    """One sentence span, with tokens once tokenization has run."""

    span: Span
    tokens: tuple[TokenSpan, ...] = ()


@dataclass(frozen=True)
class TaggedToken:
    text: str
    tag: BioTag
    origin: Origin | None = None


@dataclass(frozen=True)
class TaggedSentence:
    tokens: tuple[TaggedToken, ...]


def load_abbreviations(path: str | Path) -> frozenset[str]:
    """One abbreviation per line, no trailing period, matched case-insensitively."""
    entries = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            entry = line.strip()
            if entry and not entry.startswith("#"):
                entries.add(entry.rstrip(".").lower())
    return frozenset(entries)


@lru_cache(maxsize=1)
def default_abbreviations() -> frozenset[str]:
    data = resources.files("silverner").joinpath("data/abbreviations_pt.txt")
    entries = set()
    for line in data.read_text(encoding="utf-8").splitlines():
        entry = line.strip()
        if entry and not entry.startswith("#"):
            entries.add(entry.rstrip(".").lower())
    return frozenset(entries)


def _suppresses_boundary(text: str, dot_at: int, abbreviations: frozenset[str]) -> bool:
    """True when the bare period at dot_at belongs to the preceding word."""
    j = dot_at
    while j > 0 and not text[j - 1].isspace():
        j -= 1
    word = text[j:dot_at].lstrip(_LEAD_TRIM)
    if not word:
        return True  # a period with no word is not a sentence end
    if "." in word:
        return True  # dotted acronym or initials chain
    if len(word) == 1 and word.isalpha():
        return True
    return word.lower() in abbreviations


def split_sentences(
    text: str, abbreviations: frozenset[str] | None = None
) -> list[SentenceSpan]:
    """Split text into ordered, non-overlapping sentence spans (no tokens yet).

    Spans start and end on non-whitespace; every non-whitespace character is
    covered by exactly one span.
    """
    if abbreviations is None:
        abbreviations = default_abbreviations()
    sentences: list[SentenceSpan] = []
    prev = 0
    for gap in _PARAGRAPH_RX.finditer(text):
        _split_paragraph(text, prev, gap.start(), abbreviations, sentences)
        prev = gap.end()
    _split_paragraph(text, prev, len(text), abbreviations, sentences)
    return sentences


def _split_paragraph(
    text: str,
    a: int,
    b: int,
    abbreviations: frozenset[str],
    out: list[SentenceSpan],
) -> None:
    start = a
    while start < b and text[start].isspace():
        start += 1
    if start >= b:
        return
    for m in _TERMINAL_RX.finditer(text, start, b):
        end = m.end()
        if end >= b:
            break
        k = end
        while k < b and text[k].isspace():
            k += 1
        if k == end:
            continue  # punctuation glued to the next character
        if k < b and not (text[k].isupper() or text[k].isdigit()):
            continue
        if m.group() == "." and _suppresses_boundary(text, m.start(), abbreviations):
            continue
        out.append(SentenceSpan(Span(start, end)))
        start = k
    if start < b:
        end = b
        while end > start and text[end - 1].isspace():
            end -= 1
        if end > start:
            out.append(SentenceSpan(Span(start, end)))


def _keeps_dot(word: str, abbreviations: frozenset[str]) -> bool:
    if "." in word:
        return True
    if len(word) == 1 and word.isalpha():
        return True
    return word.lower() in abbreviations


def _peel(
    text: str,
    x: int,
    y: int,
    abbreviations: frozenset[str],
    out: list[TokenSpan],
) -> None:
    """Tokenize one non-whitespace segment, peeling edge punctuation."""
    lead: list[TokenSpan] = []
    while x < y and text[x] in _OPEN_PUNCT:
        lead.append(TokenSpan(Span(x, x + 1), text[x]))
        x += 1
    trail: list[TokenSpan] = []
    while y > x:
        ch = text[y - 1]
        if ch == ".":
            k = y
            while k > x and text[k - 1] == ".":
                k -= 1
            if y - k >= 2:  # ellipsis spelled as dots stays one token
                trail.append(TokenSpan(Span(k, y), text[k:y]))
                y = k
                continue
            if _keeps_dot(text[x:k], abbreviations):
                break
            trail.append(TokenSpan(Span(k, y), "."))
            y = k
        elif ch in _CLOSE_PUNCT:
            trail.append(TokenSpan(Span(y - 1, y), ch))
            y -= 1
        else:
            break
    out.extend(lead)
    if y > x:
        out.append(TokenSpan(Span(x, y), text[x:y]))
    out.extend(reversed(trail))


def split_words(
    sentence: SentenceSpan,
    text: str,
    mentions: Sequence[Mention] = (),
    abbreviations: frozenset[str] | None = None,
) -> SentenceSpan:
    """Tokenize one sentence; inside mention spans only whitespace splits.

    Tokens are ordered, disjoint, and cover every non-whitespace character
    of the sentence.
    """
    if abbreviations is None:
        abbreviations = default_abbreviations()
    spans = sorted(m.span for m in mentions if m.span.overlaps(sentence.span))
    tokens: list[TokenSpan] = []
    for run in _WORD_RUN_RX.finditer(text, sentence.span.start, sentence.span.end):
        a, b = run.start(), run.end()
        cuts = {a, b}
        covering = []
        for s in spans:
            if s.start >= b:
                break
            if s.end <= a:
                continue
            covering.append(s)
            if a < s.start < b:
                cuts.add(s.start)
            if a < s.end < b:
                cuts.add(s.end)
        edges = sorted(cuts)
        for x, y in zip(edges, edges[1:]):
            if any(s.start <= x and y <= s.end for s in covering):
                tokens.append(TokenSpan(Span(x, y), text[x:y]))
            else:
                _peel(text, x, y, abbreviations, tokens)
    return SentenceSpan(sentence.span, tuple(tokens))


def repair_cross_sentence(
    sentences: Sequence[SentenceSpan], mentions: Sequence[Mention]
) -> list[SentenceSpan]:
    """Merge runs of sentences that any mention crosses, transitively.

    Mentions confined to one sentence leave the input unchanged.  Token
    tuples, when present, are concatenated in order.
    """
    result = list(sentences)
    if not result or not mentions:
        return result
    ranges: list[tuple[int, int]] = []
    for m in mentions:
        first = last = None
        for idx, s in enumerate(result):
            if s.span.start >= m.span.end:
                break
            if s.span.overlaps(m.span):
                if first is None:
                    first = idx
                last = idx
        if first is not None and last is not None and last > first:
            ranges.append((first, last))
    if not ranges:
        return result
    ranges.sort()
    merged = [ranges[0]]
    for lo, hi in ranges[1:]:
        plo, phi = merged[-1]
        if lo <= phi:
            merged[-1] = (plo, max(phi, hi))
        else:
            merged.append((lo, hi))
    out: list[SentenceSpan] = []
    i = 0
    for lo, hi in merged:
        out.extend(result[i:lo])
        group = result[lo : hi + 1]
        tokens = tuple(t for s in group for t in s.tokens)
        out.append(SentenceSpan(Span(group[0].span.start, group[-1].span.end), tokens))
        i = hi + 1
    out.extend(result[i:])
    return out


def _covering_span(spans: Sequence[Span], s: Span) -> Span | None:
    for sp in spans:
        if sp.start <= s.start and s.end <= sp.end:
            return sp
        if sp.start >= s.end:
            break
    return None


def repair_subword(
    tokens: Sequence[TokenSpan], mentions: Sequence[Mention]
) -> list[TokenSpan]:
    """Align token boundaries with mention boundaries.

    Tokens a mention boundary cuts through are split at the boundary;
    adjacent (touching) fragments inside the same mention are merged back
    into one token.  Character coverage is preserved exactly.
    """
    spans = sorted(m.span for m in mentions)
    if not spans or not tokens:
        return list(tokens)
    bounds = sorted({p for s in spans for p in (s.start, s.end)})
    fragments: list[TokenSpan] = []
    for tok in tokens:
        cuts = [p for p in bounds if tok.span.start < p < tok.span.end]
        if not cuts:
            fragments.append(tok)
            continue
        edges = [tok.span.start] + cuts + [tok.span.end]
        base = tok.span.start
        for x, y in zip(edges, edges[1:]):
            fragments.append(TokenSpan(Span(x, y), tok.text[x - base : y - base]))
    out: list[TokenSpan] = []
    for frag in fragments:
        cover = _covering_span(spans, frag.span)
        if (
            out
            and cover is not None
            and cover == _covering_span(spans, out[-1].span)
            and out[-1].span.end == frag.span.start
        ):
            prev = out.pop()
            out.append(TokenSpan(Span(prev.span.start, frag.span.end), prev.text + frag.text))
        else:
            out.append(frag)
    return out


def project_bio(
    sentences: Sequence[SentenceSpan], mentions: Iterable[Mention]
) -> list[TaggedSentence]:
    """Project disjoint mentions onto tokenized sentences as BIO tags.

    Every mention must lie inside exactly one sentence and tile a contiguous
    token run exactly; anything else raises AlignmentError, since it means a
    repair failed.  Output sentences parallel the input one-to-one.
    """
    ordered = sorted(mentions, key=lambda m: m.span)
    per_sentence: list[list[Mention]] = [[] for _ in sentences]
    si = 0
    for m in ordered:
        while si < len(sentences) and sentences[si].span.end <= m.span.start:
            si += 1
        if si == len(sentences) or not sentences[si].span.overlaps(m.span):
            raise AlignmentError(f"mention {m.span} lies outside every sentence")
        if not sentences[si].span.contains(m.span):
            raise AlignmentError(
                f"mention {m.span} crosses sentence boundary {sentences[si].span}"
            )
        per_sentence[si].append(m)

    tagged: list[TaggedSentence] = []
    for s, ms in zip(sentences, per_sentence):
        tokens = s.tokens
        tags = [BioTag.O] * len(tokens)
        origins: list[Origin | None] = [None] * len(tokens)
        for m in ms:
            idxs = [i for i, t in enumerate(tokens) if m.span.contains(t.span)]
            if any(
                t.span.overlaps(m.span) and not m.span.contains(t.span) for t in tokens
            ):
                raise AlignmentError(f"mention {m.span} splits a token")
            if (
                not idxs
                or tokens[idxs[0]].span.start != m.span.start
                or tokens[idxs[-1]].span.end != m.span.end
            ):
                raise AlignmentError(f"mention {m.span} does not tile token spans")
            tags[idxs[0]] = BioTag.begin(m.entity_class)
            origins[idxs[0]] = m.origin
            for i in idxs[1:]:
                tags[i] = BioTag.inside(m.entity_class)
                origins[i] = m.origin
        tagged.append(
            TaggedSentence(
                tuple(
                    TaggedToken(t.text, tag, origin)
                    for t, tag, origin in zip(tokens, tags, origins)
                )
            )
        )
    return tagged

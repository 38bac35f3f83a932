"""BIO corpus serialization: token-per-line, tab-separated, UTF-8.

Each line is "token<TAB>TAG" or, in origin mode, "token<TAB>TAG<TAB>origin"
for entity tokens (O rows never carry an origin).  A blank line follows
every sentence, including the last.  An empty corpus is an empty file.
read_corpus is the exact inverse and validates tags, origins, and BIO
well-formedness with line numbers.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, BinaryIO, Iterable, Sequence, Union

from .mentions import Origin
from .tokenization import BioTag, TaggedSentence, TaggedToken


class CorpusFormatError(ValueError):
    """A corpus file violated the format; the message carries a line number."""


@dataclass
class Corpus:
    """A list of tagged sentences plus free-form provenance."""

    sentences: list[TaggedSentence]
    provenance: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.sentences)


def filter_annotated(sentences: Iterable[TaggedSentence]) -> list[TaggedSentence]:
    """Keep only sentences containing at least one annotated entity token."""
    return [
        s
        for s in sentences
        if any(t.origin is Origin.ANNOTATED for t in s.tokens)
    ]


def _sentence_lines(index: int, sentence: TaggedSentence, with_origin: bool) -> list[str]:
    lines = []
    for token in sentence.tokens:
        if not token.text or "\t" in token.text or "\n" in token.text:
            raise ValueError(f"sentence {index}: token {token.text!r} is not serializable")
        if with_origin and token.tag is not BioTag.O:
            if token.origin is None:
                raise ValueError(f"sentence {index}: entity token lacks an origin")
            lines.append(f"{token.text}\t{token.tag.value}\t{token.origin.value}")
        else:
            lines.append(f"{token.text}\t{token.tag.value}")
    return lines


def write_corpus(
    corpus: Union[Corpus, Sequence[TaggedSentence]],
    sink: BinaryIO,
    with_origin: bool = False,
) -> int:
    """Serialize to a binary sink; returns the number of bytes written."""
    sentences = corpus.sentences if isinstance(corpus, Corpus) else corpus
    total = 0
    for index, sentence in enumerate(sentences):
        if not sentence.tokens:
            raise ValueError(f"sentence {index} is empty")
        data = ("\n".join(_sentence_lines(index, sentence, with_origin)) + "\n\n").encode(
            "utf-8"
        )
        sink.write(data)
        total += len(data)
    return total


def read_corpus(source: Union[str, Path, BinaryIO, io.TextIOBase]) -> Corpus:
    """Parse a corpus file; the exact inverse of write_corpus.

    Raises CorpusFormatError, with a 1-based line number, on malformed lines,
    unknown tags or origins, and I-X tags that continue nothing.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return _read_lines(fh)
    if isinstance(source, io.TextIOBase):
        return _read_lines(source)
    return _read_lines(io.TextIOWrapper(source, encoding="utf-8", newline=""))


def _read_lines(fh: Iterable[str]) -> Corpus:
    sentences: list[TaggedSentence] = []
    current: list[TaggedToken] = []
    previous: BioTag | None = None
    lineno = 0
    for lineno, raw in enumerate(fh, start=1):
        line = raw.rstrip("\n")
        if not line:
            if not current:
                raise CorpusFormatError(f"line {lineno}: blank line outside a sentence")
            sentences.append(TaggedSentence(tuple(current)))
            current = []
            previous = None
            continue
        parts = line.split("\t")
        if len(parts) == 2:
            text, tag_value = parts
            origin = None
        elif len(parts) == 3:
            text, tag_value, origin_value = parts
            try:
                origin = Origin(origin_value)
            except ValueError:
                raise CorpusFormatError(
                    f"line {lineno}: unknown origin {origin_value!r}"
                ) from None
        else:
            raise CorpusFormatError(
                f"line {lineno}: expected 2 or 3 tab-separated fields, got {len(parts)}"
            )
        if not text:
            raise CorpusFormatError(f"line {lineno}: empty token")
        try:
            tag = BioTag(tag_value)
        except ValueError:
            raise CorpusFormatError(f"line {lineno}: unknown tag {tag_value!r}") from None
        if tag is BioTag.O and origin is not None:
            raise CorpusFormatError(f"line {lineno}: origin given for an O token")
        if tag.is_inside:
            if previous is None or previous is BioTag.O:
                raise CorpusFormatError(f"line {lineno}: {tag_value} continues no entity")
            if previous.entity_class is not tag.entity_class:
                raise CorpusFormatError(
                    f"line {lineno}: {tag_value} continues a {previous.value} entity"
                )
        current.append(TaggedToken(text, tag, origin))
        previous = tag
    if current:
        # a final sentence without its trailing blank line is accepted
        sentences.append(TaggedSentence(tuple(current)))
    return Corpus(sentences)

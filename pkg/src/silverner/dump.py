"""Streaming MediaWiki XML dump reader and interlink extraction.

Articles are parsed with xml.etree.iterparse and the element tree is cleared
after every page, so memory stays flat regardless of dump size.  Gzip input
is detected from the magic bytes.  Only namespace-0, non-redirect pages are
yielded, in dump order.
"""

from __future__ import annotations

import gzip
import io
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterator, Union
from xml.etree import ElementTree as ET

from .spans import Span
from .wikitext import match_link_end

_GZIP_MAGIC = b"\x1f\x8b"

_MASK_RX = re.compile(
    r"<nowiki\s*>.*?</nowiki\s*>|<nowiki\s*/>|<!--.*?-->",
    re.IGNORECASE | re.DOTALL,
)


class DumpError(RuntimeError):
    """Malformed XML stream, reported with the parser's position."""


@dataclass(frozen=True)
class Article:
    """One namespace-0, non-redirect page straight from the dump."""

    article_id: int
    title: str
    wikitext: str


@dataclass(frozen=True)
class Interlink:
    """An internal link occurrence in raw wikitext coordinates."""

    target_title: str
    anchor_text: str
    span: Span


def _bump(counters: Counter | None, key: str) -> None:
    if counters is not None:
        counters[key] += 1


def _localname(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _open_source(source: Union[str, Path, BinaryIO]) -> tuple[BinaryIO, bool]:
    if isinstance(source, (str, Path)):
        return open(source, "rb"), True
    return source, False


def _sniff_gzip(fh: BinaryIO) -> bool:
    try:
        pos = fh.tell()
        magic = fh.read(2)
        fh.seek(pos)
    except (OSError, io.UnsupportedOperation):
        return False
    return magic == _GZIP_MAGIC


def stream_articles(
    source: Union[str, Path, BinaryIO], counters: Counter | None = None
) -> Iterator[Article]:
    """Yield articles from a (possibly gzipped) MediaWiki XML dump in order.

    Redirects and pages outside namespace 0 are skipped and counted.  A
    malformed stream raises DumpError.
    """
    fh, owned = _open_source(source)
    try:
        if _sniff_gzip(fh):
            fh = gzip.open(fh, "rb")
        yield from _iter_pages(fh, counters)
    except ET.ParseError as exc:
        raise DumpError(f"malformed XML dump: {exc}") from exc
    finally:
        if owned:
            fh.close()


def _iter_pages(fh: BinaryIO, counters: Counter | None) -> Iterator[Article]:
    root = None
    for event, elem in ET.iterparse(fh, events=("start", "end")):
        if event == "start":
            if root is None:
                root = elem
            continue
        if _localname(elem.tag) != "page":
            continue
        _bump(counters, "pages")
        title = None
        ns = "0"
        page_id = None
        redirect = False
        text = None
        for child in elem:
            ctag = _localname(child.tag)
            if ctag == "title":
                title = child.text or ""
            elif ctag == "ns":
                ns = (child.text or "").strip()
            elif ctag == "id" and page_id is None:
                page_id = (child.text or "").strip()
            elif ctag == "redirect":
                redirect = True
            elif ctag == "revision":
                for sub in child:
                    if _localname(sub.tag) == "text":
                        text = sub.text or ""
        if root is not None:
            root.clear()
        if ns != "0":
            _bump(counters, "skipped_namespace")
            continue
        if redirect:
            _bump(counters, "skipped_redirects")
            continue
        if not title or page_id is None or not page_id.isdigit():
            _bump(counters, "skipped_invalid")
            continue
        _bump(counters, "articles")
        yield Article(int(page_id), title, text or "")


def extract_interlinks(wikitext: str, counters: Counter | None = None) -> list[Interlink]:
    """Extract ordered, disjoint internal links from raw wikitext.

    Links inside nowiki regions and HTML comments are ignored.  Nested
    constructs contribute only their inner links.  Targets are truncated at
    "#"; unterminated or line-crossing markup is counted as malformed.
    Each anchor_text equals the wikitext substring at its span.
    """
    masked = _MASK_RX.sub(lambda m: " " * len(m.group()), wikitext)
    links: list[Interlink] = []
    i = 0
    while (j := masked.find("[[", i)) != -1:
        kind, k = match_link_end(masked, j)
        if kind == "unterminated":
            _bump(counters, "malformed_links")
            i = j + 2
            continue
        if kind == "nested":
            i = k
            continue
        content = masked[j + 2 : k]
        if "\n" in content:
            _bump(counters, "malformed_links")
            i = j + 2
            continue
        pipe = content.find("|")
        if pipe == -1:
            target_raw = content
            a_start, a_end = j + 2, k
        else:
            target_raw = content[:pipe]
            a_start, a_end = j + 2 + pipe + 1, k
        target = target_raw.split("#", 1)[0].strip()
        anchor = wikitext[a_start:a_end]
        if target and anchor:
            links.append(Interlink(target, anchor, Span(a_start, a_end)))
        else:
            _bump(counters, "links_skipped")
        i = k + 2
    return links

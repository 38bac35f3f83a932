"""Wikitext cleaning: element removal, section filtering, plain-text rendering.

Cleaning runs three ordered stages.  strip_elements removes constructs whose
content never belongs in running text: math-like tag regions, wiki tables,
blocklisted templates, file and media links, and indented lines.
filter_sections drops appendix-style sections wholesale.  render_plain turns
the remaining markup into plain text while tracking where every interlink
anchor landed in the output.

All three stages are pure functions; per-article irregularities (unbalanced
markup and similar) are reported through an optional Counter instead of
exceptions.
"""

from __future__ import annotations

import html
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .spans import Span

_WS = re.compile(r"\s+")

# Tag regions whose content is never prose.
_TAG_REGION_RX = re.compile(
    r"<(?P<tag>math|chem|ce|gallery|score|timeline|hiero)\b[^>]*?"
    r"(?:/\s*>|>.*?</(?P=tag)\s*>)",
    re.IGNORECASE | re.DOTALL,
)

_COMMENT_RX = re.compile(r"<!--.*?(?:-->|$)", re.DOTALL)
_REF_RX = re.compile(r"<ref\b[^>/]*/\s*>|<ref\b[^>]*>.*?</ref\s*>", re.IGNORECASE | re.DOTALL)
_NOWIKI_RX = re.compile(
    r"<nowiki\s*/>|<nowiki\s*>(?P<body>.*?)</nowiki\s*>", re.IGNORECASE | re.DOTALL
)
_BR_RX = re.compile(r"<br\s*/?\s*>", re.IGNORECASE)
_HTML_TAG_RX = re.compile(r"</?[a-zA-Z][^>\n]*>")
_QUOTE_RUN_RX = re.compile(r"'{2,}")
_EXT_LINK_RX = re.compile(r"\[(?:https?|ftp)://[^\s\]]+\s*([^\]]*)\]", re.IGNORECASE)
_STRAY_MARKUP_RX = re.compile(r"\[\[|\]\]|\{\{|\}\}|\{\||\|\}")
_HEADING_RX = re.compile(r"^(=+)\s*(.*?)\s*=+\s*$")

# File and media namespaces, including Portuguese localizations.
FILE_NAMESPACES = frozenset(
    {
        "file",
        "image",
        "media",
        "ficheiro",
        "arquivo",
        "imagem",
        "mídia",
        "midia",
        "multimédia",
        "multimedia",
    }
)

# Link namespaces that render to nothing in plain text.
_DROPPED_LINK_NS = FILE_NAMESPACES | frozenset(
    {
        "category",
        "categoria",
        "wikipedia",
        "help",
        "ajuda",
        "template",
        "predefinição",
        "predefinicao",
        "user",
        "usuário",
        "usuario",
        "special",
        "especial",
        "portal",
        "talk",
        "discussão",
        "discussao",
        "wikt",
        "wiktionary",
        "wikisource",
        "wikiquote",
        "wikinews",
        "wikibooks",
        "wikiversity",
        "wikivoyage",
        "commons",
        "meta",
        "doi",
        "arxiv",
        "s",
        "q",
        "b",
    }
)

# Interwiki language prefixes ("en:", "pt-br:", ...) follow a narrow shape.
_LANG_PREFIX_RX = re.compile(r"^[a-z]{2,3}(-[a-z0-9]+)*$")

DEFAULT_SECTION_BLOCKLIST = frozenset(
    {
        "references",
        "see also",
        "bibliography",
        "external links",
        "referências",
        "ver também",
        "bibliografia",
        "ligações externas",
    }
)


def _bump(counters: Counter | None, key: str, n: int = 1) -> None:
    if counters is not None:
        counters[key] += n


@dataclass(frozen=True)
class TemplateBlocklist:
    """Normalized template-name prefixes whose expansions are removed."""

    prefixes: tuple[str, ...]

    @classmethod
    def from_lines(cls, lines) -> "TemplateBlocklist":
        prefixes = []
        for line in lines:
            entry = line.strip()
            if entry and not entry.startswith("#"):
                prefixes.append(_normalize_template_name(entry))
        return cls(tuple(sorted(set(prefixes))))

    @classmethod
    def load(cls, path: str | Path) -> "TemplateBlocklist":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_lines(fh)

    def blocks(self, template_name: str) -> bool:
        name = _normalize_template_name(template_name)
        return bool(name) and any(name.startswith(p) for p in self.prefixes)


def _normalize_template_name(name: str) -> str:
    n = _WS.sub(" ", name).strip().lower()
    if n.startswith(":"):
        n = n[1:].strip()
    for prefix in ("template:", "predefinição:", "predefinicao:"):
        if n.startswith(prefix):
            n = n[len(prefix) :].strip()
    return n


@lru_cache(maxsize=1)
def default_blocklist() -> TemplateBlocklist:
    data = resources.files("silverner").joinpath("data/template_blocklist.txt")
    return TemplateBlocklist.from_lines(data.read_text(encoding="utf-8").splitlines())


@dataclass(frozen=True)
class CleanArticle:
    """Plain article text plus interlink anchors in output coordinates."""

    article_id: int
    text: str
    anchors: tuple[tuple[str, Span], ...]


@dataclass(frozen=True)
class PlainText:
    text: str
    anchors: tuple[tuple[str, Span], ...]


def match_link_end(text: str, i: int) -> tuple[str, int]:
    """Classify the link construct opening at text[i:i+2] == '[['.

    Returns ("link", k) with k the index of the closing ']]'; ("nested", j)
    with j the index of the first inner '[[' (the outer construct is a
    container whose own brackets carry no anchor); or ("unterminated", -1).
    """
    close = text.find("]]", i + 2)
    if close == -1:
        return ("unterminated", -1)
    inner = text.find("[[", i + 2)
    if inner != -1 and inner < close:
        return ("nested", inner)
    return ("link", close)


def _find_table_end(s: str, i: int) -> int:
    """Index just past the '|}' matching the '{|' at i, or -1 when unbalanced."""
    table_depth = 1
    template_depth = 0
    j = i + 2
    n = len(s)
    while j < n:
        pair = s[j : j + 2]
        if pair == "{{":
            template_depth += 1
            j += 2
        elif pair == "}}" and template_depth:
            template_depth -= 1
            j += 2
        elif pair == "{|" and not template_depth:
            table_depth += 1
            j += 2
        elif pair == "|}" and not template_depth:
            table_depth -= 1
            j += 2
            if not table_depth:
                return j
        else:
            j += 1
    return -1


def _find_template_end(s: str, i: int) -> int:
    """Index just past the '}}' matching the '{{' at i, or -1 when unbalanced."""
    template_depth = 1
    table_depth = 0
    j = i + 2
    n = len(s)
    while j < n:
        pair = s[j : j + 2]
        if pair == "{|":
            table_depth += 1
            j += 2
        elif pair == "|}" and table_depth:
            table_depth -= 1
            j += 2
        elif pair == "{{" and not table_depth:
            template_depth += 1
            j += 2
        elif pair == "}}" and not table_depth:
            template_depth -= 1
            j += 2
            if not template_depth:
                return j
        else:
            j += 1
    return -1


def _find_link_end_nested(s: str, i: int) -> int:
    """Index just past the ']]' matching the '[[' at i, nesting-aware, or -1."""
    depth = 1
    j = i + 2
    n = len(s)
    while j < n:
        pair = s[j : j + 2]
        if pair == "[[":
            depth += 1
            j += 2
        elif pair == "]]":
            depth -= 1
            j += 2
            if not depth:
                return j
        else:
            j += 1
    return -1


def _remove_tables(s: str, counters: Counter | None = None) -> str:
    out = []
    i = 0
    while True:
        j = s.find("{|", i)
        if j == -1:
            out.append(s[i:])
            break
        out.append(s[i:j])
        k = _find_table_end(s, j)
        if k == -1:
            # unbalanced: truncate the removal at end of text
            _bump(counters, "unbalanced_tables")
            break
        _bump(counters, "tables_removed")
        i = k
    return "".join(out)


def _template_name_at(s: str, i: int) -> str:
    j = i + 2
    n = len(s)
    while j < n and s[j] not in "|{}":
        j += 1
    return s[i + 2 : j]


def _remove_templates(
    s: str, blocklist: TemplateBlocklist | None, counters: Counter | None = None
) -> str:
    """Remove templates; all of them when blocklist is None, else blocked only."""
    out = []
    i = 0
    while True:
        j = s.find("{{", i)
        if j == -1:
            out.append(s[i:])
            break
        if blocklist is not None and not blocklist.blocks(_template_name_at(s, j)):
            out.append(s[i : j + 2])
            i = j + 2
            continue
        out.append(s[i:j])
        k = _find_template_end(s, j)
        if k == -1:
            _bump(counters, "unbalanced_templates")
            break
        _bump(counters, "templates_removed")
        i = k
    return "".join(out)


_NS_SNIFF_RX = re.compile(r"\s*:?\s*([^\[\]\|#:]{1,32}):")


def _remove_file_links(s: str, counters: Counter | None = None) -> str:
    out = []
    i = 0
    while True:
        j = s.find("[[", i)
        if j == -1:
            out.append(s[i:])
            break
        m = _NS_SNIFF_RX.match(s, j + 2)
        if not m or m.group(1).strip().lower() not in FILE_NAMESPACES:
            out.append(s[i : j + 2])
            i = j + 2
            continue
        out.append(s[i:j])
        k = _find_link_end_nested(s, j)
        if k == -1:
            _bump(counters, "unbalanced_file_links")
            break
        _bump(counters, "file_links_removed")
        i = k
    return "".join(out)


def _drop_indented_lines(s: str, counters: Counter | None = None) -> str:
    kept = []
    for line in s.split("\n"):
        if line.lstrip().startswith(":"):
            _bump(counters, "indented_lines_dropped")
            continue
        kept.append(line)
    return "\n".join(kept)


def strip_elements(
    wikitext: str,
    blocklist: TemplateBlocklist | None = None,
    counters: Counter | None = None,
) -> str:
    """Remove constructs whose content never belongs in running text."""
    if blocklist is None:
        blocklist = default_blocklist()
    s = _TAG_REGION_RX.sub("", wikitext)
    s = _remove_tables(s, counters)
    s = _remove_templates(s, blocklist, counters)
    s = _remove_file_links(s, counters)
    s = _drop_indented_lines(s, counters)
    return s


def _heading_key(raw: str) -> str:
    t = _QUOTE_RUN_RX.sub("", raw)
    t = t.replace("[[", "").replace("]]", "")
    return _WS.sub(" ", t).strip().casefold()


def filter_sections(
    wikitext: str, blocked: frozenset[str] = DEFAULT_SECTION_BLOCKLIST
) -> str:
    """Drop blocklisted sections up to the next heading of equal or lower level.

    `blocked` holds casefolded section titles.  Idempotent.
    """
    out = []
    skip_level: int | None = None
    for line in wikitext.split("\n"):
        m = _HEADING_RX.match(line)
        if m:
            level = len(m.group(1))
            if skip_level is not None and level <= skip_level:
                skip_level = None
            if skip_level is None and _heading_key(m.group(2)) in blocked:
                skip_level = level
                continue
        if skip_level is None:
            out.append(line)
    return "\n".join(out)


class _Emitter:
    """Accumulates output text and anchor spans with deferred line breaks."""

    __slots__ = ("_chunks", "_len", "anchors", "_pending")

    def __init__(self):
        self._chunks: list[str] = []
        self._len = 0
        self.anchors: list[tuple[str, Span]] = []
        self._pending = ""

    def _flush(self) -> None:
        if self._pending and self._chunks:
            self._chunks.append(self._pending)
            self._len += len(self._pending)
        self._pending = ""

    def emit(self, text: str) -> None:
        if not text:
            return
        self._flush()
        self._chunks.append(text)
        self._len += len(text)

    def emit_anchor(self, target: str, text: str) -> None:
        core = text.strip()
        if not core:
            self.emit(text)
            return
        self._flush()
        lead = len(text) - len(text.lstrip())
        start = self._len + lead
        self._chunks.append(text)
        self._len += len(text)
        self.anchors.append((target, Span(start, start + len(core))))

    def break_line(self) -> None:
        if not self._pending:
            self._pending = "\n"

    def break_paragraph(self) -> None:
        self._pending = "\n\n"

    def text(self) -> str:
        return "".join(self._chunks)


def _split_link(content: str) -> tuple[str | None, str]:
    """Split link content into (target, anchor text).

    Returns (None, "") when the target namespace renders to nothing, and
    ("", anchor) for section self-links that keep their text but resolve to
    no article.
    """
    pipe = content.find("|")
    if pipe == -1:
        target_raw, anchor = content, content
    else:
        target_raw = content[:pipe]
        anchor = content[pipe + 1 :]
        if not anchor.strip():
            # pipe trick: display the target without any qualifier
            anchor = target_raw.split("#", 1)[0].strip()
    t = target_raw.strip()
    if t.startswith(":"):
        t = t[1:].strip()
    if ":" in t:
        ns = t.split(":", 1)[0].strip().lower()
        if ns in _DROPPED_LINK_NS or _LANG_PREFIX_RX.match(ns):
            return None, ""
    return t.split("#", 1)[0].strip(), anchor


def _clean_chunk(chunk: str) -> str:
    return _STRAY_MARKUP_RX.sub("", chunk)


def _render_inline(line: str, em: _Emitter, counters: Counter | None) -> None:
    line = _EXT_LINK_RX.sub(lambda m: m.group(1).strip(), line)
    line = _QUOTE_RUN_RX.sub("", line)
    i = 0
    n = len(line)
    while i < n:
        j = line.find("[[", i)
        if j == -1:
            em.emit(_clean_chunk(line[i:]))
            break
        em.emit(_clean_chunk(line[i:j]))
        kind, k = match_link_end(line, j)
        if kind == "nested":
            i = k
            continue
        if kind == "unterminated":
            _bump(counters, "stray_markup")
            i = j + 2
            continue
        target, anchor = _split_link(line[j + 2 : k])
        i = k + 2
        if target is None or not anchor:
            continue
        if target == "":
            em.emit(anchor)
        else:
            em.emit_anchor(target, anchor)


def render_plain(wikitext: str, counters: Counter | None = None) -> PlainText:
    """Render element-stripped, section-filtered wikitext to plain text.

    Remaining templates, comments, refs, and HTML markup are dropped;
    interlinks become their anchor text with the landing span recorded.
    Blank lines and structural lines (headings, list items) become paragraph
    breaks; other line breaks stay single newlines.
    """
    s = _COMMENT_RX.sub("", wikitext)
    s = _REF_RX.sub("", s)
    s = _remove_templates(s, None, counters)
    s = _remove_tables(s, counters)
    s = _NOWIKI_RX.sub(lambda m: m.group("body") or "", s)
    s = html.unescape(s)
    s = _BR_RX.sub("\n", s)
    s = _HTML_TAG_RX.sub("", s)

    em = _Emitter()
    for raw_line in s.split("\n"):
        line = raw_line.strip()
        if not line:
            em.break_paragraph()
            continue
        hm = _HEADING_RX.match(line)
        if hm:
            em.break_paragraph()
            _render_inline(hm.group(2).strip(), em, counters)
            em.break_paragraph()
            continue
        if line[0] in "*#;:":
            line = line.lstrip("*#;: \t")
            if not line:
                em.break_paragraph()
                continue
            _render_inline(line, em, counters)
            em.break_paragraph()
            continue
        _render_inline(line, em, counters)
        em.break_line()
    return PlainText(em.text(), tuple(em.anchors))


def clean_article(
    article,
    blocklist: TemplateBlocklist | None = None,
    counters: Counter | None = None,
) -> CleanArticle:
    """Run the full cleaning pipeline for one article."""
    stripped = strip_elements(article.wikitext, blocklist, counters)
    filtered = filter_sections(stripped)
    rendered = render_plain(filtered, counters)
    return CleanArticle(article.article_id, rendered.text, rendered.anchors)

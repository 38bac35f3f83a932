"""Corpus statistics: mergeable accumulation, quantiles, and reports.

The accumulator is a monoid: accumulating shard-by-shard and merging gives
exactly the numbers a single pass would, because everything derives from
sums, a length histogram, and integer counts.  Quantiles use the
nearest-rank rule (the ceil(q*n)-th smallest value); the standard deviation
is the population form.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Union

from .corpus import Corpus
from .tokenization import BioTag, TaggedSentence

TAG_KEYS = ("O", "PER", "ORG", "LOC")


@dataclass(frozen=True)
class LengthStats:
    mean: float
    std: float
    min: int
    max: int
    q25: int
    q50: int
    q75: int


@dataclass(frozen=True)
class OriginShare:
    annotated: float
    predicted: float


@dataclass(frozen=True)
class CorpusStats:
    """Exact counts for one corpus; shares are derived on demand."""

    sentences: int
    tokens: int
    length: LengthStats | None
    tag_counts: dict[str, int]
    histogram: dict[int, int]
    origin_counts: dict[str, dict[str, int]]

    def tag_shares(self) -> dict[str, float]:
        return tag_shares(self.tag_counts)

    def entity_shares(self) -> dict[str, float]:
        return entity_shares(self.tag_counts)

    def origin_shares(self) -> dict[str, OriginShare]:
        return origin_shares(self.origin_counts)


def tag_shares(tag_counts: dict[str, int]) -> dict[str, float]:
    """Fraction of all tokens per tag group (O plus the entity classes)."""
    total = sum(tag_counts.values())
    if not total:
        return {}
    return {key: count / total for key, count in tag_counts.items()}


def entity_shares(tag_counts: dict[str, int]) -> dict[str, float]:
    """Fraction of entity tokens per class, ignoring O."""
    entity = {k: v for k, v in tag_counts.items() if k != "O"}
    total = sum(entity.values())
    if not total:
        return {}
    return {key: count / total for key, count in entity.items()}


def origin_shares(origin_counts: dict[str, dict[str, int]]) -> dict[str, OriginShare]:
    """Annotated/predicted share per class plus the ALL row."""
    out: dict[str, OriginShare] = {}
    total_a = total_p = 0
    for cls, counts in origin_counts.items():
        a = counts.get("Anot", 0)
        p = counts.get("Pred", 0)
        total_a += a
        total_p += p
        if a + p:
            out[cls] = OriginShare(a / (a + p), p / (a + p))
    if total_a + total_p:
        out["ALL"] = OriginShare(
            total_a / (total_a + total_p), total_p / (total_a + total_p)
        )
    return out


class StatsAccumulator:
    """Collects per-sentence counts; add / merge / finalize."""

    __slots__ = ("sentences", "tokens", "sum_sq", "histogram", "tag_counts", "origin_counts")

    def __init__(self):
        self.sentences = 0
        self.tokens = 0
        self.sum_sq = 0
        self.histogram: Counter = Counter()
        self.tag_counts: Counter = Counter()
        self.origin_counts: dict[str, Counter] = {}

    def add(self, sentence: TaggedSentence) -> None:
        n = len(sentence.tokens)
        self.sentences += 1
        self.tokens += n
        self.sum_sq += n * n
        self.histogram[n] += 1
        for token in sentence.tokens:
            if token.tag is BioTag.O:
                self.tag_counts["O"] += 1
                continue
            cls = token.tag.entity_class.value
            self.tag_counts[cls] += 1
            if token.origin is not None:
                self.origin_counts.setdefault(cls, Counter())[token.origin.value] += 1

    def merge(self, other: "StatsAccumulator") -> None:
        self.sentences += other.sentences
        self.tokens += other.tokens
        self.sum_sq += other.sum_sq
        self.histogram.update(other.histogram)
        self.tag_counts.update(other.tag_counts)
        for cls, counts in other.origin_counts.items():
            self.origin_counts.setdefault(cls, Counter()).update(counts)

    def finalize(self) -> CorpusStats:
        length = None
        if self.sentences:
            mean = self.tokens / self.sentences
            variance = max(self.sum_sq / self.sentences - mean * mean, 0.0)
            lengths = sorted(self.histogram)
            length = LengthStats(
                mean=mean,
                std=math.sqrt(variance),
                min=lengths[0],
                max=lengths[-1],
                q25=_quantile(self.histogram, self.sentences, 0.25),
                q50=_quantile(self.histogram, self.sentences, 0.50),
                q75=_quantile(self.histogram, self.sentences, 0.75),
            )
        tag_counts = {key: self.tag_counts.get(key, 0) for key in TAG_KEYS}
        origin_counts = {
            cls: {k: counts[k] for k in sorted(counts)}
            for cls, counts in sorted(self.origin_counts.items())
        }
        return CorpusStats(
            sentences=self.sentences,
            tokens=self.tokens,
            length=length,
            tag_counts=tag_counts,
            histogram={n: self.histogram[n] for n in sorted(self.histogram)},
            origin_counts=origin_counts,
        )


def _quantile(histogram: Counter, total: int, q: float) -> int:
    rank = max(1, math.ceil(q * total))
    cumulative = 0
    for length in sorted(histogram):
        cumulative += histogram[length]
        if cumulative >= rank:
            return length
    raise ValueError("empty histogram")  # unreachable with total > 0


def compute_stats(corpus: Union[Corpus, Iterable[TaggedSentence]]) -> CorpusStats:
    acc = StatsAccumulator()
    sentences = corpus.sentences if isinstance(corpus, Corpus) else corpus
    for sentence in sentences:
        acc.add(sentence)
    return acc.finalize()


_CLASS_LABELS = {"O": "Not an entity", "PER": "Person", "ORG": "Organization", "LOC": "Location"}


def render_report(stats: CorpusStats, format: str = "json") -> str:
    """Render a report; "json" round-trips through parse_report, "text" is tabular."""
    if format == "json":
        return _render_json(stats)
    if format == "text":
        return _render_text(stats)
    raise ValueError(f"unknown report format: {format!r}")


def _render_json(stats: CorpusStats) -> str:
    payload = {
        "sentences": stats.sentences,
        "tokens": stats.tokens,
        "length": None
        if stats.length is None
        else {
            "mean": stats.length.mean,
            "std": stats.length.std,
            "min": stats.length.min,
            "max": stats.length.max,
            "q25": stats.length.q25,
            "q50": stats.length.q50,
            "q75": stats.length.q75,
        },
        "tag_counts": stats.tag_counts,
        "origin_counts": stats.origin_counts,
        "histogram": [[n, c] for n, c in stats.histogram.items()],
        "derived": {
            "tag_shares": stats.tag_shares(),
            "entity_shares": stats.entity_shares(),
            "origin_shares": {
                cls: {"annotated": s.annotated, "predicted": s.predicted}
                for cls, s in stats.origin_shares().items()
            },
        },
    }
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def parse_report(text: str) -> CorpusStats:
    """Parse a JSON report back into CorpusStats (derived values are recomputed)."""
    data = json.loads(text)
    length = None
    if data.get("length") is not None:
        ld = data["length"]
        length = LengthStats(
            mean=float(ld["mean"]),
            std=float(ld["std"]),
            min=int(ld["min"]),
            max=int(ld["max"]),
            q25=int(ld["q25"]),
            q50=int(ld["q50"]),
            q75=int(ld["q75"]),
        )
    return CorpusStats(
        sentences=int(data["sentences"]),
        tokens=int(data["tokens"]),
        length=length,
        tag_counts={k: int(v) for k, v in data["tag_counts"].items()},
        histogram={int(n): int(c) for n, c in data["histogram"]},
        origin_counts={
            cls: {k: int(v) for k, v in counts.items()}
            for cls, counts in data["origin_counts"].items()
        },
    )


def _render_text(stats: CorpusStats) -> str:
    lines = []
    lines.append("Sentences")
    lines.append(f"  Total                 {stats.sentences:,}")
    if stats.length is not None:
        ln = stats.length
        lines.append(f"  Mean length           {ln.mean:.2f}")
        lines.append(f"  Standard deviation    {ln.std:.2f}")
        lines.append(f"  Min / Max             {ln.min} / {ln.max}")
        lines.append(f"  Quartiles (25/50/75)  {ln.q25} / {ln.q50} / {ln.q75}")
    lines.append("")
    lines.append("Tokens")
    lines.append(f"  Total                 {stats.tokens:,}")
    shares = stats.tag_shares()
    for key in TAG_KEYS:
        count = stats.tag_counts.get(key, 0)
        share = shares.get(key, 0.0)
        lines.append(f"  {_CLASS_LABELS[key]:<20}  {count:>14,}  {100 * share:6.2f}%")
    entity = stats.entity_shares()
    if entity:
        lines.append("")
        lines.append("Entity tokens")
        for key in ("PER", "ORG", "LOC"):
            if key in entity:
                count = stats.tag_counts.get(key, 0)
                lines.append(
                    f"  {_CLASS_LABELS[key]:<20}  {count:>14,}  {100 * entity[key]:6.2f}%"
                )
    origin = stats.origin_shares()
    if origin:
        lines.append("")
        lines.append("Origin (annotated / predicted)")
        for key in ("ALL", "PER", "ORG", "LOC"):
            if key in origin:
                share = origin[key]
                label = "All classes" if key == "ALL" else _CLASS_LABELS[key]
                lines.append(
                    f"  {label:<20}  {100 * share.annotated:6.2f}% / {100 * share.predicted:6.2f}%"
                )
    return "\n".join(lines) + "\n"

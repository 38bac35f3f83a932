"""Entity-level precision, recall, and F1 over BIO corpora.

Strict mode counts a predicted entity only on an exact span-and-class match.
Partial mode awards fractional credit (overlap length over gold length):
exact matches are assigned first at full credit, then remaining pairs
greedily by descending overlap, each entity used at most once.  Token
sequences of the two corpora must be identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .corpus import Corpus
from .tokenization import TaggedSentence


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean; zero when both inputs are zero."""
    if precision + recall <= 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


class TokenMismatchError(ValueError):
    """Gold and predicted corpora disagree on the token sequence."""

    def __init__(self, sentence: int, message: str):
        super().__init__(f"sentence {sentence}: {message}")
        self.sentence = sentence


@dataclass(frozen=True)
class LabeledEntity:
    """One entity occurrence: sentence index, token span, class value."""

    sentence: int
    start: int
    end: int
    entity_class: str


@dataclass(frozen=True)
class ClassScore:
    precision: float
    recall: float
    f1: float
    gold: int
    predicted: int
    matched: float  # exact-match count in strict mode, credit sum in partial


@dataclass(frozen=True)
class Score:
    mode: str
    precision: float
    recall: float
    f1: float
    gold: int
    predicted: int
    matched: float
    per_class: dict[str, ClassScore]

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "gold": self.gold,
            "predicted": self.predicted,
            "matched": self.matched,
            "per_class": {
                cls: {
                    "precision": s.precision,
                    "recall": s.recall,
                    "f1": s.f1,
                    "gold": s.gold,
                    "predicted": s.predicted,
                    "matched": s.matched,
                }
                for cls, s in self.per_class.items()
            },
        }


def extract_entities(sentences: Sequence[TaggedSentence]) -> list[LabeledEntity]:
    """Decode BIO runs into entities; token indices are sentence-relative."""
    entities: list[LabeledEntity] = []
    for si, sentence in enumerate(sentences):
        start = None
        cls = None
        for ti, token in enumerate(sentence.tokens):
            tag = token.tag
            if tag.is_begin:
                if start is not None:
                    entities.append(LabeledEntity(si, start, ti, cls))
                start = ti
                cls = tag.entity_class.value
            elif tag.is_inside:
                if start is None or tag.entity_class.value != cls:
                    # tolerate ill-formed sequences: treat as a fresh entity
                    if start is not None:
                        entities.append(LabeledEntity(si, start, ti, cls))
                    start = ti
                    cls = tag.entity_class.value
            else:
                if start is not None:
                    entities.append(LabeledEntity(si, start, ti, cls))
                    start = None
                    cls = None
        if start is not None:
            entities.append(LabeledEntity(si, start, len(sentence.tokens), cls))
    return entities


def _sentences(corpus: Union[Corpus, Sequence[TaggedSentence]]) -> Sequence[TaggedSentence]:
    return corpus.sentences if isinstance(corpus, Corpus) else corpus


def _check_tokens(gold: Sequence[TaggedSentence], pred: Sequence[TaggedSentence]) -> None:
    if len(gold) != len(pred):
        raise TokenMismatchError(
            min(len(gold), len(pred)),
            f"sentence counts differ: {len(gold)} vs {len(pred)}",
        )
    for si, (g, p) in enumerate(zip(gold, pred)):
        if len(g.tokens) != len(p.tokens):
            raise TokenMismatchError(
                si, f"token counts differ: {len(g.tokens)} vs {len(p.tokens)}"
            )
        for ti, (gt, pt) in enumerate(zip(g.tokens, p.tokens)):
            if gt.text != pt.text:
                raise TokenMismatchError(
                    si, f"token {ti} differs: {gt.text!r} vs {pt.text!r}"
                )


def _prf(matched: float, predicted: int, gold: int) -> tuple[float, float, float]:
    if predicted == 0 and gold == 0:
        return 1.0, 1.0, 1.0
    precision = matched / predicted if predicted else 0.0
    recall = matched / gold if gold else 0.0
    return precision, recall, f1_score(precision, recall)


def _strict_matched(golds: list[LabeledEntity], preds: list[LabeledEntity]) -> float:
    return float(len(set(golds) & set(preds)))


def _partial_matched(golds: list[LabeledEntity], preds: list[LabeledEntity]) -> float:
    gold_set = set(golds)
    pred_set = set(preds)
    exact = gold_set & pred_set
    credit = float(len(exact))
    free_golds = [(i, g) for i, g in enumerate(golds) if g not in exact]
    free_preds = [(i, p) for i, p in enumerate(preds) if p not in exact]
    candidates = []
    for pi, p in free_preds:
        for gi, g in free_golds:
            if p.sentence != g.sentence:
                continue
            overlap = min(p.end, g.end) - max(p.start, g.start)
            if overlap <= 0:
                continue
            candidates.append((-(overlap / (g.end - g.start)), pi, gi))
    candidates.sort()
    used_p: set[int] = set()
    used_g: set[int] = set()
    for neg_credit, pi, gi in candidates:
        if pi in used_p or gi in used_g:
            continue
        used_p.add(pi)
        used_g.add(gi)
        credit += -neg_credit
    return credit


def score(
    gold: Union[Corpus, Sequence[TaggedSentence]],
    pred: Union[Corpus, Sequence[TaggedSentence]],
    mode: str = "strict",
) -> Score:
    """Score pred against gold; micro-averaged totals plus per-class scores.

    Raises TokenMismatchError when the corpora disagree on tokens, and
    ValueError for an unknown mode.
    """
    if mode not in ("strict", "partial"):
        raise ValueError(f"unknown scoring mode: {mode!r}")
    gold_sentences = _sentences(gold)
    pred_sentences = _sentences(pred)
    _check_tokens(gold_sentences, pred_sentences)
    gold_entities = extract_entities(gold_sentences)
    pred_entities = extract_entities(pred_sentences)
    matcher = _strict_matched if mode == "strict" else _partial_matched

    classes = sorted(
        {e.entity_class for e in gold_entities} | {e.entity_class for e in pred_entities}
    )
    per_class: dict[str, ClassScore] = {}
    total_matched = 0.0
    for cls in classes:
        golds = [e for e in gold_entities if e.entity_class == cls]
        preds = [e for e in pred_entities if e.entity_class == cls]
        matched = matcher(golds, preds)
        precision, recall, f1 = _prf(matched, len(preds), len(golds))
        per_class[cls] = ClassScore(
            precision, recall, f1, len(golds), len(preds), matched
        )
        total_matched += matched
    precision, recall, f1 = _prf(total_matched, len(pred_entities), len(gold_entities))
    return Score(
        mode=mode,
        precision=precision,
        recall=recall,
        f1=f1,
        gold=len(gold_entities),
        predicted=len(pred_entities),
        matched=total_matched,
        per_class=per_class,
    )

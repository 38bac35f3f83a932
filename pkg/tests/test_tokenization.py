"""Sentence splitting, tokenization, repairs, and BIO projection."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from silverner.catalog import EntityClass
from silverner.mentions import Mention, Origin
from silverner.spans import Span
from silverner.tokenization import (
    AlignmentError,
    BioTag,
    SentenceSpan,
    TokenSpan,
    default_abbreviations,
    load_abbreviations,
    project_bio,
    repair_cross_sentence,
    repair_subword,
    split_sentences,
    split_words,
)


def mention(start, end, cls="LOC", origin=Origin.ANNOTATED):
    return Mention(Span(start, end), EntityClass(cls), origin)


def sentence_texts(text):
    return [text[s.span.start : s.span.end] for s in split_sentences(text)]


class TestSplitSentences:
    def test_terminal_before_uppercase(self):
        text = "John Smith travelled to Rio de Janeiro. Visited Copacabana."
        spans = [(s.span.start, s.span.end) for s in split_sentences(text)]
        assert spans == [(0, 39), (40, 59)]

    def test_terminal_before_digit(self):
        assert sentence_texts("Chegou em 1947. 1948 foi pior.") == [
            "Chegou em 1947.",
            "1948 foi pior.",
        ]

    def test_exclamation_question_and_ellipsis(self):
        assert sentence_texts("Fim! Depois veio outra. E mais? Esperou... Saiu.") == [
            "Fim!",
            "Depois veio outra.",
            "E mais?",
            "Esperou...",
            "Saiu.",
        ]

    def test_closing_quote_after_terminal(self):
        assert sentence_texts('Ele disse "Vou." Depois saiu.') == [
            'Ele disse "Vou."',
            "Depois saiu.",
        ]

    def test_abbreviation_suppresses_bare_period(self):
        assert sentence_texts("O Sr. Silva chegou. Saiu depois.") == [
            "O Sr. Silva chegou.",
            "Saiu depois.",
        ]

    def test_abbreviation_matching_is_case_insensitive(self):
        assert len(split_sentences("O DR. Silva veio.")) == 1

    def test_single_letter_initial_suppresses(self):
        assert len(split_sentences("J. Smith veio aqui.")) == 1

    def test_dotted_acronym_suppresses(self):
        assert len(split_sentences("Os E.U.A. Venceram a corrida.")) == 1

    def test_lowercase_continuation_never_splits(self):
        assert len(split_sentences("isto vale, p. ex. aqui mesmo.")) == 1

    def test_paragraph_break_is_a_hard_boundary(self):
        assert sentence_texts("primeira linha\n\nsegunda linha") == [
            "primeira linha",
            "segunda linha",
        ]

    def test_single_newline_is_soft(self):
        assert sentence_texts("uma linha\noutra linha") == ["uma linha\noutra linha"]

    def test_whitespace_only_and_empty(self):
        assert split_sentences("") == []
        assert split_sentences("  \n\n \t ") == []

    def test_spans_trimmed_to_non_whitespace(self):
        spans = split_sentences("  Olá mundo.  ")
        assert [(s.span.start, s.span.end) for s in spans] == [(2, 12)]

    @settings(max_examples=200, deadline=None)
    @given(st.text(alphabet="aA .!?\n…«»\"'", max_size=80))
    def test_spans_partition_non_whitespace(self, text):
        spans = [s.span for s in split_sentences(text)]
        for span in spans:
            assert not text[span.start].isspace()
            assert not text[span.end - 1].isspace()
        for a, b in zip(spans, spans[1:]):
            assert a.end <= b.start
        covered = set()
        for span in spans:
            covered.update(range(span.start, span.end))
        for i, ch in enumerate(text):
            if not ch.isspace():
                assert i in covered


def tokens_of(text, mentions=()):
    spans = split_sentences(text)
    assert len(spans) == 1
    return [t.text for t in split_words(spans[0], text, mentions).tokens]


class TestSplitWords:
    def test_edge_punctuation_peeled(self):
        assert tokens_of("(Ele veio...)") == ["(", "Ele", "veio", "...", ")"]

    def test_inner_hyphen_kept(self):
        assert tokens_of("guarda-chuva azul") == ["guarda-chuva", "azul"]

    def test_abbreviation_keeps_dot(self):
        assert tokens_of("O Sr. Silva") == ["O", "Sr.", "Silva"]

    def test_initial_keeps_dot(self):
        assert tokens_of("J. Smith veio") == ["J.", "Smith", "veio"]

    def test_acronym_keeps_dots(self):
        assert tokens_of("Os E.U.A. venceram") == ["Os", "E.U.A.", "venceram"]

    def test_plain_word_loses_final_dot(self):
        assert tokens_of("Chegou em 1947.") == ["Chegou", "em", "1947", "."]

    def test_unicode_ellipsis_is_peeled(self):
        assert tokens_of("esperou…") == ["esperou", "…"]

    def test_mention_span_suppresses_peeling(self):
        text = "ver (Rio) hoje"
        assert tokens_of(text) == ["ver", "(", "Rio", ")", "hoje"]
        assert tokens_of(text, [mention(4, 9)]) == ["ver", "(Rio)", "hoje"]

    def test_mention_edges_cut_the_run(self):
        text = "ver (Rio) hoje"
        got = tokens_of(text, [mention(5, 8)])
        assert got == ["ver", "(", "Rio", ")", "hoje"]

    def test_mention_inside_keeps_whitespace_splits(self):
        text = "o Rio de Janeiro fica"
        got = tokens_of(text, [mention(2, 16)])
        assert got == ["o", "Rio", "de", "Janeiro", "fica"]

    @settings(max_examples=200, deadline=None)
    @given(st.text(alphabet="ab (),.!é ", min_size=1, max_size=60))
    def test_tokens_partition_sentence_non_whitespace(self, text):
        for sentence in split_sentences(text):
            tokens = split_words(sentence, text).tokens
            pos = sentence.span.start
            for tok in tokens:
                assert tok.span.start >= pos
                assert tok.span.end <= sentence.span.end
                assert text[tok.span.start : tok.span.end] == tok.text
                pos = tok.span.end
            covered = set()
            for tok in tokens:
                covered.update(range(tok.span.start, tok.span.end))
            for i in range(sentence.span.start, sentence.span.end):
                if not text[i].isspace():
                    assert i in covered


class TestRepairCrossSentence:
    def test_contained_mentions_change_nothing(self):
        sentences = split_sentences("A B foi. C veio.")
        out = repair_cross_sentence(sentences, [mention(0, 3)])
        assert out == sentences

    def test_crossing_mention_merges_two_sentences(self):
        text = "Um rato veio. Saiu logo. Fim claro."
        sentences = split_sentences(text)
        assert len(sentences) == 3
        out = repair_cross_sentence(sentences, [mention(8, 17)])
        assert [(s.span.start, s.span.end) for s in out] == [(0, 24), (25, 35)]

    def test_transitive_chains_merge_once(self):
        text = "Um rato veio. Saiu logo. Fim claro."
        sentences = split_sentences(text)
        out = repair_cross_sentence(sentences, [mention(8, 17), mention(19, 27)])
        assert [(s.span.start, s.span.end) for s in out] == [(0, 35)]

    def test_tokens_concatenate_in_order(self):
        text = "Um rato veio. Saiu logo."
        sentences = [split_words(s, text) for s in split_sentences(text)]
        out = repair_cross_sentence(sentences, [mention(8, 17)])
        assert [t.text for t in out[0].tokens] == [
            "Um", "rato", "veio", ".", "Saiu", "logo", ".",
        ]


class TestRepairSubword:
    def test_split_at_mention_boundary_inside_token(self):
        tokens = [TokenSpan(Span(0, 9), "metrô-Rio")]
        out = repair_subword(tokens, [mention(6, 9)])
        assert [(t.span.start, t.span.end, t.text) for t in out] == [
            (0, 6, "metrô-"),
            (6, 9, "Rio"),
        ]

    def test_touching_fragments_inside_mention_merge(self):
        tokens = [
            TokenSpan(Span(4, 5), "("),
            TokenSpan(Span(5, 8), "Rio"),
            TokenSpan(Span(8, 9), ")"),
        ]
        out = repair_subword(tokens, [mention(4, 9)])
        assert [(t.span.start, t.span.end, t.text) for t in out] == [(4, 9, "(Rio)")]

    def test_split_and_merge_combined(self):
        tokens = [TokenSpan(Span(0, 7), "x(Rio)y")]
        out = repair_subword(tokens, [mention(1, 6)])
        assert [t.text for t in out] == ["x", "(Rio)", "y"]

    def test_fragments_separated_by_whitespace_stay_apart(self):
        tokens = [TokenSpan(Span(0, 3), "Rio"), TokenSpan(Span(4, 6), "de")]
        out = repair_subword(tokens, [mention(0, 6)])
        assert [t.text for t in out] == ["Rio", "de"]

    def test_no_mentions_is_identity(self):
        tokens = [TokenSpan(Span(0, 3), "abc")]
        assert repair_subword(tokens, []) == tokens

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_character_coverage_preserved(self, data):
        text = data.draw(st.text(alphabet="abc-é", min_size=1, max_size=30))
        # carve the line into tokens at random cut points
        cuts = sorted(
            data.draw(st.sets(st.integers(1, max(1, len(text) - 1)), max_size=5))
        )
        edges = [0] + [c for c in cuts if c < len(text)] + [len(text)]
        tokens = [
            TokenSpan(Span(x, y), text[x:y]) for x, y in zip(edges, edges[1:]) if x < y
        ]
        lo = data.draw(st.integers(0, len(text) - 1))
        hi = data.draw(st.integers(lo + 1, len(text)))
        out = repair_subword(tokens, [mention(lo, hi)])
        assert "".join(t.text for t in out) == text
        assert all(t.span.start < t.span.end for t in out)
        for a, b in zip(out, out[1:]):
            assert a.span.end == b.span.start


class TestProjectBio:
    def build(self, text, mentions):
        sentences = [split_words(s, text, mentions) for s in split_sentences(text)]
        return project_bio(sentences, mentions)

    def test_tags_and_origins(self):
        text = "John Smith viu Copacabana."
        tagged = self.build(
            text,
            [mention(0, 10, "PER"), mention(15, 25, "LOC", Origin.PREDICTED)],
        )
        tokens = tagged[0].tokens
        assert [(t.text, t.tag, t.origin) for t in tokens] == [
            ("John", BioTag.B_PER, Origin.ANNOTATED),
            ("Smith", BioTag.I_PER, Origin.ANNOTATED),
            ("viu", BioTag.O, None),
            ("Copacabana", BioTag.B_LOC, Origin.PREDICTED),
            (".", BioTag.O, None),
        ]

    def test_multi_token_mention_with_gaps_tiles(self):
        text = "o Rio de Janeiro fica"
        tagged = self.build(text, [mention(2, 16)])
        assert [t.tag for t in tagged[0].tokens] == [
            BioTag.O,
            BioTag.B_LOC,
            BioTag.I_LOC,
            BioTag.I_LOC,
            BioTag.O,
        ]

    def test_mention_outside_sentences_raises(self):
        text = "uma frase"
        sentences = [split_words(s, text) for s in split_sentences(text)]
        with pytest.raises(AlignmentError):
            project_bio(sentences, [mention(20, 25)])

    def test_mention_crossing_sentences_raises(self):
        text = "Um rato veio. Saiu logo."
        sentences = [split_words(s, text) for s in split_sentences(text)]
        with pytest.raises(AlignmentError):
            project_bio(sentences, [mention(8, 17)])

    def test_mention_cutting_token_raises(self):
        text = "metrópole cresce"
        sentences = [split_words(s, text) for s in split_sentences(text)]
        with pytest.raises(AlignmentError):
            project_bio(sentences, [mention(0, 5)])

    def test_sentences_without_mentions_are_all_o(self):
        text = "nada aqui."
        tagged = self.build(text, [])
        assert all(t.tag is BioTag.O for t in tagged[0].tokens)


class TestBioTag:
    def test_helpers(self):
        assert BioTag.begin(EntityClass.PER) is BioTag.B_PER
        assert BioTag.inside(EntityClass.LOC) is BioTag.I_LOC
        assert BioTag.B_ORG.entity_class is EntityClass.ORG
        assert BioTag.O.entity_class is None
        assert BioTag.B_PER.is_begin and not BioTag.B_PER.is_inside
        assert BioTag.I_PER.is_inside and not BioTag.O.is_begin


class TestAbbreviations:
    def test_default_set_has_common_entries(self):
        abbrevs = default_abbreviations()
        for entry in ("sr", "dr", "etc", "av", "prof"):
            assert entry in abbrevs, entry

    def test_load_strips_dots_and_lowercases(self, tmp_path):
        path = tmp_path / "ab.txt"
        path.write_text("# comment\nSr.\nENG\n\n  pág.  \n", encoding="utf-8")
        assert load_abbreviations(path) == frozenset({"sr", "eng", "pág"})

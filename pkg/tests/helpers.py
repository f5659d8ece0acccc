"""Shared builders for the test suite."""

from functools import lru_cache
from pathlib import Path

from semdrift import (ConceptMap, CorpusStratum, Document, FrequencyTable, SentimentLexicon,
                      TranslationKind, filler_vocab, load_concept_map, load_lexicon_sources,
                      merge_disjoint)

DATA = Path(__file__).parent / "data"


def make_stratum(lemmas, language="en", kind=TranslationKind.SOURCE,
                 group_keys=None, doc_id="doc-1") -> CorpusStratum:
    doc = Document(doc_id, " ".join(lemmas), tuple(lemmas))
    return CorpusStratum(language, kind, dict(group_keys or {}), [doc])


@lru_cache(maxsize=1)
def fixture_lexicons() -> tuple[SentimentLexicon, SentimentLexicon]:
    """(ru, en) lexicons merged from the committed fixture files."""
    ru = merge_disjoint(
        load_lexicon_sources([DATA / "lexicons/lex_ru_core.tsv"], "ru"),
        language_code="ru")
    en = merge_disjoint(
        load_lexicon_sources(
            [DATA / "lexicons/lex_en_core.tsv", DATA / "lexicons/lex_en_extra.tsv"], "en"),
        language_code="en")
    return ru, en


@lru_cache(maxsize=1)
def fixture_concept_map() -> ConceptMap:
    ru, en = fixture_lexicons()
    return load_concept_map(DATA / "concepts.tsv", ru, en)


def reference_table_en(filler_size: int = 200) -> FrequencyTable:
    """English reference covering every target variant plus the synth filler vocab.

    Per-million values sum to exactly 1,000,000 so that sampling from the
    table's proportions reproduces its own expected percentages.
    """
    cmap = fixture_concept_map()
    variants = sorted({lem for c in cmap.concepts.values() for lem in c.target_lemmas})
    freqs = {}
    for i, lemma in enumerate(variants):
        freqs[lemma] = 500.0 + 130.0 * i
    filler = filler_vocab("en", filler_size)
    remainder = 1_000_000.0 - sum(freqs.values())
    for lemma in filler:
        freqs[lemma] = remainder / len(filler)
    return FrequencyTable("en", freqs, "synthetic reference")

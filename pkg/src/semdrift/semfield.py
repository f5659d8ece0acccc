"""Semantic-field width: how many synonym variants of each concept a stratum uses.

A width ratio below 1 against a baseline stratum signals narrowing (fewer
variants carrying the same concepts); above 1 signals widening.
"""

from dataclasses import dataclass

from .errors import AnalysisError, ValidationError
from .ingest import CorpusStratum, Lemma
from .lexicon import ConceptMap, SentimentClass, Side


@dataclass(frozen=True)
class VariantProfile:
    """Attested variants and token total of one concept in one stratum."""

    concept_id: str
    sentiment: SentimentClass
    attested_variants: frozenset[Lemma]
    token_total: int

    @property
    def variant_count(self) -> int:
        return len(self.attested_variants)


def variant_counts(stratum: CorpusStratum, cmap: ConceptMap,
                   side: Side) -> list[VariantProfile]:
    """Profile every concept against the stratum, including unattested ones."""
    expected_language = cmap.language_for(side)
    if stratum.language_code != expected_language:
        raise ValidationError(
            f"language mismatch: stratum is {stratum.language_code!r} but the "
            f"{side.value} side of the concept map is {expected_language!r}")
    counts = stratum.lemma_counts()
    profiles = []
    for cid in sorted(cmap.concepts):
        concept = cmap.concepts[cid]
        lemmas = concept.lemmas(side)
        attested = frozenset(lem for lem in lemmas if counts[lem] > 0)
        token_total = sum(counts[lem] for lem in lemmas)
        profiles.append(VariantProfile(cid, concept.sentiment, attested, token_total))
    return profiles


def top_k_concepts(profiles: list[VariantProfile], k: int) -> list[VariantProfile]:
    """The k concepts with the highest token totals; ties break on concept id."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    ranked = sorted(profiles, key=lambda p: (-p.token_total, p.concept_id))
    return ranked[:k]


def field_width_index(test: list[VariantProfile],
                      baseline: list[VariantProfile]) -> float:
    """Ratio of mean attested variants per concept, test over baseline.

    Only concepts attested in the baseline enter the means, so the ratio is
    defined concept-for-concept. Values below 1 signal a narrower field.
    """
    test_by_id = {p.concept_id: p for p in test}
    if set(test_by_id) != {p.concept_id for p in baseline}:
        raise ValidationError("profiles cover different concept sets")
    anchored = [p for p in baseline if p.variant_count > 0]
    if not anchored:
        raise AnalysisError("empty baseline field")
    mean_baseline = sum(p.variant_count for p in anchored) / len(anchored)
    mean_test = sum(test_by_id[p.concept_id].variant_count for p in anchored) / len(anchored)
    return mean_test / mean_baseline


@dataclass(frozen=True)
class FieldWidthReport:
    """Width summary for one stratum relative to a baseline."""

    stratum_label: str
    mean_variants_per_concept: float | None
    concepts_ranked: tuple[VariantProfile, ...]
    width_ratio_vs_baseline: float
    excluded_concepts: tuple[str, ...]


def field_width_report(stratum_label: str, test: list[VariantProfile],
                       baseline: list[VariantProfile]) -> FieldWidthReport:
    """Bundle the width index with per-concept rankings and exclusions.

    `excluded_concepts` lists concepts the test stratum attests but the
    baseline does not; they cannot enter the ratio.
    """
    ratio = field_width_index(test, baseline)
    attested = [p for p in test if p.variant_count > 0]
    mean_variants = sum(p.variant_count for p in attested) / len(attested) if attested else None
    baseline_attested = {p.concept_id for p in baseline if p.variant_count > 0}
    excluded = tuple(sorted(
        p.concept_id for p in attested if p.concept_id not in baseline_attested))
    return FieldWidthReport(
        stratum_label=stratum_label,
        mean_variants_per_concept=mean_variants,
        concepts_ranked=tuple(top_k_concepts(test, len(test))) if test else (),
        width_ratio_vs_baseline=ratio,
        excluded_concepts=excluded,
    )

"""Frequency statistics per stratum and sentiment class.

Observed frequency is a lemma's token count as a percent of the stratum's
total words. Deviations compare that against a reference table of per-million
frequencies from a general-purpose corpus (percent = per-million / 10,000).
"""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from math import isfinite
from pathlib import Path
from statistics import median

from .errors import AnalysisError, IngestError, ValidationError
from .ingest import CorpusStratum, Lemma
from .lexicon import SentimentClass, SentimentLexicon

PER_MILLION_TO_PCT = 1.0 / 10_000.0


@dataclass(frozen=True)
class FrequencyTable:
    """Reference per-million lemma frequencies for one language."""

    language_code: str
    freqs: dict[Lemma, float]
    corpus_name: str = ""

    def __post_init__(self):
        for lemma, pm in self.freqs.items():
            if not isfinite(pm) or pm < 0:
                raise ValidationError(f"invalid frequency for {lemma!r}: {pm}")

    @classmethod
    def load(cls, path, language_code: str) -> "FrequencyTable":
        """Read a TSV of `lemma<TAB>per_million`; the first `#` comment names the corpus."""
        p = Path(path)
        if not p.exists():
            raise IngestError(f"file not found: {path}")
        freqs: dict[str, float] = {}
        corpus_name = ""
        for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if not corpus_name:
                    corpus_name = line.lstrip("#").strip()
                    if corpus_name.lower().startswith("corpus:"):
                        corpus_name = corpus_name[len("corpus:"):].strip()
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                raise ValidationError(f"{path}:{lineno}: expected 'lemma<TAB>per_million'")
            try:
                pm = float(parts[1])
            except ValueError:
                raise ValidationError(
                    f"{path}:{lineno}: not a number: {parts[1]!r}") from None
            freqs[parts[0]] = pm
        return cls(language_code, freqs, corpus_name)

    def lookup(self, lemma: Lemma) -> tuple[float, bool]:
        """Per-million frequency and a coverage flag; absent lemmas are (0.0, False)."""
        if lemma in self.freqs:
            return self.freqs[lemma], True
        return 0.0, False


class DeviationMode(str, Enum):
    DIFFERENCE = "difference"
    RATIO = "ratio"


def _check_language(stratum: CorpusStratum, other_language: str, what: str) -> None:
    if stratum.language_code != other_language:
        raise ValidationError(
            f"language mismatch: stratum is {stratum.language_code!r} but "
            f"{what} is {other_language!r}")


def _class_counts(stratum: CorpusStratum,
                  lexicon: SentimentLexicon) -> dict[SentimentClass, Counter]:
    counts = stratum.lemma_counts()
    per_class: dict[SentimentClass, Counter] = {}
    for cls in SentimentClass:
        members = lexicon.lists[cls]
        per_class[cls] = Counter({lem: n for lem, n in counts.items() if lem in members})
    return per_class


def unique_lemma_counts(stratum: CorpusStratum,
                        lexicon: SentimentLexicon) -> dict[SentimentClass, int]:
    """Distinct stratum lemmas per sentiment class; token multiplicity is ignored."""
    _check_language(stratum, lexicon.language_code, "lexicon")
    return {cls: len(c) for cls, c in _class_counts(stratum, lexicon).items()}


def observed_frequency(stratum: CorpusStratum, lemma: Lemma) -> float:
    """Token count of `lemma` as a percent of the stratum's total words."""
    total = stratum.total_word_count
    if total == 0:
        raise AnalysisError("empty stratum")
    return 100.0 * stratum.lemma_counts()[lemma] / total


@dataclass(frozen=True)
class TokensPerLemma:
    sentiment: SentimentClass
    mean: float | None
    histogram: dict[int, int] = field(default_factory=dict)


def tokens_per_lemma(stratum: CorpusStratum,
                     lexicon: SentimentLexicon) -> dict[SentimentClass, TokensPerLemma]:
    """Mean tokens per distinct attested lemma, plus the count histogram, per class.

    A class with no attested lemmas reports mean None rather than 0.
    """
    _check_language(stratum, lexicon.language_code, "lexicon")
    out: dict[SentimentClass, TokensPerLemma] = {}
    for cls, counter in _class_counts(stratum, lexicon).items():
        if counter:
            mean = sum(counter.values()) / len(counter)
        else:
            mean = None
        histogram = dict(Counter(counter.values()))
        out[cls] = TokensPerLemma(cls, mean, histogram)
    return out


@dataclass(frozen=True)
class ClassDeviation:
    """Observed-vs-expected frequency summary for one sentiment class."""

    sentiment: SentimentClass
    mode: DeviationMode
    observed_pct: dict[Lemma, float]
    expected_pct: dict[Lemma, float]
    per_lemma: dict[Lemma, float]
    uncovered: tuple[Lemma, ...]
    mean_deviation: float | None
    median_deviation: float | None


def expected_deviation(stratum: CorpusStratum, lexicon: SentimentLexicon,
                       ref: FrequencyTable,
                       mode: DeviationMode = DeviationMode.DIFFERENCE
                       ) -> dict[SentimentClass, ClassDeviation]:
    """Per-class deviation of observed frequency from the reference expectation.

    Difference mode reports observed - expected in percent units; ratio mode
    reports observed / expected. Attested lemmas the reference does not cover
    (and, in ratio mode, covered lemmas with zero reference frequency) are
    excluded from the mean and listed under `uncovered` instead of being
    silently treated as zero.
    """
    _check_language(stratum, lexicon.language_code, "lexicon")
    _check_language(stratum, ref.language_code, "frequency table")
    total = stratum.total_word_count
    out: dict[SentimentClass, ClassDeviation] = {}
    for cls, counter in _class_counts(stratum, lexicon).items():
        observed: dict[str, float] = {}
        expected: dict[str, float] = {}
        per_lemma: dict[str, float] = {}
        uncovered: list[str] = []
        for lemma in sorted(counter):
            obs = 100.0 * counter[lemma] / total
            observed[lemma] = obs
            pm, covered = ref.lookup(lemma)
            if not covered or (mode is DeviationMode.RATIO and pm == 0.0):
                uncovered.append(lemma)
                continue
            exp = pm * PER_MILLION_TO_PCT
            expected[lemma] = exp
            per_lemma[lemma] = obs - exp if mode is DeviationMode.DIFFERENCE else obs / exp
        values = list(per_lemma.values())
        out[cls] = ClassDeviation(
            sentiment=cls,
            mode=mode,
            observed_pct=observed,
            expected_pct=expected,
            per_lemma=per_lemma,
            uncovered=tuple(uncovered),
            mean_deviation=sum(values) / len(values) if values else None,
            median_deviation=median(values) if values else None,
        )
    return out


@dataclass(frozen=True)
class ClassFrequencyStats:
    """Headline per-class numbers for one stratum."""

    sentiment: SentimentClass
    unique_lemma_count: int
    token_count: int
    mean_tokens_per_lemma: float | None
    observed_freq_pct: dict[Lemma, float]
    expected_deviation: dict[Lemma, float] | None = None


def sentiment_stats(stratum: CorpusStratum, lexicon: SentimentLexicon,
                    ref: FrequencyTable | None = None,
                    mode: DeviationMode = DeviationMode.DIFFERENCE,
                    ) -> dict[SentimentClass, ClassFrequencyStats]:
    """Unique counts, token counts, tokens-per-lemma, and observed percent per class.

    With a reference table the per-lemma expected deviations are attached too.
    """
    _check_language(stratum, lexicon.language_code, "lexicon")
    total = stratum.total_word_count
    deviations = expected_deviation(stratum, lexicon, ref, mode) if ref else None
    out: dict[SentimentClass, ClassFrequencyStats] = {}
    for cls, counter in _class_counts(stratum, lexicon).items():
        tokens = sum(counter.values())
        uniques = len(counter)
        out[cls] = ClassFrequencyStats(
            sentiment=cls,
            unique_lemma_count=uniques,
            token_count=tokens,
            mean_tokens_per_lemma=tokens / uniques if uniques else None,
            observed_freq_pct={lem: 100.0 * n / total for lem, n in sorted(counter.items())},
            expected_deviation=dict(deviations[cls].per_lemma) if deviations else None,
        )
    return out

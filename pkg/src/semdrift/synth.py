"""Synthetic corpora and parameterized translation channels for pipeline validation.

The channel model works at the lemma-emission level: every concept token in
the source is re-emitted as a target-side variant of the same concept. A
machine-style channel concentrates emissions on the reference-most-frequent
variants and never attests more variants than the source did (hard cap); a
human-style channel spreads emissions over more variants, up to the concept's
full synonym set. An optional norm pull replaces each emitted token, with the
configured probability, by an independent draw from the target reference
distribution, so at pull 1.0 the output matches target-language norms and the
concept-total conservation guarantee only holds at pull 0.
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import ValidationError
from .freq import FrequencyTable
from .ingest import DEFAULT_PROFILES, CorpusStratum, Document, TranslationKind
from .lexicon import ConceptMap, Side

DEFAULT_MACHINE_FACTOR = 0.4
DEFAULT_HUMAN_FACTOR = 1.3
# target/source word-count ratio typical of ru->en translation
DEFAULT_LENGTH_INFLATION = 1.19

_ASCII_LOWER = "abcdefghijklmnopqrstuvwxyz"


class ChannelKind(str, Enum):
    MACHINE = "machine"
    HUMAN = "human"


@dataclass(frozen=True)
class ChannelParams:
    """Translation-channel knobs.

    `narrow_widen_factor` scales the expected number of attested variants per
    concept (output over input); `norm_pull` in [0, 1] is the per-token
    probability of resampling from the target reference distribution;
    `length_inflation` is the output/input word-count ratio.
    """

    kind: ChannelKind
    narrow_widen_factor: float
    norm_pull: float = 0.0
    length_inflation: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not self.narrow_widen_factor > 0:
            raise ValidationError(
                f"narrow_widen_factor must be > 0, got {self.narrow_widen_factor}")
        if not 0.0 <= self.norm_pull <= 1.0:
            raise ValidationError(f"norm_pull must be in [0, 1], got {self.norm_pull}")
        if not self.length_inflation > 0:
            raise ValidationError(
                f"length_inflation must be > 0, got {self.length_inflation}")

    @classmethod
    def machine(cls, seed: int = 0, **overrides) -> "ChannelParams":
        params = cls(ChannelKind.MACHINE, DEFAULT_MACHINE_FACTOR,
                     length_inflation=DEFAULT_LENGTH_INFLATION, seed=seed)
        return replace(params, **overrides) if overrides else params

    @classmethod
    def human(cls, seed: int = 0, **overrides) -> "ChannelParams":
        params = cls(ChannelKind.HUMAN, DEFAULT_HUMAN_FACTOR,
                     length_inflation=DEFAULT_LENGTH_INFLATION, seed=seed)
        return replace(params, **overrides) if overrides else params


def filler_vocab(language_code: str, size: int) -> tuple[str, ...]:
    """Deterministic neutral filler lemmas spelled in the language's own letters.

    Words are double-initial-letter prefixed base-N codes ("aaaaab", ...), so
    they tokenize cleanly under the language profile and will not collide with
    real lexicon lemmas.
    """
    if size < 0:
        raise ValidationError(f"size must be >= 0, got {size}")
    profile = DEFAULT_PROFILES.get(language_code)
    alphabet = _ASCII_LOWER
    if profile is not None:
        letters = [chr(cp) for lo, hi in profile.letter_classes
                   for cp in range(lo, hi + 1) if chr(cp).islower()]
        if len(letters) >= 2:
            alphabet = "".join(letters[:26])
    base = len(alphabet)
    width = 4
    while base ** width < max(size, 1):
        width += 1
    words = []
    for i in range(size):
        digits = []
        n = i
        for _ in range(width):
            digits.append(alphabet[n % base])
            n //= base
        words.append(alphabet[0] * 2 + "".join(reversed(digits)))
    return tuple(words)


def _randomized_round(x: float, rng: np.random.Generator) -> int:
    base = math.floor(x)
    frac = x - base
    if frac > 0.0 and rng.random() < frac:
        base += 1
    return base


def generate_source(cmap: ConceptMap, target_words: int,
                    concept_budget: dict[str, float], seed: int, *,
                    concept_density: float = 0.2,
                    filler_size: int = 200) -> CorpusStratum:
    """Sample a source-language stratum of exactly `target_words` lemmas.

    A `concept_density` share of the tokens is drawn from concepts in
    proportion to `concept_budget` (uniform over each concept's source
    variants); the rest is uniform neutral filler. Concepts missing from the
    budget get weight zero; an all-zero budget yields pure filler. Output is
    deterministic per seed.
    """
    if not cmap.concepts:
        raise ValidationError("empty concept map")
    if target_words <= 0:
        raise ValidationError(f"target_words must be > 0, got {target_words}")
    if not 0.0 <= concept_density <= 1.0:
        raise ValidationError(f"concept_density must be in [0, 1], got {concept_density}")
    if filler_size < 1:
        raise ValidationError(f"filler_size must be >= 1, got {filler_size}")
    unknown = sorted(set(concept_budget) - set(cmap.concepts))
    if unknown:
        raise ValidationError(f"unknown concept id in budget: {unknown[0]!r}")
    if any(w < 0 for w in concept_budget.values()):
        raise ValidationError("concept weights must be >= 0")

    rng = np.random.default_rng(seed)
    active = sorted(cid for cid, w in concept_budget.items() if w > 0)
    total_weight = sum(concept_budget[cid] for cid in active)
    n_concept = round(target_words * concept_density) if total_weight > 0 else 0
    n_filler = target_words - n_concept

    pieces: list[np.ndarray] = []
    if n_concept:
        probs = np.array([concept_budget[cid] for cid in active], dtype=float)
        probs /= probs.sum()
        per_concept = rng.multinomial(n_concept, probs)
        for cid, n_c in zip(active, per_concept):
            variants = np.array(cmap.concepts[cid].source_lemmas, dtype=object)
            pieces.append(variants[rng.integers(0, len(variants), n_c)])
    filler = np.array(filler_vocab(cmap.source_language, filler_size), dtype=object)
    pieces.append(filler[rng.integers(0, filler_size, n_filler)])

    lemmas = np.concatenate(pieces)
    rng.shuffle(lemmas)
    doc = Document(f"synthetic-source-seed{seed}", " ".join(lemmas), tuple(lemmas))
    return CorpusStratum(cmap.source_language, TranslationKind.SOURCE,
                         {"origin": "synthetic", "seed": str(seed)}, [doc])


@dataclass
class _ConceptPlan:
    pool: list[str]
    extras: list[str]
    emission: dict[str, float] = field(default_factory=dict)


def _plan_concept(concept, counts, params: ChannelParams, ref: FrequencyTable,
                  rng: np.random.Generator) -> _ConceptPlan | None:
    src, tgt = concept.source_lemmas, concept.target_lemmas
    attested = [(i, v) for i, v in enumerate(src) if counts[v] > 0]
    if not attested:
        return None
    n_in = sum(counts[v] for _, v in attested)
    v_in = len(attested)

    budget = _randomized_round(params.narrow_widen_factor * v_in, rng)
    if params.kind is ChannelKind.MACHINE:
        budget = min(budget, v_in)       # hard cap: never widen the field
    budget = max(1, min(budget, len(tgt)))

    def ref_order(lemma: str):
        return (-ref.lookup(lemma)[0], lemma)

    images = sorted({tgt[i % len(tgt)] for i, _ in attested}, key=ref_order)
    if budget <= len(images):
        pool, extras = images[:budget], []
    else:
        pool = images
        remaining = sorted((t for t in tgt if t not in set(images)), key=ref_order)
        extras = remaining[:budget - len(images)]
    pool_set = set(pool)
    extra_share = len(extras) / (len(pool) + len(extras)) if extras else 0.0

    emission: dict[str, float] = {}
    for i, v in attested:
        target = tgt[i % len(tgt)]
        if target not in pool_set:
            target = pool[0]
        emission[target] = emission.get(target, 0.0) + (1.0 - extra_share) * counts[v] / n_in
    for t in extras:
        emission[t] = emission.get(t, 0.0) + extra_share / len(extras)
    return _ConceptPlan(pool, extras, emission)


def apply_channel(source: CorpusStratum, cmap: ConceptMap, params: ChannelParams,
                  target_ref: FrequencyTable) -> CorpusStratum:
    """Re-emit a source stratum through the translation channel.

    Concept tokens map to target-side variants of the same concept (position
    in the concept file aligns the default rendering); non-concept tokens map
    rank-for-rank onto target filler lemmas. Per-concept output token totals
    are round(input x length_inflation) before the norm pull is applied.
    """
    if source.language_code != cmap.source_language:
        raise ValidationError(
            f"language mismatch: source stratum is {source.language_code!r} but the "
            f"concept map's source side is {cmap.source_language!r}")
    if target_ref.language_code != cmap.target_language:
        raise ValidationError(
            f"language mismatch: frequency table is {target_ref.language_code!r} but "
            f"the concept map's target side is {cmap.target_language!r}")

    rng = np.random.default_rng(params.seed)
    counts = source.lemma_counts()
    inflation = params.length_inflation

    pieces: list[np.ndarray] = []
    plans: dict[str, _ConceptPlan] = {}
    for cid in sorted(cmap.concepts):
        concept = cmap.concepts[cid]
        plan = _plan_concept(concept, counts, params, target_ref, rng)
        if plan is None:
            continue
        plans[cid] = plan
        n_in = sum(counts[v] for v in concept.source_lemmas)
        n_out = round(n_in * inflation)
        if n_out:
            targets = sorted(plan.emission)
            probs = np.array([plan.emission[t] for t in targets])
            probs /= probs.sum()
            pieces.append(rng.choice(np.array(targets, dtype=object), n_out, p=probs))

    source_concept_lemmas = cmap.lemmas(Side.SOURCE)
    nonconcept = {lem: n for lem, n in counts.items() if lem not in source_concept_lemmas}
    if nonconcept:
        distinct = sorted(nonconcept)
        target_fill = filler_vocab(cmap.target_language, len(distinct))
        n_in = sum(nonconcept.values())
        n_out = round(n_in * inflation)
        if n_out:
            probs = np.array([nonconcept[lem] for lem in distinct], dtype=float)
            probs /= probs.sum()
            pieces.append(rng.choice(np.array(target_fill, dtype=object), n_out, p=probs))

    output = np.concatenate(pieces) if pieces else np.array([], dtype=object)

    if params.norm_pull > 0.0 and output.size:
        remap = _machine_remap(cmap, plans, target_ref) \
            if params.kind is ChannelKind.MACHINE else {}
        ref_lemmas = sorted(target_ref.freqs)
        weights = np.array([target_ref.freqs[lem] for lem in ref_lemmas], dtype=float)
        if weights.sum() <= 0.0:
            raise ValidationError("norm_pull requires a frequency table with positive mass")
        weights /= weights.sum()
        mask = rng.random(output.size) < params.norm_pull
        n_replace = int(mask.sum())
        if n_replace:
            draws = rng.choice(np.array(ref_lemmas, dtype=object), n_replace, p=weights)
            resolved = np.array(
                [remap.get(lem, lem) for lem in draws], dtype=object)
            keep = np.array([lem is None for lem in resolved])
            positions = np.flatnonzero(mask)
            apply_at = positions[~keep]
            output[apply_at] = resolved[~keep]

    rng.shuffle(output)
    kind = TranslationKind(params.kind.value)
    doc = Document(f"synthetic-{params.kind.value}-seed{params.seed}",
                   " ".join(output), tuple(output))
    group_keys = {**source.group_keys, "channel": params.kind.value}
    return CorpusStratum(cmap.target_language, kind, group_keys, [doc])


def _machine_remap(cmap: ConceptMap, plans: dict[str, "_ConceptPlan"],
                   ref: FrequencyTable) -> dict[str, str | None]:
    """Where norm-pull draws may land on capped-out variants, redirect them.

    Variants outside an attested concept's pool go to the pool's top variant;
    variants of concepts the source never attested must not appear at all, so
    they redirect to the reference's most frequent non-concept lemma (or are
    dropped if the reference has none).
    """
    concept_targets = cmap.lemmas(Side.TARGET)
    fallback = None
    best = -1.0
    for lemma, pm in ref.freqs.items():
        if lemma not in concept_targets and pm > best:
            fallback, best = lemma, pm
    remap: dict[str, str | None] = {}
    for cid in sorted(cmap.concepts):
        tgt = cmap.concepts[cid].target_lemmas
        plan = plans.get(cid)
        if plan is None:
            for t in tgt:
                remap[t] = fallback
        else:
            pool_set = set(plan.pool)
            for t in tgt:
                if t not in pool_set:
                    remap[t] = plan.pool[0]
    return remap

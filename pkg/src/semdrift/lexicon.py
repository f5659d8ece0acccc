"""Sentiment lexicons merged into three disjoint lists, plus the bilingual concept map.

Lexicon sources are TSV files of `lemma<TAB>class`. A lemma claimed by more
than one class is assigned to the highest-priority class so that no word can
drive two sentiment scores at once.
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import IngestError, ValidationError
from .ingest import Lemma


class SentimentClass(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    EPISTEMIC = "epistemic"


# Epistemic lists are the smallest and the easiest to drown out, so they win conflicts.
DEFAULT_PRIORITY: tuple[SentimentClass, ...] = (
    SentimentClass.EPISTEMIC, SentimentClass.NEGATIVE, SentimentClass.POSITIVE)


class Side(str, Enum):
    SOURCE = "source"
    TARGET = "target"


@dataclass(frozen=True)
class RawLexiconEntry:
    lemma: Lemma
    sentiment: SentimentClass
    source: str


def load_lexicon_sources(paths, language_code: str) -> list[RawLexiconEntry]:
    """Read raw entries from one or more lexicon TSVs, keeping duplicates.

    The source name recorded on each entry is the file stem; duplicates across
    files are preserved so the merge step can see every conflicting claim.
    """
    entries: list[RawLexiconEntry] = []
    for path in paths:
        p = Path(path)
        if not p.exists():
            raise IngestError(f"file not found: {path}")
        source = p.stem
        for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                raise ValidationError(f"{path}:{lineno}: expected 'lemma<TAB>class'")
            try:
                sentiment = SentimentClass(parts[1])
            except ValueError:
                raise ValidationError(
                    f"{path}: unknown class {parts[1]!r} at line {lineno}") from None
            entries.append(RawLexiconEntry(parts[0], sentiment, source))
    return entries


@dataclass(frozen=True)
class SentimentLexicon:
    """Three pairwise-disjoint lemma sets for one language, with per-lemma provenance."""

    language_code: str
    lists: dict[SentimentClass, frozenset[Lemma]]
    provenance: dict[Lemma, tuple[str, ...]] = field(default_factory=dict)
    attested: bool = False

    def __post_init__(self):
        lists = {cls: frozenset(self.lists.get(cls, frozenset())) for cls in SentimentClass}
        object.__setattr__(self, "lists", lists)
        classes = list(SentimentClass)
        for i, a in enumerate(classes):
            for b in classes[i + 1:]:
                overlap = lists[a] & lists[b]
                if overlap:
                    raise ValidationError(
                        f"lexicon lists not disjoint: {sorted(overlap)[0]!r} in both "
                        f"{a.value} and {b.value}")

    def class_of(self, lemma: Lemma) -> SentimentClass | None:
        for cls, members in self.lists.items():
            if lemma in members:
                return cls
        return None

    def all_lemmas(self) -> frozenset[Lemma]:
        out: frozenset[Lemma] = frozenset()
        for members in self.lists.values():
            out |= members
        return out


def find_conflicts(raws: list[RawLexiconEntry]) -> dict[Lemma, set[SentimentClass]]:
    """Lemmas claimed by more than one sentiment class across the raw entries."""
    claims: dict[Lemma, set[SentimentClass]] = {}
    for entry in raws:
        claims.setdefault(entry.lemma, set()).add(entry.sentiment)
    return {lemma: classes for lemma, classes in claims.items() if len(classes) > 1}


def merge_disjoint(raws: list[RawLexiconEntry],
                   priority: tuple[SentimentClass, ...] = DEFAULT_PRIORITY,
                   *, language_code: str = "",
                   attested: bool = False) -> SentimentLexicon:
    """Merge raw entries into disjoint lists, resolving conflicts by class priority.

    A lemma claimed by several classes goes to the earliest claimed class in
    `priority`. Provenance keeps every source that listed the lemma, including
    sources whose class lost the conflict.
    """
    if sorted(priority) != sorted(SentimentClass):
        raise ValidationError(f"priority must be a permutation of the three classes: {priority}")
    claims: dict[Lemma, set[SentimentClass]] = {}
    sources: dict[Lemma, set[str]] = {}
    for entry in raws:
        claims.setdefault(entry.lemma, set()).add(entry.sentiment)
        sources.setdefault(entry.lemma, set()).add(entry.source)
    lists: dict[SentimentClass, set[Lemma]] = {cls: set() for cls in SentimentClass}
    for lemma, claimed in claims.items():
        winner = next(cls for cls in priority if cls in claimed)
        lists[winner].add(lemma)
    return SentimentLexicon(
        language_code,
        {cls: frozenset(members) for cls, members in lists.items()},
        {lemma: tuple(sorted(srcs)) for lemma, srcs in sources.items()},
        attested=attested,
    )


@dataclass(frozen=True)
class Concept:
    """One concept: synonym lemmas on each language side, sharing a sentiment class.

    Lemma order follows the concept-map file and is meaningful: position aligns
    source variants with their default target rendering.
    """

    concept_id: str
    sentiment: SentimentClass
    source_lemmas: tuple[Lemma, ...]
    target_lemmas: tuple[Lemma, ...]

    def __post_init__(self):
        if not self.source_lemmas or not self.target_lemmas:
            raise ValidationError(f"concept {self.concept_id!r} has an empty lemma set")
        for side_name, lemmas in (("source", self.source_lemmas), ("target", self.target_lemmas)):
            if len(set(lemmas)) != len(lemmas):
                raise ValidationError(
                    f"concept {self.concept_id!r} repeats a {side_name} lemma")

    def lemmas(self, side: Side) -> tuple[Lemma, ...]:
        return self.source_lemmas if side is Side.SOURCE else self.target_lemmas


@dataclass(frozen=True)
class ConceptMap:
    """Bilingual synonym structure keyed by concept id."""

    source_language: str
    target_language: str
    concepts: dict[str, Concept] = field(default_factory=dict)

    def __post_init__(self):
        for side in Side:
            seen: dict[Lemma, str] = {}
            for cid in self.concepts:
                for lemma in self.concepts[cid].lemmas(side):
                    if lemma in seen:
                        raise ValidationError(
                            f"lemma {lemma!r} appears in two concepts on the {side.value} "
                            f"side: {seen[lemma]!r} and {cid!r}")
                    seen[lemma] = cid

    def language_for(self, side: Side) -> str:
        return self.source_language if side is Side.SOURCE else self.target_language

    def lemmas(self, side: Side) -> frozenset[Lemma]:
        out: set[Lemma] = set()
        for concept in self.concepts.values():
            out.update(concept.lemmas(side))
        return frozenset(out)

    def concept_of(self, lemma: Lemma, side: Side) -> Concept | None:
        for concept in self.concepts.values():
            if lemma in concept.lemmas(side):
                return concept
        return None


def load_concept_map(path, source_lexicon: SentimentLexicon,
                     target_lexicon: SentimentLexicon) -> ConceptMap:
    """Read a concept-map TSV and validate it against both lexicons.

    Format: `concept_id<TAB>class<TAB>src1,src2,...<TAB>tgt1,tgt2,...`.
    Every listed lemma must be in the matching lexicon under the concept's class.
    """
    p = Path(path)
    if not p.exists():
        raise IngestError(f"file not found: {path}")
    concepts: dict[str, Concept] = {}
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValidationError(
                f"{path}:{lineno}: expected 'concept_id<TAB>class<TAB>src,...<TAB>tgt,...'")
        cid, cls_label, src_field, tgt_field = parts
        try:
            sentiment = SentimentClass(cls_label)
        except ValueError:
            raise ValidationError(
                f"{path}: unknown class {cls_label!r} at line {lineno}") from None
        if cid in concepts:
            raise ValidationError(f"{path}:{lineno}: duplicate concept id {cid!r}")
        src = tuple(s for s in src_field.split(",") if s)
        tgt = tuple(s for s in tgt_field.split(",") if s)
        concept = Concept(cid, sentiment, src, tgt)
        for side, lexicon, lemmas in (
                (Side.SOURCE, source_lexicon, src), (Side.TARGET, target_lexicon, tgt)):
            for lemma in lemmas:
                found = lexicon.class_of(lemma)
                if found is None:
                    raise ValidationError(
                        f"{path}:{lineno}: lemma {lemma!r} on the {side.value} side is "
                        f"absent from the {lexicon.language_code!r} lexicon")
                if found is not sentiment:
                    raise ValidationError(
                        f"{path}:{lineno}: lemma {lemma!r} is {found.value} in the "
                        f"{lexicon.language_code!r} lexicon but concept {cid!r} is "
                        f"{sentiment.value}")
        concepts[cid] = concept
    return ConceptMap(source_lexicon.language_code, target_lexicon.language_code, concepts)

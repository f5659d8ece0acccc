"""Corpus loading: tokenization, dictionary lemmatization, and stratified organization.

Texts come in through a JSON manifest that assigns each file a language, a
translation kind, and free-form grouping keys (term, summit, author, ...).
Documents sharing all three land in the same stratum.
"""

import json
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path

from .errors import IngestError, ValidationError

Lemma = str


class TranslationKind(str, Enum):
    SOURCE = "source"
    HUMAN = "human"
    MACHINE = "machine"


@dataclass(frozen=True)
class LangProfile:
    """Per-language tokenizer settings: which code points count as word characters."""

    language_code: str
    letter_classes: tuple[tuple[int, int], ...]
    case_fold: bool = True

    def __post_init__(self):
        if not self.language_code:
            raise ValidationError("language_code must be non-empty")
        if not self.letter_classes:
            raise ValidationError("letter_classes must be non-empty")
        merged = _merge_ranges(self.letter_classes)
        object.__setattr__(self, "letter_classes", merged)
        object.__setattr__(self, "_starts", [r[0] for r in merged])

    @classmethod
    def from_letters(cls, language_code: str, letters, case_fold: bool = True) -> "LangProfile":
        """Build a profile from specs like "a-z" (range) or "äöüß" (literal characters)."""
        ranges: list[tuple[int, int]] = []
        for spec in letters:
            if len(spec) == 3 and spec[1] == "-":
                lo, hi = ord(spec[0]), ord(spec[2])
                if lo > hi:
                    raise ValidationError(f"invalid letter range: {spec!r}")
                ranges.append((lo, hi))
            elif spec:
                ranges.extend((ord(c), ord(c)) for c in spec)
            else:
                raise ValidationError("empty letter spec")
        return cls(language_code, tuple(ranges), case_fold)

    def is_word_char(self, ch: str) -> bool:
        cp = ord(ch)
        idx = bisect_right(self._starts, cp) - 1
        return idx >= 0 and cp <= self.letter_classes[idx][1]


def _merge_ranges(ranges) -> tuple[tuple[int, int], ...]:
    out: list[tuple[int, int]] = []
    for lo, hi in sorted(ranges):
        if lo > hi:
            raise ValidationError(f"invalid code point range: ({lo}, {hi})")
        if out and lo <= out[-1][1] + 1:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return tuple(out)


# "А-я" covers the contiguous upper+lower Cyrillic block; Ё/ё sit outside it.
DEFAULT_PROFILES: dict[str, LangProfile] = {
    "en": LangProfile.from_letters("en", ["A-Z", "a-z"]),
    "ru": LangProfile.from_letters("ru", ["А-я", "Ё", "ё"]),
}


def default_profile(language_code: str) -> LangProfile:
    try:
        return DEFAULT_PROFILES[language_code]
    except KeyError:
        raise ValidationError(f"unknown language_code: {language_code!r}") from None


def tokenize(text: str, profile: LangProfile) -> list[str]:
    """Split text into maximal runs of word characters; everything else separates."""
    tokens: list[str] = []
    start = None
    for i, ch in enumerate(text):
        if profile.is_word_char(ch):
            if start is None:
                start = i
        elif start is not None:
            tokens.append(text[start:i])
            start = None
    if start is not None:
        tokens.append(text[start:])
    if profile.case_fold:
        tokens = [t.casefold() for t in tokens]
    return tokens


@dataclass(frozen=True)
class LemmaDict:
    """Surface-form to lemma lookup with identity fallback for unknown forms."""

    language_code: str
    entries: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for surface, lemma in self.entries.items():
            if not lemma:
                raise ValidationError(f"empty lemma for surface form {surface!r}")

    @classmethod
    def load(cls, path, language_code: str) -> "LemmaDict":
        """Read a TSV of `surface<TAB>lemma` pairs; `#` lines are comments."""
        entries: dict[str, str] = {}
        p = Path(path)
        if not p.exists():
            raise IngestError(f"file not found: {path}")
        for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise ValidationError(f"{path}:{lineno}: expected 'surface<TAB>lemma'")
            entries[parts[0].casefold()] = parts[1]
        return cls(language_code, entries)

    def lemma_of(self, surface: str) -> str:
        return self.entries.get(surface, surface)


def lemmatize(tokens: list[str], lemma_dict: LemmaDict) -> list[Lemma]:
    """Map each token through the dictionary; unknown tokens pass through unchanged."""
    return [lemma_dict.entries.get(t, t) for t in tokens]


@dataclass(frozen=True)
class Document:
    id: str
    raw_text: str
    lemmas: tuple[Lemma, ...]

    def __post_init__(self):
        object.__setattr__(self, "lemmas", tuple(self.lemmas))

    @property
    def total_word_count(self) -> int:
        return len(self.lemmas)

    @classmethod
    def from_text(cls, doc_id: str, text: str, profile: LangProfile,
                  lemma_dict: LemmaDict | None = None) -> "Document":
        tokens = tokenize(text, profile)
        if lemma_dict is None:
            lemma_dict = LemmaDict(profile.language_code)
        return cls(doc_id, text, tuple(lemmatize(tokens, lemma_dict)))


@dataclass
class CorpusStratum:
    """A sub-corpus sharing language, translation kind, and grouping keys.

    Treated as immutable after construction; lemma counts are cached.
    """

    language_code: str
    translation_kind: TranslationKind | None
    group_keys: dict[str, str] = field(default_factory=dict)
    documents: list[Document] = field(default_factory=list)

    def __post_init__(self):
        ids = [d.id for d in self.documents]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError(f"duplicate document id: {dupes[0]!r}")

    @property
    def total_word_count(self) -> int:
        return sum(d.total_word_count for d in self.documents)

    @cached_property
    def _lemma_counts(self) -> Counter:
        counts: Counter = Counter()
        for doc in self.documents:
            counts.update(doc.lemmas)
        return counts

    def lemma_counts(self) -> Counter:
        return self._lemma_counts

    @property
    def label(self) -> str:
        kind = self.translation_kind.value if self.translation_kind else "mixed"
        parts = [self.language_code, kind]
        if self.group_keys:
            parts.append(",".join(f"{k}={v}" for k, v in sorted(self.group_keys.items())))
        return "/".join(parts)


def _parse_profiles(spec: dict) -> dict[str, LangProfile]:
    profiles = dict(DEFAULT_PROFILES)
    for code, body in spec.items():
        letters = body.get("letters")
        if not isinstance(letters, list) or not letters:
            raise ValidationError(f"profile for {code!r} needs a non-empty 'letters' list")
        profiles[code] = LangProfile.from_letters(code, letters, bool(body.get("case_fold", True)))
    return profiles


def load_corpus(manifest_path) -> list[CorpusStratum]:
    """Read a manifest, ingest every listed file, and partition documents into strata.

    Manifest format (JSON)::

        {
          "lemma_dicts": {"ru": "dicts/ru.tsv"},          # optional
          "profiles": {"de": {"letters": ["a-z", "äöüß"]}},  # optional
          "documents": [
            {"path": "texts/a.txt", "id": "a", "language": "ru",
             "translation_kind": "source", "group_keys": {"term": "2000-2003"}}
          ]
        }

    Relative paths resolve against the manifest's directory.
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.exists():
        raise IngestError(f"file not found: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{manifest_path}: invalid JSON: {exc}") from exc
    if not isinstance(manifest, dict) or "documents" not in manifest:
        raise ValidationError(f"{manifest_path}: manifest must contain a 'documents' list")

    base = manifest_path.parent
    profiles = _parse_profiles(manifest.get("profiles", {}))
    lemma_dicts: dict[str, LemmaDict] = {}
    for code, rel in manifest.get("lemma_dicts", {}).items():
        lemma_dicts[code] = LemmaDict.load(base / rel, code)

    seen_ids: set[str] = set()
    grouped: dict[tuple, list[Document]] = {}
    meta: dict[tuple, tuple[str, TranslationKind, dict[str, str]]] = {}
    for entry in manifest["documents"]:
        for required in ("path", "id", "language", "translation_kind"):
            if required not in entry:
                raise ValidationError(f"manifest entry missing field {required!r}: {entry}")
        doc_id = str(entry["id"])
        if doc_id in seen_ids:
            raise ValidationError(f"duplicate document id: {doc_id!r}")
        seen_ids.add(doc_id)

        language = entry["language"]
        if language not in profiles:
            raise ValidationError(f"unknown language_code: {language!r}")
        try:
            kind = TranslationKind(entry["translation_kind"])
        except ValueError:
            raise ValidationError(
                f"unknown translation_kind: {entry['translation_kind']!r}") from None
        group_keys = entry.get("group_keys", {})
        if not isinstance(group_keys, dict) or not all(
                isinstance(k, str) and isinstance(v, str) for k, v in group_keys.items()):
            raise ValidationError(f"group_keys must map strings to strings: {group_keys!r}")

        path = Path(entry["path"])
        resolved = path if path.is_absolute() else base / path
        if not resolved.exists():
            raise IngestError(f"file not found: {entry['path']}")
        text = resolved.read_text(encoding="utf-8")
        doc = Document.from_text(doc_id, text, profiles[language], lemma_dicts.get(language))

        key = (language, kind.value, tuple(sorted(group_keys.items())))
        grouped.setdefault(key, []).append(doc)
        meta[key] = (language, kind, dict(group_keys))

    strata = []
    for key in sorted(grouped):
        language, kind, group_keys = meta[key]
        strata.append(CorpusStratum(language, kind, group_keys, grouped[key]))
    return strata


def stratify(strata: list[CorpusStratum], key: str) -> dict[str, CorpusStratum]:
    """Regroup strata by one grouping key (or "language" / "translation_kind").

    Strata sharing the key value are concatenated; word counts are additive.
    Merged groups must be monolingual; the translation kind becomes None when mixed.
    """
    def value_of(stratum: CorpusStratum) -> str:
        if key == "language":
            return stratum.language_code
        if key == "translation_kind":
            if stratum.translation_kind is None:
                raise ValidationError(f"stratum {stratum.label!r} has no translation_kind")
            return stratum.translation_kind.value
        if key not in stratum.group_keys:
            raise ValidationError(f"stratum {stratum.label!r} lacks grouping key {key!r}")
        return stratum.group_keys[key]

    groups: dict[str, list[CorpusStratum]] = {}
    for stratum in strata:
        groups.setdefault(value_of(stratum), []).append(stratum)

    merged: dict[str, CorpusStratum] = {}
    for value in sorted(groups):
        members = groups[value]
        languages = {m.language_code for m in members}
        if len(languages) > 1:
            raise ValidationError(
                f"cannot merge strata with mixed languages for {key}={value!r}: "
                f"{sorted(languages)}")
        kinds = {m.translation_kind for m in members}
        kind = kinds.pop() if len(kinds) == 1 else None
        shared = dict(members[0].group_keys)
        for m in members[1:]:
            shared = {k: v for k, v in shared.items() if m.group_keys.get(k) == v}
        docs = [d for m in members for d in m.documents]
        merged[value] = CorpusStratum(languages.pop(), kind, shared, docs)
    return merged


def save_corpus(strata: list[CorpusStratum], directory,
                manifest_name: str = "manifest.json") -> Path:
    """Write strata as one text file per document plus a manifest, ready to reload.

    Document text is the space-joined lemma sequence, so a reload through
    `load_corpus` (with no lemma dict) reproduces the lemma counts exactly.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for stratum in strata:
        if stratum.translation_kind is None:
            raise ValidationError(
                f"cannot save stratum {stratum.label!r} without a translation_kind")
        for doc in stratum.documents:
            fname = "".join(c if c.isalnum() or c in "-_." else "_" for c in doc.id) + ".txt"
            (directory / fname).write_text(" ".join(doc.lemmas), encoding="utf-8")
            entries.append({
                "path": fname,
                "id": doc.id,
                "language": stratum.language_code,
                "translation_kind": stratum.translation_kind.value,
                "group_keys": dict(sorted(stratum.group_keys.items())),
            })
    manifest_path = directory / manifest_name
    manifest_path.write_text(
        json.dumps({"documents": entries}, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    return manifest_path

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semdrift import (LangProfile, LemmaDict, default_profile, lemmatize, load_corpus,
                      save_corpus, stratify, tokenize)
from semdrift.errors import IngestError, ValidationError

from helpers import DATA, make_stratum


class TestTokenize:
    def test_punctuation_split_and_case_fold(self):
        assert tokenize("Он сказал: да!", default_profile("ru")) == ["он", "сказал", "да"]

    def test_empty_text(self):
        assert tokenize("", default_profile("en")) == []

    def test_digits_and_punctuation_never_form_tokens(self):
        assert tokenize("a1b 2, c-3", default_profile("en")) == ["a", "b", "c"]

    def test_hyphen_excluded_splits_compounds(self):
        assert tokenize("state-of-the-art", default_profile("en")) == \
            ["state", "of", "the", "art"]

    def test_hyphen_in_letter_class_keeps_compounds(self):
        profile = LangProfile.from_letters("en", ["a-z", "-"])
        assert tokenize("state-of-the-art", profile) == ["state-of-the-art"]

    def test_case_fold_disabled(self):
        profile = LangProfile.from_letters("en", ["A-Z", "a-z"], case_fold=False)
        assert tokenize("Hello World", profile) == ["Hello", "World"]

    @pytest.mark.parametrize("lang", ["en", "ru"])
    def test_matches_hand_tokenized_fixture(self, lang):
        text = (DATA / f"tokenize_fixture_{lang}.txt").read_text(encoding="utf-8")
        expected = (DATA / f"tokenize_expected_{lang}.txt").read_text(
            encoding="utf-8").splitlines()
        assert tokenize(text, default_profile(lang)) == expected

    @given(st.text(max_size=200))
    def test_tokens_nonempty_and_folded(self, text):
        for token in tokenize(text, default_profile("en")):
            assert token
            assert token == token.casefold()

    def test_profile_requires_letters(self):
        with pytest.raises(ValidationError):
            LangProfile("xx", ())

    def test_unknown_language(self):
        with pytest.raises(ValidationError, match="unknown language_code"):
            default_profile("tlh")


class TestLemmatize:
    def test_lookup_with_identity_fallback(self):
        d = LemmaDict("en", {"said": "say", "books": "book"})
        assert lemmatize(["said", "good", "books"], d) == ["say", "good", "book"]

    def test_empty_input(self):
        assert lemmatize([], LemmaDict("en")) == []

    def test_russian_fixture_entries(self):
        d = LemmaDict("ru", {"сказал": "сказать", "хорошие": "хороший"})
        assert lemmatize(["сказал", "хорошие"], d) == ["сказать", "хороший"]

    def test_empty_dict_is_identity(self):
        tokens = ["any", "tokens", "at", "all"]
        assert lemmatize(tokens, LemmaDict("en")) == tokens

    @given(st.text(max_size=200))
    def test_length_conservation(self, text):
        profile = default_profile("en")
        tokens = tokenize(text, profile)
        d = LemmaDict("en", {"said": "say", "the": "the"})
        assert len(lemmatize(tokens, d)) == len(tokens)

    def test_rejects_empty_lemma(self):
        with pytest.raises(ValidationError):
            LemmaDict("en", {"said": ""})


def _write_manifest(tmp_path, documents, **extra):
    manifest = {"documents": documents, **extra}
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(manifest, ensure_ascii=False), encoding="utf-8")
    return path


class TestLoadCorpus:
    def test_single_file_word_count(self, tmp_path):
        # 25 four-word lines, counted by hand
        (tmp_path / "a.txt").write_text("alpha beta gamma delta\n" * 25, encoding="utf-8")
        path = _write_manifest(tmp_path, [
            {"path": "a.txt", "id": "a", "language": "ru", "translation_kind": "source"}])
        # Latin text under the ru profile would vanish; declare a profile
        path.write_text(json.dumps({
            "profiles": {"ru": {"letters": ["a-z", "А-я", "Ё", "ё"]}},
            "documents": [{"path": "a.txt", "id": "a", "language": "ru",
                           "translation_kind": "source"}]}), encoding="utf-8")
        strata = load_corpus(path)
        assert len(strata) == 1
        assert strata[0].total_word_count == 100

    def test_fixture_layout(self):
        strata = load_corpus(DATA / "manifest.json")
        assert len(strata) == 12
        assert {s.language_code for s in strata} == {"ru", "en"}
        assert all(s.total_word_count > 0 for s in strata)
        kinds = {(s.language_code, s.translation_kind.value) for s in strata}
        assert kinds == {("ru", "source"), ("en", "human"), ("en", "machine")}

    def test_deterministic(self):
        a = load_corpus(DATA / "manifest.json")
        b = load_corpus(DATA / "manifest.json")
        assert [(s.label, tuple(d.lemmas for d in s.documents)) for s in a] == \
            [(s.label, tuple(d.lemmas for d in s.documents)) for s in b]

    def test_missing_file(self, tmp_path):
        path = _write_manifest(tmp_path, [
            {"path": "nope.txt", "id": "x", "language": "en", "translation_kind": "source"}])
        with pytest.raises(IngestError, match="file not found: nope.txt"):
            load_corpus(path)

    def test_duplicate_document_id(self, tmp_path):
        (tmp_path / "a.txt").write_text("one", encoding="utf-8")
        path = _write_manifest(tmp_path, [
            {"path": "a.txt", "id": "x", "language": "en", "translation_kind": "source"},
            {"path": "a.txt", "id": "x", "language": "en", "translation_kind": "human"}])
        with pytest.raises(ValidationError, match="duplicate document id"):
            load_corpus(path)

    def test_unknown_language(self, tmp_path):
        (tmp_path / "a.txt").write_text("one", encoding="utf-8")
        path = _write_manifest(tmp_path, [
            {"path": "a.txt", "id": "x", "language": "xx", "translation_kind": "source"}])
        with pytest.raises(ValidationError, match="unknown language_code"):
            load_corpus(path)

    def test_unknown_translation_kind(self, tmp_path):
        (tmp_path / "a.txt").write_text("one", encoding="utf-8")
        path = _write_manifest(tmp_path, [
            {"path": "a.txt", "id": "x", "language": "en", "translation_kind": "robot"}])
        with pytest.raises(ValidationError, match="unknown translation_kind"):
            load_corpus(path)

    def test_lemma_dict_applied(self, tmp_path):
        (tmp_path / "a.txt").write_text("He said things", encoding="utf-8")
        (tmp_path / "d.tsv").write_text("said\tsay\n", encoding="utf-8")
        path = _write_manifest(
            tmp_path,
            [{"path": "a.txt", "id": "a", "language": "en", "translation_kind": "source"}],
            lemma_dicts={"en": "d.tsv"})
        strata = load_corpus(path)
        assert strata[0].documents[0].lemmas == ("he", "say", "things")


class TestStratify:
    def test_regroup_is_additive(self):
        strata = [s for s in load_corpus(DATA / "manifest.json") if s.language_code == "ru"]
        merged = stratify(strata, "summit")
        assert set(merged) == {"G8", "G20"}
        assert sum(m.total_word_count for m in merged.values()) == \
            sum(s.total_word_count for s in strata)

    def test_regroup_by_language(self):
        strata = load_corpus(DATA / "manifest.json")
        merged = stratify(strata, "language")
        assert set(merged) == {"ru", "en"}
        for code, m in merged.items():
            assert m.language_code == code
            assert m.total_word_count == sum(
                s.total_word_count for s in strata if s.language_code == code)

    def test_missing_key_names_stratum(self):
        strata = load_corpus(DATA / "manifest.json")
        with pytest.raises(ValidationError, match="lacks grouping key 'genre'"):
            stratify(strata, "genre")

    def test_mixed_language_merge_rejected(self):
        a = make_stratum(["say"], language="en", group_keys={"summit": "G8"})
        b = make_stratum(["сказать"], language="ru", group_keys={"summit": "G8"},
                         doc_id="doc-2")
        with pytest.raises(ValidationError, match="mixed languages"):
            stratify([a, b], "summit")

    def test_conservation_over_every_key(self):
        strata = [s for s in load_corpus(DATA / "manifest.json")
                  if s.language_code == "en"]
        total = sum(s.total_word_count for s in strata)
        for key in ("summit", "term", "translation_kind", "language"):
            merged = stratify(strata, key)
            assert sum(m.total_word_count for m in merged.values()) == total


class TestSaveCorpus:
    def test_round_trip_preserves_lemma_counts(self, tmp_path):
        stratum = make_stratum(["say", "tell", "say", "good"], language="en")
        manifest = save_corpus([stratum], tmp_path / "corpus")
        reloaded = load_corpus(manifest)
        assert len(reloaded) == 1
        assert reloaded[0].lemma_counts() == stratum.lemma_counts()

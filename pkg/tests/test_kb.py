import pytest
from hypothesis import given, strategies as st

from hintgan.errors import (
    MaskFillError,
    SchemaMismatchError,
    UnknownRelationError,
    ValidationError,
)
from hintgan.kb import (
    Assertion,
    ParseStats,
    RelationLexicon,
    fill_specificity,
    parse_source,
    read_assertions_jsonl,
    rename_variables,
    write_assertions_jsonl,
)
from hintgan.kb.maskfill import ExternalFiller, RuleBasedFiller

from conftest import make_assertion


class TestAssertionType:
    def test_valid_specific(self):
        a = make_assertion()
        assert a.text() == "dog is a animal"

    def test_empty_field_rejected(self):
        with pytest.raises(ValidationError):
            make_assertion(subject="  ")

    def test_general_requires_variables(self):
        with pytest.raises(ValidationError):
            make_assertion(specificity="general")
        a = make_assertion(subject="Person_A", specificity="general",
                           source="atomic2020", id="atomic2020:0")
        assert a.specificity == "general"

    def test_glucose_dimension_only_for_glucose(self):
        with pytest.raises(ValidationError):
            make_assertion(glucose_dimension=3)
        with pytest.raises(ValidationError):
            make_assertion(source="glucose", id="glucose:0:s")
        a = make_assertion(source="glucose", id="glucose:0:s", glucose_dimension=3)
        assert a.glucose_dimension == 3

    def test_glucose_dimension_range(self):
        with pytest.raises(ValidationError):
            make_assertion(source="glucose", id="glucose:0:s", glucose_dimension=11)

    def test_dict_round_trip(self):
        a = make_assertion()
        assert Assertion.from_dict(a.to_dict()) == a


class TestRelationLexicon:
    def test_known_lookup(self):
        lex = RelationLexicon.default()
        assert lex.lookup("IsA") == "is a"
        assert lex.lookup("CapableOf") == "is/are capable of"

    def test_unknown_lookup_raises(self):
        lex = RelationLexicon.default()
        with pytest.raises(UnknownRelationError):
            lex.lookup("NotARelation")


class TestParseSource:
    def test_conceptnet_row(self, tmp_path):
        p = tmp_path / "cn.tsv"
        p.write_text("IsA\tdog\tanimal\n")
        (a,) = parse_source(p, "conceptnet")
        assert (a.subject, a.relation, a.relation_text, a.object) == (
            "dog", "IsA", "is a", "animal")
        assert a.specificity == "specific"
        assert a.id == "conceptnet:0"

    def test_empty_file(self, tmp_path):
        p = tmp_path / "cn.tsv"
        p.write_text("")
        stats = ParseStats()
        assert parse_source(p, "conceptnet", stats=stats) == []
        assert stats.skipped == 0

    def test_malformed_rows_skipped(self, tmp_path):
        p = tmp_path / "cn.tsv"
        p.write_text(
            "IsA\tdog\tanimal\n"
            "badrow\n"
            "IsA\tcat\tanimal\n"
            "CapableOf\tbird\tfly\n"
        )
        stats = ParseStats()
        out = parse_source(p, "conceptnet", stats=stats)
        assert len(out) == 3
        assert stats.skipped == 1

    def test_mostly_malformed_aborts(self, tmp_path):
        p = tmp_path / "cn.tsv"
        p.write_text("IsA\tdog\tanimal\nx\ny\nz\n")
        with pytest.raises(SchemaMismatchError):
            parse_source(p, "conceptnet")

    def test_deterministic(self, tmp_path):
        p = tmp_path / "cn.tsv"
        p.write_text("IsA\tdog\tanimal\nCapableOf\tbird\tfly\n")
        assert parse_source(p, "conceptnet") == parse_source(p, "conceptnet")

    def test_atomic_rows(self, tmp_path):
        p = tmp_path / "at.tsv"
        p.write_text(
            "PersonX wins the game\txEffect\tcelebrate\n"
            "PersonX naps\txEffect\tnone\n"
            "the sky\txAttr\tblue\n"
        )
        stats = ParseStats()
        out = parse_source(p, "atomic2020", stats=stats)
        assert len(out) == 2
        assert out[0].specificity == "general"
        assert out[1].specificity == "specific"
        assert stats.skipped == 1  # "none" tail

    def test_glucose_rows(self, tmp_path):
        p = tmp_path / "gl.csv"
        p.write_text(
            "dimension,story_id,specific,general\n"
            "1,st1,the dog >Causes> barking,Something_A >Causes> noise made by Something_A\n"
        )
        out = parse_source(p, "glucose")
        assert [a.id for a in out] == ["glucose:0:s", "glucose:0:g"]
        assert {a.specificity for a in out} == {"specific", "general"}
        assert all(a.glucose_dimension == 1 for a in out)

    def test_glucose_wrong_header_aborts(self, tmp_path):
        p = tmp_path / "gl.csv"
        p.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(SchemaMismatchError):
            parse_source(p, "glucose")

    def test_relations_total_over_fixture(self, tmp_path):
        p = tmp_path / "cn.tsv"
        p.write_text("IsA\tdog\tanimal\nUsedFor\tpen\twriting\n")
        lex = RelationLexicon.default()
        for a in parse_source(p, "conceptnet"):
            assert a.relation in lex

    def test_jsonl_round_trip(self, tmp_path):
        items = [make_assertion(), make_assertion(subject="cat", id="conceptnet:1")]
        p = tmp_path / "a.jsonl"
        write_assertions_jsonl(items, p)
        assert read_assertions_jsonl(p) == items


class TestRenameVariables:
    def test_basic(self):
        a = make_assertion(subject="PersonX", object="PersonX's dog",
                           specificity="general", source="atomic2020",
                           id="atomic2020:0")
        r = rename_variables(a)
        assert r.subject == "Person_A"
        assert r.object == "Person_A's dog"

    def test_no_variables_unchanged(self):
        a = make_assertion()
        assert rename_variables(a) == a

    def test_canonical_letter_mapping(self):
        # Y maps to B regardless of appearance order.
        a = make_assertion(subject="PersonY", object="thanks PersonX",
                           specificity="general", source="atomic2020",
                           id="atomic2020:0")
        r = rename_variables(a)
        assert r.subject == "Person_B"
        assert r.object == "thanks Person_A"

    def test_idempotent(self):
        a = make_assertion(subject="PersonX and PersonZ", object="____",
                           specificity="general", source="atomic2020",
                           id="atomic2020:0")
        once = rename_variables(a)
        assert rename_variables(once) == once

    @given(st.sampled_from(["PersonX", "PersonY", "PersonZ", "Person_A", "dog"]),
           st.sampled_from(["runs", "PersonX's hat", "____", "Person_C"]))
    def test_idempotent_property(self, subj, obj):
        a = make_assertion(subject=subj, object=obj, specificity="specific")
        once = rename_variables(a)
        assert rename_variables(once) == once


class TestFillSpecificity:
    def _general(self, subject="PersonX walks PersonX's dog", object="happy"):
        return make_assertion(subject=subject, object=object,
                              specificity="general", source="atomic2020",
                              id="atomic2020:0", relation="xEffect",
                              relation_text="has the effect")

    def test_person_filled_from_context(self):
        a = self._general()
        filled = fill_specificity(
            a, "John, every day, goes out to walk his dog.", RuleBasedFiller()
        )
        assert filled.subject == "John walks John's dog"
        assert filled.specificity == "specific"
        assert filled.id.endswith(":filled")

    def test_no_slots_becomes_specific_copy(self):
        a = make_assertion(subject="Person_A", object="smiles",
                           specificity="general", source="atomic2020",
                           id="atomic2020:1")
        filled = fill_specificity(a, "Mary waved to Tom.", RuleBasedFiller())
        # non-sentence-initial capitalized words are preferred candidates
        assert filled.subject == "Tom"
        assert filled.specificity == "specific"

    def test_strict_blank_failure(self):
        a = self._general(subject="PersonX buys ____")
        with pytest.raises(MaskFillError):
            fill_specificity(a, "He did it.", RuleBasedFiller(strict=True))

    def test_nonstrict_fallbacks(self):
        a = self._general(subject="PersonX buys ____")
        filled = fill_specificity(a, "he did it", RuleBasedFiller(strict=False))
        assert "someone" in filled.subject
        assert "something" in filled.subject

    def test_no_leftover_slots(self):
        a = self._general(subject="PersonX helps PersonY with ____")
        filled = fill_specificity(
            a, "Yesterday Anna met Brian at the market.", RuleBasedFiller()
        )
        for token in ("PersonX", "PersonY", "PersonZ", "____"):
            assert token not in filled.subject
            assert token not in filled.object

    def test_requires_general_atomic(self):
        with pytest.raises(ValidationError):
            fill_specificity(make_assertion(), "ctx", RuleBasedFiller())

    def test_external_filler(self, tmp_path):
        p = tmp_path / "fills.jsonl"
        p.write_text('{"id": "atomic2020:0", "fills": {"PersonX": "John"}}\n')
        a = self._general(subject="PersonX smiles")
        filler = ExternalFiller(p).for_assertion("atomic2020:0")
        filled = fill_specificity(a, "ctx", filler)
        assert filled.subject == "John smiles"

    def test_external_filler_missing_slot(self, tmp_path):
        p = tmp_path / "fills.jsonl"
        p.write_text('{"id": "atomic2020:0", "fills": {}}\n')
        a = self._general(subject="PersonX smiles")
        with pytest.raises(MaskFillError):
            fill_specificity(a, "ctx", ExternalFiller(p).for_assertion("atomic2020:0"))

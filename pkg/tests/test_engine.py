import json

import pytest

from locgram import build_initial_lattice, tokenize, union
from locgram.engine import (
    CorpusItem,
    FreeBlock,
    MatchedBlock,
    accepts,
    accepts_case_a,
    accepts_case_b,
    decompose,
    filter as filter_lattice,
    filter_oracle,
    load_corpus,
    matchable,
    silence_check,
)
from locgram.errors import CorpusFormatError
from locgram.grammar import load_grammar
from locgram.lattice import enumerate_paths, language, language_equal, trim
CATS = ("V", "N", "A", "ADV", "PRO", "DET", "PREP", "CNJS", "CNJC", "XI", "INT")

CONFIRM_CHAIN_GOOD = (
    "<cela PRO:ms> <venir V:P3s> <de PREP> <ce PRO:3s> <que CNJS> <je PRO:1s> "
    "<ne XI> <me PRO:1s> <le PRO:3ms> <être V:P1s> <pas ADV> <faire V:Kms> "
    "<confirmer V:W> <aussitôt ADV>"
)
ACCOUNTS_GOOD = (
    "<ne XI[+Préd]> <faire V:P3s> - <il PRO:3ms> <le DET:mp> <compte N:mp> "
    "<que CNJS> <pour PREP> <rendre V:W> <service N:ms> ?"
)
ACCOUNTS_NOUN_MISTAG = (
    "<ne XI[+Préd]> <fait N:ms> - <il PRO:3ms> <le DET:mp> <compte N:mp> "
    "<que CNJS> <pour PREP> <rendre V:W> <service N:ms> ?"
)
TELL_HIM_GOOD = "<ne XI> <lui PRO:3s> <dire V:Y2s> <pas ADV>"
TELL_HIM_MISTAG = "<ne XI> <luire V:Kms> <dire V:Y2s> <pas ADV>"
PRESSING_MISTAG = (
    "<pourquoi ADV> <me PRO:1s> <presser V:P3p> - <il PRO:3ms> <de PREP> "
    "<le PRO:3ms> <luire V:Kms> <dire V:W> ?"
)
LIMIT_GOOD = (
    "<mais CNJC> <aucun PRO:ms> <ne XI> <pouvoir V:P3s> <dépasser V:W> "
    "<ce DET:fs> <limite N:fs>"
)
LIMIT_DET_VARIANT = (
    "<mais CNJC> <aucun DET:ms> <ne XI> <pouvoir V:P3s> <dépasser V:W> "
    "<ce DET:fs> <limite N:fs>"
)


class TestMatchable:
    def test_chain_matches_exactly_before_de(self, grammars, lattices):
        index = matchable(lattices["confirm-chain"], grammars["de-ce-que-chain"])
        assert [q for q, hit in index.items() if hit] == [2]

    def test_all_false_on_empty_lattice(self, grammars, lexicon):
        l = build_initial_lattice([], lexicon)
        for g in grammars.values():
            assert matchable(l, g) == {0: False}

    def test_ne_verb_matches_via_other_tagging(self, grammars, lattices):
        # the portion's own tags need not match: another analysis of the
        # same text (lui as a past participle) provides the input match
        index = matchable(lattices["tell-him"], grammars["ne-verb"])
        assert [q for q, hit in index.items() if hit] == [0]


class TestAccepts:
    def test_chain_accepts_correct_tagging(self, grammars, lattices, find_path):
        l = lattices["confirm-chain"]
        p = find_path(l, CONFIRM_CHAIN_GOOD)
        assert accepts(grammars["de-ce-que-chain"], p, l)

    def test_chain_witness_structure(self, grammars, lattices, find_path):
        l = lattices["confirm-chain"]
        p = find_path(l, CONFIRM_CHAIN_GOOD)
        d = decompose(grammars["de-ce-que-chain"], p, l)
        kinds = [type(b) for b in d.blocks]
        assert kinds == [FreeBlock] * 2 + [MatchedBlock] + [FreeBlock] * 5
        matched = d.blocks[2]
        assert (matched.start, matched.end) == (2, 9)
        assert [out.notation() for _, out in matched.pairs] == [
            "<PREP>", "<PRO>", "<CNJS>", "<PRO>", "<XI>", "<PRO>", "<PRO>",
        ]

    def test_inversion_accepts_correct_tagging(self, grammars, lattices, find_path):
        l = lattices["accounts"]
        p = find_path(l, ACCOUNTS_GOOD)
        assert accepts(grammars["subject-inversion"], p, l)

    def test_ne_verb_rejects_noun_mistag(self, grammars, lattices, find_path):
        l = lattices["accounts"]
        p = find_path(l, ACCOUNTS_NOUN_MISTAG)
        assert not accepts(grammars["ne-verb"], p, l)

    def test_general_rule_uses_same_span_witness(self, grammars, lattices, find_path):
        l = lattices["limit"]
        assert accepts(grammars["aucun-pronoun"], find_path(l, LIMIT_GOOD), l)
        assert not accepts(grammars["aucun-pronoun"], find_path(l, LIMIT_DET_VARIANT), l)

    def test_combination_can_reject_what_members_accept(self, grammars, lattices, find_path):
        l = lattices["accounts"]
        p = find_path(l, ACCOUNTS_GOOD)
        inversion, ne_verb = grammars["subject-inversion"], grammars["ne-verb"]
        assert accepts(inversion, p, l)
        assert accepts(ne_verb, p, l)
        assert not accepts(union([inversion, ne_verb]), p, l)

    def test_combination_can_accept_what_members_reject(self, grammars, lattices, find_path):
        l = lattices["pressing"]
        p = find_path(l, PRESSING_MISTAG)
        preverb, de_le = grammars["preverb-pronouns"], grammars["de-le-and-inversion"]
        assert not accepts(preverb, p, l)
        assert not accepts(de_le, p, l)
        assert accepts(union([preverb, de_le]), p, l)

    def test_silence_repaired_by_combination(self, grammars, lattices, find_path):
        l = lattices["tell-him"]
        good = find_path(l, TELL_HIM_GOOD)
        bad = find_path(l, TELL_HIM_MISTAG)
        ne_verb, ne_lui = grammars["ne-verb"], grammars["ne-lui"]
        assert not accepts(ne_verb, good, l)  # wrongly rejected alone
        assert accepts(ne_lui, good, l)
        assert accepts(union([ne_verb, ne_lui]), good, l)
        assert not accepts(ne_lui, bad, l)
        assert accepts(union([ne_verb, ne_lui]), bad, l)

    def test_empty_path_accepted_by_every_grammar(self, grammars, lexicon):
        l = build_initial_lattice([], lexicon)
        for g in grammars.values():
            assert accepts(g, (), l)

    def test_rejects_foreign_path(self, grammars, lattices, find_path):
        l = lattices["tell-him"]
        other = lattices["limit"]
        p = find_path(other, LIMIT_GOOD)
        with pytest.raises(ValueError):
            accepts(grammars["ne-verb"], p, l)

    def test_invariant_under_trim(self, grammars, lattices, find_path):
        l = lattices["tell-him"]
        p = find_path(l, TELL_HIM_GOOD)
        for g in grammars.values():
            assert accepts(g, p, trim(l)) == accepts(g, p, l)


class TestSpecialCaseRules:
    def test_case_a_requires_simple_inputs(self, grammars, lattices, find_path):
        l = lattices["accounts"]
        p = find_path(l, ACCOUNTS_GOOD)
        with pytest.raises(ValueError):
            accepts_case_a(grammars["subject-inversion"], p, l)

    def test_case_b_rejects_general_grammars(self, grammars, lattices, find_path):
        l = lattices["limit"]
        p = find_path(l, LIMIT_GOOD)
        with pytest.raises(ValueError):
            accepts_case_b(grammars["aucun-pronoun"], p, l)

    def test_case_a_on_chain(self, grammars, lattices, find_path):
        l = lattices["confirm-chain"]
        p = find_path(l, CONFIRM_CHAIN_GOOD)
        assert accepts_case_a(grammars["de-ce-que-chain"], p, l)

    def test_case_a_all_free_when_no_surface_matches(self, grammars, lexicon):
        l = build_initial_lattice(tokenize("pas"), lexicon)
        for p in enumerate_paths(l).paths:
            assert accepts_case_a(grammars["ne-lui"], p, l)

    def test_case_b_on_inversion(self, grammars, lattices, find_path):
        l = lattices["accounts"]
        assert accepts_case_b(grammars["subject-inversion"], find_path(l, ACCOUNTS_GOOD), l)
        assert not accepts_case_b(grammars["ne-verb"], find_path(l, ACCOUNTS_NOUN_MISTAG), l)

    def test_rules_agree_on_fixture_paths(self, grammars, lattices):
        from locgram.grammar import GrammarClass, classify

        for key, l in lattices.items():
            paths = enumerate_paths(l, 300).paths[:40]
            for g in grammars.values():
                cls = classify(g)
                for p in paths:
                    general = accepts(g, p, l)
                    if cls is GrammarClass.SIMPLE_INPUTS:
                        assert accepts_case_a(g, p, l) == general
                    if cls is not GrammarClass.GENERAL:
                        assert accepts_case_b(g, p, l) == general


class TestFilter:
    def test_chain_forces_output_tags(self, grammars, lattices):
        filtered = filter_lattice(grammars["de-ce-que-chain"], lattices["confirm-chain"])
        expected_mains = ["PREP", "PRO", "CNJS", "PRO", "XI", "PRO", "PRO"]
        for seq in language(filtered):
            window = seq[2:9]
            assert [lab.category.main for lab in window] == expected_mains

    def test_filter_is_sound(self, grammars, lattices):
        for key, l in lattices.items():
            full = language(l)
            for name, g in grammars.items():
                assert language(filter_lattice(g, l)) <= full, (key, name)

    def test_no_match_keeps_language(self, grammars, lattices):
        # no input sequence of the ne-lui grammar matches in the railway
        # sentence, so every analysis survives
        l = lattices["railway"]
        g = grammars["ne-lui"]
        assert not any(matchable(l, g).values())
        assert language_equal(filter_lattice(g, l), l)

    def test_empty_result_flagged(self, lattices):
        g = load_grammar(
            json.dumps(
                {
                    "name": "il-noun",
                    "states": [0, 1],
                    "initial": 0,
                    "finals": [1],
                    "transitions": [{"from": 0, "to": 1, "in": "il", "out": "<N>"}],
                }
            ),
            CATS,
        )
        filtered = filter_lattice(g, lattices["railway"])
        assert filtered.is_empty_language()

    def test_forced_verb_after_il_keeps_both_delimitations(self, lattices):
        # hand enumeration: il must be a pronoun followed by a verbal
        # traverse; both the compound reading and the simple reading of
        # chemin de fer survive, noun readings of traverse do not
        g = load_grammar(
            json.dumps(
                {
                    "name": "il-verb",
                    "states": [0, 1, 2],
                    "initial": 0,
                    "finals": [2],
                    "transitions": [
                        {"from": 0, "to": 1, "in": "il", "out": "<PRO>"},
                        {"from": 1, "to": 2, "in": "<V>", "out": "<V>"},
                    ],
                }
            ),
            CATS,
        )
        l = lattices["railway"]
        filtered_language = language(filter_lattice(g, l))
        assert len(filtered_language) == 8
        assert all(seq[1].category.main == "V" for seq in filtered_language)
        assert any(any(getattr(lab, "compound", False) for lab in seq) for seq in filtered_language)
        assert any(all(not getattr(lab, "compound", False) for lab in seq) for seq in filtered_language)

    def test_matches_oracle_on_all_fixture_pairs(self, grammars, lattices):
        for key, l in lattices.items():
            for name, g in grammars.items():
                assert language_equal(filter_lattice(g, l), filter_oracle(g, l)), (key, name)

    def test_matches_oracle_on_fixture_unions(self, grammars, lattices):
        import itertools

        l = lattices["accounts"]
        for a, b in itertools.combinations(grammars.values(), 2):
            u = union([a, b])
            assert language_equal(filter_lattice(u, l), filter_oracle(u, l)), u.name

    def test_empty_lattice_passes_through(self, grammars, lexicon):
        l = build_initial_lattice([], lexicon)
        for g in grammars.values():
            assert language_equal(filter_lattice(g, l), l)
            assert language_equal(filter_oracle(g, l), l)

    def test_final_initial_state_matches_everywhere(self, lexicon):
        # with a final initial state the empty input sequence matches at
        # every position, so no free portion is ever available
        g = load_grammar(
            json.dumps(
                {
                    "name": "eps",
                    "states": [0, 1],
                    "initial": 0,
                    "finals": [0, 1],
                    "transitions": [{"from": 0, "to": 1, "in": "ne", "out": "<XI>"}],
                }
            ),
            CATS,
        )
        l = build_initial_lattice(tokenize("Ne lui dis pas"), lexicon)
        assert language_equal(filter_lattice(g, l), filter_oracle(g, l))
        assert filter_lattice(g, l).is_empty_language()

    def test_cyclic_grammar_bounded_by_sentence(self, lexicon):
        g = load_grammar(
            json.dumps(
                {
                    "name": "loop",
                    "states": [0, 1],
                    "initial": 0,
                    "finals": [1],
                    "transitions": [
                        {"from": 0, "to": 1, "in": "ne", "out": "<XI>"},
                        {"from": 1, "to": 1, "in": "ne", "out": "<XI>"},
                    ],
                }
            ),
            CATS,
        )
        l = build_initial_lattice(tokenize("Ne lui dis pas"), lexicon)
        assert language_equal(filter_lattice(g, l), filter_oracle(g, l))

    def test_compound_lemma_portion(self, lexicon, lattices):
        # the compound tagging conforms to the input at the span start, so
        # free portions are unavailable there; only the compound survives
        g = load_grammar(
            json.dumps(
                {
                    "name": "cmp",
                    "states": [0, 1],
                    "initial": 0,
                    "finals": [1],
                    "transitions": [
                        {"from": 0, "to": 1, "in": "<sur/le/moment>", "out": "<ADV>"}
                    ],
                }
            ),
            CATS,
        )
        l = lattices["moment"]
        filtered = filter_lattice(g, l)
        assert language_equal(filtered, filter_oracle(g, l))
        assert all(
            any(getattr(label, "compound", False) for label in seq)
            for seq in language(filtered)
        )


class TestSilenceCheck:
    def test_single_violation_with_span(self, grammars, lexicon):
        corpus = [CorpusItem("s1", "Ne lui dis pas", TELL_HIM_GOOD)]
        report = silence_check(grammars["ne-verb"], corpus, lexicon)
        assert len(report.violations) == 1
        violation = report.violations[0]
        assert violation.sentence_id == "s1"
        assert violation.grammar == "ne-verb"
        assert violation.span == (0, 2)
        assert report.lines() == ["SILENCE s1 0-2 ne-verb"]

    def test_combination_has_no_violation(self, grammars, lexicon):
        corpus = [CorpusItem("s1", "Ne lui dis pas", TELL_HIM_GOOD)]
        u = union([grammars["ne-verb"], grammars["ne-lui"]])
        report = silence_check(u, corpus, lexicon)
        assert report.violations == ()

    def test_empty_corpus(self, grammars, lexicon):
        report = silence_check(grammars["ne-verb"], [], lexicon)
        assert report.violations == ()
        assert report.corpus_errors == ()

    def test_inconsistent_gold_is_corpus_error(self, grammars, lexicon):
        corpus = [CorpusItem("s1", "Ne lui dis pas", "<ne XI> <lui DET:ms> <dire V:Y2s> <pas ADV>")]
        report = silence_check(grammars["ne-verb"], corpus, lexicon)
        assert report.violations == ()
        assert len(report.corpus_errors) == 1

    def test_unknown_word_is_corpus_error(self, grammars, lexicon):
        corpus = [CorpusItem("s1", "Ne xyzzy pas", "<ne XI> <pas ADV>")]
        report = silence_check(grammars["ne-verb"], corpus, lexicon)
        assert report.violations == ()
        assert len(report.corpus_errors) == 1


class TestLoadCorpus:
    def test_pairs(self):
        items = load_corpus(["# c", "T: Ne lui dis pas", f"G: {TELL_HIM_GOOD}"])
        assert len(items) == 1
        assert items[0].sentence_id == "s1"
        assert items[0].text == "Ne lui dis pas"

    def test_gold_without_text_rejected(self):
        with pytest.raises(CorpusFormatError):
            load_corpus(["G: <ne XI>"])

    def test_dangling_text_rejected(self):
        with pytest.raises(CorpusFormatError):
            load_corpus(["T: Ne lui dis pas"])

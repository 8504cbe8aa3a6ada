import math

import pytest

from codemix_adv import LanguageTag, load_lang_lexicon, tag_token, tag_tokens, tokenize
from codemix_adv.langid import NgramTable


def write_lexicon(tmp_path, l1="bhalo\n", l2="good\n", l1_ngrams=None, l2_ngrams=None):
    (tmp_path / "l1.txt").write_text(l1, encoding="utf-8")
    (tmp_path / "l2.txt").write_text(l2, encoding="utf-8")
    if l1_ngrams is not None:
        (tmp_path / "l1.ngrams.tsv").write_text(l1_ngrams, encoding="utf-8")
    if l2_ngrams is not None:
        (tmp_path / "l2.ngrams.tsv").write_text(l2_ngrams, encoding="utf-8")
    return load_lang_lexicon(tmp_path)


def test_minimal_lexicon(tmp_path):
    lex = write_lexicon(tmp_path)
    assert lex.l1_words == frozenset({"bhalo"})
    assert lex.l2_words == frozenset({"good"})


def test_missing_word_list(tmp_path):
    (tmp_path / "l1.txt").write_text("x\n", encoding="utf-8")
    with pytest.raises(FileNotFoundError):
        load_lang_lexicon(tmp_path)


def test_conflict_word_removed_from_both(tmp_path):
    lex = write_lexicon(tmp_path, l1="to\nbhalo\n", l2="to\ngood\n")
    assert "to" not in lex.l1_words and "to" not in lex.l2_words
    assert "bhalo" in lex.l1_words and "good" in lex.l2_words


def test_bundled_lexicon_loads(lexicon):
    assert len(lexicon.l1_words) > 0
    assert len(lexicon.l2_words) > 0
    assert lexicon.l1_ngrams is not None and lexicon.l1_ngrams.vocab > 0


def test_universal_tags(tmp_path):
    lex = write_lexicon(tmp_path)
    for token in ("!", "...", "123", ":)", "?!"):
        assert tag_token(token, lex) is LanguageTag.UNIVERSAL


def test_lexicon_hit(tmp_path):
    lex = write_lexicon(tmp_path)
    assert tag_token("bhalo", lex) is LanguageTag.L1
    assert tag_token("Bhalo", lex) is LanguageTag.L1  # lookup is case-insensitive
    assert tag_token("good", lex) is LanguageTag.L2


def test_ngram_fallback_hand_computed(tmp_path):
    # toy tables with exactly representable counts (10 and 1); expected
    # scores are worked out from the smoothed trigram model by hand:
    # P(g) = (count+1) / (total+vocab), score normalized by token length
    l1_rows = "alo\t1.0\nxal\t0.0\n"
    l2_rows = "ing\t1.0\nthe\t0.0\n"
    lex = write_lexicon(tmp_path, l1_ngrams=l1_rows, l2_ngrams=l2_rows)

    token = "xalo"  # grams: xal, alo
    s1_expected = (math.log10((1 + 1) / (11 + 2)) + math.log10((10 + 1) / (11 + 2))) / 4
    s2_expected = (math.log10((0 + 1) / (11 + 2)) + math.log10((0 + 1) / (11 + 2))) / 4
    assert lex.l1_ngrams.score(token) == pytest.approx(s1_expected, abs=1e-12)
    assert lex.l2_ngrams.score(token) == pytest.approx(s2_expected, abs=1e-12)
    expected = LanguageTag.L1 if s1_expected > s2_expected else LanguageTag.L2
    assert tag_token(token, lex) is expected
    assert s1_expected > s2_expected  # the fixture is built to prefer L1


def test_tie_breaks_to_l2(tmp_path):
    lex = write_lexicon(tmp_path)  # no tables: unknown tokens score 0 vs 0
    assert tag_token("zzz", lex) is LanguageTag.L2


def test_short_token_no_grams():
    table = NgramTable(counts={"abc": 2.0}, total=2.0, vocab=1)
    assert table.score("ab") == 0.0


def test_malformed_ngram_row(tmp_path):
    with pytest.raises(ValueError, match=":2:"):
        write_lexicon(tmp_path, l1_ngrams="abc\t0.0\nbroken row\n")


def test_tag_tokens_fills_everything(lexicon):
    sent = tag_tokens(tokenize("vai eita hobe na ! 123 pickup"), lexicon)
    assert LanguageTag.UNTAGGED not in sent.tags
    assert sent.tags[4] is LanguageTag.UNIVERSAL
    assert sent.tags[0] is LanguageTag.L1


def test_locality_of_word_lists(tmp_path):
    probes = ["bhalo", "good", "zzz", "xalo", "!"]
    lex_before = write_lexicon(tmp_path, l1="bhalo\n")
    before = [tag_token(t, lex_before) for t in probes]
    lex_after = write_lexicon(tmp_path, l1="bhalo\nnewword\n")
    after = [tag_token(t, lex_after) for t in probes]
    assert before == after
    assert tag_token("newword", lex_after) is LanguageTag.L1


def test_tagging_deterministic(lexicon):
    sent = tokenize("ei movie ta ekdom bhalo chilo !")
    assert tag_tokens(sent, lexicon) == tag_tokens(sent, lexicon)

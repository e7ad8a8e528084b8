"""Word lists: pluralization, articles, file loading, bundled vocabularies."""

import pytest

from nlsatgen.lexicon import (
    RESERVED_WORDS,
    Lexicon,
    default_attributes,
    default_entities,
    default_food_lexicon,
    default_occupation_lexicon,
    load_lexicon,
    load_wordlist,
    pluralize,
)


def test_pluralize_rules():
    assert pluralize("apple") == "apples"
    assert pluralize("box") == "boxes"
    assert pluralize("waltz") == "waltzes"
    assert pluralize("peach") == "peaches"
    assert pluralize("dish") == "dishes"
    assert pluralize("cherry") == "cherries"
    assert pluralize("day") == "days"
    assert pluralize("bus") == "buses"


def test_lexicon_basic_lookup():
    lex = Lexicon(("carrot", "steak", "olive"))
    assert lex.article("carrot") == "a"
    assert lex.article("olive") == "an"
    assert lex.singular_of("carrots") == "carrot"
    assert lex.singular_of("carrot") == "carrot"
    assert lex.singular_of("nonword") is None


def test_lexicon_article_overrides():
    lex = Lexicon(
        ("hourglass", "unicycle"),
        article_overrides={"hourglass": "an", "unicycle": "a"},
    )
    assert lex.article("hourglass") == "an"
    assert lex.article("unicycle") == "a"


def test_lexicon_rejects_bad_nouns():
    with pytest.raises(ValueError):
        Lexicon(("carrot", "carrot"))  # duplicate
    with pytest.raises(ValueError):
        Lexicon(("Carrot",))  # uppercase
    with pytest.raises(ValueError):
        Lexicon(("two words",))


def test_lexicon_rejects_reserved_words():
    for word in ("if", "then", "no", "not", "every", "who"):
        assert word in RESERVED_WORDS
        with pytest.raises(ValueError):
            Lexicon((word, "carrot"))


def test_lexicon_rejects_bad_proper_nouns():
    with pytest.raises(ValueError):
        Lexicon(("carrot",), proper_nouns=("alice",))  # not capitalized
    with pytest.raises(ValueError):
        Lexicon(("carrot",), proper_nouns=("Alice", "Alice"))


def test_lexicon_rejects_bad_overrides():
    with pytest.raises(ValueError):
        Lexicon(("carrot",), article_overrides={"missing": "an"})
    with pytest.raises(ValueError):
        Lexicon(("carrot",), article_overrides={"carrot": "the"})


def test_load_lexicon_with_comments_and_overrides(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text("# my words\ncarrot\nhourglass|an\n\nsteak\n")
    lex = load_lexicon(path)
    assert lex.count_nouns == ("carrot", "hourglass", "steak")
    assert lex.article("hourglass") == "an"
    assert lex.article("carrot") == "a"


def test_load_lexicon_with_names_file(tmp_path):
    nouns = tmp_path / "nouns.txt"
    nouns.write_text("carrot\n")
    names = tmp_path / "names.txt"
    names.write_text("Alice\nBob\n")
    lex = load_lexicon(nouns, names)
    assert lex.proper_nouns == ("Alice", "Bob")


def test_load_wordlist_rejects_override_syntax(tmp_path):
    path = tmp_path / "names.txt"
    path.write_text("Alice\nBob|an\n")
    with pytest.raises(ValueError):
        load_wordlist(path)


def test_load_wordlist_reads_plain_lines(tmp_path):
    path = tmp_path / "names.txt"
    path.write_text("# people\nAlice\nBob\n")
    assert load_wordlist(path) == ("Alice", "Bob")


def test_bundled_vocabularies_are_large_enough():
    food = default_food_lexicon()
    jobs = default_occupation_lexicon()
    assert len(food.count_nouns) >= 70
    assert len(jobs.count_nouns) >= 70
    assert len(jobs.proper_nouns) >= 20
    assert len(default_attributes()) >= 20
    assert len(default_entities()) >= 10


def test_bundled_vocabularies_contain_demo_words():
    food = default_food_lexicon()
    for word in ("carrot", "steak", "banana"):
        assert word in food.count_nouns
    jobs = default_occupation_lexicon()
    for word in ("doctor", "philosopher", "baker", "gardener"):
        assert word in jobs.count_nouns
    assert "John" in jobs.proper_nouns
    assert "red" in default_attributes()
    assert "lion" in default_entities()


def test_bundled_article_sanity():
    jobs = default_occupation_lexicon()
    for word in jobs.count_nouns:
        if word[0] in "aeiou" and word not in jobs.article_overrides:
            assert jobs.article(word) == "an"

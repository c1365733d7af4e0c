import pytest
from hypothesis import given, strategies as st

from conftest import words
from fthreehalves.errors import ParseError
from fthreehalves.plmap import compose, generator, identity
from fthreehalves.words import (
    REL_A_TEXT,
    REL_B_TEXT,
    Word,
    commutator,
    evaluate,
    free_reduce,
    relation_words,
    relations,
    substitute,
)


def _naive_reduce(text):
    out = []
    for c in text:
        if out and out[-1] == c.swapcase():
            out.pop()
        else:
            out.append(c)
    return "".join(out)


@pytest.mark.parametrize(
    "text, reduced",
    [("", ""), ("lL", ""), ("lrRL", ""), ("lrRrL", "lrL"), ("RLlr", ""), ("llLrR", "l"), ("rLlR l", "l")],
)
def test_free_reduce_examples(text, reduced):
    assert str(free_reduce(Word(text))) == reduced


def test_parse_errors_report_position():
    with pytest.raises(ParseError) as exc:
        Word("lrx")
    assert exc.value.position == 2
    with pytest.raises(ParseError):
        Word.from_json('[["l", 2]]')
    with pytest.raises(ParseError):
        Word.from_program({"program": [["l", 1], [0, 5]]})


def test_text_and_json_round_trip():
    w = Word("lRrL")
    assert w.to_json() == [["l", 1], ["r", -1], ["r", 1], ["l", -1]]
    assert Word.from_json(w.to_json()) == w
    assert str(~w) == "lRrL"
    assert str(~Word("lr")) == "RL"
    assert len(Word("lr") ** 3) == 6 and str(Word("lr") ** -1) == "RL"


def test_relation_words_from_brackets():
    a, b = relation_words()
    assert str(a) == REL_A_TEXT and str(b) == REL_B_TEXT
    assert len(a) == len(b) == 20
    assert str(free_reduce(commutator("", "lr"))) == ""


def test_relations_hold():
    for rel in relations():
        assert rel.holds()
        assert evaluate(rel.word) != identity()


def test_evaluate_reads_left_to_right():
    assert evaluate("lr") == compose(generator("l"), generator("r"))
    assert evaluate("L") == generator("l").inverse()
    assert evaluate("") == identity()


@given(words(8), words(8))
def test_evaluate_is_a_homomorphism(u, v):
    assert evaluate(u * v) == compose(evaluate(u), evaluate(v))
    assert evaluate(~u) == evaluate(u).inverse()


@given(st.text(alphabet="lrLR", max_size=30))
def test_free_reduce_matches_stack(text):
    w = free_reduce(Word(text))
    assert str(w) == _naive_reduce(text)
    assert w.is_reduced()
    assert evaluate(w) == evaluate(text)


@given(words(6), words(6), words(6))
def test_reduction_of_products_is_associative(a, b, c):
    left = free_reduce(free_reduce(a * b) * c)
    right = free_reduce(a * free_reduce(b * c))
    assert left == right
    assert str(left) == _naive_reduce(str(a) + str(b) + str(c))


@given(words(6), words(4), words(4))
def test_substitute_is_a_homomorphism(w, x, y):
    images = {"l": x, "r": y}
    flat = "".join(str(x) if c == "l" else str(y) if c == "r" else str(~x) if c == "L" else str(~y) for c in str(w))
    assert str(substitute(w, images)) == flat


def test_iterated_substitution_stays_small():
    w = Word("lr")
    for _ in range(40):
        w = substitute(w, {"l": Word("lr"), "r": Word("rl")})
    assert w.length == 2**41
    assert w.program_size < 200
    assert w.to_program()["length"] == 2**41


@given(words(20))
def test_program_round_trip(w):
    assert Word.from_program(w.to_program()) == w
    assert str(Word.from_program(w.to_program())) == str(w)

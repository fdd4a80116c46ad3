import pytest
from hypothesis import given

from conftest import FIXTURES, chrobaks, nfas
from unaryfa import parse_uaf, print_uaf
from unaryfa.errors import FormatError


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.uaf")), ids=lambda p: p.name)
def test_fixture_round_trip(path):
    text = path.read_text()
    assert print_uaf(parse_uaf(text)) == text


@given(chrobaks())
def test_chrobak_round_trip(c):
    assert parse_uaf(print_uaf(c)) == c


@given(nfas())
def test_nfa_round_trip(a):
    assert parse_uaf(print_uaf(a)) == a


def test_comments_and_blank_lines():
    text = "# evens\nuaf 1\n\nkind chrobak  # canonical\nstem -\ncycle 10\n"
    assert print_uaf(parse_uaf(text)) == "uaf 1\nkind chrobak\nstem -\ncycle 10\n"


def test_missing_stem_means_empty():
    c = parse_uaf("uaf 1\nkind chrobak\ncycle 1\n")
    assert c.stem.length == 0


@pytest.mark.parametrize(
    "text",
    [
        "",
        "uaf 2\nkind nfa\n",
        "uaf 1\nkind dfa\n",
        "uaf 1\nkind nfa\nstart 0\n",
        "uaf 1\nkind nfa\nstates 2\nedge 0\n",
        "uaf 1\nkind nfa\nstates 2\nedge 0 5\n",
        "uaf 1\nkind nfa\nstates x\n",
        "uaf 1\nkind nfa\nstates 2\nbogus 1\n",
        "uaf 1\nkind chrobak\nstem 012\n",
        "uaf 1\nkind chrobak\nstem 1\nstem 0\n",
        "uaf 1\nkind chrobak\ncycle -\n",
        "uaf 1\nkind chrobak\nloop 1\n",
    ],
)
def test_malformed(text):
    with pytest.raises(FormatError):
        parse_uaf(text)

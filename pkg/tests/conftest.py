from pathlib import Path

import pytest

from ccheck.lexer import tokenize
from ccheck.parser import CParser, get_parser
from ccheck.source import SourceFile

CORPUS = Path(__file__).parent / "corpus"


def parse_text(text, doc="test.c", env0=None, parser=None):
    p = parser or get_parser()
    sf = SourceFile(doc, text)
    lex = tokenize(sf.logical, doc=doc, lines=sf.logical_lines)
    return p.parse(lex.tokens, lex.trivia, env0=env0, doc=doc, lines=sf.logical_lines)


@pytest.fixture(scope="session")
def parser():
    return get_parser()


@pytest.fixture()
def fresh_parser():
    return CParser()


def corpus_files():
    return sorted(CORPUS.glob("*.c"))

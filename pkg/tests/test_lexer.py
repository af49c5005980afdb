import pytest

from anonybench.cparse import lex
from anonybench.cparse.lexer import KEYWORDS
from anonybench.errors import LexError


def kinds(source):
    return [t.kind for t in lex(source)]


def texts(source):
    return [t.text for t in lex(source)]


def test_simple_program_token_stream():
    toks = lex("int main(){return 0;}")
    assert [t.text for t in toks] == ["int", "main", "(", ")", "{", "return", "0", ";", "}"]
    assert len(toks) == 9
    assert toks[0].kind == "keyword"
    assert toks[1].kind == "identifier"
    assert toks[5].kind == "keyword"
    assert toks[6].kind == "int-literal"


def test_spans_index_the_source():
    src = "int x = 42;"
    for tok in lex(src):
        assert src[tok.span.start : tok.span.end] == tok.text


def test_line_numbers():
    toks = lex("int a;\nint b;\n\nint c;")
    lines = {t.text: t.span.line_start for t in toks if t.kind == "identifier"}
    assert lines == {"a": 1, "b": 2, "c": 4}


def test_comments_are_skipped():
    assert texts("a /* mid */ b // tail\nc") == ["a", "b", "c"]


def test_block_comment_preserves_line_count():
    toks = lex("a /* one\ntwo\nthree */ b")
    assert toks[1].span.line_start == 3


def test_include_directive_single_token():
    toks = lex("#include <stdio.h>\nint x;")
    assert toks[0].kind == "include-directive"
    assert toks[0].text == "#include <stdio.h>"


def test_longest_match_punctuators():
    assert texts("a >>= b") == ["a", ">>=", "b"]
    assert texts("a >> b") == ["a", ">>", "b"]
    assert texts("x++ + ++y") == ["x", "++", "+", "++", "y"]
    assert texts("a->b") == ["a", "->", "b"]


def test_literals():
    toks = lex('1 2.5 1e3 0.5 "str" \'c\' \'\\n\' \'\\0\'')
    assert [t.kind for t in toks] == [
        "int-literal",
        "float-literal",
        "float-literal",
        "float-literal",
        "string-literal",
        "char-literal",
        "char-literal",
        "char-literal",
    ]


def test_string_with_escapes():
    toks = lex(r'"a\"b\\c"')
    assert toks[0].text == r'"a\"b\\c"'


def test_all_keywords_lex_as_keywords():
    for kw in KEYWORDS:
        toks = lex(kw)
        assert toks[0].kind == "keyword", kw


def test_unterminated_string():
    with pytest.raises(LexError, match="unterminated"):
        lex('"abc')


def test_unterminated_comment():
    with pytest.raises(LexError, match="unterminated"):
        lex("a /* b")


def test_unterminated_char():
    with pytest.raises(LexError, match="unterminated"):
        lex("'a")


def test_bad_character():
    with pytest.raises(LexError):
        lex("int a = 1 @ 2;")


def test_error_carries_line_number():
    try:
        lex('ok;\nbad "')
    except LexError as exc:
        assert exc.line == 2
        assert "line 2" in str(exc)
    else:
        pytest.fail("expected LexError")

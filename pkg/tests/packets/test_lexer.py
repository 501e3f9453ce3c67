from io import StringIO

from dynapsim.packets.lexer import Lexer
import dynapsim.packets.tokens as tokens


def test_lexer_empty():
    tk = Lexer(StringIO("   \n  "))
    assert type(tok := next(tk)) is tokens.Empty
    assert type(tok := next(tk)) is tokens.Empty


def test_lexer_comment():
    tk = Lexer(StringIO(" ;Comment here\n# other\n"))
    assert type(tok := next(tk)) is tokens.Comment
    assert tok.value == "Comment here"
    assert type(tok := next(tk)) is tokens.Empty
    assert type(tok := next(tk)) is tokens.Comment
    assert tok.value == " other"


def test_lexer_identifier():
    tk = Lexer(StringIO("conv_0 all_to_all p.x "))
    assert type(tok := next(tk)) is tokens.Identifier
    assert tok.value == "conv_0"
    assert type(tok := next(tk)) is tokens.Identifier
    assert tok.value == "all_to_all"
    assert type(tok := next(tk)) is tokens.Identifier
    assert tok.value == "p.x"


def test_lexer_address():
    tk = Lexer(StringIO("0:12:255:3 = 0x003FF\n"))
    expected = [0, None, 12, None, 255, None, 3]
    for value in expected:
        tok = next(tk)
        if value is None:
            assert type(tok) is tokens.Colon
        else:
            assert type(tok) is tokens.Decimal
            assert tok.value == value
    assert type(next(tk)) is tokens.Equals
    assert type(tok := next(tk)) is tokens.Hexadecimal
    assert tok.value == 0x3FF
    assert tok.digits == 5
    assert type(next(tk)) is tokens.Empty
    assert tk.line == 2


def test_lexer_numbers():
    tk = Lexer(StringIO("0.25 -3 1.5 -0.5 0 "))
    assert type(tok := next(tk)) is tokens.Float
    assert tok.value == 0.25
    assert type(tok := next(tk)) is tokens.Decimal
    assert tok.value == -3
    assert type(tok := next(tk)) is tokens.Float
    assert tok.value == 1.5
    assert type(tok := next(tk)) is tokens.Float
    assert tok.value == -0.5
    assert type(tok := next(tk)) is tokens.Decimal
    assert tok.value == 0


def test_lexer_invalid():
    assert type(next(Lexer(StringIO("0x ")))) is tokens.Invalid
    assert type(next(Lexer(StringIO("@")))) is tokens.Invalid
    assert type(next(Lexer(StringIO("1. ")))) is tokens.Invalid

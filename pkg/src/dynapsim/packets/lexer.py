import io
import os
import string
from enum import Enum
from typing import Callable, Dict, List, Literal

import dynapsim.packets.tokens as tokens
from .tokens import Token
from ..utils.buffer import TokenProducer

PUNCTUATION: Dict[str, Callable[[], Token]] = {
    ":": tokens.Colon,
    "=": tokens.Equals,
}
COMMENT_MARKERS = ";#"


class Lexer(TokenProducer[Token]):
    """Tokenizer shared by the memory-image and netlist readers."""

    class States(Enum):
        START, COMMENT, IDENT, LEADING0, HEX_PRE = range(0, 5)
        HEX, SIGN, DEC, FRAC_PRE, FRAC, STOP = range(5, 11)

    def __init__(self, buffer: io.StringIO) -> None:
        self.buffer: io.StringIO = buffer
        self.line: int = 1

    def __iter__(self) -> "Lexer":
        return self

    def _unread(self, pos: int):
        self.buffer.seek(pos, os.SEEK_SET)

    def __next__(self) -> Token:
        S = Lexer.States
        state = S.START
        text: List[str] = []
        value = 0
        digits = 0
        sign: Literal[-1, 1] = 1
        token: Token | None = None
        initial_pos = self.buffer.tell()

        while state != S.STOP:
            pos = self.buffer.tell()
            ch = self.buffer.read(1)
            if not ch:
                if pos == initial_pos:
                    raise StopIteration()
                # Treat end of input as the end of the last line.
                ch = "\n"
            match state:
                case S.START if ch == "\n":
                    self.line += 1
                    token, state = tokens.Empty(), S.STOP
                case S.START if ch in PUNCTUATION:
                    token, state = PUNCTUATION[ch](), S.STOP
                case S.START if ch.isspace():
                    pass
                case S.START if ch in COMMENT_MARKERS:
                    state = S.COMMENT
                case S.START if ch.isalpha() or ch == "_":
                    text.append(ch)
                    state = S.IDENT
                case S.START if ch == "0":
                    state = S.LEADING0
                case S.START if ch.isdecimal():
                    value, state = int(ch), S.DEC
                case S.START if ch in "+-":
                    sign = -1 if ch == "-" else 1
                    state = S.SIGN
                case S.START:
                    return tokens.Invalid()

                case S.COMMENT if ch == "\n":
                    self._unread(pos)
                    token, state = tokens.Comment("".join(text)), S.STOP
                case S.COMMENT:
                    text.append(ch)

                case S.IDENT if ch.isalnum() or ch in "_.":
                    text.append(ch)
                case S.IDENT:
                    self._unread(pos)
                    token, state = tokens.Identifier("".join(text)), S.STOP

                case S.LEADING0 if ch.isdigit():
                    value, state = int(ch), S.DEC
                case S.LEADING0 if ch in "xX":
                    state = S.HEX_PRE
                case S.LEADING0 if ch == ".":
                    text.append("0.")
                    state = S.FRAC_PRE
                case S.LEADING0:
                    self._unread(pos)
                    token, state = tokens.Decimal(0), S.STOP

                case S.HEX_PRE | S.HEX if ch in string.hexdigits:
                    value = value * 16 + int(ch, 16)
                    digits += 1
                    state = S.HEX
                case S.HEX_PRE:
                    return tokens.Invalid()
                case S.HEX:
                    self._unread(pos)
                    token, state = tokens.Hexadecimal(value, digits), S.STOP

                case S.SIGN if ch in string.digits:
                    value, state = int(ch), S.DEC
                case S.SIGN:
                    return tokens.Invalid()

                case S.DEC if ch in string.digits:
                    value = value * 10 + int(ch)
                case S.DEC if ch == ".":
                    text.append(f"{value}.")
                    state = S.FRAC_PRE
                case S.DEC:
                    self._unread(pos)
                    token, state = tokens.Decimal(sign * value), S.STOP

                case S.FRAC_PRE | S.FRAC if ch in string.digits:
                    text.append(ch)
                    state = S.FRAC
                case S.FRAC_PRE:
                    return tokens.Invalid()
                case S.FRAC:
                    self._unread(pos)
                    number = sign * float("".join(text))
                    token, state = tokens.Float(number), S.STOP

        assert token is not None
        return token

    def skip_to_next_line(self):
        while (ch := self.buffer.read(1)) != "\n" and len(ch) > 0:
            pass
        self.line += 1

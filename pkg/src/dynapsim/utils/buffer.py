from collections import deque
from typing import Deque, Protocol, Set


class TokenProducer[T](Protocol):

    def __next__(self) -> T: ...


class ParserBuffer[T]:
    """One-token lookahead over a lexer, shared by the line parsers."""

    def __init__(self, producer: TokenProducer[T]):
        self._producer = producer
        self._pending: Deque[T] = deque()

    def peek(self) -> T | None:
        if not self._pending:
            try:
                self._pending.append(next(self._producer))
            except StopIteration:
                return None
        return self._pending[0]

    def may_match(self, expected_type: type) -> T | None:
        token = self.peek()
        if token is not None and type(token) is expected_type:
            return self._pending.popleft()
        return None

    def must_match(self, expected_type: type, what: str | None = None) -> T:
        if (token := self.may_match(expected_type)) is not None:
            return token
        raise SyntaxError(f"Expected {what or expected_type.__name__}")

    def may_match_keyword(self, identifier_type: type, keyword: str):
        """Consumes an identifier only when it spells `keyword`."""
        token = self.peek()
        if type(token) is identifier_type and token.value.lower() == keyword:
            return self._pending.popleft()
        return None

    def skip_to_next_line(self, eol_markers: Set[type]):
        while (token := self.peek()) is not None:
            self._pending.popleft()
            if type(token) in eol_markers:
                break

from dataclasses import dataclass


@dataclass
class Identifier:
    value: str


@dataclass
class Comment:
    value: str


@dataclass
class Empty: ...


@dataclass
class Invalid: ...


@dataclass
class Colon: ...


@dataclass
class Equals: ...


@dataclass
class Decimal:
    value: int


@dataclass
class Float:
    value: float


@dataclass
class Hexadecimal:
    value: int
    # Digit count is significant: memory-image entries are width-checked.
    digits: int


type Token = (
    Empty
    | Invalid
    | Colon
    | Equals
    | Decimal
    | Float
    | Hexadecimal
    | Comment
    | Identifier
)

from enum import IntEnum


class ExitCode(IntEnum):
    OK = 0
    USAGE = 2
    CONFIG = 3
    PARSE = 4
    COMPILE = 5
    SIMULATION = 6
    IO = 7


class DynapError(Exception):
    exit_code: ExitCode = ExitCode.SIMULATION


class EncodingError(DynapError, ValueError):
    exit_code = ExitCode.COMPILE

    def __init__(self, field: str, value: int, width: int):
        self.field, self.value, self.width = field, value, width
        super().__init__(
            f"Field '{field}' value {value} does not fit in {width} bits"
        )


class RangeError(DynapError, ValueError):
    exit_code = ExitCode.PARSE


class DomainError(DynapError, ValueError):
    exit_code = ExitCode.CONFIG


class ConfigError(DynapError, ValueError):
    exit_code = ExitCode.CONFIG


class SpecError(DynapError, ValueError):
    exit_code = ExitCode.COMPILE


class ParseError(DynapError):
    exit_code = ExitCode.PARSE

    def __init__(self, message: str, errors: list[str] | None = None):
        self.errors = errors or []
        detail = "\n".join(self.errors)
        super().__init__(f"{message}\n{detail}" if detail else message)


class PlacementError(DynapError):
    exit_code = ExitCode.COMPILE

    def __init__(self, bound: str, message: str):
        self.bound = bound
        super().__init__(f"{bound}: {message}")


class TagExhaustionError(PlacementError):
    def __init__(self, chip: int, core: int, sources: int):
        self.chip, self.core, self.sources = chip, core, sources
        super().__init__(
            "tag exhaustion",
            f"{sources} distinct sources project into chip {chip} core {core};"
            " at most 1024 tags are available",
        )


class HopFieldError(PlacementError):
    def __init__(self, axis: str, distance: int):
        self.axis, self.distance = axis, distance
        super().__init__(
            "hop field",
            f"|d{axis}|={distance} exceeds 2-bit hop field; re-place the"
            " network onto closer chips",
        )


class RoutingFault(DynapError):
    """A packet that cannot be delivered; engines record these in stats."""


class NumericalFault(DynapError, ArithmeticError):
    pass


class SimulationError(DynapError, ValueError):
    pass

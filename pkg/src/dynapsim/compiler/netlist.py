import io
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Protocol, Tuple, runtime_checkable

import numpy as np

import dynapsim.packets.tokens as tokens
from ..errors import ParseError, SpecError
from ..packets.image import CommentLine, EmptyLine, ErrorLine
from ..packets.lexer import Lexer
from ..packets.words import SynType
from ..utils.buffer import ParserBuffer

logger = logging.getLogger(__name__)

"""
1. network    ::= "network" IDENT ["seed" DEC]
2. population ::= "population" IDENT DEC ["params" IDENT] ["virtual"]
3. connect    ::= "connect" IDENT IDENT RULE SYN
4. RULE       ::= "all_to_all" | "one_to_one" | "random" (FLOAT | DEC)
5. edge       ::= "edge" IDENT DEC IDENT DEC SYN [DEC]
6. command    ::= network | population | connect | edge
7. statement  ::= [COMMENT | command [COMMENT]] EMPTY
"""

SYN_NAMES: Dict[str, SynType] = {
    "fast_exc": SynType.FastExc,
    "slow_exc": SynType.SlowExc,
    "sub_inh": SynType.SubInh,
    "shunt_inh": SynType.ShuntInh,
}
RULES = ("all_to_all", "one_to_one", "random")

type ConnectionKey = Tuple[int, int, SynType]


@dataclass(frozen=True)
class Population:
    name: str
    size: int
    first: int
    params: str | None = None
    # Virtual populations are inputs outside the fabric; they only send.
    virtual: bool = False

    @property
    def ids(self) -> range:
        return range(self.first, self.first + self.size)


@dataclass
class NetworkSpec:
    """An abstract netlist: populations of neurons and typed connections.

    Neurons are numbered globally in population order. Each distinct
    (src, dst, syn) triple appears once; its multiplicity is the number of
    CAM entries it occupies at the destination.
    """

    name: str = "network"
    seed: int = 0
    populations: List[Population] = field(default_factory=list)
    connections: Dict[ConnectionKey, int] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return sum(p.size for p in self.populations)

    def add_population(
        self,
        name: str,
        size: int,
        params: str | None = None,
        virtual: bool = False,
    ) -> Population:
        if any(p.name == name for p in self.populations):
            raise SpecError(f"Population '{name}' is defined twice")
        if size < 1:
            raise SpecError(f"Population '{name}' must have at least 1 neuron")
        population = Population(name, size, self.size, params, virtual)
        self.populations.append(population)
        return population

    def population(self, name: str) -> Population:
        for p in self.populations:
            if p.name == name:
                return p
        raise SpecError(f"Unknown population '{name}'")

    def population_of(self, neuron: int) -> Population:
        for p in self.populations:
            if neuron in p.ids:
                return p
        raise SpecError(f"Neuron {neuron} is outside the network")

    def label(self, neuron: int) -> str:
        p = self.population_of(neuron)
        return f"{p.name}[{neuron - p.first}]"

    def is_virtual(self, neuron: int) -> bool:
        return self.population_of(neuron).virtual

    def connect(self, src: int, dst: int, syn: SynType, multiplicity=1):
        if multiplicity < 1:
            raise SpecError("Connection multiplicity must be at least 1")
        if self.is_virtual(dst):
            raise SpecError(f"{self.label(dst)} is virtual and cannot receive")
        self.population_of(src)
        key = (src, dst, SynType(syn))
        if key in self.connections:
            raise SpecError(
                f"Duplicate connection {self.label(src)} -> {self.label(dst)}"
                f" ({key[2].name}); give a multiplicity instead"
            )
        self.connections[key] = multiplicity

    def connect_populations(
        self,
        src: str,
        dst: str,
        rule: str,
        syn: SynType,
        p: float = 1.0,
        rng: np.random.Generator | None = None,
    ) -> int:
        """Expands a connection rule; returns the number of edges added."""
        a, b = self.population(src), self.population(dst)
        match rule:
            case "all_to_all":
                pairs = [(i, j) for i in a.ids for j in b.ids]
            case "one_to_one":
                if a.size != b.size:
                    raise SpecError(
                        f"one_to_one needs equal sizes ({a.size} != {b.size})"
                    )
                pairs = list(zip(a.ids, b.ids))
            case "random":
                if not 0 <= p <= 1:
                    raise SpecError(f"Connection probability {p} not in [0, 1]")
                rng = rng or np.random.default_rng(self.seed)
                hits = np.argwhere(rng.random((a.size, b.size)) < p)
                pairs = [(a.first + int(i), b.first + int(j)) for i, j in hits]
            case _:
                raise SpecError(f"Unknown connection rule '{rule}'")
        for i, j in pairs:
            self.connect(i, j, syn)
        return len(pairs)

    def fan_in(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for (_, dst, _), multiplicity in self.connections.items():
            counts[dst] = counts.get(dst, 0) + multiplicity
        return counts

    def edges(self) -> Iterator[Tuple[int, int, SynType, int]]:
        for (src, dst, syn), multiplicity in sorted(self.connections.items()):
            yield src, dst, syn, multiplicity


@runtime_checkable
class NetlistLine(Protocol):
    def source(self) -> str: ...


@dataclass
class NetworkLine:
    name: str
    seed: int = 0

    def source(self) -> str:
        return f"network {self.name} seed {self.seed}"


@dataclass
class PopulationLine:
    name: str
    size: int
    params: str | None = None
    virtual: bool = False

    def source(self) -> str:
        params = f" params {self.params}" if self.params else ""
        virtual = " virtual" if self.virtual else ""
        return f"population {self.name} {self.size}{params}{virtual}"


@dataclass
class ConnectLine:
    src: str
    dst: str
    rule: str
    syn: SynType
    p: float = 1.0

    def source(self) -> str:
        rule = f"random {self.p}" if self.rule == "random" else self.rule
        return f"connect {self.src} {self.dst} {rule} {syn_name(self.syn)}"


@dataclass
class EdgeLine:
    src: str
    src_index: int
    dst: str
    dst_index: int
    syn: SynType
    multiplicity: int = 1

    def source(self) -> str:
        text = (
            f"edge {self.src} {self.src_index} {self.dst} {self.dst_index}"
            f" {syn_name(self.syn)}"
        )
        return text + (f" {self.multiplicity}" if self.multiplicity > 1 else "")


def syn_name(syn: SynType) -> str:
    return next(name for name, value in SYN_NAMES.items() if value == syn)


class NetlistParser:
    def __init__(self, buffer: io.StringIO):
        self.lexer = Lexer(buffer)
        self._buffer = ParserBuffer(self.lexer)

    def __iter__(self):
        return self

    def __next__(self) -> NetlistLine:
        if self._buffer.peek() is None:
            raise StopIteration()
        line = self.lexer.line
        try:
            return self.statement()
        except SyntaxError as s:
            self._buffer.skip_to_next_line({tokens.Empty})
            return ErrorLine(comment=s.msg or None, line=line)

    def _identifier(self, what: str) -> str:
        return self._buffer.must_match(tokens.Identifier, what).value

    def _count(self, what: str) -> int:
        value = self._buffer.must_match(tokens.Decimal, what).value
        if value < 0:
            raise SyntaxError(f"Expected non-negative {what}")
        return value

    def _syn(self) -> SynType:
        name = self._identifier("synapse type")
        if (syn := SYN_NAMES.get(name.lower())) is None:
            raise SyntaxError(f"Unknown synapse type '{name}'")
        return syn

    # network ::= "network" IDENT ["seed" DEC]
    def network(self) -> NetworkLine:
        name = self._identifier("network name")
        if self._buffer.may_match_keyword(tokens.Identifier, "seed"):
            return NetworkLine(name, self._count("seed"))
        return NetworkLine(name)

    # population ::= "population" IDENT DEC ["params" IDENT] ["virtual"]
    def population(self) -> PopulationLine:
        name = self._identifier("population name")
        size = self._count("population size")
        params = None
        if self._buffer.may_match_keyword(tokens.Identifier, "params"):
            params = self._identifier("parameter set name")
        virtual = bool(
            self._buffer.may_match_keyword(tokens.Identifier, "virtual")
        )
        return PopulationLine(name, size, params, virtual)

    # connect ::= "connect" IDENT IDENT RULE SYN
    def connect(self) -> ConnectLine:
        src = self._identifier("source population")
        dst = self._identifier("target population")
        rule = self._identifier("connection rule").lower()
        if rule not in RULES:
            raise SyntaxError(f"Unknown connection rule '{rule}'")
        p = 1.0
        if rule == "random":
            if value := self._buffer.may_match(tokens.Float):
                p = value.value
            else:
                whole = self._buffer.must_match(tokens.Decimal, "probability")
                p = float(whole.value)
        return ConnectLine(src, dst, rule, self._syn(), p)

    # edge ::= "edge" IDENT DEC IDENT DEC SYN [DEC]
    def edge(self) -> EdgeLine:
        src = self._identifier("source population")
        i = self._count("source index")
        dst = self._identifier("target population")
        j = self._count("target index")
        syn = self._syn()
        multiplicity = 1
        if value := self._buffer.may_match(tokens.Decimal):
            multiplicity = value.value
        return EdgeLine(src, i, dst, j, syn, multiplicity)

    # statement ::= [COMMENT | command [COMMENT]] EMPTY
    def statement(self) -> NetlistLine:
        return_line: NetlistLine
        if self._buffer.may_match(tokens.Empty):
            return EmptyLine()
        elif comment := self._buffer.may_match(tokens.Comment):
            return_line = CommentLine(comment.value)
        else:
            keyword = self._identifier("statement keyword").lower()
            match keyword:
                case "network":
                    return_line = self.network()
                case "population":
                    return_line = self.population()
                case "connect":
                    return_line = self.connect()
                case "edge":
                    return_line = self.edge()
                case _:
                    raise SyntaxError(f"Unknown statement '{keyword}'")
            self._buffer.may_match(tokens.Comment)
        self._buffer.must_match(tokens.Empty, "end of line")
        return return_line


def parse_netlist(text: str) -> List[Tuple[int, NetlistLine]]:
    """Returns (line number, parsed line) pairs."""
    parser = NetlistParser(io.StringIO(text.rstrip() + "\n"))
    numbered = []
    while True:
        line = parser.lexer.line
        try:
            numbered.append((line, next(parser)))
        except StopIteration:
            return numbered


def load_netlist(text: str) -> NetworkSpec:
    """Builds a NetworkSpec, reporting every bad line in one ParseError.

    Random rules draw from one generator seeded by the network seed, in
    file order.
    """
    lines = parse_netlist(text)
    errors = [line.source() for _, line in lines if isinstance(line, ErrorLine)]
    spec = NetworkSpec()
    for _, line in lines:
        if isinstance(line, NetworkLine):
            spec.name, spec.seed = line.name, line.seed
    rng = np.random.default_rng(spec.seed)
    for number, line in lines:
        try:
            match line:
                case PopulationLine():
                    spec.add_population(
                        line.name, line.size, line.params, line.virtual
                    )
                case ConnectLine():
                    spec.connect_populations(
                        line.src, line.dst, line.rule, line.syn, line.p, rng
                    )
                case EdgeLine():
                    a, b = spec.population(line.src), spec.population(line.dst)
                    for index, p in ((line.src_index, a), (line.dst_index, b)):
                        if index >= p.size:
                            raise SpecError(
                                f"Index {index} outside population '{p.name}'"
                            )
                    spec.connect(
                        a.first + line.src_index,
                        b.first + line.dst_index,
                        line.syn,
                        line.multiplicity,
                    )
        except SpecError as e:
            errors.append(ErrorLine(str(e), number).source())
    if errors:
        raise ParseError("Malformed netlist", errors)
    logger.debug(
        "netlist %s: %d neurons, %d connections",
        spec.name,
        spec.size,
        len(spec.connections),
    )
    return spec


def netlist_source(spec: NetworkSpec) -> str:
    """Renders a spec as explicit edges; load_netlist reads it back."""
    lines: List[NetlistLine] = [NetworkLine(spec.name, spec.seed)]
    for p in spec.populations:
        lines.append(PopulationLine(p.name, p.size, p.params, p.virtual))
    for src, dst, syn, multiplicity in spec.edges():
        a, b = spec.population_of(src), spec.population_of(dst)
        lines.append(
            EdgeLine(
                a.name, src - a.first, b.name, dst - b.first, syn, multiplicity
            )
        )
    return "\n".join(line.source() for line in lines) + "\n"

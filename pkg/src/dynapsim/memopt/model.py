import math
from dataclasses import dataclass, field
from typing import List

from ..errors import DomainError


def _positive(**values: float | None):
    for name, value in values.items():
        if value is not None and not value > 0:
            raise DomainError(f"{name} must be positive, got {value}")


def _log2(name: str, value: float) -> float:
    if value <= 0:
        raise DomainError(f"log2({name}) undefined for {name}={value}")
    return math.log2(value)


@dataclass(frozen=True)
class NetParams:
    """A point in the two-stage routing design space.

    N neurons with fan-out F, grouped in clusters (cores) of C neurons that
    share K tags (alpha = K/C). M is the number of subscribers per broadcast;
    None means "evaluate at the optimum M*".
    """

    N: float
    F: float
    C: float
    K: float | None = None
    alpha: float | None = None
    M: float | None = None

    def __post_init__(self):
        _positive(N=self.N, F=self.F, C=self.C, K=self.K, alpha=self.alpha)
        _positive(M=self.M)
        if self.K is None:
            alpha = 1.0 if self.alpha is None else self.alpha
            object.__setattr__(self, "alpha", alpha)
            object.__setattr__(self, "K", alpha * self.C)
        elif self.alpha is None:
            object.__setattr__(self, "alpha", self.K / self.C)
        elif not math.isclose(self.K, self.alpha * self.C):
            raise DomainError(f"K={self.K} disagrees with alpha*C")

    @property
    def tags(self) -> float:
        assert self.K is not None
        return self.K

    @property
    def ratio(self) -> float:
        assert self.alpha is not None
        return self.alpha


@dataclass(frozen=True)
class Violation:
    name: str
    description: str
    # Smallest cluster size meeting the requirement (None for design checks).
    required: float | None
    actual: float
    margin: float

    def __str__(self):
        need = f", needs C >= {self.required:g}" if self.required else ""
        return (
            f"{self.name}: {self.description}"
            f" (margin {self.margin:.4g}{need})"
        )


@dataclass(frozen=True)
class OptimalM:
    value: float
    lower: int
    upper: int

    def first_stage_entries(self, F: float) -> int:
        return math.ceil(F / self.value)


@dataclass
class MemReport:
    mem_source_bits: float
    mem_target_bits: float
    m_star: float
    M: float
    violations: List[Violation] = field(default_factory=list)

    @property
    def mem_total_bits(self) -> float:
        return self.mem_source_bits + self.mem_target_bits

    @property
    def feasible(self) -> bool:
        return len(self.violations) == 0


def mem_flat(N: float, F: float) -> float:
    if not N >= 2 or not F >= 1:
        raise DomainError(f"flat memory needs N >= 2 and F >= 1 (N={N}, F={F})")
    return F * math.log2(N)


def m_star(N: float, F: float, C: float, alpha: float = 1.0) -> OptimalM:
    _positive(N=N, F=F, C=C, alpha=alpha)
    if alpha * C <= 1:
        raise DomainError(f"alpha*C={alpha * C} must exceed 1")
    cluster_bits = _log2("alpha*C", alpha * C)
    network_bits = _log2("alpha*N", alpha * N)
    if network_bits < 0:
        raise DomainError(f"alpha*N={alpha * N} must be at least 1")
    value = math.sqrt(F / alpha * network_bits / cluster_bits)
    return OptimalM(value, max(1, math.floor(value)), max(1, math.ceil(value)))


def mem_at_optimum(N: float, F: float, C: float, alpha: float = 1.0) -> float:
    m_star(N, F, C, alpha)
    return 2 * math.sqrt(
        alpha * F * math.log2(alpha * C) * math.log2(alpha * N)
    )


def mem_two_stage(p: NetParams, hardware_bits: bool = False) -> MemReport:
    from .constraints import check_constraints

    optimum = m_star(p.N, p.F, p.C, p.ratio).value
    M = optimum if p.M is None else p.M
    tag_bits = _log2("K", p.tags)
    node_bits = math.log2(p.N / p.C)
    entries = p.F / M
    target_tags = p.tags * M / p.C
    if hardware_bits:
        tag_bits = math.ceil(tag_bits)
        node_bits = max(0, math.ceil(node_bits))
        entries = math.ceil(entries)
        target_tags = math.ceil(target_tags)
    return MemReport(
        mem_source_bits=entries * (tag_bits + node_bits),
        mem_target_bits=target_tags * tag_bits,
        m_star=optimum,
        M=M,
        violations=check_constraints(p),
    )


def best_integer_m(p: NetParams) -> int:
    """Returns whichever of floor(M*) and ceil(M*) stores fewer bits."""
    optimum = m_star(p.N, p.F, p.C, p.ratio)
    candidates = []
    for M in (optimum.lower, optimum.upper):
        at_m = NetParams(p.N, p.F, p.C, p.K, p.alpha, M)
        candidates.append((mem_two_stage(at_m).mem_total_bits, M))
    return min(candidates)[1]

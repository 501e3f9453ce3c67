import logging
import math
from typing import Callable, List

from .model import NetParams, Violation, m_star

logger = logging.getLogger(__name__)

FANOUT_REQUIREMENT = "fan-out >= M*"
CLUSTER_REQUIREMENT = "cluster size >= M*"


def _holds(lhs: float, rhs: float) -> bool:
    return lhs >= rhs or math.isclose(lhs, rhs, rel_tol=1e-12)


def _fanout_holds(N: float, F: float, C: float, alpha: float) -> bool:
    return _holds(F, m_star(N, F, C, alpha).value)


def _cluster_lhs(C: float, alpha: float) -> float:
    return math.sqrt(alpha) * C * math.sqrt(math.log2(alpha * C))


def _cluster_rhs(N: float, F: float, alpha: float) -> float:
    return math.sqrt(F * math.log2(alpha * N))


def _cluster_holds(N: float, F: float, C: float, alpha: float) -> bool:
    return _holds(_cluster_lhs(C, alpha), _cluster_rhs(N, F, alpha))


def _smallest_cluster(holds: Callable[[int], bool], alpha: float) -> int:
    lo = math.floor(1 / alpha) + 1
    if holds(lo):
        return lo
    hi = lo * 2
    while not holds(hi):
        hi *= 2
    # Invariant: holds(hi) and not holds(lo).
    while hi - lo > 1:
        mid = (lo + hi) // 2
        lo, hi = (lo, mid) if holds(mid) else (mid, hi)
    return hi


def min_cluster_size(
    N: float, F: float, alpha: float = 1.0, requirement=CLUSTER_REQUIREMENT
) -> int:
    if requirement == FANOUT_REQUIREMENT:
        return _smallest_cluster(lambda C: _fanout_holds(N, F, C, alpha), alpha)
    return _smallest_cluster(lambda C: _cluster_holds(N, F, C, alpha), alpha)


def constraint_margins(p: NetParams) -> List[Violation]:
    """Evaluates every feasibility requirement, satisfied or not."""
    alpha = p.ratio
    optimum = m_star(p.N, p.F, p.C, alpha).value
    if alpha == 1:
        fanout_required: float = p.N ** (1 / p.F)
    else:
        fanout_required = min_cluster_size(p.N, p.F, alpha, FANOUT_REQUIREMENT)
    report = [
        Violation(
            FANOUT_REQUIREMENT,
            "C >= N^(1/F)",
            fanout_required,
            p.F,
            p.F - optimum,
        ),
        Violation(
            CLUSTER_REQUIREMENT,
            "C*sqrt(log2 C) >= sqrt(F*log2 N)",
            min_cluster_size(p.N, p.F, alpha, CLUSTER_REQUIREMENT),
            p.C,
            _cluster_lhs(p.C, alpha) - _cluster_rhs(p.N, p.F, alpha),
        ),
    ]
    if p.M is not None:
        report.append(Violation("M <= C", "design point", None, p.M, p.C - p.M))
        report.append(Violation("M <= F", "design point", None, p.M, p.F - p.M))
    return report


def check_constraints(p: NetParams) -> List[Violation]:
    holds = {
        FANOUT_REQUIREMENT: _fanout_holds(p.N, p.F, p.C, p.ratio),
        CLUSTER_REQUIREMENT: _cluster_holds(p.N, p.F, p.C, p.ratio),
    }
    design_ok = p.M is None or (p.M <= p.C and p.M <= p.F)
    if all(holds.values()) and design_ok:
        return []
    violations = [
        entry
        for entry in constraint_margins(p)
        if not holds.get(entry.name, entry.margin >= 0)
    ]
    if violations:
        logger.debug("%s violates %s", p, [v.name for v in violations])
    return violations

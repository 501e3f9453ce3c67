from .constraints import (
    CLUSTER_REQUIREMENT,
    FANOUT_REQUIREMENT,
    check_constraints,
    constraint_margins,
    min_cluster_size,
)
from .model import (
    MemReport,
    NetParams,
    OptimalM,
    Violation,
    best_integer_m,
    m_star,
    mem_at_optimum,
    mem_flat,
    mem_two_stage,
)
from .report import analysis_table
from .scaling import (
    PROTOTYPE,
    DesignPoint,
    ScalingRow,
    fanin_capacity,
    r3_throughput,
    scaling_table,
)

from typing import Iterable, List

from .model import NetParams, mem_flat, mem_two_stage

COLUMNS = [
    "N",
    "F",
    "C",
    "K",
    "M*",
    "MEM_S",
    "MEM_T",
    "MEM",
    "flat",
    "feasible",
]


def _fmt(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return f"{value:.4f}"


def analysis_row(p: NetParams, hardware_bits: bool = False) -> List[str]:
    report = mem_two_stage(p, hardware_bits)
    return [
        _fmt(p.N),
        _fmt(p.F),
        _fmt(p.C),
        _fmt(p.tags),
        _fmt(report.m_star),
        _fmt(report.mem_source_bits),
        _fmt(report.mem_target_bits),
        _fmt(report.mem_total_bits),
        _fmt(mem_flat(p.N, p.F)),
        "yes" if report.feasible else "no",
    ]


def analysis_table(
    grid: Iterable[NetParams], hardware_bits: bool = False
) -> str:
    lines = ["\t".join(COLUMNS)]
    for p in grid:
        lines.append("\t".join(analysis_row(p, hardware_bits)))
    return "\n".join(lines) + "\n"

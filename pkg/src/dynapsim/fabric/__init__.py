from .config import (
    BOARD_3X3,
    ENERGY_PRESETS,
    EnergyTable,
    FabricConfig,
    LatencyTable,
)
from .engine import CoreSink, Delivery, Engine, PassiveCore
from .events import ProgramCam, ProgramSram
from .queue import EventQueue
from .routers import (
    Direction,
    Port,
    R1Decision,
    R1State,
    ToCore,
    ToR3,
    r1_dispatch,
    r1_emit,
    r2_route,
    r3_route,
    route_word,
)
from .stats import SimStats

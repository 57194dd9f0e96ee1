"""Energy and throughput estimation for two-level multicore cache hierarchies.

The package combines three pieces:

* an analytical model turning per-application cache transaction counts into
  per-term energy and execution-time breakdowns (`cachemodel.model`),
* a trace-driven simulator of a private-L1 / shared-L2 hierarchy that
  produces those counts from memory-access traces (`cachemodel.simulator`,
  `cachemodel.traceio`),
* a CLI for single runs, design-space sweeps, and model-vs-reference
  comparison (`cachemodel.cli`).
"""

from .errors import (
    CacheModelError,
    InconsistentCountsError,
    MissingCpiError,
    TraceFormatError,
    TraceRecordError,
    ValidationError,
)
from .model import (
    PENALTY_ALL_TRANSACTIONS,
    PENALTY_MISSES_ONLY,
    AccessCounts,
    CacheTechParams,
    DcacheTerms,
    EnergyReport,
    IcacheTerms,
    L2Terms,
    MemoryTechParams,
    ModelOptions,
    ProcessorParams,
    TimingReport,
    compute_cpi,
    dcache_energy,
    dcache_time,
    estimate_misc_energy,
    evaluate,
    icache_energy,
    icache_time,
    ins_time,
    l2_energy,
    l2_time,
    leakage_energy,
    resolve_cpi,
    total_energy,
    total_time,
)

__version__ = "0.1.0"

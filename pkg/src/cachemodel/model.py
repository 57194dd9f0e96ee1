"""Analytical energy and execution-time models for a two-level cache hierarchy.

The model consumes per-application transaction counts (reads, writes, misses
per cache level, memory accesses, cycles) plus per-access technology costs and
produces a per-term breakdown of energy (joules) and time (seconds).

Unit conventions: everything in this module is SI — joules, seconds, watts.
Parameter files carry nJ/ns/MHz and are converted exactly once at load time
(see `cachemodel.config`). Counts are plain non-negative integers; they convert
to float exactly up to 2**53, far beyond any realistic trace.

All functions here are pure and hold no state; they are safe to call from any
number of threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .errors import InconsistentCountsError, MissingCpiError, ValidationError

#: L2 miss-penalty conventions. ``all-transactions`` (the default) weighs the
#: read/write penalties by every L2 read/write transaction; ``misses-only``
#: weighs them by the L2 miss counts instead, which is the physically
#: conventional definition of a miss penalty.
PENALTY_ALL_TRANSACTIONS = "all-transactions"
PENALTY_MISSES_ONLY = "misses-only"
L2_PENALTY_CONVENTIONS = (PENALTY_ALL_TRANSACTIONS, PENALTY_MISSES_ONLY)


def _check_finite_nonneg(obj, name: str) -> None:
    value = getattr(obj, name)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValidationError(name, f"expected a number, got {value!r}")
    if not math.isfinite(value) or value < 0:
        raise ValidationError(name, f"must be finite and >= 0, got {value!r}")


def _check_count(obj, name: str) -> None:
    value = getattr(obj, name)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(name, f"expected an integer count, got {value!r}")
    if value < 0:
        raise ValidationError(name, f"must be >= 0, got {value!r}")


@dataclass(frozen=True)
class CacheTechParams:
    """Per-access energy (J) and time (s) of one cache level."""

    read_cycle_energy: float
    write_cycle_energy: float
    read_cycle_time: float
    write_cycle_time: float

    def __post_init__(self):
        for f in fields(self):
            _check_finite_nonneg(self, f.name)


@dataclass(frozen=True)
class MemoryTechParams:
    """Per-access energy (J) and time (s) of the data (RAM) and code (ROM) memories."""

    ram_read_energy: float = 0.0
    ram_write_energy: float = 0.0
    rom_read_energy: float = 0.0
    ram_read_time: float = 0.0
    ram_write_time: float = 0.0
    rom_read_time: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            _check_finite_nonneg(self, f.name)


@dataclass(frozen=True)
class ProcessorParams:
    """Processor-level model inputs.

    Miss penalties are expressed in extra processor cycles charged per miss;
    `cycle_energy`/`cycle_time` price one processor cycle.
    """

    cycle_energy: float
    cycle_time: float
    leak_power: float = 0.0
    ic_read_miss_penalty: int = 0
    dc_read_miss_penalty: int = 0
    dc_write_miss_penalty: int = 0
    l2_read_miss_penalty: int = 0
    l2_write_miss_penalty: int = 0
    core_count: int = 1

    def __post_init__(self):
        _check_finite_nonneg(self, "cycle_energy")
        _check_finite_nonneg(self, "leak_power")
        if not isinstance(self.cycle_time, (int, float)) or not math.isfinite(self.cycle_time) or self.cycle_time <= 0:
            raise ValidationError("cycle_time", f"must be finite and > 0, got {self.cycle_time!r}")
        for name in ("ic_read_miss_penalty", "dc_read_miss_penalty", "dc_write_miss_penalty",
                     "l2_read_miss_penalty", "l2_write_miss_penalty"):
            _check_count(self, name)
        _check_count(self, "core_count")
        if self.core_count < 1:
            raise ValidationError("core_count", f"must be >= 1, got {self.core_count}")


@dataclass(frozen=True)
class AccessCounts:
    """Per-application transaction tallies feeding the models.

    Misses are counts, not rates: every miss field tallies the number of
    missing transactions over the whole run, so penalty terms scale with
    application length like every other term.
    """

    ic_reads: int = 0
    ic_read_misses: int = 0
    dc_reads: int = 0
    dc_writes: int = 0
    dc_read_misses: int = 0
    dc_write_misses: int = 0
    l2_ifetches: int = 0
    l2_data_reads: int = 0
    l2_data_writes: int = 0
    l2_read_misses: int = 0
    l2_write_misses: int = 0
    ram_reads: int = 0
    ram_writes: int = 0
    rom_reads: int = 0
    total_cycles: int = 0
    instruction_count: int = 0
    idle_time: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            if f.name == "idle_time":
                _check_finite_nonneg(self, "idle_time")
            else:
                _check_count(self, f.name)
        if self.ic_read_misses > self.ic_reads:
            raise ValidationError("ic_read_misses", f"exceeds ic_reads ({self.ic_read_misses} > {self.ic_reads})")
        if self.dc_read_misses > self.dc_reads:
            raise ValidationError("dc_read_misses", f"exceeds dc_reads ({self.dc_read_misses} > {self.dc_reads})")
        if self.dc_write_misses > self.dc_writes:
            raise ValidationError("dc_write_misses", f"exceeds dc_writes ({self.dc_write_misses} > {self.dc_writes})")
        if self.l2_read_misses > self.l2_ifetches + self.l2_data_reads:
            raise ValidationError(
                "l2_read_misses",
                f"exceeds l2_ifetches + l2_data_reads ({self.l2_read_misses} > "
                f"{self.l2_ifetches + self.l2_data_reads})",
            )
        if self.l2_write_misses > self.l2_data_writes:
            raise ValidationError(
                "l2_write_misses",
                f"exceeds l2_data_writes ({self.l2_write_misses} > {self.l2_data_writes})",
            )


@dataclass(frozen=True)
class IcacheTerms:
    """Instruction-cache breakdown; used for both energy (J) and time (s)."""

    read: float
    miss_penalty: float
    total: float


@dataclass(frozen=True)
class DcacheTerms:
    """Data-cache breakdown; used for both energy (J) and time (s)."""

    read: float
    write: float
    miss_penalty: float
    total: float


@dataclass(frozen=True)
class L2Terms:
    """L2 breakdown including downstream memory traffic; energy (J) or time (s)."""

    read: float
    write: float
    miss_penalty: float
    ram: float
    rom: float
    total: float


@dataclass(frozen=True)
class EnergyReport:
    """Full energy breakdown. `sum` is the plain sum of the five level terms;
    `total` is that sum divided by CPI, which is how the model defines the
    application total. Both are exposed so either view can be reported."""

    ic: IcacheTerms
    dc: DcacheTerms
    l2: L2Terms
    misc: float
    leak: float
    cpi: float
    sum: float
    total: float


@dataclass(frozen=True)
class TimingReport:
    """Full execution-time breakdown; `total` is the exact sum of the parts."""

    ic: IcacheTerms
    dc: DcacheTerms
    l2: L2Terms
    ins: float
    total: float


@dataclass(frozen=True)
class ModelOptions:
    """Knobs that are configuration, not measurement: CPI override, the
    direct miscellaneous-energy input, idle time, and the L2 penalty
    convention."""

    cpi: float | None = None
    misc_energy: float = 0.0
    idle_time: float = 0.0
    l2_penalty_convention: str = PENALTY_ALL_TRANSACTIONS

    def __post_init__(self):
        if self.cpi is not None:
            if not isinstance(self.cpi, (int, float)) or not math.isfinite(self.cpi) or self.cpi <= 0:
                raise ValidationError("cpi", f"override must be finite and > 0, got {self.cpi!r}")
        _check_finite_nonneg(self, "misc_energy")
        _check_finite_nonneg(self, "idle_time")
        if self.l2_penalty_convention not in L2_PENALTY_CONVENTIONS:
            raise ValidationError(
                "l2_penalty_convention",
                f"must be one of {L2_PENALTY_CONVENTIONS}, got {self.l2_penalty_convention!r}",
            )


def icache_energy(counts: AccessCounts, tech: CacheTechParams, proc: ProcessorParams) -> IcacheTerms:
    """Instruction-cache energy: per-read access energy plus stall energy for read misses."""
    read = tech.read_cycle_energy * counts.ic_reads
    miss_penalty = proc.cycle_energy * proc.ic_read_miss_penalty * counts.ic_read_misses
    return IcacheTerms(read=read, miss_penalty=miss_penalty, total=read + miss_penalty)


def dcache_energy(counts: AccessCounts, tech: CacheTechParams, proc: ProcessorParams) -> DcacheTerms:
    """Data-cache energy: read and write access energy plus stall energy for both miss kinds."""
    read = tech.read_cycle_energy * counts.dc_reads
    write = tech.write_cycle_energy * counts.dc_writes
    miss_penalty = proc.cycle_energy * (
        proc.dc_read_miss_penalty * counts.dc_read_misses
        + proc.dc_write_miss_penalty * counts.dc_write_misses
    )
    return DcacheTerms(read=read, write=write, miss_penalty=miss_penalty,
                       total=read + write + miss_penalty)


def _l2_penalty_args(counts: AccessCounts, convention: str) -> tuple[int, int]:
    if convention == PENALTY_ALL_TRANSACTIONS:
        return counts.l2_ifetches + counts.l2_data_reads, counts.l2_data_writes
    if convention == PENALTY_MISSES_ONLY:
        return counts.l2_read_misses, counts.l2_write_misses
    raise ValidationError("l2_penalty_convention",
                          f"must be one of {L2_PENALTY_CONVENTIONS}, got {convention!r}")


def l2_energy(counts: AccessCounts, tech_l2: CacheTechParams, mem: MemoryTechParams,
              proc: ProcessorParams, convention: str = PENALTY_ALL_TRANSACTIONS) -> L2Terms:
    """L2 energy: access terms, its miss-penalty term, and downstream RAM/ROM traffic.

    Under the default ``all-transactions`` convention the penalty term weighs
    read/write penalties by all L2 read/write transactions; ``misses-only``
    weighs them by the L2 miss counts.
    """
    read_arg, write_arg = _l2_penalty_args(counts, convention)
    read = tech_l2.read_cycle_energy * (counts.l2_ifetches + counts.l2_data_reads)
    write = tech_l2.write_cycle_energy * counts.l2_data_writes
    miss_penalty = proc.cycle_energy * (
        proc.l2_read_miss_penalty * read_arg + proc.l2_write_miss_penalty * write_arg
    )
    ram = mem.ram_read_energy * counts.ram_reads + mem.ram_write_energy * counts.ram_writes
    rom = mem.rom_read_energy * counts.rom_reads
    return L2Terms(read=read, write=write, miss_penalty=miss_penalty, ram=ram, rom=rom,
                   total=read + write + miss_penalty + ram + rom)


def leakage_energy(proc: ProcessorParams, counts: AccessCounts) -> float:
    """Static leakage energy: leakage power times idle time."""
    return proc.leak_power * counts.idle_time


def compute_cpi(counts: AccessCounts, override: float | None = None) -> float:
    """Cycles per instruction. An explicit override wins; otherwise the ratio
    of total cycles to instructions retired. Raises `MissingCpiError` when no
    instructions were retired and no override is available."""
    if override is not None:
        if not math.isfinite(override) or override <= 0:
            raise ValidationError("cpi", f"override must be finite and > 0, got {override!r}")
        return float(override)
    if counts.instruction_count == 0:
        raise MissingCpiError(
            "instruction_count is 0, so CPI cannot be derived; supply an explicit CPI"
        )
    return counts.total_cycles / counts.instruction_count


def resolve_cpi(counts: AccessCounts, override: float | None = None) -> float:
    """Like `compute_cpi`, but treats a fully idle run (zero cycles, zero
    instructions) as CPI 1.0 so that all-zero reports evaluate cleanly."""
    if override is None and counts.instruction_count == 0 and counts.total_cycles == 0:
        return 1.0
    return compute_cpi(counts, override)


def total_energy(ic: IcacheTerms, dc: DcacheTerms, l2: L2Terms,
                 misc: float, leak: float, cpi: float) -> EnergyReport:
    """Compose the application energy report from the per-level terms.

    The grand total is the sum of the five terms divided by CPI; the raw sum
    is carried alongside it.
    """
    if not isinstance(cpi, (int, float)) or not math.isfinite(cpi) or cpi <= 0:
        raise ValidationError("cpi", f"must be finite and > 0, got {cpi!r}")
    if not math.isfinite(misc) or misc < 0:
        raise ValidationError("misc", f"must be finite and >= 0, got {misc!r}")
    if not math.isfinite(leak) or leak < 0:
        raise ValidationError("leak", f"must be finite and >= 0, got {leak!r}")
    total_sum = ic.total + dc.total + l2.total + misc + leak
    return EnergyReport(ic=ic, dc=dc, l2=l2, misc=misc, leak=leak, cpi=float(cpi),
                        sum=total_sum, total=total_sum / cpi)


def icache_time(counts: AccessCounts, tech: CacheTechParams, proc: ProcessorParams) -> IcacheTerms:
    """Instruction-cache time: per-read access time plus stall time for read misses."""
    read = tech.read_cycle_time * counts.ic_reads
    miss_penalty = proc.cycle_time * proc.ic_read_miss_penalty * counts.ic_read_misses
    return IcacheTerms(read=read, miss_penalty=miss_penalty, total=read + miss_penalty)


def dcache_time(counts: AccessCounts, tech: CacheTechParams, proc: ProcessorParams) -> DcacheTerms:
    """Data-cache time; mirrors `dcache_energy` with times in place of energies."""
    read = tech.read_cycle_time * counts.dc_reads
    write = tech.write_cycle_time * counts.dc_writes
    miss_penalty = proc.cycle_time * (
        proc.dc_read_miss_penalty * counts.dc_read_misses
        + proc.dc_write_miss_penalty * counts.dc_write_misses
    )
    return DcacheTerms(read=read, write=write, miss_penalty=miss_penalty,
                       total=read + write + miss_penalty)


def l2_time(counts: AccessCounts, tech_l2: CacheTechParams, mem: MemoryTechParams,
            proc: ProcessorParams, convention: str = PENALTY_ALL_TRANSACTIONS) -> L2Terms:
    """L2 time; mirrors `l2_energy` with times in place of energies."""
    read_arg, write_arg = _l2_penalty_args(counts, convention)
    read = tech_l2.read_cycle_time * (counts.l2_ifetches + counts.l2_data_reads)
    write = tech_l2.write_cycle_time * counts.l2_data_writes
    miss_penalty = proc.cycle_time * (
        proc.l2_read_miss_penalty * read_arg + proc.l2_write_miss_penalty * write_arg
    )
    ram = mem.ram_read_time * counts.ram_reads + mem.ram_write_time * counts.ram_writes
    rom = mem.rom_read_time * counts.rom_reads
    return L2Terms(read=read, write=write, miss_penalty=miss_penalty, ram=ram, rom=rom,
                   total=read + write + miss_penalty + ram + rom)


def ins_time(counts: AccessCounts, proc: ProcessorParams, ic_read_time: float) -> float:
    """Time spent executing instructions outside cache-read service:
    cycle time times total cycles, minus the instruction-read time already
    attributed to the I-cache."""
    value = proc.cycle_time * counts.total_cycles - ic_read_time
    if value < 0:
        raise InconsistentCountsError(
            f"cycle_time * total_cycles ({proc.cycle_time * counts.total_cycles!r} s) is smaller "
            f"than the instruction-cache read time ({ic_read_time!r} s); total_cycles is too small "
            "for the given instruction-read traffic"
        )
    return value


def total_time(ic: IcacheTerms, dc: DcacheTerms, l2: L2Terms, ins: float) -> TimingReport:
    """Compose the application timing report; the total is the exact sum of the parts."""
    for name, value in (("ic.total", ic.total), ("dc.total", dc.total),
                        ("l2.total", l2.total), ("ins", ins)):
        if not math.isfinite(value) or value < 0:
            raise ValidationError(name, f"must be finite and >= 0, got {value!r}")
    return TimingReport(ic=ic, dc=dc, l2=l2, ins=ins,
                        total=ic.total + dc.total + l2.total + ins)


def estimate_misc_energy(counts: AccessCounts, proc: ProcessorParams) -> float:
    """Opt-in approximation of the miscellaneous-instruction energy.

    Charges one processor cycle of energy for every cycle not spent on a data
    access, estimating data-access cycles as one per data-cache transaction:

        cycle_energy * max(0, total_cycles - (dc_reads + dc_writes))

    This is a rough stand-in for a measured value; prefer supplying
    `ModelOptions.misc_energy` directly when one is available.
    """
    data_cycles = counts.dc_reads + counts.dc_writes
    return proc.cycle_energy * max(0, counts.total_cycles - data_cycles)


def evaluate(counts: AccessCounts, l1i: CacheTechParams, l1d: CacheTechParams,
             l2: CacheTechParams, memory: MemoryTechParams, proc: ProcessorParams,
             options: ModelOptions = ModelOptions()) -> tuple[EnergyReport, TimingReport]:
    """Evaluate both models end to end for one count vector.

    CPI comes from `options.cpi` when set, otherwise from the counts
    (`resolve_cpi`). The leakage term uses `options.idle_time` unless the
    counts already carry a nonzero idle time.
    """
    convention = options.l2_penalty_convention
    eff_counts = counts
    if counts.idle_time == 0.0 and options.idle_time > 0.0:
        eff_counts = replace(counts, idle_time=options.idle_time)

    cpi = resolve_cpi(eff_counts, options.cpi)
    e_ic = icache_energy(eff_counts, l1i, proc)
    e_dc = dcache_energy(eff_counts, l1d, proc)
    e_l2 = l2_energy(eff_counts, l2, memory, proc, convention)
    e_leak = leakage_energy(proc, eff_counts)
    energy = total_energy(e_ic, e_dc, e_l2, options.misc_energy, e_leak, cpi)

    t_ic = icache_time(eff_counts, l1i, proc)
    t_dc = dcache_time(eff_counts, l1d, proc)
    t_l2 = l2_time(eff_counts, l2, memory, proc, convention)
    t_ins = ins_time(eff_counts, proc, t_ic.read)
    timing = total_time(t_ic, t_dc, t_l2, t_ins)
    return energy, timing

"""Shared test helpers: randomized model inputs and tolerance checks."""

import random

from cachemodel.model import (
    AccessCounts,
    CacheTechParams,
    MemoryTechParams,
    ProcessorParams,
)

REL_TOL = 1e-12


def relclose(a: float, b: float, tol: float = REL_TOL) -> bool:
    if a == b:
        return True
    return abs(a - b) <= tol * max(abs(a), abs(b))


def random_counts(rng: random.Random) -> AccessCounts:
    """A random self-consistent count vector (misses never exceed lookups)."""
    ic_reads = rng.randrange(0, 10**7)
    dc_reads = rng.randrange(0, 10**7)
    dc_writes = rng.randrange(0, 10**7)
    l2_if = rng.randrange(0, 10**5)
    l2_dr = rng.randrange(0, 10**5)
    l2_dw = rng.randrange(0, 10**5)
    instructions = rng.randrange(1, 10**7)
    return AccessCounts(
        ic_reads=ic_reads,
        ic_read_misses=rng.randrange(0, ic_reads + 1),
        dc_reads=dc_reads,
        dc_writes=dc_writes,
        dc_read_misses=rng.randrange(0, dc_reads + 1),
        dc_write_misses=rng.randrange(0, dc_writes + 1),
        l2_ifetches=l2_if,
        l2_data_reads=l2_dr,
        l2_data_writes=l2_dw,
        l2_read_misses=rng.randrange(0, l2_if + l2_dr + 1),
        l2_write_misses=rng.randrange(0, l2_dw + 1),
        ram_reads=rng.randrange(0, 10**5),
        ram_writes=rng.randrange(0, 10**5),
        rom_reads=rng.randrange(0, 10**5),
        total_cycles=rng.randrange(instructions, 10 * instructions),
        instruction_count=instructions,
        idle_time=rng.uniform(0.0, 2.0),
    )


def random_tech(rng: random.Random) -> CacheTechParams:
    return CacheTechParams(
        read_cycle_energy=rng.uniform(0.0, 1e-9),
        write_cycle_energy=rng.uniform(0.0, 1e-9),
        read_cycle_time=rng.uniform(0.0, 5e-9),
        write_cycle_time=rng.uniform(0.0, 5e-9),
    )


def random_memory(rng: random.Random) -> MemoryTechParams:
    return MemoryTechParams(
        ram_read_energy=rng.uniform(0.0, 5e-8),
        ram_write_energy=rng.uniform(0.0, 5e-8),
        rom_read_energy=rng.uniform(0.0, 5e-8),
        ram_read_time=rng.uniform(0.0, 1e-7),
        ram_write_time=rng.uniform(0.0, 1e-7),
        rom_read_time=rng.uniform(0.0, 1e-7),
    )


def random_proc(rng: random.Random) -> ProcessorParams:
    return ProcessorParams(
        cycle_energy=rng.uniform(0.0, 1e-7),
        cycle_time=rng.uniform(1e-10, 2e-9),
        leak_power=rng.uniform(0.0, 10.0),
        ic_read_miss_penalty=rng.randrange(0, 50),
        dc_read_miss_penalty=rng.randrange(0, 50),
        dc_write_miss_penalty=rng.randrange(0, 50),
        l2_read_miss_penalty=rng.randrange(0, 500),
        l2_write_miss_penalty=rng.randrange(0, 500),
        core_count=rng.randrange(1, 9),
    )


def to_reference_inputs(counts, l1i, l1d, l2, mem, proc, misc=0.0, cpi=None):
    """Flatten package types into the plain dicts the reference formulas take."""
    c = {
        "ic_reads": counts.ic_reads,
        "ic_read_misses": counts.ic_read_misses,
        "dc_reads": counts.dc_reads,
        "dc_writes": counts.dc_writes,
        "dc_read_misses": counts.dc_read_misses,
        "dc_write_misses": counts.dc_write_misses,
        "l2_ifetches": counts.l2_ifetches,
        "l2_data_reads": counts.l2_data_reads,
        "l2_data_writes": counts.l2_data_writes,
        "l2_read_misses": counts.l2_read_misses,
        "l2_write_misses": counts.l2_write_misses,
        "ram_reads": counts.ram_reads,
        "ram_writes": counts.ram_writes,
        "rom_reads": counts.rom_reads,
        "total_cycles": counts.total_cycles,
        "instruction_count": counts.instruction_count,
        "idle_time": counts.idle_time,
    }
    p = {
        "ic_re": l1i.read_cycle_energy, "ic_we": l1i.write_cycle_energy,
        "ic_rt": l1i.read_cycle_time, "ic_wt": l1i.write_cycle_time,
        "dc_re": l1d.read_cycle_energy, "dc_we": l1d.write_cycle_energy,
        "dc_rt": l1d.read_cycle_time, "dc_wt": l1d.write_cycle_time,
        "l2_re": l2.read_cycle_energy, "l2_we": l2.write_cycle_energy,
        "l2_rt": l2.read_cycle_time, "l2_wt": l2.write_cycle_time,
        "ram_re": mem.ram_read_energy, "ram_we": mem.ram_write_energy,
        "rom_re": mem.rom_read_energy, "ram_rt": mem.ram_read_time,
        "ram_wt": mem.ram_write_time, "rom_rt": mem.rom_read_time,
        "e_cycle": proc.cycle_energy, "t_cycle": proc.cycle_time,
        "p_leak": proc.leak_power,
        "pen_ic_r": proc.ic_read_miss_penalty,
        "pen_dc_r": proc.dc_read_miss_penalty,
        "pen_dc_w": proc.dc_write_miss_penalty,
        "pen_l2_r": proc.l2_read_miss_penalty,
        "pen_l2_w": proc.l2_write_miss_penalty,
        "misc": misc, "cpi": cpi,
    }
    return c, p

"""Property checks of the model over seeded random inputs."""

import dataclasses
import random

from cachemodel.model import (
    PENALTY_ALL_TRANSACTIONS,
    PENALTY_MISSES_ONLY,
    AccessCounts,
    dcache_energy,
    dcache_time,
    icache_energy,
    icache_time,
    l2_energy,
    l2_time,
    leakage_energy,
    total_energy,
)

from conftest import random_counts, random_memory, random_proc, random_tech, relclose

COUNT_FIELDS = [f.name for f in dataclasses.fields(AccessCounts) if f.name != "idle_time"]


def scale_counts(counts: AccessCounts, k: int) -> AccessCounts:
    scaled = {name: getattr(counts, name) * k for name in COUNT_FIELDS}
    return AccessCounts(**scaled, idle_time=counts.idle_time * k)


def add_counts(a: AccessCounts, b: AccessCounts) -> AccessCounts:
    summed = {name: getattr(a, name) + getattr(b, name) for name in COUNT_FIELDS}
    return AccessCounts(**summed, idle_time=a.idle_time + b.idle_time)


def level_terms(counts, l1i, l1d, l2, mem, proc, convention):
    return (
        icache_energy(counts, l1i, proc),
        dcache_energy(counts, l1d, proc),
        l2_energy(counts, l2, mem, proc, convention),
        icache_time(counts, l1i, proc),
        dcache_time(counts, l1d, proc),
        l2_time(counts, l2, mem, proc, convention),
    )


def flatten(parts) -> list:
    values = []
    for part in parts:
        values.extend(dataclasses.astuple(part))
    return values


def test_linearity_power_of_two_is_exact():
    # Scaling every count by 2**j commutes exactly with IEEE rounding, so the
    # outputs must scale exactly, term for term.
    rng = random.Random(101)
    for _ in range(200):
        counts = random_counts(rng)
        l1i, l1d, l2 = random_tech(rng), random_tech(rng), random_tech(rng)
        mem, proc = random_memory(rng), random_proc(rng)
        convention = rng.choice([PENALTY_ALL_TRANSACTIONS, PENALTY_MISSES_ONLY])
        base = flatten(level_terms(counts, l1i, l1d, l2, mem, proc, convention))
        for k in (2, 4, 16):
            scaled = flatten(level_terms(scale_counts(counts, k), l1i, l1d, l2, mem, proc, convention))
            assert scaled == [k * v for v in base]


def test_additivity():
    rng = random.Random(202)
    for _ in range(200):
        a, b = random_counts(rng), random_counts(rng)
        l1i, l1d, l2 = random_tech(rng), random_tech(rng), random_tech(rng)
        mem, proc = random_memory(rng), random_proc(rng)
        convention = rng.choice([PENALTY_ALL_TRANSACTIONS, PENALTY_MISSES_ONLY])
        va = flatten(level_terms(a, l1i, l1d, l2, mem, proc, convention))
        vb = flatten(level_terms(b, l1i, l1d, l2, mem, proc, convention))
        vab = flatten(level_terms(add_counts(a, b), l1i, l1d, l2, mem, proc, convention))
        for x, y, xy in zip(va, vb, vab):
            assert relclose(x + y, xy)


def test_zero_law():
    rng = random.Random(303)
    zero = AccessCounts()
    for _ in range(50):
        l1i, l1d, l2 = random_tech(rng), random_tech(rng), random_tech(rng)
        mem, proc = random_memory(rng), random_proc(rng)
        for convention in (PENALTY_ALL_TRANSACTIONS, PENALTY_MISSES_ONLY):
            for value in flatten(level_terms(zero, l1i, l1d, l2, mem, proc, convention)):
                assert value == 0.0
        assert leakage_energy(proc, zero) == 0.0


def test_breakdown_consistency():
    rng = random.Random(404)
    for _ in range(300):
        counts = random_counts(rng)
        l1i, l1d, l2 = random_tech(rng), random_tech(rng), random_tech(rng)
        mem, proc = random_memory(rng), random_proc(rng)
        e_ic, e_dc, e_l2, t_ic, t_dc, t_l2 = level_terms(
            counts, l1i, l1d, l2, mem, proc, PENALTY_ALL_TRANSACTIONS)
        assert relclose(e_ic.total, e_ic.read + e_ic.miss_penalty)
        assert relclose(e_dc.total, e_dc.read + e_dc.write + e_dc.miss_penalty)
        assert relclose(e_l2.total, e_l2.read + e_l2.write + e_l2.miss_penalty + e_l2.ram + e_l2.rom)
        assert relclose(t_ic.total, t_ic.read + t_ic.miss_penalty)
        assert relclose(t_dc.total, t_dc.read + t_dc.write + t_dc.miss_penalty)
        assert relclose(t_l2.total, t_l2.read + t_l2.write + t_l2.miss_penalty + t_l2.ram + t_l2.rom)
        misc = rng.uniform(0.0, 1e-3)
        leak = leakage_energy(proc, counts)
        cpi = counts.total_cycles / counts.instruction_count
        report = total_energy(e_ic, e_dc, e_l2, misc, leak, cpi)
        assert relclose(report.sum, e_ic.total + e_dc.total + e_l2.total + misc + leak)
        assert relclose(report.total, report.sum / cpi)


def test_miss_penalty_monotonicity():
    # Raising one penalty (with a nonzero matching count and nonzero cycle
    # energy) must strictly raise that miss_penalty term and the grand total.
    rng = random.Random(505)
    for _ in range(100):
        counts = random_counts(rng)
        counts = dataclasses.replace(
            counts,
            ic_reads=max(counts.ic_reads, 1), ic_read_misses=max(counts.ic_read_misses, 1),
            dc_reads=max(counts.dc_reads, 1), dc_read_misses=max(counts.dc_read_misses, 1),
            dc_writes=max(counts.dc_writes, 1), dc_write_misses=max(counts.dc_write_misses, 1),
            l2_ifetches=max(counts.l2_ifetches, 1), l2_data_writes=max(counts.l2_data_writes, 1),
        )
        l1i, l1d, l2 = random_tech(rng), random_tech(rng), random_tech(rng)
        mem = random_memory(rng)
        proc = dataclasses.replace(random_proc(rng), cycle_energy=rng.uniform(1e-9, 1e-7))
        cpi = 1.7

        def grand_total(p):
            return total_energy(icache_energy(counts, l1i, p), dcache_energy(counts, l1d, p),
                                l2_energy(counts, l2, mem, p), 0.0, 0.0, cpi).total

        base_total = grand_total(proc)
        bump = rng.randrange(1, 20)
        for field, term in (
            ("ic_read_miss_penalty", lambda p: icache_energy(counts, l1i, p).miss_penalty),
            ("dc_read_miss_penalty", lambda p: dcache_energy(counts, l1d, p).miss_penalty),
            ("dc_write_miss_penalty", lambda p: dcache_energy(counts, l1d, p).miss_penalty),
            ("l2_read_miss_penalty", lambda p: l2_energy(counts, l2, mem, p).miss_penalty),
            ("l2_write_miss_penalty", lambda p: l2_energy(counts, l2, mem, p).miss_penalty),
        ):
            bumped = dataclasses.replace(proc, **{field: getattr(proc, field) + bump})
            assert term(bumped) > term(proc)
            assert grand_total(bumped) > base_total


def test_cpi_ordering_invariance():
    # With a common CPI, the ranking of two configurations' totals cannot be
    # reversed by switching to a different common CPI.
    rng = random.Random(606)
    for _ in range(200):
        counts_a, counts_b = random_counts(rng), random_counts(rng)
        l1i, l1d, l2 = random_tech(rng), random_tech(rng), random_tech(rng)
        mem, proc = random_memory(rng), random_proc(rng)

        def report(counts, cpi):
            return total_energy(icache_energy(counts, l1i, proc),
                                dcache_energy(counts, l1d, proc),
                                l2_energy(counts, l2, mem, proc),
                                0.0, 0.0, cpi)

        cpi1 = rng.uniform(0.5, 4.0)
        cpi2 = rng.uniform(0.5, 4.0)
        a1, b1 = report(counts_a, cpi1).total, report(counts_b, cpi1).total
        a2, b2 = report(counts_a, cpi2).total, report(counts_b, cpi2).total
        if a1 < b1:
            assert a2 <= b2
        elif a1 > b1:
            assert a2 >= b2

"""Trace-driven simulation of a two-level cache hierarchy.

Topology: one private L1 instruction cache and one private L1 data cache per
core, one L2 shared by all cores, and a flat memory behind L2 split into data
(RAM) and code (ROM) sides. The hierarchy is non-inclusive: no level
back-invalidates another, so each cache's hit/miss behaviour depends only on
its own geometry and the request stream it receives.

Replacement is exact LRU per set. Two write policies are supported per
data-capable cache:

* ``write-back-allocate``: a write dirties the cached line; a write miss
  fetches the line from the level below (that fill counts as a *read* there)
  and dirties it; dirty lines reach the level below only on eviction.
* ``write-through-no-allocate``: every write propagates to the level below;
  a write miss does not allocate; lines are never dirty.

Cycle accounting charges, per trace record, a base cost plus a hit latency
per level traversed plus a miss penalty per miss, all from a `CycleCosts`
table. Penalties are charged by the kind of transaction each cache actually
services (an L1 write-allocate fill is an L2 read). Victim writebacks are
background traffic and cost no cycles.

There is no coherence protocol: private L1s are never cross-invalidated, so
traces that share data between cores are replayed as-is. Simulator instances
are single-threaded; run one instance per thread or process when sweeping.
"""

from __future__ import annotations

from collections import OrderedDict, deque
from dataclasses import dataclass, fields
from typing import Iterable, NamedTuple, Sequence

from .errors import MissingCpiError, TraceRecordError, ValidationError
from .model import AccessCounts, ProcessorParams
from .traceio import AccessKind, TraceRecord

WRITE_BACK_ALLOCATE = "write-back-allocate"
WRITE_THROUGH_NO_ALLOCATE = "write-through-no-allocate"
WRITE_POLICIES = (WRITE_BACK_ALLOCATE, WRITE_THROUGH_NO_ALLOCATE)

ROUND_ROBIN = "round-robin"
TIMESTAMP = "timestamp"
INTERLEAVE_POLICIES = (ROUND_ROBIN, TIMESTAMP)


def _check_nonneg_int(name: str, value) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(name, f"expected an integer, got {value!r}")
    if value < 0:
        raise ValidationError(name, f"must be >= 0, got {value}")


def _is_pow2(value: int) -> bool:
    return value > 0 and (value & (value - 1)) == 0


@dataclass(frozen=True)
class CacheConfig:
    """Geometry and write policy of one cache.

    ``associativity`` counts ways; 1 means direct-mapped and the sentinel 0
    means fully associative (ways = size / line_size, a single set).
    """

    size: int
    line_size: int
    associativity: int = 1
    write_policy: str = WRITE_BACK_ALLOCATE

    def __post_init__(self):
        _check_nonneg_int("size", self.size)
        _check_nonneg_int("line_size", self.line_size)
        _check_nonneg_int("associativity", self.associativity)
        if not _is_pow2(self.size):
            raise ValidationError("size", f"must be a power of two, got {self.size}")
        if not _is_pow2(self.line_size):
            raise ValidationError("line_size", f"must be a power of two, got {self.line_size}")
        if self.line_size > self.size:
            raise ValidationError("line_size", f"{self.line_size} exceeds cache size {self.size}")
        if self.write_policy not in WRITE_POLICIES:
            raise ValidationError("write_policy",
                                  f"must be one of {WRITE_POLICIES}, got {self.write_policy!r}")
        if self.associativity >= 1:
            lines = self.size // self.line_size
            if self.associativity > lines or lines % self.associativity != 0:
                raise ValidationError(
                    "associativity",
                    f"{self.associativity} ways do not evenly divide {lines} lines")

    @property
    def num_lines(self) -> int:
        return self.size // self.line_size

    @property
    def ways(self) -> int:
        return self.num_lines if self.associativity == 0 else self.associativity

    @property
    def num_sets(self) -> int:
        return 1 if self.associativity == 0 else self.num_lines // self.associativity


@dataclass(frozen=True)
class HierarchyConfig:
    """Core topology: per-core private L1 I/D caches and a shared L2."""

    core_count: int
    l1i: CacheConfig
    l1d: CacheConfig
    l2: CacheConfig
    interleave_policy: str = ROUND_ROBIN

    def __post_init__(self):
        _check_nonneg_int("core_count", self.core_count)
        if self.core_count < 1:
            raise ValidationError("core_count", f"must be >= 1, got {self.core_count}")
        if self.l2.line_size < max(self.l1i.line_size, self.l1d.line_size):
            raise ValidationError(
                "l2.line_size",
                f"{self.l2.line_size} is smaller than an L1 line "
                f"({self.l1i.line_size}/{self.l1d.line_size})")
        if self.interleave_policy not in INTERLEAVE_POLICIES:
            raise ValidationError(
                "interleave_policy",
                f"must be one of {INTERLEAVE_POLICIES}, got {self.interleave_policy!r}")


@dataclass(frozen=True)
class CycleCosts:
    """Cycle prices for the total-cycle tally.

    Every record costs ``base`` plus ``l1_hit`` for its L1 lookup; a miss adds
    the matching penalty plus ``l2_hit`` for the L2 lookup it triggers, and an
    L2 miss adds the matching L2 penalty.
    """

    base: int = 1
    l1_hit: int = 0
    l2_hit: int = 0
    ic_read_miss: int = 10
    dc_read_miss: int = 10
    dc_write_miss: int = 10
    l2_read_miss: int = 100
    l2_write_miss: int = 100

    def __post_init__(self):
        for f in fields(self):
            _check_nonneg_int(f.name, getattr(self, f.name))

    @classmethod
    def from_processor(cls, proc: ProcessorParams, base: int = 1,
                       l1_hit: int = 0, l2_hit: int = 0) -> "CycleCosts":
        return cls(base=base, l1_hit=l1_hit, l2_hit=l2_hit,
                   ic_read_miss=proc.ic_read_miss_penalty,
                   dc_read_miss=proc.dc_read_miss_penalty,
                   dc_write_miss=proc.dc_write_miss_penalty,
                   l2_read_miss=proc.l2_read_miss_penalty,
                   l2_write_miss=proc.l2_write_miss_penalty)


@dataclass(frozen=True)
class CacheStats:
    """Lookup/hit/miss/eviction tallies of one cache over one simulation."""

    reads: int = 0
    writes: int = 0
    read_hits: int = 0
    read_misses: int = 0
    write_hits: int = 0
    write_misses: int = 0
    evictions: int = 0
    writebacks: int = 0
    write_allocate_fills: int = 0

    def __post_init__(self):
        if self.read_hits + self.read_misses != self.reads:
            raise ValidationError("reads", "read hits + read misses must equal reads")
        if self.write_hits + self.write_misses != self.writes:
            raise ValidationError("writes", "write hits + write misses must equal writes")

    @property
    def lookups(self) -> int:
        return self.reads + self.writes

    @property
    def hits(self) -> int:
        return self.read_hits + self.write_hits

    @property
    def misses(self) -> int:
        return self.read_misses + self.write_misses


class CacheAccess(NamedTuple):
    """Outcome of one cache access: hit flag, whether a line was allocated,
    and the evicted line's metadata (line-aligned address) if one was."""

    hit: bool
    filled: bool
    evicted_address: int | None
    evicted_dirty: bool


class Cache:
    """One set-associative LRU cache with mutable lookup state."""

    def __init__(self, config: CacheConfig, name: str = ""):
        self.config = config
        self.name = name
        self.line_size = config.line_size
        self.num_sets = config.num_sets
        self.ways = config.ways
        self.write_back = config.write_policy == WRITE_BACK_ALLOCATE
        # One OrderedDict per set, line id -> dirty flag, LRU first / MRU last.
        self._sets = [OrderedDict() for _ in range(self.num_sets)]
        self.reads = 0
        self.writes = 0
        self.read_hits = 0
        self.read_misses = 0
        self.write_hits = 0
        self.write_misses = 0
        self.evictions = 0
        self.writebacks = 0
        self.write_allocate_fills = 0

    def access(self, address: int, kind: AccessKind) -> CacheAccess:
        """Look up one address, updating recency, dirty state, and tallies.

        IFETCH and READ are reads; WRITE follows the configured write policy.
        """
        line = address // self.line_size
        lines = self._sets[line % self.num_sets]
        write = kind is AccessKind.WRITE
        if write:
            self.writes += 1
        else:
            self.reads += 1
        if line in lines:
            lines.move_to_end(line)
            if write:
                self.write_hits += 1
                if self.write_back:
                    lines[line] = True
            else:
                self.read_hits += 1
            return CacheAccess(True, False, None, False)
        if write:
            self.write_misses += 1
            if not self.write_back:
                return CacheAccess(False, False, None, False)
        else:
            self.read_misses += 1
        evicted_address = None
        evicted_dirty = False
        if len(lines) >= self.ways:
            victim_line, victim_dirty = lines.popitem(last=False)
            self.evictions += 1
            evicted_address = victim_line * self.line_size
            evicted_dirty = victim_dirty
            if victim_dirty:
                self.writebacks += 1
        lines[line] = write
        if write:
            self.write_allocate_fills += 1
        return CacheAccess(False, True, evicted_address, evicted_dirty)

    def stats(self) -> CacheStats:
        return CacheStats(reads=self.reads, writes=self.writes,
                          read_hits=self.read_hits, read_misses=self.read_misses,
                          write_hits=self.write_hits, write_misses=self.write_misses,
                          evictions=self.evictions, writebacks=self.writebacks,
                          write_allocate_fills=self.write_allocate_fills)


@dataclass(frozen=True)
class SimResult:
    """Counts per core, their aggregate, and raw per-cache tallies.

    Cache tallies are keyed ``core<i>.l1i`` / ``core<i>.l1d`` / ``l2``.
    """

    per_core: tuple[AccessCounts, ...]
    aggregate: AccessCounts
    cache_stats: dict[str, CacheStats]


_COUNT_FIELDS = tuple(f.name for f in fields(AccessCounts) if f.name != "idle_time")


def _interleave(records: Sequence[TraceRecord], config: HierarchyConfig) -> list[TraceRecord]:
    for index, record in enumerate(records):
        if not 0 <= record.core < config.core_count:
            raise TraceRecordError(index, f"core {record.core} out of range "
                                          f"(hierarchy has {config.core_count})")
        if record.address < 0:
            raise TraceRecordError(index, f"negative address {record.address}")
    if config.interleave_policy == TIMESTAMP or config.core_count == 1:
        return list(records)
    queues = [deque() for _ in range(config.core_count)]
    for record in records:
        queues[record.core].append(record)
    ordered = []
    while True:
        emptied = True
        for queue in queues:
            if queue:
                ordered.append(queue.popleft())
                emptied = False
        if emptied:
            return ordered


class _HierarchySim:
    def __init__(self, config: HierarchyConfig, costs: CycleCosts):
        self.config = config
        self.costs = costs
        self.l1i = [Cache(config.l1i, f"core{i}.l1i") for i in range(config.core_count)]
        self.l1d = [Cache(config.l1d, f"core{i}.l1d") for i in range(config.core_count)]
        self.l2 = Cache(config.l2, "l2")
        self.counts = [dict.fromkeys(_COUNT_FIELDS, 0) for _ in range(config.core_count)]

    def _l2_read(self, address: int, ifetch_origin: bool, c: dict) -> int:
        cycles = self.costs.l2_hit
        c["l2_ifetches" if ifetch_origin else "l2_data_reads"] += 1
        result = self.l2.access(address, AccessKind.READ)
        if not result.hit:
            c["l2_read_misses"] += 1
            cycles += self.costs.l2_read_miss
            if ifetch_origin:
                c["rom_reads"] += 1
            else:
                c["ram_reads"] += 1
        if result.evicted_dirty:
            c["ram_writes"] += 1
        return cycles

    def _l2_write(self, address: int, c: dict, charged: bool) -> int:
        cycles = self.costs.l2_hit if charged else 0
        c["l2_data_writes"] += 1
        result = self.l2.access(address, AccessKind.WRITE)
        if not result.hit:
            c["l2_write_misses"] += 1
            if charged:
                cycles += self.costs.l2_write_miss
        if self.l2.write_back:
            if not result.hit:
                c["ram_reads"] += 1  # write-allocate fill fetch
        else:
            c["ram_writes"] += 1  # write-through propagation
        if result.evicted_dirty:
            c["ram_writes"] += 1
        return cycles

    def process(self, record: TraceRecord) -> None:
        c = self.counts[record.core]
        cost = self.costs.base + self.costs.l1_hit
        kind, address = record.kind, record.address
        if kind is AccessKind.IFETCH:
            c["ic_reads"] += 1
            c["instruction_count"] += 1
            result = self.l1i[record.core].access(address, kind)
            if not result.hit:
                c["ic_read_misses"] += 1
                cost += self.costs.ic_read_miss
                cost += self._l2_read(address, True, c)
            # L1I lines are never dirty, so evictions emit nothing.
        elif kind is AccessKind.READ:
            c["dc_reads"] += 1
            result = self.l1d[record.core].access(address, kind)
            if not result.hit:
                c["dc_read_misses"] += 1
                cost += self.costs.dc_read_miss
                cost += self._l2_read(address, False, c)
                if result.evicted_dirty:
                    self._l2_write(result.evicted_address, c, charged=False)
        else:
            c["dc_writes"] += 1
            result = self.l1d[record.core].access(address, kind)
            if not result.hit:
                c["dc_write_misses"] += 1
                cost += self.costs.dc_write_miss
            if self.l1d[record.core].write_back:
                if not result.hit:
                    cost += self._l2_read(address, False, c)  # write-allocate fill
                    if result.evicted_dirty:
                        self._l2_write(result.evicted_address, c, charged=False)
            else:
                cost += self._l2_write(address, c, charged=True)
        c["total_cycles"] += cost

    def result(self) -> SimResult:
        per_core = tuple(AccessCounts(**c, idle_time=0.0) for c in self.counts)
        aggregate = AccessCounts(
            **{name: sum(getattr(cc, name) for cc in per_core) for name in _COUNT_FIELDS},
            idle_time=0.0)
        stats = {}
        for core in range(self.config.core_count):
            stats[self.l1i[core].name] = self.l1i[core].stats()
            stats[self.l1d[core].name] = self.l1d[core].stats()
        stats[self.l2.name] = self.l2.stats()
        return SimResult(per_core=per_core, aggregate=aggregate, cache_stats=stats)


def simulate(trace: Iterable[TraceRecord], config: HierarchyConfig,
             costs: CycleCosts | None = None) -> SimResult:
    """Replay a trace through the hierarchy and tally everything the models need.

    Records are replayed in file order under the ``timestamp`` interleave
    policy; under ``round-robin`` (the default) one record per core is taken
    in core order per turn, preserving per-core order. The result is a pure
    function of (trace, config, costs).
    """
    records = trace if isinstance(trace, Sequence) else list(trace)
    ordered = _interleave(records, config)
    sim = _HierarchySim(config, costs if costs is not None else CycleCosts())
    for record in ordered:
        sim.process(record)
    return sim.result()


def derive_counts(result: SimResult, idle_time: float = 0.0,
                  cpi_override: float | None = None) -> AccessCounts:
    """Turn a `SimResult` into the model's count vector.

    `idle_time` is attached as-is. When the run retired no instructions but
    burned cycles, CPI cannot be derived later, so a missing `cpi_override`
    is reported here rather than deep in the model.
    """
    counts = result.aggregate
    if cpi_override is None and counts.instruction_count == 0 and counts.total_cycles > 0:
        raise MissingCpiError(
            "trace contains no instruction fetches; supply an explicit CPI override")
    return AccessCounts(
        **{name: getattr(counts, name) for name in _COUNT_FIELDS}, idle_time=idle_time)

"""Domain model for slotted speed scaling: jobs, instances, convex energy costs, traces.

Time is divided into unit slots. A job arrives at an integer slot, carries a
payoff value, and must be processed within its deadline window (a count of
slots from arrival, possibly infinite). Processing k jobs in one slot costs
g(k) for a convex g with g(0) = 0; the profit of a slot is the payoff sum of
the processed jobs minus that energy cost.

All types here are immutable after construction and safe to share across
threads; every operation is a pure function.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

INFINITE = math.inf
"""Deadline sentinel: the job never expires."""

PROFIT_TOL = 1e-9
"""Absolute tolerance used for all profit comparisons."""


class ModelError(ValueError):
    """Invalid domain object or operation argument."""


class InfeasibleTraceError(ModelError):
    """A trace processes a job outside its window or more than once."""

    def __init__(self, message: str, job_id: int, slot: int):
        super().__init__(message)
        self.job_id = job_id
        self.slot = slot


class InstanceFormatError(ModelError):
    """A line of an instance file could not be parsed."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True, order=True)
class Job:
    """One unit-length task: identity, arrival slot, payoff, deadline in slots."""

    id: int
    arrival: int
    value: float
    deadline: float = INFINITE

    def __post_init__(self):
        if self.id < 0 or self.id != int(self.id):
            raise ModelError(f"job id must be a non-negative integer, got {self.id}")
        if self.arrival < 1 or self.arrival != int(self.arrival):
            raise ModelError(f"arrival must be an integer slot >= 1, got {self.arrival}")
        if not (self.value >= 0.0):
            raise ModelError(f"value must be non-negative, got {self.value}")
        if self.deadline != INFINITE:
            if not (math.isfinite(self.deadline) and self.deadline >= 1
                    and self.deadline == int(self.deadline)):
                raise ModelError(
                    f"deadline must be a positive integer or INFINITE, got {self.deadline}")

    @property
    def expires(self) -> bool:
        return self.deadline != INFINITE

    @property
    def expiry(self) -> float:
        """Last slot at which the job may be processed (inf when never expiring)."""
        if not self.expires:
            return INFINITE
        return self.arrival + int(self.deadline) - 1

    def available_at(self, slot: int) -> bool:
        return self.arrival <= slot <= self.expiry


class CostModel:
    """Convex per-slot energy cost g(k) with g(0) = 0."""

    def g(self, k: int) -> float:
        raise NotImplementedError

    def effective_cost(self, k: int) -> float:
        """Marginal cost g(k) - g(k-1) of the k-th simultaneous job; k >= 1."""
        if k < 1:
            raise ModelError(f"effective cost is defined for k >= 1, got {k}")
        return self.g(k) - self.g(k - 1)


@dataclass(frozen=True)
class PowerLaw(CostModel):
    """g(k) = k ** alpha with alpha >= 1 (convex, strictly increasing marginals for alpha > 1)."""

    alpha: float

    def __post_init__(self):
        if not (self.alpha >= 1.0):
            raise ModelError(f"power-law exponent must be >= 1, got {self.alpha}")

    def g(self, k: int) -> float:
        if k < 0:
            raise ModelError(f"g is defined for k >= 0, got {k}")
        return float(k) ** self.alpha


@dataclass(frozen=True)
class TabulatedConvex(CostModel):
    """Cost given as a table g(0), g(1), ..., g(K); checked for convexity on construction."""

    table: tuple[float, ...]

    def __post_init__(self):
        t = tuple(float(x) for x in self.table)
        object.__setattr__(self, "table", t)
        if len(t) < 2:
            raise ModelError("cost table needs at least g(0) and g(1)")
        if t[0] != 0.0:
            raise ModelError(f"g(0) must be 0, got {t[0]}")
        if any(x < 0 for x in t):
            raise ModelError("cost table must be non-negative")
        diffs = [b - a for a, b in zip(t, t[1:])]
        if diffs[0] <= 0:
            raise ModelError("effective cost g(1)-g(0) must be strictly positive")
        for k in range(1, len(diffs)):
            if diffs[k] < diffs[k - 1]:
                raise ModelError(f"cost table is not convex at k={k + 1}")

    def g(self, k: int) -> float:
        if k < 0:
            raise ModelError(f"g is defined for k >= 0, got {k}")
        if k >= len(self.table):
            raise ModelError(f"cost table covers k <= {len(self.table) - 1}, got {k}")
        return self.table[k]


def effective_cost(cost: CostModel, k: int) -> float:
    """Marginal energy cost of the k-th job in a slot: g(k) - g(k-1)."""
    return cost.effective_cost(k)


def _job_sort_key(job: Job):
    return (job.arrival, job.id)


def _value_order_key(job: Job):
    # Non-increasing value; ties broken by earlier arrival, then smaller id.
    return (-job.value, job.arrival, job.id)


@dataclass(frozen=True)
class Instance:
    """A full arrival sequence: jobs sorted by (arrival, id), ids unique."""

    jobs: tuple[Job, ...]
    label: str = ""

    def __post_init__(self):
        jobs = tuple(sorted(self.jobs, key=_job_sort_key))
        object.__setattr__(self, "jobs", jobs)
        seen = set()
        for j in jobs:
            if j.id in seen:
                raise ModelError(f"duplicate job id {j.id}")
            seen.add(j.id)

    def __len__(self) -> int:
        return len(self.jobs)

    @property
    def last_arrival(self) -> int:
        return self.jobs[-1].arrival if self.jobs else 0

    def job_by_id(self, job_id: int) -> Job:
        for j in self.jobs:
            if j.id == job_id:
                return j
        raise ModelError(f"no job with id {job_id}")


def available_jobs(instance: Instance, slot: int, already_processed: Iterable[int] = ()) -> list[Job]:
    """Jobs available at `slot` (arrived, not expired, not yet processed), best value first."""
    if slot < 1:
        raise ModelError(f"slot index must be >= 1, got {slot}")
    done = set(already_processed)
    live = [j for j in instance.jobs if j.id not in done and j.available_at(slot)]
    live.sort(key=_value_order_key)
    return live


def union_with_provenance(a: Instance, b: Instance) -> tuple[Instance, dict[int, tuple[str, int]]]:
    """Per-slot multiset union of two instances.

    Ids are re-assigned densely; the returned map sends each new id to
    ("a"|"b", original id).
    """
    tagged = [("a", j) for j in a.jobs] + [("b", j) for j in b.jobs]
    tagged.sort(key=lambda t: (t[1].arrival, 0 if t[0] == "a" else 1, t[1].id))
    provenance: dict[int, tuple[str, int]] = {}
    jobs = []
    for new_id, (tag, j) in enumerate(tagged):
        provenance[new_id] = (tag, j.id)
        jobs.append(Job(id=new_id, arrival=j.arrival, value=j.value, deadline=j.deadline))
    label = "|".join(l for l in (a.label, b.label) if l)
    return Instance(tuple(jobs), label=label), provenance


def union(a: Instance, b: Instance) -> Instance:
    """Per-slot multiset union; see union_with_provenance for the id map."""
    merged, _ = union_with_provenance(a, b)
    return merged


@dataclass(frozen=True)
class SlotDecision:
    """The jobs processed in one slot and the resulting profit."""

    slot: int
    processed: frozenset[int]
    payoff_sum: float
    energy: float
    profit: float

    def __post_init__(self):
        if abs(self.profit - (self.payoff_sum - self.energy)) > PROFIT_TOL:
            raise ModelError(f"slot {self.slot}: profit != payoff_sum - energy")

    @staticmethod
    def build(slot: int, jobs: Sequence[Job], cost: CostModel) -> "SlotDecision":
        payoff = float(sum(j.value for j in jobs))
        energy = cost.g(len(jobs))
        return SlotDecision(
            slot=slot,
            processed=frozenset(j.id for j in jobs),
            payoff_sum=payoff,
            energy=energy,
            profit=payoff - energy,
        )


@dataclass(frozen=True)
class Trace:
    """An algorithm run: per-slot decisions plus optional per-slot audit ledgers."""

    decisions: tuple[SlotDecision, ...]
    total_profit: float
    ledgers: tuple = ()

    def __post_init__(self):
        slots = [d.slot for d in self.decisions]
        if slots != sorted(slots) or len(set(slots)) != len(slots):
            raise ModelError("trace decisions must be strictly ordered by slot")
        if abs(self.total_profit - sum(d.profit for d in self.decisions)) > PROFIT_TOL:
            raise ModelError("trace total_profit does not equal the sum of decision profits")

    @staticmethod
    def build(decisions: Sequence[SlotDecision], ledgers: Sequence = ()) -> "Trace":
        decisions = tuple(decisions)
        return Trace(decisions, float(sum(d.profit for d in decisions)), tuple(ledgers))


EMPTY_TRACE = Trace((), 0.0)


def evaluate_trace(instance: Instance, trace: Trace, cost: CostModel) -> float:
    """Recompute a trace's total profit from scratch, validating feasibility.

    Cached payoff/energy/profit fields are not trusted. Raises
    InfeasibleTraceError naming the offending job and slot if any job is
    processed outside its availability window or more than once.
    """
    by_id = {j.id: j for j in instance.jobs}
    seen: set[int] = set()
    total = 0.0
    for d in trace.decisions:
        payoff = 0.0
        for jid in d.processed:
            job = by_id.get(jid)
            if job is None:
                raise InfeasibleTraceError(f"job {jid} not in instance (slot {d.slot})", jid, d.slot)
            if jid in seen:
                raise InfeasibleTraceError(f"job {jid} processed twice (slot {d.slot})", jid, d.slot)
            if not job.available_at(d.slot):
                raise InfeasibleTraceError(
                    f"job {jid} processed at slot {d.slot} outside its window "
                    f"[{job.arrival}, {job.expiry}]", jid, d.slot)
            seen.add(jid)
            payoff += job.value
        total += payoff - cost.g(len(d.processed))
    return total


# ---------------------------------------------------------------------------
# Instance file format: line-delimited JSON, one object per job with fields
# `id` (int), `arrival` (int), `value` (number), `deadline` (int or "inf").
# ---------------------------------------------------------------------------

def job_to_obj(job: Job) -> dict:
    deadline = "inf" if not job.expires else int(job.deadline)
    return {"id": job.id, "arrival": job.arrival, "value": job.value, "deadline": deadline}


def _job_from_obj(obj: Mapping, line: int) -> Job:
    if not isinstance(obj, Mapping):
        raise InstanceFormatError("expected a JSON object", line)
    missing = {"id", "arrival", "value", "deadline"} - set(obj)
    if missing:
        raise InstanceFormatError(f"missing fields: {sorted(missing)}", line)
    raw_deadline = obj["deadline"]
    if raw_deadline == "inf":
        deadline: float = INFINITE
    elif isinstance(raw_deadline, int) and not isinstance(raw_deadline, bool):
        deadline = raw_deadline
    else:
        raise InstanceFormatError(f'deadline must be an integer or "inf", got {raw_deadline!r}', line)
    try:
        return Job(id=int(obj["id"]), arrival=int(obj["arrival"]),
                   value=float(obj["value"]), deadline=deadline)
    except (ModelError, TypeError, ValueError) as exc:
        raise InstanceFormatError(str(exc), line) from exc


def loads_instance(text: str, label: str = "") -> Instance:
    jobs = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"invalid JSON ({exc.msg})", line_no) from exc
        jobs.append(_job_from_obj(obj, line_no))
    return Instance(tuple(jobs), label=label)


def dumps_instance(instance: Instance) -> str:
    return "".join(json.dumps(job_to_obj(j)) + "\n" for j in instance.jobs)


def read_instance(path, label: str | None = None) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return loads_instance(text, label=label if label is not None else str(path))


def write_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(instance))


def trace_to_obj(trace: Trace) -> dict:
    """JSON-ready view of a trace, including any per-slot audit ledger."""
    obj = {
        "total_profit": trace.total_profit,
        "decisions": [
            {
                "slot": d.slot,
                "processed": sorted(d.processed),
                "payoff_sum": d.payoff_sum,
                "energy": d.energy,
                "profit": d.profit,
            }
            for d in trace.decisions
        ],
    }
    if trace.ledgers:
        obj["lcr_ledger"] = [entry.to_obj() for entry in trace.ledgers]
    return obj

"""Deadline-blind online policies and the per-slot local competitive ratio (LCR).

A policy sees only the values of the currently available jobs, never their
deadlines. At each slot it ranks the candidates by value and picks how many of
the top jobs to process. The LCR of a candidate count i is the ratio between
the best profit a clairvoyant scheduler could still extract under the worst
deadline assignment consistent with the view (chosen jobs never expire, the
rest expire now, no future arrivals) and the profit of processing i jobs now.

Shipped policies:

* ``min-lcr``  - evaluates every profitable prefix count and picks the
  argmin-LCR count;
* ``sim-lcr``  - only evaluates floor/ceil of beta*m, where beta solves
  x**a + x**(a-1) = 1 for the power-law exponent a;
* ``greedy``   - always processes all m profitable jobs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .model import (CostModel, Instance, ModelError, PowerLaw, SlotDecision,
                    Trace, available_jobs, effective_cost)


class UnsupportedCostError(ModelError):
    """The policy requires a cost model it was not given (e.g. power-law)."""


@dataclass(frozen=True)
class PolicyView:
    """What a deadline-blind policy is allowed to see at one slot.

    ``candidates`` holds (job id, value) pairs sorted by non-increasing value;
    no deadline information is reachable from this type.
    """

    slot: int
    candidates: tuple[tuple[int, float], ...]

    def __post_init__(self):
        values = [v for _, v in self.candidates]
        if any(a < b for a, b in zip(values, values[1:])):
            raise ModelError("view candidates must be sorted by non-increasing value")

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.candidates)

    def __len__(self) -> int:
        return len(self.candidates)


@dataclass(frozen=True)
class LcrBreakdown:
    """The LCR of processing the top ``i`` jobs, with its three ingredients.

    M is the clairvoyant profit from the i chosen jobs processed alone in
    later slots, c_greedy the best single-slot profit from the leftover jobs,
    and P the online profit of processing the i jobs now.
    """

    i: int
    M: float
    P: float
    c_greedy: float
    lcr: float

    def to_obj(self) -> dict:
        return {"i": self.i, "M": self.M, "P": self.P,
                "c_greedy": self.c_greedy, "lcr": self.lcr}


@dataclass(frozen=True)
class SlotLedger:
    """Audit record of one slot: the candidate breakdowns a policy examined."""

    slot: int
    chosen: int
    breakdowns: tuple[LcrBreakdown, ...]

    def chosen_breakdown(self) -> LcrBreakdown:
        for b in self.breakdowns:
            if b.i == self.chosen:
                return b
        raise ModelError(f"slot {self.slot}: no breakdown for chosen count {self.chosen}")

    def to_obj(self) -> dict:
        return {"slot": self.slot, "chosen": self.chosen,
                "breakdowns": [b.to_obj() for b in self.breakdowns]}


@dataclass(frozen=True)
class Decision:
    """A policy's output for one slot: how many top jobs to process."""

    count: int
    breakdowns: tuple[LcrBreakdown, ...] = ()


def compute_m(view: PolicyView, cost: CostModel) -> int:
    """Largest j such that the j-th best value strictly beats its marginal cost.

    Returns 0 when nothing is profitable. Values are non-increasing while
    marginal costs are non-decreasing, so the profitable counts form a prefix.
    """
    m = 0
    for j, (_, v) in enumerate(view.candidates, start=1):
        if v - effective_cost(cost, j) > 0.0:
            m = j
        else:
            break
    return m


def inner_greedy_profit(leftover_values: Sequence[float], cost: CostModel) -> float:
    """Best single-slot profit from a leftover pool: max_j (top-j sum - g(j)).

    Prefix sums are taken within the leftover set itself; j = 0 contributes 0,
    so the result is never negative.
    """
    values = list(leftover_values)
    if any(a < b for a, b in zip(values, values[1:])):
        raise ModelError("leftover values must be sorted non-increasing")
    best = 0.0
    running = 0.0
    for j, v in enumerate(values, start=1):
        running += v
        best = max(best, running - cost.g(j))
    return best


def lcr_breakdown(view: PolicyView, cost: CostModel, i: int) -> LcrBreakdown:
    """LCR ingredients for processing the top ``i`` jobs of the view."""
    m = compute_m(view, cost)
    if not 1 <= i <= m:
        raise ModelError(f"i must be in 1..m={m}, got {i}")
    values = view.values
    top = sum(values[:i])
    M = top - i * cost.g(1)
    P = top - cost.g(i)
    cg = inner_greedy_profit(values[i:], cost)
    return LcrBreakdown(i=i, M=M, P=P, c_greedy=cg, lcr=(M + cg) / P)


# Above this many (i, leftover) cells the full ledger is built with numpy.
_VECTOR_THRESHOLD = 20_000


def _g_values(cost: CostModel, kmax: int) -> np.ndarray:
    if isinstance(cost, PowerLaw):
        return np.arange(kmax + 1, dtype=float) ** cost.alpha
    return np.array([cost.g(k) for k in range(kmax + 1)], dtype=float)


def _ledger_vectorized(values: Sequence[float], cost: CostModel, m: int) -> list[LcrBreakdown]:
    v = np.asarray(values, dtype=float)
    n = v.size
    prefix = np.concatenate(([0.0], np.cumsum(v)))
    g = _g_values(cost, n)
    i = np.arange(1, m + 1)
    M = prefix[i] - i * g[1]
    P = prefix[i] - g[i]
    # c_greedy[i] = max over l in i..n of (prefix[l] - prefix[i] - g(l - i))
    l = np.arange(n + 1)
    span = l[None, :] - i[:, None]
    cell = prefix[None, :] - prefix[i][:, None] - g[np.clip(span, 0, n)]
    cell[span < 0] = -np.inf
    cg = cell.max(axis=1)
    lcr = (M + cg) / P
    return [LcrBreakdown(i=int(i[k]), M=float(M[k]), P=float(P[k]),
                         c_greedy=float(cg[k]), lcr=float(lcr[k]))
            for k in range(m)]


def min_lcr_decide(view: PolicyView, cost: CostModel) -> tuple[int, tuple[LcrBreakdown, ...]]:
    """Argmin-LCR count over i = 1..m plus the full ledger of breakdowns.

    Returns (0, ()) when no count is profitable. Ties pick the smallest count.
    """
    m = compute_m(view, cost)
    if m == 0:
        return 0, ()
    if m * (len(view) + 1) >= _VECTOR_THRESHOLD:
        ledger = _ledger_vectorized(view.values, cost, m)
    else:
        ledger = [lcr_breakdown(view, cost, i) for i in range(1, m + 1)]
    best = min(ledger, key=lambda b: (b.lcr, b.i))
    return best.i, tuple(ledger)


@lru_cache(maxsize=None)
def beta_root(alpha: float) -> float:
    """Unique root in (0, 1) of x**alpha + x**(alpha-1) - 1 = 0.

    The map is strictly increasing on (0, 1) for alpha > 1, from -1 at 0+ to
    +1 at 1, so plain bisection converges; tolerance 1e-12.
    """
    if not alpha >= 1.0 + 1e-9:
        raise ModelError(f"beta root needs alpha > 1, got {alpha}")

    def f(x: float) -> float:
        return x ** alpha + x ** (alpha - 1.0) - 1.0

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12:
            break
    return 0.5 * (lo + hi)


def _sim_lcr_candidates(m: int, alpha: float) -> tuple[int, ...]:
    beta = beta_root(alpha)
    lo = max(1, math.floor(beta * m))
    hi = min(m, math.ceil(beta * m))
    return (lo,) if lo == hi else (lo, hi)


def _sim_lcr_with_ledger(view: PolicyView, cost: CostModel) -> tuple[int, tuple[LcrBreakdown, ...]]:
    if not isinstance(cost, PowerLaw):
        raise UnsupportedCostError("sim-lcr requires a power-law cost model")
    if cost.alpha < 2.0:
        raise UnsupportedCostError(f"sim-lcr requires alpha >= 2, got {cost.alpha}")
    m = compute_m(view, cost)
    if m == 0:
        return 0, ()
    breakdowns = tuple(lcr_breakdown(view, cost, i) for i in _sim_lcr_candidates(m, cost.alpha))
    best = min(breakdowns, key=lambda b: (b.lcr, b.i))
    return best.i, breakdowns


def sim_lcr_decide(view: PolicyView, cost: CostModel) -> int:
    """Lower-LCR choice between floor(beta*m) and ceil(beta*m), clamped to [1, m]."""
    count, _ = _sim_lcr_with_ledger(view, cost)
    return count


def greedy_decide(view: PolicyView, cost: CostModel) -> int:
    """Process every profitable job: the count is always m."""
    return compute_m(view, cost)


class Policy:
    """Deterministic per-slot decision rule over deadline-blind views."""

    name: str = "policy"

    def decide(self, view: PolicyView, cost: CostModel) -> Decision:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name!r}>"


class MinLcrPolicy(Policy):
    name = "min-lcr"

    def decide(self, view: PolicyView, cost: CostModel) -> Decision:
        count, ledger = min_lcr_decide(view, cost)
        return Decision(count, ledger)


class SimLcrPolicy(Policy):
    name = "sim-lcr"

    def decide(self, view: PolicyView, cost: CostModel) -> Decision:
        count, ledger = _sim_lcr_with_ledger(view, cost)
        return Decision(count, ledger)


class GreedyPolicy(Policy):
    name = "greedy"

    def decide(self, view: PolicyView, cost: CostModel) -> Decision:
        m = compute_m(view, cost)
        if m == 0:
            return Decision(0)
        return Decision(m, (lcr_breakdown(view, cost, m),))


POLICIES: dict[str, Policy] = {
    p.name: p for p in (MinLcrPolicy(), SimLcrPolicy(), GreedyPolicy())
}


def get_policy(policy) -> Policy:
    """Resolve a policy name ("min-lcr" | "sim-lcr" | "greedy") or pass through a Policy."""
    if isinstance(policy, Policy):
        return policy
    if policy in POLICIES:
        return POLICIES[policy]
    valid = ", ".join(sorted(POLICIES))
    raise ModelError(f"unknown policy {policy!r}; valid names: {valid}")


def run_policy(instance: Instance, policy, cost: CostModel) -> Trace:
    """Simulate a policy over an instance slot by slot.

    Only this harness sees deadlines (to maintain availability); the policy
    receives a PolicyView. Slots where nothing is processed contribute no
    decision and no ledger entry. The loop ends at the first slot past the
    last arrival where the policy processes nothing: with no future arrivals
    the view can never change again.
    """
    policy = get_policy(policy)
    processed: set[int] = set()
    decisions: list[SlotDecision] = []
    ledgers: list[SlotLedger] = []
    last_arrival = instance.last_arrival
    hard_stop = last_arrival + len(instance) + 1
    slot = 1
    while slot <= hard_stop:
        live = available_jobs(instance, slot, processed)
        view = PolicyView(slot, tuple((j.id, j.value) for j in live))
        decision = policy.decide(view, cost)
        if decision.count > len(live):
            raise ModelError(
                f"slot {slot}: policy {policy.name!r} chose {decision.count} jobs, "
                f"only {len(live)} available")
        if decision.count > 0:
            chosen = live[:decision.count]
            processed.update(j.id for j in chosen)
            decisions.append(SlotDecision.build(slot, chosen, cost))
        if decision.breakdowns:
            ledgers.append(SlotLedger(slot, decision.count, decision.breakdowns))
        if decision.count == 0 and slot > last_arrival:
            break
        slot += 1
    return Trace.build(decisions, ledgers)

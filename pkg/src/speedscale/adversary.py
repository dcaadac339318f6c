"""Adversarial lower-bound machinery: deadline templates, the adaptive game,
and the numeric evaluation of the general lower-bound expression.

The adversary publishes a batch of values at slot 1 with deadlines left open.
After watching what the online policy processes in slot 1 it fixes deadlines
in the worst way consistent with what the policy saw: the chosen jobs never
expire (their payoff was already banked at group cost), everything else
expires immediately. A clairvoyant scheduler instead processes the leftover
pool greedily at slot 1 and the chosen jobs one per later slot.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import INFINITE, CostModel, Instance, Job, ModelError, PowerLaw
from .offline import OfflineProblem, solve_offline_flow
from .policies import Decision, Policy, PolicyView, get_policy, lcr_breakdown, compute_m, run_policy
from .reports import RatioReport, build_report

DELTA = (math.sqrt(5.0) - 1.0) / 2.0
PHI = 1.0 / DELTA
PHI_PLUS_1 = PHI + 1.0
SQRT2_PLUS_1 = math.sqrt(2.0) + 1.0


class ConstructionError(ModelError):
    """A lower-bound construction violated its own feasibility condition."""


@dataclass(frozen=True)
class InstanceTemplate:
    """A batch of slot-1 jobs whose deadlines the adversary will fix later."""

    values: tuple[float, ...]
    label: str = ""

    def __post_init__(self):
        if not self.values:
            raise ModelError("template needs at least one job")
        if any(v < 0 for v in self.values):
            raise ModelError("template values must be non-negative")

    def job_ids(self) -> tuple[int, ...]:
        return tuple(range(len(self.values)))

    def slot1_view(self) -> PolicyView:
        ranked = sorted(enumerate(self.values), key=lambda t: (-t[1], t[0]))
        return PolicyView(1, tuple((jid, v) for jid, v in ranked))


def gen_alpha2_lb_instance(z: int) -> InstanceTemplate:
    """2z jobs, each of value 2z, arriving at slot 1 (the alpha=2 construction)."""
    if z < 1:
        raise ModelError(f"z must be a positive integer, got {z}")
    return InstanceTemplate(values=(float(2 * z),) * (2 * z), label=f"alpha2-lb:z={z}")


def sqrt2_job_value(alpha: float) -> float:
    """Value (1 + 1/sqrt(2)) * (g(2) - sqrt(2) g(1)) used by the 4-job construction."""
    g = PowerLaw(alpha)
    return (1.0 + 1.0 / math.sqrt(2.0)) * (g.g(2) - math.sqrt(2.0) * g.g(1))


def gen_sqrt2_lb_instance(alpha: float) -> InstanceTemplate:
    """Four equal-value slot-1 jobs priced so any first-slot choice loses sqrt(2)+1.

    Requires alpha > 2; the value must stay below g(3) - g(2) so a third
    simultaneous job is never profitable.
    """
    if not alpha > 2.0:
        raise ModelError(f"the sqrt2 construction needs alpha > 2, got {alpha}")
    g = PowerLaw(alpha)
    v = sqrt2_job_value(alpha)
    if not v < g.g(3) - g.g(2):
        raise ConstructionError(
            f"value {v} does not stay below g(3)-g(2)={g.g(3) - g.g(2)} at alpha={alpha}")
    return InstanceTemplate(values=(v,) * 4, label=f"sqrt2-lb:alpha={alpha:g}")


@dataclass
class AdaptiveAdversaryState:
    """Deadline bookkeeping for one game: every pending deadline is fixed exactly once."""

    pending: dict[int, float]
    committed: dict[int, Job] = field(default_factory=dict)
    transcript: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)

    @staticmethod
    def from_template(template: InstanceTemplate) -> "AdaptiveAdversaryState":
        return AdaptiveAdversaryState(pending=dict(enumerate(template.values)))

    def commit(self, slot1_choice, label: str = "") -> Instance:
        chosen = set(slot1_choice)
        if self.committed:
            raise ModelError("deadlines were already committed")
        unknown = chosen - set(self.pending)
        if unknown:
            raise ModelError(f"choice contains unknown job ids: {sorted(unknown)}")
        for jid, value in self.pending.items():
            deadline = INFINITE if jid in chosen else 1
            self.committed[jid] = Job(id=jid, arrival=1, value=value, deadline=deadline)
        self.pending = {}
        self.transcript.append((1, tuple(sorted(chosen))))
        return Instance(tuple(self.committed.values()), label=label)


def adversary_finalize(template: InstanceTemplate, slot1_choice) -> Instance:
    """Chosen jobs get an infinite deadline; every other job expires at slot 1."""
    state = AdaptiveAdversaryState.from_template(template)
    return state.commit(slot1_choice, label=template.label)


class FixedCountPolicy(Policy):
    """Probe policy processing min(k, m) jobs each slot; used to explore game branches."""

    def __init__(self, k: int):
        if k < 1:
            raise ModelError(f"fixed count must be >= 1, got {k}")
        self.k = k
        self.name = f"fixed:{k}"

    def decide(self, view: PolicyView, cost: CostModel) -> Decision:
        m = compute_m(view, cost)
        if m == 0:
            return Decision(0)
        count = min(self.k, m)
        return Decision(count, (lcr_breakdown(view, cost, count),))


def run_adversarial_game(policy, template: InstanceTemplate, cost: CostModel) -> RatioReport:
    """Play one adaptive round: observe the policy's slot-1 choice, fix deadlines,
    then score the finalized instance offline vs online.

    The policy is deterministic and deadline-blind, so re-running it on the
    finalized instance reproduces the observed slot-1 decision; the replay is
    what gets scored.
    """
    policy = get_policy(policy)
    view = template.slot1_view()
    decision = policy.decide(view, cost)
    chosen = tuple(jid for jid, _ in view.candidates[: decision.count])
    instance = adversary_finalize(template, chosen)
    trace = run_policy(instance, policy, cost)
    first = trace.decisions[0].processed if trace.decisions else frozenset()
    if first != frozenset(chosen):
        raise ModelError("policy replay diverged from the observed slot-1 choice")
    off_profit, _ = solve_offline_flow(OfflineProblem.from_instance(instance, cost))
    return build_report(template.label, off_profit, trace)


def alpha2_game_ratio(z: int, k: int) -> float:
    """Closed-form game ratio for the alpha=2 template when the policy picks k jobs."""
    if not 1 <= k <= z:
        raise ModelError(f"k must be in 1..z, got k={k}, z={z}")
    return (z * z + 2.0 * z * k - k) / (2.0 * z * k - k * k)


# ---------------------------------------------------------------------------
# Numeric evaluation of the general lower bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LowerBoundCurvePoint:
    """One grid point: the worst policy choice k against a batch of 2z jobs
    of value c_z + x, where x is capped by the convexity gap at z."""

    alpha: float
    z: int
    x: float
    k_star: int
    value: float


def lower_bound_ratio(alpha: float, z: int, x: float, k: int) -> float:
    """The lower-bound ratio at one (z, x, k) point of the construction family."""
    cz = float(z) ** alpha - float(z - 1) ** alpha
    v = cz + x
    num = k * (v - 1.0) + (z * v - float(z) ** alpha)
    den = k * v - float(k) ** alpha
    return num / den


def _x_cap(alpha: float, z: np.ndarray) -> np.ndarray:
    zf = z.astype(float)
    return (zf + 1.0) ** alpha - 2.0 * zf ** alpha + (zf - 1.0) ** alpha


def _inner_min_batch(alpha: float, z: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Min over integer k in 1..z of the ratio, for broadcast arrays z and x.

    The ratio (A k + B) / (v k - k**alpha) with A, B > 0 is unimodal in k on
    the positive-denominator range, so the integer minimum sits at floor/ceil
    of the stationary point (or at the clamped ends), found by bisection on
    the increasing function A(alpha-1)k**alpha + alpha B k**(alpha-1) - B v.
    """
    zf = z.astype(float)
    cz = zf ** alpha - (zf - 1.0) ** alpha
    v = cz + x
    A = v - 1.0
    B = zf * v - zf ** alpha
    kbar = v ** (1.0 / (alpha - 1.0))  # denominator positive iff k < kbar

    lo = np.full_like(v, 1e-9)
    hi = kbar.copy()
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        val = A * (alpha - 1.0) * mid ** alpha + alpha * B * mid ** (alpha - 1.0) - B * v
        neg = val < 0.0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    kstar = 0.5 * (lo + hi)

    kmax = np.minimum(zf, np.ceil(kbar) - 1.0)
    candidates = np.stack([
        np.clip(np.floor(kstar), 1.0, zf),
        np.clip(np.ceil(kstar), 1.0, zf),
        np.ones_like(zf),
        np.clip(kmax, 1.0, zf),
    ])
    num = A * candidates + B
    den = v * candidates - candidates ** alpha
    ratio = np.where(den > 1e-300, num / den, np.inf)
    pick = np.argmin(ratio, axis=0)
    best = np.take_along_axis(ratio, pick[None], axis=0)[0]
    best_k = np.take_along_axis(candidates, pick[None], axis=0)[0]
    return best, best_k.astype(np.int64)


def _inner_min_scalar(alpha: float, z: int, x: float) -> float:
    value, _ = _inner_min_batch(alpha, np.array([z]), np.array([x]))
    return float(value[0])


def _refine_peak(alpha: float, z: int, x_lo: float, x_hi: float) -> float:
    """Golden-section maximization of the inner min over x in [x_lo, x_hi].

    The inner min is a minimum of smooth branches, so its peak may sit at a
    kink where two branches cross; a grid alone cannot hit it to tight
    tolerance, hence this local search around the best grid point.
    """
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = x_lo, x_hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc = _inner_min_scalar(alpha, z, c)
    fd = _inner_min_scalar(alpha, z, d)
    for _ in range(200):
        if b - a <= 1e-13 * max(1.0, abs(b)):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = _inner_min_scalar(alpha, z, c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = _inner_min_scalar(alpha, z, d)
    return max(fc, fd)


def eval_lower_bound(
    alpha: float,
    z_max: int,
    x_grid: int,
    keep_curve: bool = True,
    refine: bool = True,
    refine_top: int = 12,
    chunk: int = 256,
) -> tuple[list[LowerBoundCurvePoint], float]:
    """Sweep the lower-bound construction family over z = 1..z_max.

    For each z, x runs over a uniform grid on (0, xcap(z)] including the right
    endpoint, and the inner minimum over the policy's count k is exact. The
    returned best additionally refines the top grid rows by a local
    golden-section search in x, because the inner min can peak exactly at a
    branch crossing between two consecutive k.
    """
    if not alpha >= 2.0:
        raise ModelError(f"lower-bound evaluation needs alpha >= 2, got {alpha}")
    if z_max < 1:
        raise ModelError(f"z_max must be >= 1, got {z_max}")
    if x_grid < 2:
        raise ModelError(f"x_grid must be >= 2, got {x_grid}")

    curve: list[LowerBoundCurvePoint] = []
    best = -math.inf
    frac = np.arange(1, x_grid + 1, dtype=float) / x_grid
    row_best: list[tuple[float, int, float, float]] = []  # (value, z, x at argmax, xcap)

    for start in range(1, z_max + 1, chunk):
        zs = np.arange(start, min(start + chunk, z_max + 1), dtype=np.int64)
        xcap = _x_cap(alpha, zs)
        x = xcap[:, None] * frac[None, :]
        zz = np.broadcast_to(zs[:, None], x.shape)
        values, kstars = _inner_min_batch(alpha, zz, x)
        arg = np.argmax(values, axis=1)
        for r, z in enumerate(zs):
            row_best.append((float(values[r, arg[r]]), int(z), float(x[r, arg[r]]), float(xcap[r])))
        best = max(best, float(values.max()))
        if keep_curve:
            for r, z in enumerate(zs):
                for c in range(x_grid):
                    curve.append(LowerBoundCurvePoint(
                        alpha=alpha, z=int(z), x=float(x[r, c]),
                        k_star=int(kstars[r, c]), value=float(values[r, c])))

    if refine:
        h = 1.0 / x_grid
        for value, z, x_at, xcap in sorted(row_best, reverse=True)[:refine_top]:
            lo = max(xcap * h * 1e-6, x_at - xcap * h)
            hi = min(xcap, x_at + xcap * h)
            best = max(best, _refine_peak(alpha, z, lo, hi))

    return curve, best

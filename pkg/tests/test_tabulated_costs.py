"""End-to-end coverage for tabulated convex costs (the non-power-law kind).

A table must cover k = 0..n for an n-job instance: every operation that could
batch k jobs evaluates g(k) and refuses to extrapolate past the table.
"""
import math

import numpy as np
import pytest

from speedscale.model import (INFINITE, Instance, Job, ModelError,
                              TabulatedConvex, evaluate_trace)
from speedscale.offline import (OfflineProblem, solve_offline_bruteforce,
                                solve_offline_flow)
from speedscale.policies import (PolicyView, compute_m, lcr_breakdown,
                                 min_lcr_decide, run_policy)

from conftest import mk_instance, random_small_instance

TRIANGLE = TabulatedConvex(tuple(float(k * (k + 1) // 2) for k in range(12)))  # marginals 1,2,3,...
QUADRATIC = TabulatedConvex(tuple(float(k * k) for k in range(12)))


class TestPolicies:
    def test_min_lcr_matches_quadratic_power_law(self, alpha2):
        # the k^2 table must reproduce the power-law decisions exactly
        view = PolicyView(1, ((0, 10.0), (1, 6.0), (2, 3.0)))
        count_tab, ledger_tab = min_lcr_decide(view, QUADRATIC)
        count_pow, ledger_pow = min_lcr_decide(view, alpha2)
        assert count_tab == count_pow == 2
        for a, b in zip(ledger_tab, ledger_pow):
            assert math.isclose(a.lcr, b.lcr, abs_tol=1e-12)

    def test_triangle_marginals_admit_larger_batches(self):
        # marginals grow linearly, so m is larger than under k^2
        view = PolicyView(1, tuple((i, 4.5) for i in range(6)))
        assert compute_m(view, TRIANGLE) == 4  # marginals 1,2,3,4 < 4.5 < 5

    def test_run_policy_with_table(self):
        inst = mk_instance((1, 6.0, 1), (1, 5.0, 1), (1, 4.0, 1), (2, 6.0, INFINITE))
        trace = run_policy(inst, "min-lcr", TRIANGLE)
        assert math.isclose(evaluate_trace(inst, trace, TRIANGLE),
                            trace.total_profit, abs_tol=1e-9)

    def test_short_table_raises_clearly(self):
        short = TabulatedConvex((0.0, 1.0, 4.0))  # covers batches up to 2
        view = PolicyView(1, tuple((i, 100.0) for i in range(5)))
        with pytest.raises(ModelError, match="cost table"):
            lcr_breakdown(view, short, 1)  # leftover scan needs g(3)


class TestOffline:
    def test_flow_equals_brute_on_randoms(self, rng):
        for _ in range(120):
            inst = random_small_instance(rng)
            prob = OfflineProblem.from_instance(inst, TRIANGLE)
            f, _ = solve_offline_flow(prob)
            b, _ = solve_offline_bruteforce(prob)
            assert abs(f - b) <= 1e-6, (f, b, inst.jobs)

    def test_linear_marginals_reward_batching(self):
        # two equal jobs: batching costs 1+2, splitting costs 1+1; with a shared
        # slot deadline the batch is taken and profit is 2v - 3
        inst = mk_instance((1, 4.0, 1), (1, 4.0, 1))
        profit, trace = solve_offline_flow(OfflineProblem.from_instance(inst, TRIANGLE))
        assert profit == 5.0
        assert len(trace.decisions) == 1

    def test_flow_refuses_batch_past_table(self):
        short = TabulatedConvex((0.0, 1.0, 4.0))
        inst = mk_instance(*[(1, 9.0, 1)] * 4)
        with pytest.raises(ModelError, match="cost table"):
            solve_offline_flow(OfflineProblem.from_instance(inst, short))

"""Cross-check the production flow solver against a textbook reference:
an explicit residual graph (source -> jobs -> window slots -> parallel unit
arcs to the sink) solved by Bellman-Ford successive shortest paths. Slower
but independent of the displacement-chain search, and it scales past the
brute-force guard.
"""
import math

import numpy as np
import pytest

from speedscale.model import INFINITE, Instance, Job, PowerLaw, effective_cost
from speedscale.offline import OfflineProblem, solve_offline_flow


class RefGraph:
    def __init__(self, n_nodes):
        self.adj = [[] for _ in range(n_nodes)]

    def add(self, u, v, cap, cost):
        self.adj[u].append([v, cap, cost, len(self.adj[v])])
        self.adj[v].append([u, 0, -cost, len(self.adj[u]) - 1])


def reference_offline(problem: OfflineProblem) -> float:
    jobs = problem.jobs
    if not jobs:
        return 0.0
    n = len(jobs)
    bound = max(j.start for j in jobs) + n
    horizon = min(problem.horizon, bound)
    source, sink = 0, 1 + n + horizon
    g = RefGraph(sink + 1)
    for idx, j in enumerate(jobs):
        g.add(source, 1 + idx, 1, -j.value)
        for t in range(j.start, min(j.end, horizon) + 1):
            g.add(1 + idx, n + t, 1, 0.0)
    for t in range(1, horizon + 1):
        for k in range(1, n + 1):
            g.add(n + t, sink, 1, effective_cost(problem.cost, k))

    total = 0.0
    while True:
        dist = [math.inf] * (sink + 1)
        parent = [None] * (sink + 1)
        dist[source] = 0.0
        for _ in range(sink + 1):
            changed = False
            for u in range(sink + 1):
                if dist[u] == math.inf:
                    continue
                for ei, (v, cap, cost, _) in enumerate(g.adj[u]):
                    if cap > 0 and dist[u] + cost < dist[v] - 1e-12:
                        dist[v] = dist[u] + cost
                        parent[v] = (u, ei)
                        changed = True
            if not changed:
                break
        if dist[sink] >= -1e-12:
            break
        total -= dist[sink]
        v = sink
        while v != source:
            u, ei = parent[v]
            arc = g.adj[u][ei]
            arc[1] -= 1
            g.adj[v][arc[3]][1] += 1
            v = u
    return total


def random_medium_instance(rng):
    n = int(rng.integers(5, 36))
    jobs = []
    arrival = 1
    for i in range(n):
        arrival += int(rng.poisson(0.4))
        deadline = INFINITE if rng.random() < 0.2 else int(rng.integers(1, 7))
        jobs.append(Job(i, arrival, float(rng.uniform(0, 30)), deadline))
    return Instance(tuple(jobs))


@pytest.mark.parametrize("alpha", [2.0, 3.0])
def test_flow_matches_bellman_ford_reference(alpha):
    rng = np.random.default_rng(hash(alpha) % 2 ** 32)
    cost = PowerLaw(alpha)
    for _ in range(12):
        inst = random_medium_instance(rng)
        prob = OfflineProblem.from_instance(inst, cost)
        fast, _ = solve_offline_flow(prob)
        slow = reference_offline(prob)
        assert abs(fast - slow) <= 1e-6, (fast, slow, inst.jobs)


def test_flow_matches_reference_on_sparse_tied_instances():
    # arrival gaps, duplicate values, and a non-integer exponent together
    rng = np.random.default_rng(99)
    cost = PowerLaw(2.5)
    for _ in range(15):
        n = int(rng.integers(3, 25))
        arrival = 1
        jobs = []
        for i in range(n):
            arrival += int(rng.integers(0, 8))
            d = INFINITE if rng.random() < 0.3 else int(rng.integers(1, 12))
            value = float(rng.choice([0.0, 0.5, 3.0, 9.0, 9.0, 25.0]))
            jobs.append(Job(i, arrival, value, d))
        prob = OfflineProblem.from_instance(Instance(tuple(jobs)), cost)
        fast, _ = solve_offline_flow(prob)
        assert abs(fast - reference_offline(prob)) <= 1e-6


def test_reference_on_known_instances(alpha2):
    # anchor the reference itself on hand-computed values
    inst = Instance((Job(0, 1, 4.0, INFINITE), Job(1, 1, 4.0, INFINITE)))
    assert math.isclose(reference_offline(OfflineProblem.from_instance(inst, alpha2)), 6.0)
    inst = Instance((Job(0, 1, 4.0, 1), Job(1, 1, 4.0, 1)))
    assert math.isclose(reference_offline(OfflineProblem.from_instance(inst, alpha2)), 4.0)
    inst = Instance((Job(0, 1, 8.0, 3), Job(1, 1, 9.0, 2), Job(2, 1, 10.0, 1)))
    assert math.isclose(reference_offline(OfflineProblem.from_instance(inst, alpha2)), 24.0)

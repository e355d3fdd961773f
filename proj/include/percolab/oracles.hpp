// Brute-force reference implementations. These deliberately share no code
// with the fast paths they check: enumeration instead of sampling, per-step
// frontier scans instead of a heap, BFS instead of union-find, edge deletion
// instead of a bridge pass. The test suites and the built-in selftest pin the
// fast kernels against these, and the benchmark uses them as the serial lane.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "percolab/connectivity.hpp"
#include "percolab/invasion.hpp"
#include "percolab/lattice.hpp"
#include "percolab/random_field.hpp"
#include "percolab/rng.hpp"

namespace percolab::oracle {

// Exact left-right crossing probability of [0,w] x [0,h] at level p by
// enumeration of all 2^edges configurations. Practical up to ~20 edges.
double enumerate_crossing_probability(int w, int h, double p);

// Histogram over open-edge counts of crossing configurations of [0,w]x[0,h]:
// hist[k] = #configurations with exactly k open edges that cross. The exact
// crossing probability is sum_k hist[k] p^k (1-p)^(m-k).
std::vector<std::int64_t> crossing_popcount_histogram(int w, int h);

// Exact root of "crossing probability of [0,n]^2 equals target" via bisection
// on the enumerated polynomial (n small).
double enumerate_crossing_root(int n, double target);

// Exact conditional probability, at p = 1/2 on the 12 edges of B(1), of
// {all target edges open} given {origin connected to the boundary of B(1)}.
double enumerate_b1_conditional(std::span<const EdgeKey> target_edges);

// Plain breadth-first connectivity on an explicit configuration.
bool bfs_connected(const Configuration& config, Vertex a, Vertex b);

// Serial reference crossing sampler: identical edge draws, BFS instead of
// union-find.
bool reference_lr_crossing(int w, int h, double p, const Stream& stream);

// Reference invasion: each step rescans every box edge adjacent to the
// invaded subgraph and takes the (weight, key) minimum. Stopping and
// censoring semantics are re-implemented here, independent of InvasionState.
struct ScanInvasionResult {
    std::vector<TraceEntry> trace;
    bool censored = false;
    bool rule_fired = false;
};
ScanInvasionResult scan_invasion(const WeightField& field, const StopRule& rule);

// Disconnecting edges by the definition: delete each window edge of the
// cluster in turn, recompute the origin's component, and keep the edge iff
// that component no longer reaches the horizon boundary.
std::vector<Edge> disconnecting_edges_by_deletion(const FiniteCluster& cluster, Vertex origin,
                                                  const Annulus& window, BoxSpec horizon);

}  // namespace percolab::oracle

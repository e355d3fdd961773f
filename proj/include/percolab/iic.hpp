// Kesten's incipient infinite cluster, realized at finite conditioning
// radius: rejection sampling of critical configurations conditioned on
// {0 <-> boundary of B(N)}, one-arm probabilities, the conditioned-ratio
// estimator for nu[all annulus edges open], and the quasi-multiplicativity
// constant that sandwiches it.
#pragma once

#include <cstdint>
#include <optional>

#include "percolab/lattice.hpp"
#include "percolab/mc_stats.hpp"
#include "percolab/random_field.hpp"

namespace percolab {

// pi(n): probability at criticality that the origin connects to the internal
// boundary of B(n).
Estimate one_arm_probability(int n, std::int64_t replicas, const SeedSpec& seed,
                             int workers = 0, double confidence = 0.99);

// rho(inner, N): probability at criticality that B(inner) connects to the
// boundary of B(N) (edges with an endpoint outside B(inner) only).
Estimate shell_connection_probability(int inner, int N, std::int64_t replicas,
                                      const SeedSpec& seed, int workers = 0,
                                      double confidence = 0.99);

// P[0 <-> boundary of B(N) | all induced edges of Ann(n,2n) open] at
// criticality, estimated with the annulus forced open (exact conditioning by
// independence of disjoint edge sets).
Estimate conditional_one_arm(int n, int N, std::int64_t replicas, const SeedSpec& seed,
                             int workers = 0, double confidence = 0.99);

struct ConditionedSample {
    Configuration config;
    int conditioning_radius = 0;
    bool accepted = false;
    std::int64_t attempts = 0;
};

// Samples critical configurations on B(N) until the origin connects to the
// boundary; each attempt uses a fresh substream so the sample is a pure
// function of (seed, attempt sequence). Returns accepted = false when the
// attempt cap is exhausted.
ConditionedSample iic_rejection_sample(int N, const SeedSpec& seed,
                                       std::int64_t attempt_cap = 1000000);

struct NuEstimate {
    Annulus annulus;
    int conditioning_radius = 0;
    double prefactor = 0.0;   // p_c^{|Ann(n,2n)|}, exact
    Estimate ratio;           // conditional one-arm / one-arm
    double nu_point = 0.0;    // prefactor * ratio
    double nu_lo = 0.0;
    double nu_hi = 0.0;
    double sandwich_lower = 0.0;  // prefactor
    double sandwich_upper = 0.0;  // C_hat * prefactor
    double c_hat = 0.0;
    bool sandwich_flagged = false;  // set when the point leaves the sandwich beyond CI
};

// The annulus-event measure nu[all edges of Ann(n,2n) open] at conditioning
// radius N >= 4n, with the exact prefactor split off and a delta-method CI on
// the conditional ratio.
NuEstimate nu_annulus_estimate(int n, int N, std::int64_t replicas, const SeedSpec& seed,
                               int workers = 0, double confidence = 0.99);

// C_hat = pi(n) * rho(2n, N) / pi(N); >= 1 up to noise for all N >= 2n.
Estimate quasi_mult_constant(int n, int N, std::int64_t replicas, const SeedSpec& seed,
                             int workers = 0, double confidence = 0.99);

}  // namespace percolab

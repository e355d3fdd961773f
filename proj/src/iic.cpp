#include "percolab/iic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "percolab/connectivity.hpp"

namespace percolab {

Estimate one_arm_probability(int n, std::int64_t replicas, const SeedSpec& seed,
                             int workers, double confidence) {
    if (n < 1) throw std::invalid_argument("percolab: one-arm radius must be >= 1");
    const ReplicaPlan plan = make_plan(replicas, seed, workers);
    return estimate_proportion(plan, confidence, [n](std::int64_t, const Stream& stream) {
        return sample_origin_to_boundary(n, kCriticalP, stream);
    });
}

Estimate shell_connection_probability(int inner, int N, std::int64_t replicas,
                                      const SeedSpec& seed, int workers, double confidence) {
    if (inner < 0 || N < inner) {
        throw std::invalid_argument("percolab: shell requires 0 <= inner <= N");
    }
    const ReplicaPlan plan = make_plan(replicas, seed, workers);
    return estimate_proportion(plan, confidence, [inner, N](std::int64_t, const Stream& stream) {
        return sample_shell_connection(inner, N, kCriticalP, stream);
    });
}

Estimate conditional_one_arm(int n, int N, std::int64_t replicas, const SeedSpec& seed,
                             int workers, double confidence) {
    if (n < 1 || N < 2 * n) {
        throw std::invalid_argument("percolab: conditional one-arm needs N >= 2n, n >= 1");
    }
    const Annulus ann = make_annulus(n, 2 * n);
    const auto forced = annulus_edge_flags(ann, N);
    const ReplicaPlan plan = make_plan(replicas, seed, workers);
    return estimate_proportion(plan, confidence,
                               [N, &forced](std::int64_t, const Stream& stream) {
                                   return sample_origin_to_boundary(N, kCriticalP, stream, &forced);
                               });
}

ConditionedSample iic_rejection_sample(int N, const SeedSpec& seed, std::int64_t attempt_cap) {
    if (N < 1) throw std::invalid_argument("percolab: conditioning radius must be >= 1");
    if (attempt_cap < 1) throw std::invalid_argument("percolab: attempt cap must be >= 1");

    ConditionedSample sample;
    sample.conditioning_radius = N;

    const Stream base(seed);
    for (std::int64_t attempt = 0; attempt < attempt_cap; ++attempt) {
        const Stream attempt_stream = base.split(static_cast<std::uint64_t>(attempt));
        if (!sample_origin_to_boundary(N, kCriticalP, attempt_stream)) continue;

        // Accepted: materialize the configuration from the same stream.
        sample.accepted = true;
        sample.attempts = attempt + 1;
        sample.config.region = BoxSpec{N};
        sample.config.provenance = Provenance::direct_bernoulli;
        sample.config.level = kCriticalP;
        sample.config.seed = seed;
        for (const Edge& e : box_edges(BoxSpec{N})) {
            const EdgeKey key = edge_key(e);
            if (attempt_stream.edge_open(key, kCriticalP)) sample.config.open_edges.push_back(key);
        }
        return sample;
    }
    sample.accepted = false;
    sample.attempts = attempt_cap;
    return sample;
}

NuEstimate nu_annulus_estimate(int n, int N, std::int64_t replicas, const SeedSpec& seed,
                               int workers, double confidence) {
    if (n < 1) throw std::invalid_argument("percolab: annulus scale must be >= 1");
    if (N < 4 * n) {
        throw std::invalid_argument("percolab: conditioning radius must be >= 4n");
    }
    NuEstimate out;
    out.annulus = make_annulus(n, 2 * n);
    out.conditioning_radius = N;
    out.prefactor = std::pow(kCriticalP, static_cast<double>(out.annulus.edge_count));

    const Estimate numerator = conditional_one_arm(
        n, N, replicas, seed.with_purpose(seed.purpose + "/nu:num"), workers, confidence);
    const Estimate denominator = one_arm_probability(
        N, replicas, seed.with_purpose(seed.purpose + "/nu:den"), workers, confidence);
    if (denominator.lo <= 0.0) {
        throw std::invalid_argument("percolab: one-arm denominator CI touches zero");
    }
    out.ratio = ratio_estimate(numerator, denominator);
    out.nu_point = out.prefactor * out.ratio.point;
    out.nu_lo = out.prefactor * out.ratio.lo;
    out.nu_hi = out.prefactor * out.ratio.hi;

    const Estimate c_hat = quasi_mult_constant(
        n, N, replicas, seed.with_purpose(seed.purpose + "/nu:chat"), workers, confidence);
    out.c_hat = c_hat.point;
    out.sandwich_lower = out.prefactor;
    out.sandwich_upper = out.c_hat * out.prefactor;

    // The sandwich must hold within CI: compare the conditional ratio against
    // [1, C_hat] using the joint uncertainty.
    const double ratio_slack = out.ratio.half_width();
    const double c_slack = c_hat.half_width();
    out.sandwich_flagged = out.ratio.point < 1.0 - ratio_slack ||
                           out.ratio.point > out.c_hat + ratio_slack + c_slack;
    return out;
}

Estimate quasi_mult_constant(int n, int N, std::int64_t replicas, const SeedSpec& seed,
                             int workers, double confidence) {
    if (n < 1 || N < 2 * n) {
        throw std::invalid_argument("percolab: quasi-multiplicativity needs N >= 2n");
    }
    const Estimate pi_n = one_arm_probability(
        n, replicas, seed.with_purpose(seed.purpose + "/qm:pi_n"), workers, confidence);
    const Estimate rho = shell_connection_probability(
        2 * n, N, replicas, seed.with_purpose(seed.purpose + "/qm:rho"), workers, confidence);
    const Estimate pi_N = one_arm_probability(
        N, replicas, seed.with_purpose(seed.purpose + "/qm:pi_N"), workers, confidence);
    return ratio_estimate(product_estimate(pi_n, rho), pi_N);
}

}  // namespace percolab

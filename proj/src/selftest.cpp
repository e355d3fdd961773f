#include "percolab/selftest.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "percolab/connectivity.hpp"
#include "percolab/domination.hpp"
#include "percolab/invasion.hpp"
#include "percolab/lattice.hpp"
#include "percolab/mc_stats.hpp"
#include "percolab/near_critical.hpp"
#include "percolab/oracles.hpp"
#include "percolab/random_field.hpp"

namespace percolab {

namespace {

struct Check {
    std::string name;
    std::function<bool()> run;
};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

int selftest(std::ostream& out) {
    const SeedSpec seed{20260809, 0, "selftest"};

    std::vector<Check> checks;

    checks.push_back({"box/boundary counts vs closed forms (n <= 50)", [] {
        for (int n = 0; n <= 50; ++n) {
            if (static_cast<std::int64_t>(box_vertices(BoxSpec{n}).size()) != box_vertex_count(n)) return false;
            if (n >= 1 &&
                static_cast<std::int64_t>(internal_boundary(BoxSpec{n}).size()) != 8 * n) return false;
        }
        return true;
    }});

    checks.push_back({"annulus edge counts vs 24n^2-4n-4 (n <= 8)", [] {
        for (int n = 1; n <= 8; ++n) {
            const Annulus ann = make_annulus(n, 2 * n);
            if (ann.edge_count != 24LL * n * n - 4 * n - 4) return false;
        }
        return box_edge_count(1) == 12 && make_annulus(1, 2).edge_count == 16;
    }});

    checks.push_back({"unit-square crossing enumeration = 3/4 at p=1/2", [] {
        return close(oracle::enumerate_crossing_probability(1, 1, 0.5), 0.75, 1e-12);
    }});

    checks.push_back({"self-dual rectangle (2,1) enumeration = 1/2 at p=1/2", [] {
        return close(oracle::enumerate_crossing_probability(2, 1, 0.5), 0.5, 1e-12);
    }});

    checks.push_back({"crossing root of [0,1]^2 at 0.98 = 1-sqrt(0.02)", [] {
        return close(oracle::enumerate_crossing_root(1, 0.98), 1.0 - std::sqrt(0.02), 1e-9);
    }});

    checks.push_back({"Wilson interval pinned values", [] {
        const Estimate mid = wilson_interval(50, 100, 0.95);
        const Estimate zero = wilson_interval(0, 100, 0.95);
        const Estimate full = wilson_interval(100, 100, 0.95);
        return close(mid.lo, 0.40383, 2e-4) && close(mid.hi, 0.59617, 2e-4) &&
               close(zero.hi, 0.03700, 2e-4) && zero.lo == 0.0 &&
               close(full.lo, 1.0 - 0.03700, 2e-4) && full.hi == 1.0;
    }});

    checks.push_back({"stream determinism and region independence", [&] {
        const WeightField small = sample_weights(BoxSpec{3}, seed.with_purpose("selftest/field"));
        const WeightField large = sample_weights(BoxSpec{10}, seed.with_purpose("selftest/field"));
        for (const Edge& e : box_edges(BoxSpec{3})) {
            if (small.weight(e) != large.weight(e)) return false;
        }
        return true;
    }});

    checks.push_back({"weight mean over 1e5 draws within 0.005 of 1/2", [&] {
        const Stream stream(seed.with_purpose("selftest/mean"));
        double sum = 0.0;
        for (int i = 0; i < 100000; ++i) sum += stream.unit(static_cast<std::uint64_t>(i));
        return close(sum / 100000.0, 0.5, 0.005);
    }});

    checks.push_back({"invasion trace equals per-step min-scan (20 fields, B(5))", [&] {
        for (int f = 0; f < 20; ++f) {
            const WeightField field = sample_weights(
                BoxSpec{5}, seed.with_purpose("selftest/inv").with_replica(static_cast<std::uint64_t>(f)));
            const StopRule rule = StopRule::steps(220);
            const InvasionState fast = run_invasion(field, rule);
            const oracle::ScanInvasionResult slow = oracle::scan_invasion(field, rule);
            if (fast.trace() != slow.trace || fast.censored() != slow.censored) return false;
        }
        return true;
    }});

    checks.push_back({"disconnecting edges equal delete-one-edge oracle (100 clusters)", [&] {
        const Annulus window = make_annulus(1, 6);
        const BoxSpec horizon{8};
        for (int f = 0; f < 100; ++f) {
            const Configuration config = bernoulli_config(
                horizon, 0.55, seed.with_purpose("selftest/disc").with_replica(static_cast<std::uint64_t>(f)));
            const FiniteCluster cluster = cluster_of(config, Vertex{0, 0});
            const auto fast = disconnecting_edges(cluster, Vertex{0, 0}, window, horizon);
            const auto slow =
                oracle::disconnecting_edges_by_deletion(cluster, Vertex{0, 0}, window, horizon);
            if (fast != slow) return false;
        }
        return true;
    }});

    checks.push_back({"union-find connectivity equals BFS (100 configs, B(10))", [&] {
        for (int f = 0; f < 100; ++f) {
            const SeedSpec s = seed.with_purpose("selftest/uf").with_replica(static_cast<std::uint64_t>(f));
            const Configuration config = bernoulli_config(BoxSpec{10}, 0.5, s);
            const Stream picker = Stream(s.with_purpose("selftest/uf/pick"));
            const auto vx = [&](std::uint64_t c) {
                return Vertex{static_cast<int>(picker.word(c) % 21) - 10,
                              static_cast<int>(picker.word(c + 100) % 21) - 10};
            };
            const Vertex a = vx(0), b = vx(1);
            const std::vector<Vertex> sa{a}, sb{b};
            if (connected(config, sa, sb) != oracle::bfs_connected(config, a, b)) return false;
        }
        return true;
    }});

    checks.push_back({"suffix max matches direct recomputation", [&] {
        const Stream stream(seed.with_purpose("selftest/sm"));
        std::vector<double> w;
        for (int i = 0; i < 500; ++i) w.push_back(stream.unit(static_cast<std::uint64_t>(i)));
        const auto fast = suffix_max(w, 17);
        for (std::size_t k = 17; k < w.size(); ++k) {
            double m = 0.0;
            for (std::size_t j = k; j < w.size(); ++j) m = std::max(m, w[j]);
            if (fast[k - 17] != m) return false;
        }
        return true;
    }});

    checks.push_back({"threshold monotone in p on coupled fields (50 fields)", [&] {
        for (int f = 0; f < 50; ++f) {
            const WeightField field = sample_weights(
                BoxSpec{6}, seed.with_purpose("selftest/mono").with_replica(static_cast<std::uint64_t>(f)));
            const Configuration lo = threshold(field, 0.4);
            const Configuration hi = threshold(field, 0.6);
            for (const EdgeKey key : lo.open_edges) {
                if (!hi.is_open(key)) return false;
            }
        }
        return true;
    }});

    checks.push_back({"kernel crossing equals BFS reference (200 draws)", [&] {
        for (int f = 0; f < 200; ++f) {
            const Stream stream(seed.with_purpose("selftest/xing").with_replica(static_cast<std::uint64_t>(f)));
            if (sample_lr_crossing(5, 5, 0.5, stream) !=
                oracle::reference_lr_crossing(5, 5, 0.5, stream)) return false;
        }
        return true;
    }});

    checks.push_back({"crossing probability exact at p=0 and p=1", [&] {
        const Estimate none = crossing_probability(0.0, 3, 200, seed.with_purpose("selftest/p0"), 1);
        const Estimate all = crossing_probability(1.0, 3, 200, seed.with_purpose("selftest/p1"), 1);
        return none.point == 0.0 && all.point == 1.0;
    }});

    checks.push_back({"worker-count invariance of a crossing tally (1 vs 4)", [&] {
        const SeedSpec s = seed.with_purpose("selftest/workers");
        const Estimate one = crossing_probability(0.5, 6, 4000, s, 1);
        const Estimate four = crossing_probability(0.5, 6, 4000, s, 4);
        return one.successes == four.successes && one.trials == four.trials;
    }});

    checks.push_back({"certificate factor supports are disjoint (n=1,2,4)", [] {
        return certificate_supports_disjoint(1) && certificate_supports_disjoint(2) &&
               certificate_supports_disjoint(4);
    }});

    int failures = 0;
    for (const Check& check : checks) {
        bool ok = false;
        std::string note;
        try {
            ok = check.run();
        } catch (const std::exception& e) {
            ok = false;
            note = std::string(" (") + e.what() + ")";
        }
        out << (ok ? "[PASS] " : "[FAIL] ") << check.name << note << "\n";
        if (!ok) ++failures;
    }
    out << (failures == 0 ? "selftest: all checks passed\n"
                          : "selftest: " + std::to_string(failures) + " check(s) failed\n");
    return failures;
}

}  // namespace percolab

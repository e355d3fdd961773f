#include "percolab/mc_stats.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace percolab {

namespace {

std::atomic<int> g_default_workers{0};

int machine_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Acklam's rational approximation to the standard normal quantile,
// |relative error| < 1.15e-9 over (0,1).
double inverse_normal_cdf(double u) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (u <= 0.0 || u >= 1.0) {
        throw std::invalid_argument("percolab: normal quantile argument must be in (0,1)");
    }
    double q, r;
    if (u < plow) {
        q = std::sqrt(-2.0 * std::log(u));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (u <= 1.0 - plow) {
        q = u - 0.5;
        r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    q = std::sqrt(-2.0 * std::log(1.0 - u));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_quantile_two_sided(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::invalid_argument("percolab: confidence must be in (0,1)");
    }
    return inverse_normal_cdf(0.5 + confidence / 2.0);
}

Estimate wilson_interval(std::int64_t successes, std::int64_t trials, double confidence) {
    if (trials < 1) throw std::invalid_argument("percolab: Wilson interval needs trials >= 1");
    if (successes < 0 || successes > trials) {
        throw std::invalid_argument("percolab: successes must lie in [0, trials]");
    }
    const double z = normal_quantile_two_sided(confidence);
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2n = z * z / n;
    const double denom = 1.0 + z2n;
    const double center = (phat + z2n / 2.0) / denom;
    const double hw = z * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) / denom;

    Estimate est;
    est.point = phat;
    est.lo = std::max(0.0, center - hw);
    est.hi = std::min(1.0, center + hw);
    est.confidence = confidence;
    est.trials = trials;
    est.successes = successes;
    return est;
}

namespace {

double stddev_of(const Estimate& e) {
    const double z = normal_quantile_two_sided(e.confidence);
    return e.half_width() / z;
}

}  // namespace

Estimate ratio_estimate(const Estimate& num, const Estimate& den) {
    if (den.lo <= 0.0) {
        throw std::invalid_argument("percolab: ratio denominator CI touches zero");
    }
    const double r = num.point / den.point;
    const double cv2 = [&] {
        double out = 0.0;
        if (num.point != 0.0) {
            const double s = stddev_of(num) / num.point;
            out += s * s;
        }
        const double sd = stddev_of(den) / den.point;
        return out + sd * sd;
    }();
    const double conf = std::min(num.confidence, den.confidence);
    const double z = normal_quantile_two_sided(conf);
    const double hw = z * std::abs(r) * std::sqrt(cv2);

    Estimate est;
    est.point = r;
    est.lo = r - hw;
    est.hi = r + hw;
    est.confidence = conf;
    est.trials = std::min(num.trials, den.trials);
    est.successes = -1;
    est.seed = num.seed;
    return est;
}

Estimate product_estimate(const Estimate& a, const Estimate& b) {
    const double p = a.point * b.point;
    double cv2 = 0.0;
    if (a.point != 0.0) {
        const double s = stddev_of(a) / a.point;
        cv2 += s * s;
    }
    if (b.point != 0.0) {
        const double s = stddev_of(b) / b.point;
        cv2 += s * s;
    }
    const double conf = std::min(a.confidence, b.confidence);
    const double z = normal_quantile_two_sided(conf);
    const double hw = z * std::abs(p) * std::sqrt(cv2);

    Estimate est;
    est.point = p;
    est.lo = p - hw;
    est.hi = p + hw;
    est.confidence = conf;
    est.trials = std::min(a.trials, b.trials);
    est.successes = -1;
    est.seed = a.seed;
    return est;
}

int default_workers() {
    int w = g_default_workers.load();
    if (w > 0) return w;
    if (const char* env = std::getenv("PERCOLAB_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    return machine_workers();
}

void set_default_workers(int workers) {
    g_default_workers.store(workers > 0 ? workers : 0);
}

ReplicaPlan make_plan(std::int64_t total, const SeedSpec& seed, int workers) {
    if (total < 0) throw std::invalid_argument("percolab: replica total must be >= 0");
    ReplicaPlan plan;
    plan.total = total;
    plan.workers = workers > 0 ? workers : default_workers();
    plan.seed = seed;
    return plan;
}

ReplicaFailure::ReplicaFailure(std::int64_t replica, const SeedSpec& seed, const std::string& what)
    : std::runtime_error("replica " + std::to_string(replica) + " (seed " +
                         std::to_string(seed.master_seed) + ", purpose '" + seed.purpose +
                         "') failed: " + what),
      replica_index(replica),
      replica_seed(seed) {}

namespace detail {

std::pair<std::int64_t, std::int64_t> worker_range(std::int64_t total, int workers, int w) {
    const std::int64_t lo = total * w / workers;
    const std::int64_t hi = total * (w + 1) / workers;
    return {lo, hi};
}

void parallel_workers(int workers, const std::function<void(int)>& run_worker) {
    // One iteration per worker block; the block-to-result mapping is fixed by
    // the plan, so the fold does not depend on how many OS threads exist.
#ifdef _OPENMP
    #pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (int w = 0; w < workers; ++w) {
        run_worker(w);
    }
#else
    for (int w = 0; w < workers; ++w) {
        run_worker(w);
    }
#endif
}

}  // namespace detail

}  // namespace percolab

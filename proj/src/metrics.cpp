#include "wsg/metrics.hpp"

#include <cmath>
#include <future>
#include <numbers>
#include <random>

namespace wsg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Box-Muller over 53-bit uniforms from mt19937_64; every step is fixed by the
/// standard, unlike std::normal_distribution.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct PartialSums {
    double output_energy = 0.0;
    double difference_energy = 0.0;
    double input_energy = 0.0;
    std::int64_t outputs = 0;
    std::int64_t differences = 0;
    std::int64_t inputs = 0;
};

PartialSums run_partition(std::span<const double> c, std::int64_t outputs, std::uint64_t seed) {
    const auto q = static_cast<std::int64_t>(c.size());
    PartialSums sums;
    if (outputs == 0) return sums;

    GaussianSource noise(seed);
    std::vector<double> e(static_cast<std::size_t>(outputs + q));
    for (double& x : e) x = noise.next();

    double previous = 0.0;
    for (std::int64_t t = 0; t <= outputs; ++t) {
        double y = 0.0;
        for (std::int64_t k = 0; k < q; ++k) y += c[k] * e[t + k];
        if (t < outputs) sums.output_energy += y * y;
        if (t > 0) {
            const double d = y - previous;
            sums.difference_energy += d * d;
        }
        previous = y;
    }
    // Input variance over the samples that feed the r outputs; the last one
    // only enters through the final difference.
    const std::int64_t fed = outputs + q - 1;
    for (std::int64_t i = 0; i < fed; ++i) sums.input_energy += e[i] * e[i];
    sums.outputs = outputs;
    sums.differences = outputs;
    sums.inputs = fed;
    return sums;
}

/// Sum over all lags of the squared autocorrelation of h.
double squared_autocorrelation_sum(std::span<const double> h) {
    const auto len = static_cast<std::ptrdiff_t>(h.size());
    double total = 0.0;
    for (std::ptrdiff_t lag = -(len - 1); lag < len; ++lag) {
        double g = 0.0;
        for (std::ptrdiff_t i = 0; i < len; ++i) {
            const std::ptrdiff_t k = i + lag;
            if (k >= 0 && k < len) g += h[i] * h[k];
        }
        total += g * g;
    }
    return total;
}

} // namespace

RatioStandardErrors ratio_standard_errors(std::span<const double> c, std::int64_t sample_count) {
    if (c.empty() || sample_count < 1) throw InvalidArgument("need taps and a positive sample count");
    std::vector<double> diff(c.size() + 1, 0.0);
    double r = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) r += c[i] * c[i];
    double prev = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        diff[i] = c[i] - prev;
        prev = c[i];
    }
    diff[c.size()] = -prev;
    double s = 0.0;
    for (double d : diff) s += d * d;
    s /= 2.0;

    const auto n = static_cast<double>(sample_count);
    const double var_r = 2.0 / n * (squared_autocorrelation_sum(c) - r * r);
    const double var_s = 1.0 / (2.0 * n) * (squared_autocorrelation_sum(diff) - 4.0 * s * s);
    return {std::sqrt(std::max(var_r, 0.0)), std::sqrt(std::max(var_s, 0.0))};
}

EmpiricalRatios empirical_ratios(std::span<const double> c, std::int64_t sample_count, std::uint64_t seed) {
    if (c.empty()) throw InvalidArgument("filter has no taps");
    if (sample_count < 10000) throw InvalidArgument("Monte-Carlo estimate needs at least 10^4 samples");

    std::vector<std::future<PartialSums>> jobs;
    const std::int64_t base = sample_count / kMonteCarloPartitions;
    const std::int64_t extra = sample_count % kMonteCarloPartitions;
    for (int k = 0; k < kMonteCarloPartitions; ++k) {
        const std::int64_t outputs = base + (k < extra ? 1 : 0);
        jobs.push_back(std::async(std::launch::async, run_partition, c, outputs,
                                  splitmix64(seed + static_cast<std::uint64_t>(k))));
    }
    PartialSums total;
    for (auto& job : jobs) {
        const PartialSums part = job.get();
        total.output_energy += part.output_energy;
        total.difference_energy += part.difference_energy;
        total.input_energy += part.input_energy;
        total.outputs += part.outputs;
        total.differences += part.differences;
        total.inputs += part.inputs;
    }

    const double input_variance = total.input_energy / static_cast<double>(total.inputs);
    const double r_hat = total.output_energy / static_cast<double>(total.outputs) / input_variance;
    const double s_hat = total.difference_energy / static_cast<double>(total.differences) / (2.0 * input_variance);
    const RatioStandardErrors se = ratio_standard_errors(c, sample_count);
    return {r_hat, s_hat, se.r, se.s, sample_count};
}

} // namespace wsg

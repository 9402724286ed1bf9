#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsg/design.hpp"
#include "wsg/errors.hpp"

namespace wsg {

/// How the first and last outputs are produced when the window overhangs the
/// record. `valid` drops them, `mirror` reflects the record about its end
/// samples, `polyfit` refits the edge window evaluated off-center.
enum class EdgePolicy { valid, mirror, polyfit };

inline EdgePolicy parse_edge_policy(std::string_view name) {
    if (name == "valid") return EdgePolicy::valid;
    if (name == "mirror") return EdgePolicy::mirror;
    if (name == "polyfit") return EdgePolicy::polyfit;
    throw InvalidArgument("unknown edge policy '" + std::string(name) + "'");
}

inline std::string_view to_string(EdgePolicy policy) {
    switch (policy) {
    case EdgePolicy::valid: return "valid";
    case EdgePolicy::mirror: return "mirror";
    case EdgePolicy::polyfit: return "polyfit";
    }
    return "valid";
}

/// Finite samples with an optional abscissa column of the same length.
template <typename Scalar = double>
class SignalSeries {
public:
    explicit SignalSeries(std::vector<Scalar> values, std::optional<std::vector<Scalar>> abscissa = std::nullopt)
        : values_(std::move(values)), abscissa_(std::move(abscissa)) {
        for (std::size_t i = 0; i < values_.size(); ++i) {
            using std::isfinite;
            if (!isfinite(values_[i]))
                throw InvalidArgument("sample " + std::to_string(i + 1) + " is not a finite number");
        }
        if (abscissa_ && abscissa_->size() != values_.size())
            throw InvalidArgument("abscissa column length does not match the samples");
    }

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    const std::vector<Scalar>& values() const { return values_; }
    const std::optional<std::vector<Scalar>>& abscissa() const { return abscissa_; }
    Scalar operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<Scalar> values_;
    std::optional<std::vector<Scalar>> abscissa_;
};

namespace detail {

/// sum_i c_i y[start + i], accumulated in tap order.
template <typename Scalar, typename Fetch>
Scalar window_dot(const Vector<Scalar>& c, Fetch&& fetch) {
    Scalar acc(0);
    for (Eigen::Index i = 0; i < c.size(); ++i) acc += c[i] * fetch(i);
    return acc;
}

/// Reflects an index into [0, len) without repeating the end samples.
inline std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t len) {
    if (len == 1) return 0;
    const std::ptrdiff_t period = 2 * (len - 1);
    i %= period;
    if (i < 0) i += period;
    return i < len ? i : period - i;
}

template <typename Scalar>
FilterSpec<Scalar> shrink_spec(const FilterSpec<Scalar>& spec, int len) {
    if (spec.weights().kind() == WeightKind::custom)
        throw InsufficientData("record of " + std::to_string(len) +
                               " samples is shorter than a custom-weight window of " +
                               std::to_string(spec.window()));
    return FilterSpec<Scalar>(len, std::min(spec.degree(), len - 1),
                              weights_of_kind<Scalar>(spec.weights().kind(), len));
}

} // namespace detail

/// Applies c to the record. Output sample t is aligned with window position
/// spec.j, so the interior output is sum_i c_i y[t - j + i] (1-based i).
/// `valid` returns L - q + 1 samples; the other policies return L.
template <typename Scalar>
SignalSeries<Scalar> smooth(const SignalSeries<Scalar>& signal, const FilterCoefficients<Scalar>& c,
                            EdgePolicy edge = EdgePolicy::polyfit) {
    const auto len = static_cast<std::ptrdiff_t>(signal.size());
    const auto q = static_cast<std::ptrdiff_t>(c.size());
    const std::ptrdiff_t lead = c.spec.eval_index() - 1;
    const std::vector<Scalar>& y = signal.values();
    if (len == 0) throw InsufficientData("cannot smooth an empty record");

    std::vector<Scalar> out;
    std::optional<std::vector<Scalar>> abscissa;

    switch (edge) {
    case EdgePolicy::valid: {
        if (len < q)
            throw InsufficientData("record of " + std::to_string(len) + " samples is shorter than the window of " +
                                   std::to_string(q));
        out.reserve(len - q + 1);
        for (std::ptrdiff_t start = 0; start + q <= len; ++start)
            out.push_back(detail::window_dot(c.taps, [&](Eigen::Index i) { return y[start + i]; }));
        if (signal.abscissa())
            abscissa.emplace(signal.abscissa()->begin() + lead, signal.abscissa()->begin() + lead + (len - q + 1));
        break;
    }
    case EdgePolicy::mirror: {
        out.reserve(len);
        for (std::ptrdiff_t t = 0; t < len; ++t)
            out.push_back(detail::window_dot(
                c.taps, [&](Eigen::Index i) { return y[detail::reflect_index(t - lead + i, len)]; }));
        abscissa = signal.abscissa();
        break;
    }
    case EdgePolicy::polyfit: {
        out.reserve(len);
        if (len < q) {
            const FilterSpec<Scalar> shrunk = detail::shrink_spec(c.spec, static_cast<int>(len));
            for (std::ptrdiff_t t = 0; t < len; ++t) {
                const auto edge_c = design_coefficients(shrunk.with_eval_index(static_cast<int>(t + 1)));
                out.push_back(detail::window_dot(edge_c.taps, [&](Eigen::Index i) { return y[i]; }));
            }
        } else {
            std::map<int, Vector<Scalar>> edge_taps;
            auto taps_at = [&](int j) -> const Vector<Scalar>& {
                auto it = edge_taps.find(j);
                if (it == edge_taps.end())
                    it = edge_taps.emplace(j, design_coefficients(c.spec.with_eval_index(j)).taps).first;
                return it->second;
            };
            for (std::ptrdiff_t t = 0; t < len; ++t) {
                std::ptrdiff_t start = t - lead;
                const Vector<Scalar>* taps = &c.taps;
                if (start < 0) {
                    start = 0;
                    taps = &taps_at(static_cast<int>(t + 1));
                } else if (start + q > len) {
                    start = len - q;
                    taps = &taps_at(static_cast<int>(t - start + 1));
                }
                out.push_back(detail::window_dot(*taps, [&](Eigen::Index i) { return y[start + i]; }));
            }
        }
        abscissa = signal.abscissa();
        break;
    }
    }
    return SignalSeries<Scalar>(std::move(out), std::move(abscissa));
}

/// Sample-at-a-time filtering over a ring buffer of the last q inputs. Once the
/// buffer is full every push yields the output for the window ending at that
/// sample, identical to smooth(..., EdgePolicy::valid). One owner per stream.
template <typename Scalar = double>
class StreamSmoother {
public:
    explicit StreamSmoother(FilterCoefficients<Scalar> c)
        : c_(std::move(c)), ring_(static_cast<std::size_t>(c_.size())) {}

    std::optional<Scalar> push(Scalar sample) {
        using std::isfinite;
        if (!isfinite(sample)) throw InvalidArgument("stream sample is not a finite number");
        const std::size_t q = ring_.size();
        ring_[head_] = sample;
        head_ = (head_ + 1) % q;
        if (filled_ < q) ++filled_;
        if (filled_ < q) return std::nullopt;
        return detail::window_dot(c_.taps, [&](Eigen::Index i) { return ring_[(head_ + i) % q]; });
    }

    /// Inputs consumed between an input and its output: m - 1 for centered filters.
    int delay() const { return c_.spec.window() - c_.spec.eval_index(); }

    void reset() {
        head_ = 0;
        filled_ = 0;
    }

private:
    FilterCoefficients<Scalar> c_;
    std::vector<Scalar> ring_;
    std::size_t head_ = 0;
    std::size_t filled_ = 0;
};

template <typename Scalar, typename Range>
std::vector<Scalar> stream_smooth(const Range& source, const FilterCoefficients<Scalar>& c) {
    StreamSmoother<Scalar> smoother(c);
    std::vector<Scalar> out;
    for (const auto& sample : source)
        if (auto y = smoother.push(static_cast<Scalar>(sample))) out.push_back(*y);
    return out;
}

} // namespace wsg

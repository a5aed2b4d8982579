#pragma once

// Sampling estimates of the expected distortion of every scheme and bound.
// Samples are drawn in fixed-size chunks, each on its own counter-based
// stream, so the result depends only on (seed, point, n) and not on the
// number of worker threads.

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "jscc/schemes.hpp"

namespace jscc {

enum class BoundKind { Informed, PartiallyInformed };

using McTarget = std::variant<SchemeParams, BoundKind>;

struct McResult {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

inline constexpr std::size_t kMcChunk = 65536;
inline constexpr std::size_t kMcMinSamples = 1000;

/// Sample mean and standard error of the conditional distortion over n
/// i.i.d. draws of (H0, Gamma0). `point` selects an independent family of
/// streams under the same seed. All targets share the draws for a given
/// (seed, point).
McResult mc_ed(const McTarget& target, const SystemConfig& cfg, std::size_t n, std::uint64_t seed,
               std::uint64_t point = 0, unsigned threads = 1);

/// Optimal side-information target gbar (unit-mean scale) as a function of
/// the channel draw h0, tabulated for the partially informed bound on
/// log-spaced nodes of rho*h0 and interpolated with local cubics in log(rho*h0).
class TargetTable {
public:
    explicit TargetTable(const SystemConfig& cfg, std::size_t nodes = 512);
    double operator()(double h0) const;
    std::size_t size() const { return values_.size(); }

private:
    double rho_;
    double u0_ = 0.0;
    double du_ = 1.0;
    std::vector<double> values_;
};

/// Running mean and sum of squared deviations.
struct MomentAccumulator {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    static MomentAccumulator combine(const MomentAccumulator& a, const MomentAccumulator& b);
};

}  // namespace jscc

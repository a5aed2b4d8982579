#include "jscc/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "jscc/wyner_ziv.hpp"

namespace jscc {

namespace {

constexpr std::uint64_t kMcOperation = 0x6d632d6564ULL;

// Lower end of the rho*h0 axis of the target table. Below it the channel
// rate is under 1e-8 bits and the target has no effect on the distortion.
constexpr double kTableFloor = 1e-8;

MomentAccumulator reduce(const std::vector<MomentAccumulator>& parts, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return parts[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return MomentAccumulator::combine(reduce(parts, lo, mid), reduce(parts, mid, hi));
}

}  // namespace

MomentAccumulator MomentAccumulator::combine(const MomentAccumulator& a, const MomentAccumulator& b) {
    if (a.n == 0) return b;
    if (b.n == 0) return a;
    MomentAccumulator out;
    out.n = a.n + b.n;
    const double na = static_cast<double>(a.n);
    const double nb = static_cast<double>(b.n);
    const double delta = b.mean - a.mean;
    out.mean = a.mean + delta * nb / static_cast<double>(out.n);
    out.m2 = a.m2 + b.m2 + delta * delta * na * nb / static_cast<double>(out.n);
    return out;
}

TargetTable::TargetTable(const SystemConfig& cfg, std::size_t nodes) : rho_(cfg.rho) {
    if (nodes < 4) throw DomainError("TargetTable: at least 4 nodes are needed");
    const GammaLaw channel = cfg.channel_law();
    const GammaLaw side = cfg.side_law();
    // gbar = 0 for every rate when the side-information density is monotone.
    if (side.shape <= 1.0) {
        values_.assign(nodes, 0.0);
        return;
    }
    const double top = truncation_bound(channel, cfg.tol.tail_mass, cfg.tol.root_tol);
    u0_ = std::log(kTableFloor);
    const double u1 = std::max(std::log(cfg.rho * top), u0_ + 1.0);
    du_ = (u1 - u0_) / static_cast<double>(nodes - 1);
    values_.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double x = std::exp(u0_ + du_ * static_cast<double>(i));
        values_[i] = detail::solve_target_k(side, 1.0 + x, cfg.rho, cfg.tol);
    }
}

double TargetTable::operator()(double h0) const {
    const double x = rho_ * h0;
    if (!(x > kTableFloor)) return values_.front();
    const double t = (std::log(x) - u0_) / du_;
    const auto last = static_cast<double>(values_.size() - 1);
    if (t >= last) return values_.back();
    // Four-point Lagrange stencil, shifted inward at the ends.
    const auto cell = static_cast<std::size_t>(t);
    const std::size_t base = std::min(cell == 0 ? 0 : cell - 1, values_.size() - 4);
    const double s = t - static_cast<double>(base);
    const double* v = values_.data() + base;
    return -v[0] * (s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0 + v[1] * s * (s - 2.0) * (s - 3.0) / 2.0 -
           v[2] * s * (s - 1.0) * (s - 3.0) / 2.0 + v[3] * s * (s - 1.0) * (s - 2.0) / 6.0;
}

McResult mc_ed(const McTarget& target, const SystemConfig& cfg, std::size_t n, std::uint64_t seed,
               std::uint64_t point, unsigned threads) {
    cfg.validate();
    if (n < kMcMinSamples) throw DomainError("mc_ed: at least 1000 samples are required");
    if (const auto* p = std::get_if<SchemeParams>(&target)) validate(*p);

    const GammaLaw channel = cfg.channel_law();
    const GammaLaw side = cfg.side_law();
    const double rho = cfg.rho;

    std::optional<TargetTable> table;
    if (const auto* b = std::get_if<BoundKind>(&target); b && *b == BoundKind::PartiallyInformed) table.emplace(cfg);

    auto distortion = [&](double h0, double g0) -> double {
        if (const auto* p = std::get_if<SchemeParams>(&target)) return conditional(*p, rho * h0, rho * g0).distortion;
        if (std::get<BoundKind>(target) == BoundKind::Informed) return 1.0 / ((1.0 + rho * h0) * (1.0 + rho * g0));
        const double gbar = (*table)(h0);
        if (g0 < gbar) return 1.0 / (1.0 + rho * g0);
        return 1.0 / ((1.0 + rho * gbar) * (1.0 + rho * h0) + rho * (g0 - gbar));
    };

    const std::size_t chunks = (n + kMcChunk - 1) / kMcChunk;
    std::vector<MomentAccumulator> parts(chunks);
    auto run_chunk = [&](std::size_t c) {
        CounterRng stream(derive_stream(seed, kMcOperation, point, c));
        GainSampler draw_h(channel);
        GainSampler draw_g(side);
        const std::size_t count = std::min(kMcChunk, n - c * kMcChunk);
        MomentAccumulator acc;
        for (std::size_t i = 0; i < count; ++i) {
            const double h0 = draw_h(stream);
            const double g0 = draw_g(stream);
            acc.add(distortion(h0, g0));
        }
        parts[c] = acc;
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
    if (workers == 1) {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t c = next++; c < chunks; c = next++) {
                    try {
                        run_chunk(c);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    const MomentAccumulator total = reduce(parts, 0, parts.size());
    McResult out;
    out.n = total.n;
    out.mean = total.mean;
    out.std_error = std::sqrt(total.m2 / static_cast<double>(total.n - 1) / static_cast<double>(total.n));
    return out;
}

}  // namespace jscc

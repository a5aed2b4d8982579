#include "jscc/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "jscc/bounds.hpp"

namespace jscc {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

namespace {

double parse_number(const std::string& text, const std::string& spec) {
    if (text.empty()) throw DomainError("SNR range '" + spec + "': empty field");
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || !std::isfinite(v))
        throw DomainError("SNR range '" + spec + "': '" + text + "' is not a number");
    return v;
}

}  // namespace

std::vector<double> parse_db_range(const std::string& spec) {
    const auto first = spec.find(':');
    const auto second = first == std::string::npos ? std::string::npos : spec.find(':', first + 1);
    if (second == std::string::npos || spec.find(':', second + 1) != std::string::npos)
        throw DomainError("SNR range '" + spec + "' must have the form lo:hi:step");
    const double lo = parse_number(spec.substr(0, first), spec);
    const double hi = parse_number(spec.substr(first + 1, second - first - 1), spec);
    const double step = parse_number(spec.substr(second + 1), spec);
    if (!(hi > lo)) throw DomainError("SNR range '" + spec + "' is empty: hi must exceed lo");
    if (!(step > 0.0)) throw DomainError("SNR range '" + spec + "': step must be positive");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 100000) throw DomainError("SNR range '" + spec + "' has too many points");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
    return out;
}

namespace {

SweepRow sweep_point(const SweepSpec& spec, double db) {
    const SystemConfig cfg{spec.lc, spec.ls, db_to_linear(db), spec.tol};
    SweepRow row;
    row.snr_db = db;
    row.ed_inf = informed_ed(cfg);
    row.ed_pi = partially_informed_ed(cfg);
    for (SchemeKind kind : spec.schemes) {
        const OptimizedScheme opt = optimize_scheme(kind, cfg);
        switch (kind) {
            case SchemeKind::Uncoded:
                row.uncoded = opt.distortion;
                break;
            case SchemeKind::Sscc:
                row.sscc = opt.distortion;
                row.rc = std::get<Sscc>(opt.params).rc;
                row.rs = std::get<Sscc>(opt.params).rs;
                break;
            case SchemeKind::Jds:
                row.jds = opt.distortion;
                row.rj = std::get<Jds>(opt.params).rj;
                break;
            case SchemeKind::Hda:
                row.hda = opt.distortion;
                break;
            case SchemeKind::Shda: {
                const Shda& p = std::get<Shda>(opt.params);
                row.shda = opt.distortion;
                row.pd = p.pd;
                row.eta2 = p.eta * p.eta;
                break;
            }
        }
    }
    return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    SystemConfig{spec.lc, spec.ls, 1.0, spec.tol}.validate();
    const std::size_t n = spec.snr_db.size();
    std::vector<SweepRow> rows(n);
    const unsigned workers = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) rows[i] = sweep_point(spec, spec.snr_db[i]);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    rows[i] = sweep_point(spec, spec.snr_db[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::string format_g9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    auto cell = [&](const std::optional<double>& v) {
        out << ',';
        if (v) out << format_g9(*v);
    };
    out << kSweepHeader << '\n';
    for (const SweepRow& r : rows) {
        out << format_g9(r.snr_db) << ',' << format_g9(r.ed_inf) << ',' << format_g9(r.ed_pi);
        for (const auto* v : {&r.uncoded, &r.sscc, &r.jds, &r.hda, &r.shda, &r.rc, &r.rs, &r.rj, &r.pd, &r.eta2})
            cell(*v);
        out << '\n';
    }
}

}  // namespace jscc

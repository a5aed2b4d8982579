#include "jscc/bounds.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "jscc/wyner_ziv.hpp"

namespace jscc {

namespace {

double inverse_one_plus(const GammaLaw& law, double rho, const Tolerances& tol) {
    const double top = truncation_bound(law, tol.tail_mass, tol.root_tol);
    return expect_graded(law, [rho](double g) { return 1.0 / (1.0 + rho * g); }, 0.0, top, 1.0 / rho, tol);
}

}  // namespace

double informed_ed(const SystemConfig& cfg) {
    cfg.validate();
    return inverse_one_plus(cfg.channel_law(), cfg.rho, cfg.tol) * inverse_one_plus(cfg.side_law(), cfg.rho, cfg.tol);
}

double partially_informed_ed(const SystemConfig& cfg) {
    cfg.validate();
    const GammaLaw channel = cfg.channel_law();
    const GammaLaw side = cfg.side_law();
    const double rho = cfg.rho;
    std::map<double, double> memo;
    auto inner = [&](double h0) {
        auto it = memo.find(h0);
        if (it != memo.end()) return it->second;
        double v;
        try {
            v = detail::ed_opt_k(side, 1.0 + rho * h0, rho, cfg.tol);
        } catch (const NumericalError& e) {
            std::ostringstream msg;
            msg << "partially_informed_ed: inner solve failed at h0 = " << h0 << ": " << e.what();
            throw NumericalError(msg.str());
        }
        memo.emplace(h0, v);
        return v;
    };
    const double top = truncation_bound(channel, cfg.tol.tail_mass, cfg.tol.root_tol);
    return expect_graded(channel, inner, 0.0, top, 1.0 / rho, cfg.tol);
}

std::vector<GapRow> bound_gap_report(double lc, double rho, const std::vector<double>& ls_list,
                                     const Tolerances& tol) {
    std::vector<GapRow> rows;
    rows.reserve(ls_list.size());
    for (double ls : ls_list) {
        const SystemConfig cfg{lc, ls, rho, tol};
        GapRow row;
        row.ls = ls;
        row.informed = informed_ed(cfg);
        row.partially_informed = partially_informed_ed(cfg);
        row.gap = row.partially_informed - row.informed;
        row.appendix_bound = (1.0 + 2.0 * rho) / std::sqrt(ls);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace jscc

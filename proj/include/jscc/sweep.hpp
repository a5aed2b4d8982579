#pragma once

// SNR sweeps of the bounds and optimized schemes, with CSV output.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "jscc/schemes.hpp"

namespace jscc {

/// rho = 10^(dB / 10).
double db_to_linear(double db);

/// Parses "lo:hi:step" into lo, lo + step, ... up to hi inclusive. Requires
/// hi > lo and step > 0; throws DomainError otherwise.
std::vector<double> parse_db_range(const std::string& spec);

struct SweepRow {
    double snr_db = 0.0;
    double ed_inf = 0.0;
    double ed_pi = 0.0;
    // Unset when the scheme was not requested.
    std::optional<double> uncoded, sscc, jds, hda, shda;
    std::optional<double> rc, rs, rj, pd, eta2;
};

struct SweepSpec {
    double lc = 1.0;
    double ls = 1.0;
    std::vector<double> snr_db;
    std::vector<SchemeKind> schemes = {SchemeKind::Uncoded, SchemeKind::Sscc, SchemeKind::Jds, SchemeKind::Hda,
                                       SchemeKind::Shda};
    Tolerances tol{};
    unsigned threads = 1;
};

/// One row per SNR point, in input order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

inline constexpr const char* kSweepHeader =
    "snr_db,ed_inf,ed_pi,ed_uncoded,ed_sscc,ed_jds,ed_hda,ed_shda,rc_opt,rs_opt,rj_opt,pd_opt,eta2_opt";

/// Header line plus one line per row; values with 9 significant digits,
/// empty cells for schemes that were not computed.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Formats a double with 9 significant digits.
std::string format_g9(double v);

}  // namespace jscc

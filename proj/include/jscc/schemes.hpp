#pragma once

// Achievable schemes: uncoded transmission, separate source-channel coding
// (SSCC), joint decoding (JDS) and superposed hybrid digital-analog (S-HDA)
// with HDA as its all-digital special case.
//
// Conditional functions take instantaneous gains h and gamma in actual units.
// Rates are in bits per source sample. The rate slack of the random-coding
// arguments is zero and states on an outage boundary count as outage.

#include <string>
#include <variant>

#include "jscc/fading.hpp"

namespace jscc {

struct Uncoded {};

struct Sscc {
    double rc = 1.0;  // channel code rate
    double rs = 0.0;  // binning rate
};

struct Jds {
    double rj = 1.0;
};

/// Superposition of a digital HDA layer (power pd) and the raw source
/// (power pa = 1 - pd). eta is the gain of the quantizer test channel.
struct Shda {
    double pd = 1.0;
    double eta = 1.0;

    double pa() const { return 1.0 - pd; }
    /// Rate of the quantization codebook: eta^2 = pd (2^{2 R_h} - 1).
    double rate() const;
};

using SchemeParams = std::variant<Uncoded, Sscc, Jds, Shda>;

enum class SchemeKind { Uncoded, Sscc, Jds, Hda, Shda };

std::string scheme_name(SchemeKind kind);
/// Parses "uncoded", "sscc", "jds", "hda" or "shda"; throws DomainError.
SchemeKind parse_scheme(const std::string& name);

struct ConditionalOutcome {
    bool in_outage = false;
    double distortion = 1.0;
};

ConditionalOutcome uncoded_conditional(double h, double gamma);
ConditionalOutcome sscc_conditional(double h, double gamma, double rc, double rs);
ConditionalOutcome jds_conditional(double h, double gamma, double rj);
ConditionalOutcome shda_conditional(double h, double gamma, double pd, double eta);

/// Dispatches on the variant.
ConditionalOutcome conditional(const SchemeParams& params, double h, double gamma);

/// Checks the variant's parameter ranges; throws DomainError.
void validate(const SchemeParams& params);

/// E over (H, Gamma) of the conditional distortion. Each outage region is
/// resolved in closed form, so no quadrature runs across a discontinuity.
double expected_distortion(const SchemeParams& params, const SystemConfig& cfg);

struct OptimizedScheme {
    SchemeParams params;
    double distortion = 1.0;
};

/// Minimizes expected_distortion over the scheme's free parameters.
OptimizedScheme optimize_scheme(SchemeKind kind, const SystemConfig& cfg);

/// Binning rate that is optimal for a channel rate rc when the source code
/// targets the side-information gain gamma_bar.
double sscc_binning_rate(double rc, double gamma_bar);

}  // namespace jscc

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "jscc/bounds.hpp"
#include "jscc/exponents.hpp"
#include "jscc/montecarlo.hpp"
#include "jscc/sweep.hpp"

namespace jscc::cli {

namespace {

struct Options {
    double lc = 1.0;
    double ls = 1.0;
    std::string snr_db = "0:40:5";
    std::string scheme = "all";
    std::size_t samples = 1000000;
    std::uint64_t seed = 1;
    std::string out;
    Tolerances tol{};
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool empirical = false;
    double window = 0.4;
};

std::vector<SchemeKind> parse_schemes(const std::string& text) {
    if (text == "all") return SweepSpec{}.schemes;
    std::vector<SchemeKind> kinds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) kinds.push_back(parse_scheme(item));
    if (kinds.empty()) throw DomainError("--scheme: no scheme named");
    return kinds;
}

void check_shapes(const Options& o) {
    if (!(o.lc > 0.0) || !std::isfinite(o.lc)) throw DomainError("--lc must be positive");
    if (!(o.ls > 0.0) || !std::isfinite(o.ls)) throw DomainError("--ls must be positive");
}

SweepSpec sweep_spec(const Options& o) {
    check_shapes(o);
    o.tol.validate();
    SweepSpec spec;
    spec.lc = o.lc;
    spec.ls = o.ls;
    spec.snr_db = parse_db_range(o.snr_db);
    spec.schemes = parse_schemes(o.scheme);
    spec.tol = o.tol;
    spec.threads = o.threads;
    return spec;
}

// Writes to --out when given, to `out` otherwise.
void emit(const Options& o, std::ostream& out, const std::function<void(std::ostream&)>& body) {
    if (o.out.empty()) {
        body(out);
        return;
    }
    std::ofstream file(o.out);
    if (!file) throw DomainError("cannot open '" + o.out + "' for writing");
    body(file);
    if (!file) throw DomainError("write to '" + o.out + "' failed");
}

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

// --- sweep -------------------------------------------------------------------

int cmd_sweep(const Options& o, std::ostream& out) {
    const std::vector<SweepRow> rows = run_sweep(sweep_spec(o));
    emit(o, out, [&](std::ostream& s) { write_sweep_csv(s, rows); });
    return kOk;
}

// --- exponent ----------------------------------------------------------------

std::string exact_text(ExponentKind kind, double ls, double lc) {
    try {
        return exponent_formula_exact(kind, Rational::from_double(ls), Rational::from_double(lc)).value.str();
    } catch (const std::exception&) {
        return "-";
    }
}

std::string params_text(const ExponentParams<double>& p) {
    std::string s;
    auto add = [&](const char* name, const std::optional<double>& v) {
        if (!v) return;
        if (!s.empty()) s += ", ";
        s += std::string(name) + " = " + format_g9(*v);
    };
    add("kappa*", p.kappa);
    add("r_c*", p.rc);
    add("r_s*", p.rs);
    add("r_j*", p.rj);
    add("r_h*", p.rh);
    return s;
}

void print_exponents(const Options& o, std::ostream& out) {
    char line[512];
    out << "distortion exponents for L_s = " << format_g9(o.ls) << ", L_c = " << format_g9(o.lc) << "\n";
    std::snprintf(line, sizeof line, "%-8s  %-12s  %-8s  %s\n", "kind", "value", "exact", "regime");
    out << line;
    for (ExponentKind kind : {ExponentKind::Pe, ExponentKind::Inf, ExponentKind::Upper, ExponentKind::Uncoded,
                              ExponentKind::Sscc, ExponentKind::Jds, ExponentKind::Shda, ExponentKind::Optimal}) {
        const ExponentReport r = exponent_formula(kind, o.ls, o.lc);
        std::snprintf(line, sizeof line, "%-8s  %-12s  %-8s  %s\n", exponent_name(kind).c_str(),
                      format_g9(r.value).c_str(), exact_text(kind, o.ls, o.lc).c_str(), r.regime.c_str());
        out << line;
        const std::string params = params_text(r.params);
        if (!params.empty()) out << "          parameters: " << params << "\n";
        if (kind == ExponentKind::Optimal) {
            if (r.characterized) {
                out << "          achieved by: " << r.achievers << "\n";
            } else {
                out << "          open: optimal exponent lies in [" << format_g9(r.value) << ", "
                    << format_g9(*r.upper) << "]; best scheme: " << r.achievers << "\n";
            }
        }
    }
}

void print_empirical(const Options& o, std::ostream& out) {
    const SweepSpec spec = sweep_spec(o);
    const std::vector<SweepRow> rows = run_sweep(spec);
    std::vector<double> snr;
    for (const SweepRow& r : rows) snr.push_back(db_to_linear(r.snr_db));
    struct Column {
        const char* name;
        ExponentKind kind;
        std::function<std::optional<double>(const SweepRow&)> get;
    };
    const Column columns[] = {
        {"ed_inf", ExponentKind::Inf, [](const SweepRow& r) { return std::optional<double>(r.ed_inf); }},
        {"ed_pi", ExponentKind::Pe, [](const SweepRow& r) { return std::optional<double>(r.ed_pi); }},
        {"ed_uncoded", ExponentKind::Uncoded, [](const SweepRow& r) { return r.uncoded; }},
        {"ed_sscc", ExponentKind::Sscc, [](const SweepRow& r) { return r.sscc; }},
        {"ed_jds", ExponentKind::Jds, [](const SweepRow& r) { return r.jds; }},
        {"ed_hda", ExponentKind::Shda, [](const SweepRow& r) { return r.hda; }},
        {"ed_shda", ExponentKind::Shda, [](const SweepRow& r) { return r.shda; }},
    };
    char line[256];
    out << "\nempirical exponents over " << o.snr_db << " dB (window " << format_g9(o.window) << ")\n";
    std::snprintf(line, sizeof line, "%-10s  %-12s  %-12s  %s\n", "column", "slope", "residual", "closed form");
    out << line;
    for (const Column& c : columns) {
        if (!c.get(rows.front())) continue;
        std::vector<double> ed;
        for (const SweepRow& r : rows) ed.push_back(*c.get(r));
        const EmpiricalExponent e = empirical_exponent(snr, ed, o.window);
        std::snprintf(line, sizeof line, "%-10s  %-12s  %-12s  %s\n", c.name, format_g9(e.slope).c_str(),
                      fmt("%.3g", e.residual).c_str(), format_g9(exponent_formula(c.kind, o.ls, o.lc).value).c_str());
        out << line;
    }
}

int cmd_exponent(const Options& o, std::ostream& out) {
    check_shapes(o);
    emit(o, out, [&](std::ostream& s) {
        print_exponents(o, s);
        if (o.empirical) print_empirical(o, s);
    });
    return kOk;
}

// --- mc ----------------------------------------------------------------------

struct McCase {
    std::string name;
    McTarget target;
    double quadrature;
};

std::vector<McCase> mc_cases(const SystemConfig& cfg, const std::vector<SchemeKind>& kinds) {
    std::vector<McCase> cases;
    cases.push_back({"inf", BoundKind::Informed, informed_ed(cfg)});
    cases.push_back({"pi", BoundKind::PartiallyInformed, partially_informed_ed(cfg)});
    for (SchemeKind k : kinds) {
        const OptimizedScheme opt = optimize_scheme(k, cfg);
        cases.push_back({scheme_name(k), opt.params, opt.distortion});
    }
    return cases;
}

int cmd_mc(const Options& o, std::ostream& out) {
    const SweepSpec spec = sweep_spec(o);
    std::ostringstream csv;
    csv << "snr_db,target,mc_mean,mc_stderr,quadrature,z\n";
    for (std::size_t i = 0; i < spec.snr_db.size(); ++i) {
        const SystemConfig cfg{o.lc, o.ls, db_to_linear(spec.snr_db[i]), o.tol};
        for (const McCase& c : mc_cases(cfg, spec.schemes)) {
            const McResult r = mc_ed(c.target, cfg, o.samples, o.seed, i, o.threads);
            csv << format_g9(spec.snr_db[i]) << ',' << c.name << ',' << format_g9(r.mean) << ','
                << format_g9(r.std_error) << ',' << format_g9(c.quadrature) << ','
                << format_g9((r.mean - c.quadrature) / r.std_error) << '\n';
        }
    }
    emit(o, out, [&](std::ostream& s) { s << csv.str(); });
    return kOk;
}

// --- verify ------------------------------------------------------------------

class Report {
public:
    explicit Report(std::ostream& out) : out_(out) {}

    void check(bool ok, const std::string& name, const std::string& where, const std::string& detail) {
        ++total_;
        if (!ok) ++failed_;
        char line[512];
        std::snprintf(line, sizeof line, "%-4s  %-26s  %-10s  %s\n", ok ? "PASS" : "FAIL", name.c_str(),
                      where.c_str(), detail.c_str());
        out_ << line;
    }
    int failed() const { return failed_; }
    int total() const { return total_; }

private:
    std::ostream& out_;
    int total_ = 0;
    int failed_ = 0;
};

int cmd_verify(const Options& o, std::ostream& out) {
    Report report(out);
    try {
        o.tol.validate();
    } catch (const DomainError& e) {
        report.check(false, "tolerances", "-", e.what());
        out << "verify: " << report.failed() << " of " << report.total() << " checks failed\n";
        return kVerifyFailed;
    }
    const SweepSpec spec = sweep_spec(o);
    report.check(true, "tolerances", "-", "valid");
    const double rel = 1e-6;

    for (std::size_t i = 0; i < spec.snr_db.size(); ++i) {
        const std::string where = format_g9(spec.snr_db[i]) + " dB";
        const SystemConfig cfg{o.lc, o.ls, db_to_linear(spec.snr_db[i]), o.tol};
        const std::vector<McCase> cases = mc_cases(cfg, spec.schemes);
        std::map<std::string, double> ed;
        for (const McCase& c : cases) ed[c.name] = c.quadrature;
        auto ordered = [&](const std::string& low, const std::string& high) {
            if (!ed.count(low) || !ed.count(high)) return;
            report.check(ed[low] <= ed[high] * (1.0 + rel), low + " <= " + high, where,
                         format_g9(ed[low]) + " vs " + format_g9(ed[high]));
        };

        bool in_range = true;
        for (const auto& [name, v] : ed) in_range = in_range && v > 0.0 && v <= 1.0;
        report.check(in_range, "distortion in (0, 1]", where, "");
        ordered("inf", "pi");
        for (SchemeKind k : spec.schemes) ordered("pi", scheme_name(k));
        ordered("jds", "sscc");
        ordered("shda", "hda");
        ordered("shda", "uncoded");

        for (const McCase& c : cases) {
            const McResult m = mc_ed(c.target, cfg, o.samples, o.seed, i, o.threads);
            const double z = (m.mean - c.quadrature) / m.std_error;
            report.check(std::abs(z) <= 4.0, "monte carlo " + c.name, where,
                         "mc " + format_g9(m.mean) + " +/- " + fmt("%.3g", m.std_error) + ", quadrature " +
                             format_g9(c.quadrature) + ", z = " + fmt("%.2f", z));
        }
    }

    const double eps = 1e-12;
    auto delta = [&](ExponentKind k) { return exponent_formula(k, o.ls, o.lc).value; };
    const double upper = delta(ExponentKind::Upper);
    report.check(delta(ExponentKind::Sscc) <= delta(ExponentKind::Jds) + eps, "exponent sscc <= jds", "-", "");
    for (ExponentKind k : {ExponentKind::Uncoded, ExponentKind::Jds, ExponentKind::Shda, ExponentKind::Optimal})
        report.check(delta(k) <= upper + eps, "exponent " + exponent_name(k) + " <= upper", "-",
                     format_g9(delta(k)) + " vs " + format_g9(upper));

    out << "verify: " << report.failed() << " of " << report.total() << " checks failed\n";
    return report.failed() == 0 ? kOk : kVerifyFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Expected distortion of Gaussian source transmission over block-fading channels with fading "
                 "side information: bounds, schemes, exponents and Monte Carlo checks.",
                 "jscc-cli"};
    app.footer(
        "SNR values are given in dB, rho_dB = 10 log10(rho), where rho is the average SNR of both the channel\n"
        "and the side information. Flags override values read from --config (key=value lines, keys named\n"
        "after the long flags, e.g. lc=0.5).");
    app.set_config("--config", "", "Read key=value settings from a file");
    app.allow_config_extras(CLI::config_extras_mode::error);

    app.add_option("--lc", o.lc, "Channel fading shape L_c")->capture_default_str();
    app.add_option("--ls", o.ls, "Side-information fading shape L_s")->capture_default_str();
    app.add_option("--snr-db", o.snr_db, "SNR range lo:hi:step in dB, inclusive")->capture_default_str();
    app.add_option("--scheme", o.scheme, "uncoded, sscc, jds, hda, shda, a comma list, or all")
        ->capture_default_str();
    app.add_option("--samples", o.samples, "Monte Carlo samples per estimate")->capture_default_str();
    app.add_option("--seed", o.seed, "Root seed of all random streams")->capture_default_str();
    app.add_option("--out", o.out, "Output file (default: standard output)");
    app.add_option("--threads", o.threads, "Worker threads")->capture_default_str();
    app.add_flag("--empirical", o.empirical, "exponent: also regress ED curves over --snr-db");
    app.add_option("--window", o.window, "exponent: tail fraction of log-SNR used by the regression")
        ->capture_default_str();
    app.add_option("--quad-rel", o.tol.quad_rel, "Relative quadrature tolerance")->capture_default_str();
    app.add_option("--quad-abs", o.tol.quad_abs, "Absolute quadrature tolerance")->capture_default_str();
    app.add_option("--root-tol", o.tol.root_tol, "Root bracket width")->capture_default_str();
    app.add_option("--opt-tol", o.tol.opt_tol, "Optimizer step tolerance")->capture_default_str();
    app.add_option("--tail-mass", o.tol.tail_mass, "Probability mass dropped from each gain law")
        ->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Bounds and optimized schemes over an SNR range, as CSV");
    auto* exponent = app.add_subcommand("exponent", "Closed-form distortion exponents and optimal parameters");
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimates against quadrature, as CSV");
    auto* verify = app.add_subcommand("verify", "Cross-checks and invariants; exit status 1 on any failure");
    for (auto* s : {sweep, exponent, mc, verify}) s->fallthrough();
    app.require_subcommand(1);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (sweep->parsed()) return cmd_sweep(o, out);
        if (exponent->parsed()) return cmd_exponent(o, out);
        if (mc->parsed()) return cmd_mc(o, out);
        return cmd_verify(o, out);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    }
}

}  // namespace jscc::cli

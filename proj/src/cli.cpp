#include "ellzeros/cli.hpp"

#include "ellzeros/interval.hpp"
#include "ellzeros/kacrice.hpp"
#include "ellzeros/montecarlo.hpp"
#include "ellzeros/quad.hpp"
#include "ellzeros/scaled_kernel.hpp"
#include "ellzeros/variance.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace ellzeros {

namespace {

using nlohmann::ordered_json;

struct RunConfig {
    std::string command;
    int n = 0;
    bool has_n = false;
    std::string a_text = "-inf";
    std::string b_text = "inf";
    double tol = kDefaultTolerance;
    std::size_t samples = 10000;
    std::uint64_t seed = 12345;
    int oversample = 20;
    std::string format = "json";
    bool has_format = false;
    std::optional<double> c;
    std::string func = "f0";
    std::optional<int> func_n;
    double s_max = 5.0;
    double step = 0.01;
    std::vector<int> n_list;
    unsigned threads = 0;
};

// Thrown for bad user input that CLI11 cannot catch on its own.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

using Cell = std::variant<std::string, double, long long>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void write_csv(std::ostream& out, const Table& t)
{
    for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            std::visit(
                [&out](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        out << format_double(v);
                    } else {
                        out << v;
                    }
                },
                row[i]);
        }
        out << '\n';
    }
}

// JSON has no infinity; extended endpoints become the strings "inf"/"-inf".
ordered_json extended(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

ordered_json quad_json(const std::optional<QuadResult>& r)
{
    if (!r) return nullptr;
    return ordered_json{{"value", r->value},
                        {"abs_error_estimate", r->abs_error_estimate},
                        {"evaluations", r->evaluations}};
}

ordered_json quad_json(const QuadResult& r) { return quad_json(std::optional<QuadResult>(r)); }

ordered_json opt_int(const std::optional<int>& v) { return v ? ordered_json(*v) : ordered_json(); }

ordered_json provenance(const RunConfig& cfg, const std::optional<SignCase>& sign_case,
                        bool uses_seed)
{
    ordered_json p;
    p["case"] = sign_case ? ordered_json(to_string(*sign_case)) : ordered_json();
    p["tol"] = cfg.tol;
    p["seed"] = uses_seed ? ordered_json(cfg.seed) : ordered_json();
    if (uses_seed) p["oversample"] = cfg.oversample;
    p["version"] = kVersion;
    return p;
}

ExtendedInterval interval_of(const RunConfig& cfg)
{
    return ExtendedInterval(parse_extended(cfg.a_text), parse_extended(cfg.b_text));
}

int require_n(const RunConfig& cfg)
{
    if (!cfg.has_n) throw UsageError("command '" + cfg.command + "' requires --n");
    if (cfg.n < 1) throw UsageError("--n must be a positive integer");
    return cfg.n;
}

CountOptions count_options(const RunConfig& cfg)
{
    if (cfg.oversample < 1) throw UsageError("--oversample must be >= 1");
    CountOptions o;
    o.oversample = cfg.oversample;
    o.threads = cfg.threads;
    return o;
}

std::string flags_text(const RefinementFlags& f)
{
    std::string s;
    const auto add = [&s](const std::string& part) { s += (s.empty() ? "" : ";") + part; };
    if (f.grid_disagreement) add("grid_disagreement");
    if (f.hidden_pairs) add("hidden_pairs=" + std::to_string(f.hidden_pairs));
    if (f.bracket_failures) add("bracket_failures=" + std::to_string(f.bracket_failures));
    return s.empty() ? "none" : s;
}

ordered_json stats_json(const SummaryStats& s)
{
    return ordered_json{{"m", s.m},       {"mean", s.mean},       {"k2", s.k2},
                        {"k3", s.k3},     {"k4", s.k4},           {"mu2", s.mu2},
                        {"mu3", s.mu3},   {"mu4", s.mu4},         {"se_mean", s.se_mean},
                        {"se_k2", s.se_k2}, {"se_k3", s.se_k3}};
}

struct Output {
    ordered_json doc;
    Table table;
    int code = kExitOk;
};

Output cmd_expectation(const RunConfig& cfg)
{
    const int n = require_n(cfg);
    const ExtendedInterval iv = interval_of(cfg);
    const double e = expected_zeros(n, iv);
    const AlphaParam al = alpha_of(iv, n);
    Output o;
    o.doc = {{"command", "expectation"}, {"n", n}, {"a", extended(iv.a())}, {"b", extended(iv.b())},
             {"expectation", e}, {"method", "closed_form"},
             {"provenance", provenance(cfg, al.sign_case, false)}};
    o.table = {{"n", "a", "b", "expectation"},
               {{static_cast<long long>(n), iv.a(), iv.b(), e}}};
    return o;
}

Output cmd_variance(const RunConfig& cfg)
{
    const int n = require_n(cfg);
    const ExtendedInterval iv = interval_of(cfg);
    const VarianceReport rep = variance_exact(n, iv, cfg.tol);
    const AsymptoticEstimate as = variance_asymptotic(n, iv, cfg.tol);
    Output o;
    o.doc = {{"command", "variance"},
             {"n", n},
             {"a", extended(iv.a())},
             {"b", extended(iv.b())},
             {"alpha", extended(rep.alpha.alpha)},
             {"alpha_n", extended(rep.alpha.alpha_n)},
             {"expectation", rep.expectation},
             {"variance_exact", rep.variance_exact},
             {"error_estimate", rep.error_estimate},
             {"K_ab", quad_json(rep.K_ab)},
             {"L_ab", quad_json(rep.L_ab)},
             {"K_full", quad_json(rep.K_full)},
             {"asymptotic",
              {{"value", as.value},
               {"regime", as.regime},
               {"order_tag", as.order_tag},
               {"predicted_error", as.predicted_error},
               {"d_n", opt_int(as.plan.d_n)},
               {"q_n", opt_int(as.plan.q_n)},
               {"r_n", opt_int(as.plan.r_n)},
               {"effective_order", as.plan.effective_order}}},
             {"provenance", provenance(cfg, rep.alpha.sign_case, false)}};
    o.table = {{"n", "a", "b", "case", "expectation", "variance_exact", "error_estimate",
                "asymptotic", "regime"},
               {{static_cast<long long>(n), iv.a(), iv.b(), to_string(rep.alpha.sign_case),
                 rep.expectation, rep.variance_exact, rep.error_estimate, as.value, as.regime}}};
    return o;
}

Output cmd_coeffs(const RunConfig& cfg)
{
    if (cfg.c && !(*cfg.c > 0.0)) throw UsageError("--c must be positive");
    const CoefficientSet cs = coefficients(cfg.tol, cfg.c);
    Output o;
    o.doc = {{"command", "coeffs"}, {"tol", cfg.tol}};
    o.table.header = {"name", "value", "abs_error_estimate"};
    const auto add = [&](const std::string& name, const QuadResult& r) {
        o.doc[name] = quad_json(r);
        o.table.rows.push_back({name, r.value, r.abs_error_estimate});
    };
    add("kappa0", cs.kappa0);
    add("kappa1", cs.kappa1);
    add("ell0", cs.ell0);
    add("ell1", cs.ell1);
    if (cs.c) {
        o.doc["c"] = *cs.c;
        add("kappa_c0", cs.kappa_c0);
        add("kappa_c1", cs.kappa_c1);
        add("ell_c0", cs.ell_c0);
        add("ell_c1", cs.ell_c1);
    }
    o.doc["provenance"] = provenance(cfg, std::nullopt, false);
    return o;
}

Output cmd_profile(const RunConfig& cfg)
{
    if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) throw UsageError("--step must be positive");
    if (!(cfg.s_max >= 0.0) || !std::isfinite(cfg.s_max)) throw UsageError("--s-max must be >= 0");
    ProfileFunction fn{parse_profile_tag(cfg.func), std::nullopt};
    if (cfg.has_n) fn.n = cfg.n;  // rejected by validate() for limit profiles
    fn.validate();

    Output o;
    o.table.header = {"s", "value"};
    ordered_json rows = ordered_json::array();
    const auto count = static_cast<long long>(std::floor(cfg.s_max / cfg.step * (1.0 + 1e-12)));
    for (long long i = 0; i <= count; ++i) {
        const double s = static_cast<double>(i) * cfg.step;
        const double v = evaluate(fn, s);
        o.table.rows.push_back({s, v});
        rows.push_back({s, v});
    }
    o.doc = {{"command", "profile"}, {"func", cfg.func}, {"n", opt_int(fn.n)},
             {"rows", rows}, {"provenance", provenance(cfg, std::nullopt, false)}};
    return o;
}

Output cmd_simulate(const RunConfig& cfg)
{
    const int n = require_n(cfg);
    const ExtendedInterval iv = interval_of(cfg);
    const Experiment ex = run_experiment(n, iv, cfg.samples, cfg.seed, count_options(cfg));
    const VarianceReport rep = variance_exact(n, iv, cfg.tol);
    long long hidden = 0;
    Output o;
    o.table.header = {"sample_index", "count", "flags"};
    for (const auto& r : ex.records) {
        hidden += r.flags.hidden_pairs;
        o.table.rows.push_back({static_cast<long long>(r.sample_index),
                                static_cast<long long>(r.count), flags_text(r.flags)});
    }
    o.doc = {{"command", "simulate"},
             {"n", n},
             {"a", extended(iv.a())},
             {"b", extended(iv.b())},
             {"stats", stats_json(ex.stats)},
             {"expectation", rep.expectation},
             {"variance_exact", rep.variance_exact},
             {"grid_disagreements", ex.disagreements},
             {"hidden_pairs", hidden},
             {"provenance", provenance(cfg, rep.alpha.sign_case, true)}};
    return o;
}

Output cmd_clt(const RunConfig& cfg)
{
    const int n = require_n(cfg);
    const ExtendedInterval iv = interval_of(cfg);
    const Experiment ex = run_experiment(n, iv, cfg.samples, cfg.seed, count_options(cfg));
    const VarianceReport rep = variance_exact(n, iv, cfg.tol);
    std::vector<double> counts;
    counts.reserve(ex.records.size());
    for (const auto& r : ex.records) counts.push_back(r.count);
    const CltDiagnostic d = clt_diagnostic(counts, rep.expectation, rep.variance_exact);
    Output o;
    o.doc = {{"command", "clt"},
             {"n", n},
             {"a", extended(iv.a())},
             {"b", extended(iv.b())},
             {"ks_distance", d.ks_distance},
             {"lattice_corrected", d.lattice},
             {"lattice_span", d.lattice_span},
             {"standardized_moments", d.standardized_moments},
             {"stats", stats_json(ex.stats)},
             {"expectation", rep.expectation},
             {"variance_exact", rep.variance_exact},
             {"provenance", provenance(cfg, rep.alpha.sign_case, true)}};
    o.table.header = {"quantity", "value"};
    o.table.rows.push_back({std::string("ks_distance"), d.ks_distance});
    for (std::size_t k = 0; k < d.standardized_moments.size(); ++k) {
        o.table.rows.push_back({"moment" + std::to_string(k + 1), d.standardized_moments[k]});
    }
    return o;
}

Output cmd_slln(const RunConfig& cfg)
{
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        if (cfg.n_list[i] < 1) throw UsageError("--n-list entries must be positive");
    }
    const ExtendedInterval iv = interval_of(cfg);
    const auto rows = slln_trace(cfg.n_list, iv, cfg.samples, cfg.seed, count_options(cfg));
    Output o;
    o.table.header = {"n", "ratio", "se_ratio", "rms_rel"};
    ordered_json jrows = ordered_json::array();
    for (const auto& r : rows) {
        o.table.rows.push_back({static_cast<long long>(r.n), r.ratio, r.se_ratio, r.rms_rel});
        jrows.push_back({{"n", r.n}, {"ratio", r.ratio}, {"se_ratio", r.se_ratio},
                         {"rms_rel", r.rms_rel}});
    }
    o.doc = {{"command", "slln"}, {"a", extended(iv.a())}, {"b", extended(iv.b())},
             {"samples", cfg.samples}, {"rows", jrows},
             {"provenance", provenance(cfg, alpha_of(iv).sign_case, true)}};
    return o;
}

struct ReferenceConstant {
    const char* name;
    double value;
};

// Published ten-digit values of the constants.
constexpr ReferenceConstant kReference[] = {
    {"kappa0", -0.4282689510},   {"kappa1", -0.1522064957},   {"ell0", -0.0580365252},
    {"ell1", -0.0082122652},     {"kappa_1_0", -0.3955313789}, {"kappa_1_1", -0.1093878905},
    {"ell_1_0", -0.0505415303},  {"ell_1_1", -0.0138350833},
};

constexpr double kTable1Agreement = 1e-8;

Output cmd_table1(const RunConfig& cfg)
{
    const CoefficientSet cs = coefficients(cfg.tol, 1.0);
    const QuadResult computed[] = {cs.kappa0,   cs.kappa1,   cs.ell0,   cs.ell1,
                                   cs.kappa_c0, cs.kappa_c1, cs.ell_c0, cs.ell_c1};
    Output o;
    o.table.header = {"name", "computed", "reference", "abs_diff", "abs_error_estimate",
                      "under_resolved", "ok"};
    ordered_json rows = ordered_json::array();
    bool all_ok = true;
    for (std::size_t i = 0; i < std::size(kReference); ++i) {
        const QuadResult& r = computed[i];
        const double diff = std::fabs(r.value - kReference[i].value);
        const bool under = cfg.tol > kTable1Agreement || r.abs_error_estimate > kTable1Agreement;
        const bool ok = !under && diff <= kTable1Agreement;
        all_ok = all_ok && ok;
        o.table.rows.push_back({std::string(kReference[i].name), r.value, kReference[i].value,
                                diff, r.abs_error_estimate,
                                std::string(under ? "true" : "false"),
                                std::string(ok ? "true" : "false")});
        rows.push_back({{"name", kReference[i].name},
                        {"computed", r.value},
                        {"reference", kReference[i].value},
                        {"abs_diff", diff},
                        {"abs_error_estimate", r.abs_error_estimate},
                        {"under_resolved", under},
                        {"ok", ok}});
    }
    o.doc = {{"command", "table1"}, {"rows", rows}, {"all_ok", all_ok},
             {"one_plus_kappa0", 1.0 + cs.kappa0.value},
             {"provenance", provenance(cfg, std::nullopt, false)}};
    o.code = all_ok ? kExitOk : kExitNumerical;
    return o;
}

Output cmd_compare(const RunConfig& cfg)
{
    const int n = require_n(cfg);
    const ExtendedInterval iv = interval_of(cfg);
    const VarianceReport rep = variance_exact(n, iv, cfg.tol);
    const AsymptoticEstimate as = variance_asymptotic(n, iv, cfg.tol);
    const Experiment ex = run_experiment(n, iv, cfg.samples, cfg.seed, count_options(cfg));

    Output o;
    o.table.header = {"method", "quantity", "value", "error"};
    o.doc = {{"command", "compare"}, {"n", n}, {"a", extended(iv.a())}, {"b", extended(iv.b())}};
    ordered_json results = ordered_json::array();
    const auto add = [&](const std::string& method, const std::string& quantity, double value,
                         double error) {
        results.push_back(
            {{"method", method}, {"quantity", quantity}, {"value", value}, {"error", error}});
        o.table.rows.push_back({method, quantity, value, error});
    };
    add("closed_form", "expectation", rep.expectation, 0.0);
    add("exact_formula", "variance", rep.variance_exact, rep.error_estimate);
    const KacRiceResult kr = variance_via_kacrice(elliptic_kernel(n), iv, 1e-8);
    add("kac_rice_2d", "variance", kr.variance, kr.abs_error_estimate);
    add("asymptotic_" + as.regime, "variance", as.value, as.predicted_error);
    add("monte_carlo", "mean", ex.stats.mean, ex.stats.se_mean);
    add("monte_carlo", "k2", ex.stats.k2, ex.stats.se_k2);
    o.doc["results"] = results;
    o.doc["provenance"] = provenance(cfg, rep.alpha.sign_case, true);
    return o;
}

Output dispatch(const RunConfig& cfg)
{
    if (cfg.command == "expectation") return cmd_expectation(cfg);
    if (cfg.command == "variance") return cmd_variance(cfg);
    if (cfg.command == "coeffs") return cmd_coeffs(cfg);
    if (cfg.command == "profile") return cmd_profile(cfg);
    if (cfg.command == "simulate") return cmd_simulate(cfg);
    if (cfg.command == "clt") return cmd_clt(cfg);
    if (cfg.command == "slln") return cmd_slln(cfg);
    if (cfg.command == "table1") return cmd_table1(cfg);
    if (cfg.command == "compare") return cmd_compare(cfg);
    throw UsageError("unknown command '" + cfg.command + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Statistics of the number of real zeros of elliptic random polynomials"};
    app.set_version_flag("--version", std::string(kVersion));
    app.add_option("command", cfg.command, "Command to run")
        ->required()
        ->check(CLI::IsMember({"expectation", "variance", "coeffs", "profile", "simulate", "clt",
                               "slln", "table1", "compare"}));
    auto* n_opt = app.add_option("--n", cfg.n, "Polynomial degree");
    app.add_option("--a", cfg.a_text, "Lower endpoint (number, -inf)");
    app.add_option("--b", cfg.b_text, "Upper endpoint (number, inf)");
    app.add_option("--tol", cfg.tol, "Absolute quadrature tolerance")->check(CLI::PositiveNumber);
    app.add_option("--samples", cfg.samples, "Monte Carlo sample count")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
    app.add_option("--seed", cfg.seed, "Monte Carlo master seed");
    app.add_option("--oversample", cfg.oversample, "Grid points per mean zero spacing");
    auto* fmt_opt = app.add_option("--format", cfg.format, "Output format")
                        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--c", cfg.c, "Upper limit for the truncated constants");
    app.add_option("--func", cfg.func, "Profile: f0 f1 g0 g1 bigF delta gamma");
    app.add_option("--s-max", cfg.s_max, "Profile range end");
    app.add_option("--step", cfg.step, "Profile step");
    app.add_option("--n-list", cfg.n_list, "Comma separated degrees")->delimiter(',');
    app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }
    cfg.has_n = n_opt->count() > 0;
    cfg.has_format = fmt_opt->count() > 0;
    // Profiles are plot data; CSV unless asked otherwise.
    if (cfg.command == "profile" && !cfg.has_format) cfg.format = "csv";

    try {
        const Output o = dispatch(cfg);
        if (cfg.format == "csv") {
            write_csv(out, o.table);
        } else {
            out << o.doc.dump(2) << '\n';
        }
        return o.code;
    } catch (const QuadratureError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace ellzeros

// morselab: critical-point analysis of regularized losses.
//
// Exit codes: 0 success, 1 a numerical assertion failed, 2 bad arguments or
// config, 3 I/O failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "morselab/appendixlab.hpp"
#include "morselab/claims.hpp"
#include "morselab/critfind.hpp"
#include "morselab/errors.hpp"
#include "morselab/network_json.hpp"
#include "morselab/regularizers.hpp"
#include "morselab/report.hpp"
#include "morselab/simd/kernels.hpp"

using nlohmann::json;
using namespace morselab;

namespace {

constexpr int kExitAssert = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct AssertionFailure : std::runtime_error {
    AssertionFailure(std::string claim, const std::string& what) : std::runtime_error(what), claim_id(std::move(claim)) {}
    std::string claim_id;
};

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level() {
    const char* v = std::getenv("MORSELAB_LOG");
    if (v == nullptr) return LogLevel::info;
    const std::string s(v);
    if (s == "quiet" || s == "0") return LogLevel::quiet;
    if (s == "debug" || s == "2") return LogLevel::debug;
    return LogLevel::info;
}

void log(LogLevel lvl, const std::string& msg) {
    if (static_cast<int>(lvl) <= static_cast<int>(log_level())) std::cerr << "morselab: " << msg << '\n';
}

// ---------------------------------------------------------------------------
// Run configuration: config file first, then command-line flags on top.

struct RegularizerConfig {
    std::string kind = "none";
    std::vector<double> eps;                // explicit values (one for scalar kinds)
    std::optional<std::uint64_t> eps_seed;  // generalized_l2 drawn uniformly from range
    double range_lo = 0.01;
    double range_hi = 0.1;
};

struct RunConfig {
    std::string network;  // path
    std::optional<json> network_inline;
    RegularizerConfig reg;
    std::size_t starts = 64;
    double box = 5.0;
    double tau_grad = 0.0;
    double tau_deg = 1e-6;
    std::size_t max_iters = 200;
    std::uint64_t seed = 42;
    std::string out;
    std::string format = "csv";
};

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw InvalidInput(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) throw InvalidInput("unknown key '" + it.key() + "' in " + where);
    }
}

template <class T>
T get_as(const json& j, const std::string& key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidInput("bad value for '" + key + "' in " + where);
    }
}

RegularizerConfig parse_regularizer_json(const json& j) {
    check_keys(j, {"kind", "eps", "seed", "range"}, "regularizer");
    RegularizerConfig r;
    r.kind = get_as<std::string>(j, "kind", "regularizer");
    if (j.contains("eps")) {
        if (j["eps"].is_array()) {
            r.eps = get_as<std::vector<double>>(j, "eps", "regularizer");
        } else {
            r.eps = {get_as<double>(j, "eps", "regularizer")};
        }
    }
    if (j.contains("seed")) r.eps_seed = get_as<std::uint64_t>(j, "seed", "regularizer");
    if (j.contains("range")) {
        const auto rg = get_as<std::vector<double>>(j, "range", "regularizer");
        if (rg.size() != 2 || !(rg[0] <= rg[1])) throw InvalidInput("regularizer range must be [lo, hi] with lo <= hi");
        r.range_lo = rg[0];
        r.range_hi = rg[1];
    }
    return r;
}

// "none", "standard_l2:0.01", "multiplicative:0.1", "generalized_l2:0.01,0.02,..."
RegularizerConfig parse_regularizer_flag(const std::string& s) {
    RegularizerConfig r;
    const auto colon = s.find(':');
    r.kind = s.substr(0, colon);
    if (colon != std::string::npos) {
        std::stringstream ss(s.substr(colon + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                r.eps.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw InvalidInput("bad regularizer value '" + tok + "'");
            }
        }
    }
    return r;
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("cannot read config file " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, {"schema", "network", "regularizer", "solver", "seed", "output"}, "config");
    if (!j.contains("schema") || j["schema"] != 1) throw InvalidInput("config must declare \"schema\": 1");
    if (j.contains("network")) {
        if (j["network"].is_string()) {
            cfg.network = j["network"].get<std::string>();
        } else {
            cfg.network_inline = j["network"];
        }
    }
    if (j.contains("regularizer")) cfg.reg = parse_regularizer_json(j["regularizer"]);
    if (j.contains("solver")) {
        const json& s = j["solver"];
        check_keys(s, {"starts", "box", "tau_grad", "tau_deg", "max_iters"}, "solver");
        if (s.contains("starts")) cfg.starts = get_as<std::size_t>(s, "starts", "solver");
        if (s.contains("box")) cfg.box = get_as<double>(s, "box", "solver");
        if (s.contains("tau_grad")) cfg.tau_grad = get_as<double>(s, "tau_grad", "solver");
        if (s.contains("tau_deg")) cfg.tau_deg = get_as<double>(s, "tau_deg", "solver");
        if (s.contains("max_iters")) cfg.max_iters = get_as<std::size_t>(s, "max_iters", "solver");
    }
    if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed", "config");
    if (j.contains("output")) {
        const json& o = j["output"];
        check_keys(o, {"path", "format"}, "output");
        if (o.contains("path")) cfg.out = get_as<std::string>(o, "path", "output");
        if (o.contains("format")) cfg.format = get_as<std::string>(o, "format", "output");
    }
}

void validate(const RunConfig& cfg) {
    if (cfg.starts == 0) throw InvalidInput("starts must be >= 1");
    if (!(cfg.box > 0.0)) throw InvalidInput("box half-width must be positive");
    if (cfg.tau_grad < 0.0 || !(cfg.tau_deg > 0.0)) throw InvalidInput("tolerances must be positive");
    if (cfg.format != "csv" && cfg.format != "json") throw InvalidInput("format must be csv or json");
}

NetworkDocument load_network(const RunConfig& cfg) {
    if (cfg.network_inline) return parse_network_document(*cfg.network_inline);
    if (cfg.network.empty()) throw InvalidInput("no network given");
    return load_network_document(cfg.network);
}

RegularizerSpec make_regularizer(const RegularizerConfig& r, std::size_t dim) {
    auto scalar = [&]() {
        if (r.eps.size() != 1) throw InvalidInput(r.kind + " needs exactly one eps value");
        return r.eps[0];
    };
    if (r.kind == "none") return RegularizerSpec::none();
    if (r.kind == "standard_l2") return RegularizerSpec::standard_l2(scalar());
    if (r.kind == "multiplicative") return RegularizerSpec::multiplicative(scalar());
    if (r.kind == "generalized_l2") {
        if (r.eps_seed) {
            std::mt19937_64 rng(*r.eps_seed);
            std::uniform_real_distribution<double> unif(r.range_lo, r.range_hi);
            std::vector<double> e(dim);
            for (double& x : e) x = unif(rng);
            return RegularizerSpec::generalized_l2(e);
        }
        if (r.eps.size() != dim) {
            throw InvalidInput("generalized_l2 needs " + std::to_string(dim) + " eps values (or a seed and range)");
        }
        return RegularizerSpec::generalized_l2(r.eps);
    }
    throw InvalidInput("unknown regularizer kind '" + r.kind + "'");
}

SolverOptions solver_options(const RunConfig& cfg) {
    SolverOptions so;
    so.seed = cfg.seed;
    so.tau_grad = cfg.tau_grad;
    so.tau_deg = cfg.tau_deg;
    so.max_iters = cfg.max_iters;
    return so;
}

void emit(const RunConfig& cfg, const std::string& content) {
    if (cfg.out.empty()) {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw IoError("cannot write to standard output");
        return;
    }
    write_file_atomic(cfg.out, content);
    log(LogLevel::info, "wrote " + cfg.out);
}

json point_json(const CriticalPoint& p) {
    return {{"location", std::vector<double>(p.location.begin(), p.location.end())},
            {"value", p.value},
            {"grad_norm", p.grad_norm},
            {"eigenvalues", std::vector<double>(p.eigenvalues.begin(), p.eigenvalues.end())},
            {"index", p.index},
            {"kernel", p.kernel},
            {"min_abs_eig", p.min_abs_eig},
            {"degenerate", p.degenerate},
            {"classified", p.classified}};
}

json report_json(const MorseReport& rep) {
    json pts = json::array();
    for (const CriticalPoint& p : rep.points) pts.push_back(point_json(p));
    json traces = json::array();
    for (const NullTrace& t : rep.traces) {
        traces.push_back({{"verdict", verdict_name(t.verdict)},
                          {"samples", t.samples.size()},
                          {"arc_length", t.arc_length},
                          {"max_grad_norm_along", t.max_grad_norm_along},
                          {"closure_gap", t.closure_gap},
                          {"warning", t.warning}});
    }
    return {{"verdict", verdict_name(rep.verdict)},
            {"vacuous", rep.vacuous},
            {"points", pts},
            {"traces", traces},
            {"tolerances",
             {{"tau_grad", rep.tolerances.tau_grad},
              {"tau_deg", rep.tolerances.tau_deg},
              {"dedupe_radius", rep.tolerances.dedupe_radius}}},
            {"starts", rep.starts},
            {"seed", rep.seed},
            {"box",
             {{"lo", std::vector<double>(rep.box.lo.begin(), rep.box.lo.end())},
              {"hi", std::vector<double>(rep.box.hi.begin(), rep.box.hi.end())}}}};
}

// ---------------------------------------------------------------------------

int cmd_analyze(const RunConfig& cfg) {
    const NetworkDocument doc = load_network(cfg);
    const Objective data_obj = Objective::network(doc.spec, doc.data, LossKind::l2, RegularizerSpec::none());
    const Objective obj = data_obj.with_regularizer(make_regularizer(cfg.reg, data_obj.dim()));
    AnalyzeOptions opts;
    opts.solver = solver_options(cfg);
    opts.n_starts = cfg.starts;
    log(LogLevel::info, "analyze: d = " + std::to_string(obj.dim()) + ", seed = " + std::to_string(cfg.seed));
    const MorseReport rep = analyze(obj, Box::cube(obj.dim(), cfg.box), opts);
    log(LogLevel::info, std::string("verdict ") + verdict_name(rep.verdict));
    emit(cfg, cfg.format == "json" ? dump_json(report_json(rep)) : critical_points_csv(rep.points, obj.dim()));
    return 0;
}

struct SweepArgs {
    std::string kind = "generalized_l2";
    std::size_t draws = 20;
    double lo = 0.01;
    double hi = 0.1;
    double min_fraction = 0.95;
};

int cmd_sweep(const RunConfig& cfg, const SweepArgs& sw) {
    if (sw.draws == 0) throw InvalidInput("draws must be >= 1");
    if (!(sw.lo <= sw.hi)) throw InvalidInput("eps range must satisfy lo <= hi");
    if (sw.kind != "generalized_l2" && sw.kind != "standard_l2") {
        throw InvalidInput("sweep kind must be generalized_l2 or standard_l2");
    }
    const NetworkDocument doc = load_network(cfg);
    const Objective base = Objective::network(doc.spec, doc.data, LossKind::l2, RegularizerSpec::none());
    const Box box = Box::cube(base.dim(), cfg.box);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(sw.lo, sw.hi);
    log(LogLevel::info, "sweep-eps: " + std::to_string(sw.draws) + " draws, seed = " + std::to_string(cfg.seed));

    std::ostringstream csv;
    csv << "draw,verdict,n_points,min_rel_eig,morse\n";
    json rows = json::array();
    std::size_t morse = 0;
    for (std::size_t k = 0; k < sw.draws; ++k) {
        RegularizerSpec reg;
        std::vector<double> eps;
        if (sw.kind == "generalized_l2") {
            eps.resize(base.dim());
            for (double& e : eps) e = unif(rng);
            reg = RegularizerSpec::generalized_l2(eps);
        } else {
            eps = {unif(rng)};
            reg = RegularizerSpec::standard_l2(eps[0]);
        }
        AnalyzeOptions opts;
        opts.solver = solver_options(cfg);
        opts.solver.seed = cfg.seed + k;
        opts.n_starts = cfg.starts;
        const MorseReport rep = analyze(base.with_regularizer(reg), box, opts);
        double min_rel = INFINITY;
        for (const CriticalPoint& p : rep.points) min_rel = std::min(min_rel, p.min_abs_eig / p.eig_scale);
        const bool ok = rep.verdict == MorseReport::Verdict::morse_evidence && min_rel > cfg.tau_deg;
        morse += ok;
        csv << k << ',' << verdict_name(rep.verdict) << ',' << rep.points.size() << ',' << format_double(min_rel) << ','
            << (ok ? 1 : 0) << '\n';
        rows.push_back({{"draw", k},
                        {"eps", eps},
                        {"verdict", verdict_name(rep.verdict)},
                        {"n_points", rep.points.size()},
                        {"min_rel_eig", min_rel},
                        {"morse", ok}});
    }
    const double fraction = static_cast<double>(morse) / static_cast<double>(sw.draws);
    if (cfg.format == "json") {
        emit(cfg, dump_json({{"draws", rows},
                             {"kind", sw.kind},
                             {"morse_fraction", fraction},
                             {"required_fraction", sw.min_fraction},
                             {"seed", cfg.seed}}));
    } else {
        emit(cfg, csv.str());
    }
    log(LogLevel::info, "morse fraction " + format_double(fraction));
    if (fraction < sw.min_fraction) {
        throw AssertionFailure("thm-4.1", "morse fraction " + format_double(fraction) + " below " +
                                              format_double(sw.min_fraction));
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& only) {
    log(LogLevel::info, "verify-paper: seed = " + std::to_string(cfg.seed) +
                            ", kernels = " + std::string(simd::backend_name(simd::active_backend())));
    const std::vector<ClaimResult> results = verify_claims(cfg.seed, only);
    std::vector<std::string> failed;
    for (const ClaimResult& r : results) {
        log(LogLevel::info, r.id + ": " + status_name(r.status));
        if (r.status == ClaimResult::Status::fail) failed.push_back(r.id);
    }
    emit(cfg, dump_json(claim_matrix_json(results, cfg.seed)));
    if (!failed.empty()) {
        std::string ids;
        for (const auto& id : failed) ids += (ids.empty() ? "" : ",") + id;
        throw AssertionFailure(ids, "claims failed");
    }
    return 0;
}

struct PolyArgs {
    std::string poly = "random";  // random | radial | zero
    std::size_t n = 2;
    unsigned degree = 4;
    double scale = 1.0;
    double eps_lo = -1.0;
    double eps_hi = 1.0;
    std::size_t grid = 64;
    double box = 2.0;
};

int cmd_polyscan(const RunConfig& cfg, const PolyArgs& pa) {
    Polynomial p(1, 0);
    if (pa.poly == "random") {
        p = random_polynomial(pa.n, pa.degree, cfg.seed, pa.scale);
    } else if (pa.poly == "radial") {
        p = radial_quartic_polynomial();
    } else if (pa.poly == "zero") {
        p = Polynomial(pa.n, 0);
    } else {
        throw InvalidInput("polynomial must be random, radial or zero");
    }
    if (!(pa.eps_lo < pa.eps_hi)) throw InvalidInput("eps range must satisfy lo < hi");
    ScanOptions opts;
    opts.solver = solver_options(cfg);
    opts.n_starts = std::min<std::size_t>(cfg.starts, 64);
    const std::vector<double> grid = linspace(pa.eps_lo, pa.eps_hi, pa.grid);
    const BadSetEstimate est = scan_bad_eps(p, grid, Box::cube(p.n_vars(), pa.box), opts);
    json j = to_json(est);
    std::vector<double> coeffs;
    for (const Monomial& m : p.terms()) coeffs.push_back(m.coeff);
    j["coefficients"] = coeffs;
    j["n_vars"] = p.n_vars();
    j["degree"] = p.degree();
    emit(cfg, cfg.format == "json" ? dump_json(j) : scan_csv(est));
    return 0;
}

struct JetArgs {
    std::string function = "rho_cos_theta";
    double rho_lo = 0.5;
    double rho_hi = 2.0;
    std::size_t eps_draws = 10;
};

int cmd_jetcheck(const RunConfig& cfg, const JetArgs& ja) {
    PolarFunction L;
    if (ja.function == "rho_cos_theta") {
        L.f = [](std::span<const ScalarJet2> v) { return v[0] * cos(v[1]); };
    } else if (ja.function == "radial") {
        L.f = [](std::span<const ScalarJet2> v) { return -0.25 * (v[0] * v[0]); };
    } else if (ja.function == "rho_theta_sq") {
        L.f = [](std::span<const ScalarJet2> v) { return 0.5 * v[0] * (v[1] * v[1]); };
    } else {
        throw InvalidInput("function must be rho_cos_theta, radial or rho_theta_sq");
    }
    L.rho_min = ja.rho_lo;
    L.rho_max = ja.rho_hi;
    const std::vector<JetCheckPoint> pts = jet_condition_check(L);
    bool all_pass = true;
    std::ostringstream csv;
    csv << "rho,theta,m_rho_theta,m_theta_theta,rank,passes\n";
    json jp = json::array();
    for (const JetCheckPoint& p : pts) {
        all_pass = all_pass && p.passes;
        csv << format_double(p.rho) << ',' << format_double(p.theta) << ',' << format_double(p.m_rho_theta) << ','
            << format_double(p.m_theta_theta) << ',' << p.rank << ',' << (p.passes ? 1 : 0) << '\n';
        jp.push_back({{"rho", p.rho},
                      {"theta", p.theta},
                      {"m_rho_theta", p.m_rho_theta},
                      {"m_theta_theta", p.m_theta_theta},
                      {"rank", p.rank},
                      {"passes", p.passes}});
    }
    json perturb = json::array();
    if (all_pass) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> unif(-2.0, 2.0);
        for (std::size_t k = 0; k < ja.eps_draws; ++k) {
            const double eps = unif(rng);
            AnalyzeOptions opts;
            opts.solver = solver_options(cfg);
            opts.solver.seed = cfg.seed + k;
            opts.n_starts = std::min<std::size_t>(cfg.starts, 64);
            const MorseReport rep = perturbed_polar_analysis(L, eps, opts);
            perturb.push_back({{"eps", eps}, {"verdict", verdict_name(rep.verdict)}, {"n_points", rep.points.size()}});
        }
    }
    if (cfg.format == "json") {
        emit(cfg, dump_json({{"function", ja.function},
                             {"points", jp},
                             {"all_pass", all_pass},
                             {"perturbations", perturb},
                             {"seed", cfg.seed}}));
    } else {
        emit(cfg, csv.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Critical-point analysis of regularized losses"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "morselab 1.0");

    RunConfig cfg;
    std::string config_path;
    std::optional<std::uint64_t> seed_flag;
    std::optional<std::string> reg_flag, out_flag, format_flag;
    std::optional<std::size_t> starts_flag;
    std::optional<double> box_flag, tau_grad_flag, tau_deg_flag;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration (\"schema\": 1)");
        sub->add_option("--seed", seed_flag, "random seed (default 42)");
        sub->add_option("--out,-o", out_flag, "output file (default: standard output)");
        sub->add_option("--format", format_flag, "csv or json");
        sub->add_option("--starts", starts_flag, "start points per search");
        sub->add_option("--box", box_flag, "search box half-width");
        sub->add_option("--tau-grad", tau_grad_flag, "absolute gradient tolerance (0: relative default)");
        sub->add_option("--tau-deg", tau_deg_flag, "relative eigenvalue threshold for degeneracy");
    };

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "locate and classify critical points of a network loss");
    add_common(analyze_cmd);
    analyze_cmd->add_option("network", cfg.network, "network JSON document");
    analyze_cmd->add_option("--regularizer", reg_flag, "none | standard_l2:EPS | multiplicative:EPS | generalized_l2:E1,E2,...");

    SweepArgs sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep-eps", "Morse verdicts over random regularizer draws");
    add_common(sweep_cmd);
    sweep_cmd->add_option("network", cfg.network, "network JSON document");
    sweep_cmd->add_option("--kind", sweep.kind, "generalized_l2 or standard_l2");
    sweep_cmd->add_option("--draws", sweep.draws, "number of eps draws");
    sweep_cmd->add_option("--eps-range", [&](CLI::results_t res) {
        if (res.size() != 2) return false;
        sweep.lo = std::stod(res[0]);
        sweep.hi = std::stod(res[1]);
        return true;
    }, "LO HI")->expected(2);
    sweep_cmd->add_option("--min-fraction", sweep.min_fraction, "required fraction of Morse draws");

    std::vector<std::string> only;
    CLI::App* verify_cmd = app.add_subcommand("verify-paper", "run the bundled claim matrix");
    add_common(verify_cmd);
    verify_cmd->add_option("--claims", only, "subset of claim ids")->delimiter(',');
    verify_cmd->add_flag_callback("--list", [] {
        for (const auto& id : claim_registry()) std::cout << id << '\n';
        std::exit(0);
    }, "list claim ids and exit");

    PolyArgs poly;
    CLI::App* poly_cmd = app.add_subcommand("polyscan", "scan eps for degenerate critical points of L + eps/2 |x|^2");
    add_common(poly_cmd);
    poly_cmd->add_option("--poly", poly.poly, "random | radial | zero");
    poly_cmd->add_option("--vars", poly.n, "variables (random, zero)");
    poly_cmd->add_option("--degree", poly.degree, "degree (random)");
    poly_cmd->add_option("--coeff-scale", poly.scale, "coefficient range (random)");
    poly_cmd->add_option("--eps-lo", poly.eps_lo, "first grid value");
    poly_cmd->add_option("--eps-hi", poly.eps_hi, "last grid value");
    poly_cmd->add_option("--grid", poly.grid, "grid size (>= 16)");
    poly_cmd->add_option("--half-width", poly.box, "search box half-width");

    JetArgs jet;
    CLI::App* jet_cmd = app.add_subcommand("jetcheck", "polar rank condition and eps*rho perturbations");
    add_common(jet_cmd);
    jet_cmd->add_option("--function", jet.function, "rho_cos_theta | radial | rho_theta_sq");
    jet_cmd->add_option("--rho-lo", jet.rho_lo, "smallest rho");
    jet_cmd->add_option("--rho-hi", jet.rho_hi, "largest rho");
    jet_cmd->add_option("--eps-draws", jet.eps_draws, "random eps perturbations checked");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        const std::string positional_network = cfg.network;
        if (sweep_cmd->parsed()) cfg.starts = 200;
        if (!config_path.empty()) apply_config_file(config_path, cfg);
        if (!positional_network.empty()) cfg.network = positional_network, cfg.network_inline.reset();
        if (seed_flag) cfg.seed = *seed_flag;
        if (reg_flag) cfg.reg = parse_regularizer_flag(*reg_flag);
        if (out_flag) cfg.out = *out_flag;
        if (format_flag) cfg.format = *format_flag;
        if (starts_flag) cfg.starts = *starts_flag;
        if (box_flag) cfg.box = *box_flag;
        if (tau_grad_flag) cfg.tau_grad = *tau_grad_flag;
        if (tau_deg_flag) cfg.tau_deg = *tau_deg_flag;
        if (verify_cmd->parsed() && !format_flag) cfg.format = "json";
        if (verify_cmd->parsed() && cfg.format != "json") throw InvalidInput("the claim matrix is written as json only");
        validate(cfg);

        if (analyze_cmd->parsed()) return cmd_analyze(cfg);
        if (sweep_cmd->parsed()) return cmd_sweep(cfg, sweep);
        if (verify_cmd->parsed()) return cmd_verify(cfg, only);
        if (poly_cmd->parsed()) return cmd_polyscan(cfg, poly);
        if (jet_cmd->parsed()) return cmd_jetcheck(cfg, jet);
    } catch (const AssertionFailure& e) {
        std::cerr << "morselab: assertion failed [" << e.claim_id << "]: " << e.what() << '\n';
        return kExitAssert;
    } catch (const IoError& e) {
        std::cerr << "morselab: I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const InvalidInput& e) {
        std::cerr << "morselab: invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "morselab: error: " << e.what() << '\n';
        return kExitAssert;
    }
    return kExitConfig;
}

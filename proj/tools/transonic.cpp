// Batch front door: classification maps, phase-space decay scans, power-series
// Cauchy solves, the full conjugation pipeline, and growth-ratio experiments.
// Subcommand style, JSON configs with flag overrides (flags win), CSV/JSON
// outputs that are byte-identical across reruns of the same configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "transonic/ck.hpp"
#include "transonic/conjugation.hpp"
#include "transonic/eigen2.hpp"
#include "transonic/error.hpp"
#include "transonic/fbi.hpp"
#include "transonic/gas.hpp"
#include "transonic/growth.hpp"
#include "transonic/io.hpp"
#include "transonic/norms.hpp"
#include "transonic/pipeline.hpp"
#include "transonic/series.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace transonic;

namespace {

void emit_diagnostic(const std::string& module, const std::string& message) {
    ordered_json d;
    d["module"] = module;
    d["message"] = message;
    std::cerr << d.dump() << "\n";
}

ordered_json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cli", "cannot open config '" + path + "'");
    try {
        return ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw Error("cli", "config '" + path + "': " + e.what());
    }
}

void check_keys(const ordered_json& j, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw Error("cli", "config root must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw Error("cli", "unknown config key '" + key + "'");
}

template <typename T>
void read_key(const ordered_json& j, const char* key, T& into) {
    if (j.contains(key)) {
        try {
            into = j.at(key).get<T>();
        } catch (const std::exception& e) {
            throw Error("cli", std::string("config key '") + key + "': " + e.what());
        }
    }
}

std::string out_path(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::string cur;
    auto flush = [&]() {
        if (cur.empty()) return;
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(cur, &pos));
            if (pos != cur.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw Error("cli", std::string("cannot parse ") + what + " entry '" + cur + "'");
        }
        cur.clear();
    };
    for (char ch : s) {
        if (ch == ',')
            flush();
        else if (!std::isspace(static_cast<unsigned char>(ch)))
            cur += ch;
    }
    flush();
    if (out.empty()) throw Error("cli", std::string(what) + " list is empty");
    return out;
}

void print_report(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------
// classify

struct ClassifyArgs {
    std::string config, field, out_dir = ".";
    double gamma = 1.4, c0 = 1.0, tol = -1.0;
    unsigned seed = 0;
};

int run_classify(const CLI::App* cmd, ClassifyArgs a) {
    if (!a.config.empty()) {
        ordered_json j = load_config(a.config);
        check_keys(j, {"field", "gamma", "c0", "tol", "out_dir", "seed"});
        if (!cmd->count("--field")) read_key(j, "field", a.field);
        if (!cmd->count("--gamma")) read_key(j, "gamma", a.gamma);
        if (!cmd->count("--c0")) read_key(j, "c0", a.c0);
        if (!cmd->count("--tol")) read_key(j, "tol", a.tol);
        if (!cmd->count("--out-dir")) read_key(j, "out_dir", a.out_dir);
        if (!cmd->count("--seed")) read_key(j, "seed", a.seed);
    }
    if (a.field.empty()) throw Error("cli", "classify needs a field CSV (--field or config)");

    GasModel model{a.gamma, a.c0};
    auto records = read_field_csv(a.field);
    // Admissibility pre-scan with file row numbers (header is row 1).
    std::string bad;
    for (std::size_t i = 0; i < records.size(); ++i) {
        FlowState st{records[i].u1, records[i].u2};
        if (!(st.speed() < model.q_max()))
            bad += (bad.empty() ? "" : ", ") + std::to_string(i + 2);
    }
    if (!bad.empty())
        throw Error("gas", "inadmissible states (speed >= vacuum limit) at rows: " + bad);

    VelocityField field = field_from_records(records);
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& row : field.states)
        for (const auto& st : row) ++counts[static_cast<int>(classify(model, st, a.tol))];
    auto edges = sonic_line(model, field, a.tol);

    std::string map_csv = out_path(a.out_dir, "classification.csv");
    std::string sonic_csv = out_path(a.out_dir, "sonic_line.csv");
    write_classification_csv(map_csv, model, field, a.tol);
    write_sonic_csv(sonic_csv, field, edges);

    ordered_json rep;
    rep["command"] = "classify";
    rep["seed"] = a.seed;
    rep["field"] = a.field;
    rep["gamma"] = a.gamma;
    rep["c0"] = a.c0;
    rep["counts"] = {{"E", counts[0]}, {"H", counts[1]}, {"S", counts[2]}};
    rep["sonic_edge_count"] = edges.size();
    rep["outputs"] = {map_csv, sonic_csv};
    print_report(rep);
    return 0;
}

// ---------------------------------------------------------------------------
// fbi

struct FbiArgs {
    std::string config, preset, file, out_dir = ".";
    double x0 = 0.0, lambda_floor = 0.25, disc_radius = -1.0, quad_tol = 1e-12;
    double mu_max = 256.0;
    int mu_points = 16;
    std::string xi_list = "1,-1";
    unsigned seed = 0;
};

Datum1D load_datum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cli", "cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw Error("cli", "empty datum file '" + path + "'");
    auto hdr = transonic::detail::split_csv_line(line);
    if (hdr != std::vector<std::string>{"x", "f"})
        throw Error("cli", "row 1: expected header 'x,f'");
    std::vector<double> xs;
    std::vector<cd> fs;
    std::size_t rowno = 1;
    while (std::getline(in, line)) {
        ++rowno;
        if (line.empty() || line == "\r") continue;
        auto f = transonic::detail::split_csv_line(line);
        if (f.size() != 2)
            throw Error("cli", "row " + std::to_string(rowno) + ": expected 2 columns, got " +
                                   std::to_string(f.size()));
        xs.push_back(transonic::detail::parse_double_field(f[0], rowno, "x"));
        fs.push_back(cd(transonic::detail::parse_double_field(f[1], rowno, "f"), 0.0));
    }
    return Datum1D::from_samples(std::move(xs), std::move(fs));
}

int run_fbi(const CLI::App* cmd, FbiArgs a) {
    if (!a.config.empty()) {
        ordered_json j = load_config(a.config);
        check_keys(j, {"preset", "file", "x0", "xi_list", "mu_max", "mu_points", "lambda_floor",
                       "disc_radius", "quad_tol", "out_dir", "seed"});
        if (!cmd->count("--preset")) read_key(j, "preset", a.preset);
        if (!cmd->count("--file")) read_key(j, "file", a.file);
        if (!cmd->count("--x0")) read_key(j, "x0", a.x0);
        if (!cmd->count("--xi-list")) read_key(j, "xi_list", a.xi_list);
        if (!cmd->count("--mu-max")) read_key(j, "mu_max", a.mu_max);
        if (!cmd->count("--mu-points")) read_key(j, "mu_points", a.mu_points);
        if (!cmd->count("--lambda-floor")) read_key(j, "lambda_floor", a.lambda_floor);
        if (!cmd->count("--disc-radius")) read_key(j, "disc_radius", a.disc_radius);
        if (!cmd->count("--quad-tol")) read_key(j, "quad_tol", a.quad_tol);
        if (!cmd->count("--out-dir")) read_key(j, "out_dir", a.out_dir);
        if (!cmd->count("--seed")) read_key(j, "seed", a.seed);
    }
    if (a.preset.empty() == a.file.empty())
        throw Error("cli", "fbi needs exactly one datum source: --preset or --file");

    Datum1D datum = a.preset.empty() ? load_datum_csv(a.file) : make_preset_datum(a.preset);
    std::vector<double> xis = parse_double_list(a.xi_list, "xi");
    std::vector<double> mus = geometric_mu_grid(1.0, a.mu_max, a.mu_points);

    AnalyticityReport rep =
        analyticity_test(datum, a.x0, a.lambda_floor, xis, mus, a.disc_radius, a.quad_tol);

    ordered_json out;
    out["command"] = "fbi";
    out["seed"] = a.seed;
    out["datum"] = a.preset.empty() ? ("file:" + a.file) : a.preset;
    out["x0"] = a.x0;
    out["verdict"] = to_string(rep.verdict);
    out["directions"] = ordered_json::array();
    for (std::size_t i = 0; i < rep.profiles.size(); ++i) {
        const DecayProfile& p = rep.profiles[i];
        std::string csv = out_path(a.out_dir, "profile_" + std::to_string(i) + ".csv");
        write_profile_csv(csv, p.mus, p.weighted_log_abs);
        ordered_json d;
        d["xi"] = p.xi0;
        d["eps_hat"] = p.eps_hat;
        d["fit_residual"] = p.fit_residual;
        d["verdict"] = to_string(p.verdict);
        d["csv"] = csv;
        out["directions"].push_back(d);
    }
    print_report(out);
    return rep.verdict == PointClass::Inconclusive ? 2 : 0;
}

// ---------------------------------------------------------------------------
// pipeline

ordered_json component_decay_json(const ComponentDecay& c) {
    ordered_json j;
    j["eps_hat"] = c.eps_hat;
    j["fit_residual"] = c.fit_residual;
    j["flagged_zero"] = c.flagged_zero;
    j["underflow_clamped"] = c.underflow_clamped;
    j["xi0"] = c.xi0;
    j["z_center"] = {c.z_center.real(), c.z_center.imag()};
    return j;
}

struct PipelineArgs {
    std::string config, out_dir = ".";
    int n = -1;
    unsigned seed = 0;
};

PipelineConfig pipeline_config_from_json(const ordered_json& j) {
    check_keys(j, {"gamma", "c0", "T0", "x0", "T1", "r0", "R", "cbar_prime", "cutoff_order", "N",
                   "data_u1", "data_u2", "mu_grid", "t0_offset", "disc_radius", "mu_identity",
                   "z_points", "quad_tol", "fit_quad_tol", "pad", "out_dir", "seed"});
    PipelineConfig c;
    read_key(j, "gamma", c.gamma);
    read_key(j, "c0", c.c0);
    read_key(j, "T0", c.T0);
    read_key(j, "x0", c.x0);
    read_key(j, "T1", c.T1);
    read_key(j, "r0", c.r0);
    read_key(j, "R", c.R);
    read_key(j, "cbar_prime", c.cbar_prime);
    read_key(j, "cutoff_order", c.cutoff_order);
    read_key(j, "N", c.N);
    read_key(j, "data_u1", c.data_u1);
    read_key(j, "data_u2", c.data_u2);
    if (j.contains("mu_grid")) {
        auto g = j.at("mu_grid");
        if (!g.is_array() || g.size() != 3)
            throw Error("cli", "mu_grid must be [lo, hi, count]");
        c.mu_lo = g[0].get<double>();
        c.mu_hi = g[1].get<double>();
        c.mu_count = g[2].get<int>();
    }
    read_key(j, "t0_offset", c.t0_offset);
    read_key(j, "disc_radius", c.disc_radius);
    read_key(j, "mu_identity", c.mu_identity);
    if (j.contains("z_points")) {
        for (const auto& p : j.at("z_points")) {
            if (!p.is_array() || p.size() != 2)
                throw Error("cli", "z_points entries must be [re, im]");
            c.z_points.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
    }
    read_key(j, "quad_tol", c.quad_tol);
    read_key(j, "fit_quad_tol", c.fit_quad_tol);
    read_key(j, "pad", c.pad);
    return c;
}

int run_pipeline_cmd(const CLI::App* cmd, PipelineArgs a) {
    if (a.config.empty()) throw Error("cli", "pipeline needs --config");
    ordered_json j = load_config(a.config);
    PipelineConfig cfg = pipeline_config_from_json(j);
    if (!cmd->count("--out-dir")) read_key(j, "out_dir", a.out_dir);
    if (!cmd->count("--seed")) read_key(j, "seed", a.seed);
    if (a.n > 0) cfg.N = a.n;

    PipelineReport rep = run_pipeline(cfg);

    ordered_json out;
    out["command"] = "pipeline";
    out["seed"] = a.seed;
    out["N"] = cfg.N;
    out["ck_coeff_residual"] = rep.ck_coeff_residual;
    out["ck_radius_warning"] = rep.ck_radius_warning;
    out["diag_coeff_residual"] = rep.diag_coeff_residual;
    out["diag_eval_residual"] = rep.diag_eval_residual;
    out["zeta_initial"] = rep.zeta_initial;
    out["zeta_first_order"] = rep.zeta_first_order;
    out["zeta_eval_residual"] = rep.zeta_eval_residual;
    out["zeta_remainder_order"] = {rep.zeta_remainder_order_1, rep.zeta_remainder_order_2};
    out["conj_coeff_residual"] = rep.conj_coeff_residual;
    out["conj_eval_residual"] = rep.conj_eval_residual;
    out["conservation"] = ordered_json::array();
    for (const auto& c : rep.conservation)
        out["conservation"].push_back({{"max_defect", c.max_defect},
                                       {"field_scale", c.field_scale},
                                       {"normalized", c.normalized}});
    out["boundary"] = ordered_json::array();
    for (const auto& b : rep.boundary) {
        ordered_json bj;
        bj["lhs"] = {b.lhs[0].real(), b.lhs[0].imag(), b.lhs[1].real(), b.lhs[1].imag()};
        bj["defect"] = {b.defect[0], b.defect[1]};
        bj["term_III"] = {std::abs(b.term_III[0]), std::abs(b.term_III[1])};
        bj["s_hat"] = b.s_hat;
        out["boundary"].push_back(bj);
    }
    out["recovery"] = ordered_json::array();
    for (const auto& r : rep.recovery) {
        ordered_json rj;
        rj["defect"] = {r.defect[0], r.defect[1]};
        rj["bound_factor"] = r.bound_factor;
        out["recovery"].push_back(rj);
    }
    out["decay_component_1"] = component_decay_json(rep.decay[0]);
    out["decay_component_2"] = component_decay_json(rep.decay[1]);
    out["eps_floor"] = rep.eps_floor;
    out["max_identity_defect"] = rep.max_identity_defect();

    std::string csv1 = out_path(a.out_dir, "bsu_decay_1.csv");
    std::string csv2 = out_path(a.out_dir, "bsu_decay_2.csv");
    write_profile_csv(csv1, rep.decay[0].mus, rep.decay[0].weighted_log_abs);
    write_profile_csv(csv2, rep.decay[1].mus, rep.decay[1].weighted_log_abs);
    std::string report_path = out_path(a.out_dir, "pipeline_report.json");
    {
        std::ofstream f(report_path, std::ios::binary);
        if (!f) throw Error("cli", "cannot open '" + report_path + "' for writing");
        f << out.dump(2) << "\n";
    }
    out["outputs"] = {report_path, csv1, csv2};
    print_report(out);
    return 0;
}

// ---------------------------------------------------------------------------
// growth

struct GrowthArgs {
    std::string config, out_dir = ".", norm = "both";
    unsigned seed = 0;
};

ordered_json growth_report_json(const GrowthReport& rep) {
    ordered_json j;
    j["norm"] = to_string(rep.norm);
    j["family"] = rep.family;
    j["hyperbolic_base"] = rep.hyperbolic_base;
    j["verdict"] = to_string(rep.verdict);
    j["rows"] = ordered_json::array();
    for (const auto& r : rep.rows) {
        ordered_json row;
        row["k"] = r.k;
        row["r_k"] = r.r_k;
        row["numerator"] = r.numerator;
        row["denominator"] = r.denominator;
        row["ratio"] = r.ratio;
        if (rep.norm == NormKind::Gevrey)
            row["gevrey_truncation_suspect"] = r.gevrey_truncation_suspect;
        j["rows"].push_back(row);
    }
    return j;
}

int run_growth(const CLI::App* cmd, GrowthArgs a) {
    if (a.config.empty()) throw Error("cli", "growth needs --config");
    ordered_json j = load_config(a.config);
    check_keys(j, {"base_state", "gamma", "c0", "k_list", "s", "alpha", "sigma", "c", "delta",
                   "r_rule", "horizon", "rbar", "amplitude", "x0", "taper_order", "n_fft",
                   "beta_max", "c2_override", "quad_tol", "norm", "out_dir", "seed"});
    double gamma = 1.4, c0 = 1.0;
    read_key(j, "gamma", gamma);
    read_key(j, "c0", c0);
    GasModel model{gamma, c0};
    FlowState base{0.0, 0.0};
    if (j.contains("base_state")) {
        auto b = j.at("base_state");
        if (!b.is_array() || b.size() != 2) throw Error("cli", "base_state must be [u1, u2]");
        base = FlowState{b[0].get<double>(), b[1].get<double>()};
    }
    std::vector<int> ks = {8, 16, 32, 64};
    read_key(j, "k_list", ks);
    GrowthParams p;
    read_key(j, "s", p.s);
    read_key(j, "alpha", p.alpha);
    read_key(j, "sigma", p.sigma);
    read_key(j, "c", p.c_gevrey);
    read_key(j, "delta", p.delta);
    read_key(j, "r_rule", p.r_rule);
    read_key(j, "horizon", p.horizon);
    read_key(j, "rbar", p.rbar);
    read_key(j, "amplitude", p.amplitude);
    read_key(j, "x0", p.x0);
    read_key(j, "taper_order", p.taper_order);
    std::size_t n_fft = p.n_fft;
    read_key(j, "n_fft", n_fft);
    p.n_fft = n_fft;
    read_key(j, "beta_max", p.beta_max);
    read_key(j, "c2_override", p.c2_override);
    read_key(j, "quad_tol", p.quad_tol);
    if (!cmd->count("--norm")) read_key(j, "norm", a.norm);
    if (!cmd->count("--out-dir")) read_key(j, "out_dir", a.out_dir);
    if (!cmd->count("--seed")) read_key(j, "seed", a.seed);
    if (a.norm != "sobolev" && a.norm != "gevrey" && a.norm != "both")
        throw Error("cli", "norm must be one of: sobolev, gevrey, both");

    ordered_json out;
    out["command"] = "growth";
    out["seed"] = a.seed;
    out["reports"] = ordered_json::array();
    std::vector<std::string> outputs;
    bool inconclusive = false;
    for (NormKind kind : {NormKind::Sobolev, NormKind::Gevrey}) {
        if (a.norm != "both" && a.norm != to_string(kind)) continue;
        GrowthReport rep = growth_experiment(model, base, ks, p, kind);
        std::string csv =
            out_path(a.out_dir, std::string("growth_") + to_string(kind) + ".csv");
        write_growth_csv(csv, rep);
        outputs.push_back(csv);
        out["reports"].push_back(growth_report_json(rep));
        inconclusive = inconclusive || rep.verdict == GrowthVerdict::Inconclusive;
    }
    out["outputs"] = outputs;
    print_report(out);
    return inconclusive ? 2 : 0;
}

// ---------------------------------------------------------------------------
// ck-solve

struct CkArgs {
    std::string config, out_dir = ".";
    double gamma = 1.4, c0 = 1.0, t0 = 0.0, x0 = 0.0;
    int n = 9;
    std::string data_u1 = "0", data_u2 = "0.3,0.2";
    unsigned seed = 0;
};

int run_ck_solve(const CLI::App* cmd, CkArgs a) {
    if (!a.config.empty()) {
        ordered_json j = load_config(a.config);
        check_keys(j, {"gamma", "c0", "T0", "x0", "N", "data_u1", "data_u2", "out_dir", "seed"});
        if (!cmd->count("--gamma")) read_key(j, "gamma", a.gamma);
        if (!cmd->count("--c0")) read_key(j, "c0", a.c0);
        if (!cmd->count("--t0")) read_key(j, "T0", a.t0);
        if (!cmd->count("--x0")) read_key(j, "x0", a.x0);
        if (!cmd->count("--n")) read_key(j, "N", a.n);
        if (!cmd->count("--data-u1") && j.contains("data_u1")) {
            std::vector<double> v = j.at("data_u1").get<std::vector<double>>();
            a.data_u1.clear();
            for (std::size_t i = 0; i < v.size(); ++i)
                a.data_u1 += (i ? "," : "") + g17(v[i]);
        }
        if (!cmd->count("--data-u2") && j.contains("data_u2")) {
            std::vector<double> v = j.at("data_u2").get<std::vector<double>>();
            a.data_u2.clear();
            for (std::size_t i = 0; i < v.size(); ++i)
                a.data_u2 += (i ? "," : "") + g17(v[i]);
        }
        if (!cmd->count("--out-dir")) read_key(j, "out_dir", a.out_dir);
        if (!cmd->count("--seed")) read_key(j, "seed", a.seed);
    }
    auto d1 = parse_double_list(a.data_u1, "data_u1");
    auto d2 = parse_double_list(a.data_u2, "data_u2");
    GasModel model{a.gamma, a.c0};
    SeriesSolution sol = ck_solve(model, a.t0, a.x0, a.n, std::vector<cd>(d1.begin(), d1.end()),
                                  std::vector<cd>(d2.begin(), d2.end()));
    auto res = ck_residual(sol);
    double rmax = 0.0;
    for (const auto& comp : res)
        for (int d = 0; d + 1 <= a.n; ++d)
            for (int m = 0; m <= d; ++m) rmax = std::max(rmax, std::abs(comp.coeff(m, d - m)));

    std::string p1 = out_path(a.out_dir, "u1_series.json");
    std::string p2 = out_path(a.out_dir, "u2_series.json");
    for (auto [path, series] : {std::pair{p1, &sol.u1}, std::pair{p2, &sol.u2}}) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error("cli", "cannot open '" + path + "' for writing");
        f << series_to_json(*series).dump(2) << "\n";
    }

    ordered_json out;
    out["command"] = "ck-solve";
    out["seed"] = a.seed;
    out["N"] = a.n;
    out["residual_through_degree"] = a.n - 1;
    out["max_residual_coeff"] = rmax;
    out["radius_warning"] = sol.radius_warning;
    out["outputs"] = {p1, p2};
    print_report(out);
    return 0;
}

// ---------------------------------------------------------------------------
// gevrey-norm

struct GevreyArgs {
    std::string config, series, poly;
    double sigma = 0.4, c = 4.0, ball = 0.5;
    int beta_max = 24;
    unsigned seed = 0;
};

int run_gevrey(const CLI::App* cmd, GevreyArgs a) {
    if (!a.config.empty()) {
        ordered_json j = load_config(a.config);
        check_keys(j, {"series", "poly", "sigma", "c", "ball", "beta_max", "seed"});
        if (!cmd->count("--series")) read_key(j, "series", a.series);
        if (!cmd->count("--poly")) read_key(j, "poly", a.poly);
        if (!cmd->count("--sigma")) read_key(j, "sigma", a.sigma);
        if (!cmd->count("--c")) read_key(j, "c", a.c);
        if (!cmd->count("--ball")) read_key(j, "ball", a.ball);
        if (!cmd->count("--beta-max")) read_key(j, "beta_max", a.beta_max);
        if (!cmd->count("--seed")) read_key(j, "seed", a.seed);
    }
    if (a.series.empty() == a.poly.empty())
        throw Error("cli", "gevrey-norm needs exactly one input: --series or --poly");

    std::vector<cd> coeffs;
    if (!a.series.empty()) {
        std::ifstream in(a.series);
        if (!in) throw Error("cli", "cannot open '" + a.series + "' for reading");
        nlohmann::json sj;
        try {
            in >> sj;
        } catch (const std::exception& e) {
            throw Error("cli", "series '" + a.series + "': " + e.what());
        }
        coeffs = series_from_json(sj).restrict_t0();
    } else {
        for (double v : parse_double_list(a.poly, "poly")) coeffs.emplace_back(v, 0.0);
    }

    GevreyResult g = gevrey_norm(coeffs, a.sigma, a.c, a.ball, a.beta_max);
    ordered_json out;
    out["command"] = "gevrey-norm";
    out["seed"] = a.seed;
    out["sigma"] = a.sigma;
    out["c"] = a.c;
    out["ball"] = a.ball;
    out["beta_max"] = a.beta_max;
    out["value"] = g.value;
    out["argmax_beta"] = g.argmax_beta;
    out["truncation_suspect"] = g.truncation_suspect;
    print_report(out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transonic: classification, phase-space decay scans, series solves,\n"
                 "conjugation pipelines, and growth-ratio experiments"};
    app.require_subcommand(1);

    ClassifyArgs ca;
    CLI::App* c_classify = app.add_subcommand("classify", "Classify a sampled velocity field");
    c_classify->add_option("--config", ca.config, "JSON config file");
    c_classify->add_option("--field", ca.field, "field CSV with header x,T,u1,u2");
    c_classify->add_option("--gamma", ca.gamma, "adiabatic exponent");
    c_classify->add_option("--c0", ca.c0, "stagnation sound speed");
    c_classify->add_option("--tol", ca.tol, "sonic band half-width (<0: default)");
    c_classify->add_option("--out-dir", ca.out_dir, "output directory");
    c_classify->add_option("--seed", ca.seed, "run seed recorded in outputs");

    FbiArgs fa;
    CLI::App* c_fbi = app.add_subcommand("fbi", "Phase-space decay scan of a datum");
    c_fbi->add_option("--config", fa.config, "JSON config file");
    c_fbi->add_option("--preset", fa.preset, "datum preset: gaussian, lorentzian, abs, step");
    c_fbi->add_option("--file", fa.file, "datum CSV with header x,f");
    c_fbi->add_option("--x0", fa.x0, "base point");
    c_fbi->add_option("--xi-list", fa.xi_list, "comma-separated directions (both signs)");
    c_fbi->add_option("--mu-max", fa.mu_max, "top of the geometric mu grid");
    c_fbi->add_option("--mu-points", fa.mu_points, "number of mu grid points");
    c_fbi->add_option("--lambda-floor", fa.lambda_floor, "minimum |xi| accepted");
    c_fbi->add_option("--disc-radius", fa.disc_radius, "z-disc radius (<0: default)");
    c_fbi->add_option("--quad-tol", fa.quad_tol, "quadrature tolerance");
    c_fbi->add_option("--out-dir", fa.out_dir, "output directory");
    c_fbi->add_option("--seed", fa.seed, "run seed recorded in outputs");

    PipelineArgs pa;
    CLI::App* c_pipe = app.add_subcommand("pipeline", "Full conjugation pipeline");
    c_pipe->add_option("--config", pa.config, "JSON config file (required)");
    c_pipe->add_option("--n", pa.n, "series degree override");
    c_pipe->add_option("--out-dir", pa.out_dir, "output directory");
    c_pipe->add_option("--seed", pa.seed, "run seed recorded in outputs");

    GrowthArgs ga;
    CLI::App* c_growth = app.add_subcommand("growth", "Norm-ratio growth experiment");
    c_growth->add_option("--config", ga.config, "JSON config file (required)");
    c_growth->add_option("--norm", ga.norm, "denominator: sobolev, gevrey, both");
    c_growth->add_option("--out-dir", ga.out_dir, "output directory");
    c_growth->add_option("--seed", ga.seed, "run seed recorded in outputs");

    CkArgs ka;
    CLI::App* c_ck = app.add_subcommand("ck-solve", "Power-series Cauchy solve");
    c_ck->add_option("--config", ka.config, "JSON config file");
    c_ck->add_option("--gamma", ka.gamma, "adiabatic exponent");
    c_ck->add_option("--c0", ka.c0, "stagnation sound speed");
    c_ck->add_option("--t0", ka.t0, "expansion time");
    c_ck->add_option("--x0", ka.x0, "expansion point");
    c_ck->add_option("--n", ka.n, "series degree");
    c_ck->add_option("--data-u1", ka.data_u1, "comma-separated u1 data coefficients");
    c_ck->add_option("--data-u2", ka.data_u2, "comma-separated u2 data coefficients");
    c_ck->add_option("--out-dir", ka.out_dir, "output directory");
    c_ck->add_option("--seed", ka.seed, "run seed recorded in outputs");

    GevreyArgs ea;
    CLI::App* c_gev = app.add_subcommand("gevrey-norm", "Gevrey norm of series data");
    c_gev->add_option("--config", ea.config, "JSON config file");
    c_gev->add_option("--series", ea.series, "series JSON produced by ck-solve");
    c_gev->add_option("--poly", ea.poly, "comma-separated polynomial coefficients");
    c_gev->add_option("--sigma", ea.sigma, "Gevrey index in (0,1)");
    c_gev->add_option("--c", ea.c, "Gevrey constant");
    c_gev->add_option("--ball", ea.ball, "ball radius");
    c_gev->add_option("--beta-max", ea.beta_max, "derivative order cap");
    c_gev->add_option("--seed", ea.seed, "run seed recorded in outputs");

    try {
        app.parse(argc, argv);
        if (c_classify->parsed()) return run_classify(c_classify, ca);
        if (c_fbi->parsed()) return run_fbi(c_fbi, fa);
        if (c_pipe->parsed()) return run_pipeline_cmd(c_pipe, pa);
        if (c_growth->parsed()) return run_growth(c_growth, ga);
        if (c_ck->parsed()) return run_ck_solve(c_ck, ka);
        if (c_gev->parsed()) return run_gevrey(c_gev, ea);
        throw Error("cli", "no subcommand selected");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // help text on stdout, exit 0
    } catch (const CLI::ParseError& e) {
        emit_diagnostic("cli", e.what());
        return 1;
    } catch (const Error& e) {
        emit_diagnostic(e.module(), e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_diagnostic("cli", e.what());
        return 1;
    }
}

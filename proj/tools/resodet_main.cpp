// resodet: resonances, heat/wave invariants and iso-resonance decisions for
// compactly supported Schrodinger potentials, via regularized Fredholm
// determinants of the Birman-Schwinger operator.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "resodet/contour.hpp"
#include "resodet/determinant.hpp"
#include "resodet/invariants.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace resodet;

namespace {

struct RunConfig {
    std::string command;
    std::vector<std::string> potential_paths;
    ordered_json raw;
    SearchRegion region;
    bool has_region = false;
    double tol = 1e-8;
    int nodes = 200;
    std::optional<int> ell_max;
    std::string output;
    uint64_t seed = 1;
    bool verbose = false;
};

[[noreturn]] void config_error(const std::string& msg) {
    std::cerr << "resodet: config error: " << msg << "\n";
    std::exit(2);
}

RunConfig parse_config(const std::string& path) {
    RunConfig cfg;
    std::ifstream in(path);
    if (!in) config_error("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        config_error(std::string("config is not valid JSON: ") + e.what());
    }
    cfg.raw = ordered_json(j);
    try {
        cfg.command = j.at("command").get<std::string>();
        if (j.contains("potentials"))
            cfg.potential_paths = j.at("potentials").get<std::vector<std::string>>();
        if (j.contains("region")) {
            const json& r = j.at("region");
            cfg.region.re_min = r.at("re_min").get<double>();
            cfg.region.re_max = r.at("re_max").get<double>();
            cfg.region.im_min = r.at("im_min").get<double>();
            cfg.region.im_max = r.at("im_max").get<double>();
            if (r.contains("exclusion_radius"))
                cfg.region.exclusion_radius = r.at("exclusion_radius").get<double>();
            cfg.has_region = true;
        }
        if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
        if (j.contains("nodes")) cfg.nodes = j.at("nodes").get<int>();
        if (j.contains("ell_max")) cfg.ell_max = j.at("ell_max").get<int>();
        if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    } catch (const std::exception& e) {
        config_error(std::string("missing or malformed field: ") + e.what());
    }
    if (cfg.tol <= 0) config_error("tol must be > 0");
    if (cfg.nodes < 8) config_error("nodes must be >= 8");
    return cfg;
}

Potential load_potential(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open potential file " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        config_error("potential file " + path + " is not valid JSON: " + e.what());
    }
    try {
        return Potential::from_json(j);
    } catch (const std::exception& e) {
        config_error("potential file " + path + ": " + e.what());
    }
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) {
        std::cerr << "resodet: cannot write " << p << "\n";
        std::exit(2);
    }
    out << text;
}

std::string csv_double(double v) {
    char buf[40];
    snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json report_skeleton(const RunConfig& cfg) {
    ordered_json rep;
    rep["config"] = cfg.raw;
    return rep;
}

int cmd_resonances(const RunConfig& cfg, const fs::path& outdir) {
    if (cfg.potential_paths.size() != 1) config_error("resonances: one potential expected");
    if (!cfg.has_region) config_error("resonances: region required");
    Potential V = load_potential(cfg.potential_paths[0]);
    ResonanceSet set = locate_resonances(V, cfg.region, cfg.tol, cfg.nodes, cfg.ell_max);
    ordered_json rep = report_skeleton(cfg);
    rep["resonances"] = set.to_json();
    fs::path out = outdir / (cfg.output.empty() ? "resonances.json" : cfg.output);
    write_text(out, rep.dump(2) + "\n");
    if (cfg.verbose) std::cerr << "wrote " << out << " (" << set.entries.size() << " entries)\n";
    return 0;
}

int cmd_invariants(const RunConfig& cfg, const fs::path& outdir) {
    if (cfg.potential_paths.size() != 1) config_error("invariants: one potential expected");
    Potential V = load_potential(cfg.potential_paths[0]);
    int J = cfg.raw.contains("invariant_order") ? cfg.raw["invariant_order"].get<int>() : 3;
    InvariantVector iv = invariant_vector(V, J, V.dimension() == 3);
    ordered_json rep = report_skeleton(cfg);
    rep["invariants"] = iv.to_json();
    fs::path out = outdir / (cfg.output.empty() ? "invariants.json" : cfg.output);
    write_text(out, rep.dump(2) + "\n");
    return 0;
}

int cmd_compare(const RunConfig& cfg, const fs::path& outdir) {
    if (cfg.potential_paths.size() != 2) config_error("compare: two potentials expected");
    if (!cfg.has_region) config_error("compare: region required");
    Potential V0 = load_potential(cfg.potential_paths[0]);
    Potential V1 = load_potential(cfg.potential_paths[1]);
    ResonanceSet A = locate_resonances(V0, cfg.region, cfg.tol, cfg.nodes, cfg.ell_max);
    ResonanceSet B = locate_resonances(V1, cfg.region, cfg.tol, cfg.nodes, cfg.ell_max);
    double match_tol = cfg.raw.contains("match_tol") ? cfg.raw["match_tol"].get<double>()
                                                     : 100.0 * cfg.tol;
    IsoReport iso = compare_resonance_sets(A, B, match_tol);
    InvariantComparison inv = verify_invariants_equal(V0, V1, 3, 1e-9);
    ordered_json rep = report_skeleton(cfg);
    rep["set_a"] = A.to_json();
    rep["set_b"] = B.to_json();
    rep["iso_resonant"] = iso.iso_resonant;
    rep["match_report"] = iso.to_json();
    ordered_json res;
    for (auto& [k, v] : inv.residuals) res[std::to_string(k)] = v;
    rep["invariant_residuals"] = res;
    fs::path out = outdir / (cfg.output.empty() ? "compare.json" : cfg.output);
    write_text(out, rep.dump(2) + "\n");
    return 0;
}

int cmd_sobolev(const RunConfig& cfg, const fs::path& outdir) {
    if (cfg.potential_paths.size() != 1) config_error("sobolev: one potential expected");
    Potential V = load_potential(cfg.potential_paths[0]);
    int s = cfg.raw.contains("s") ? cfg.raw["s"].get<int>() : 2;
    ordered_json rep = report_skeleton(cfg);
    ordered_json norms;
    for (int k = 0; k <= s; ++k) norms[std::to_string(k)] = V.sobolev_norm(k);
    rep["sobolev_norms"] = norms;
    if (cfg.raw.contains("inequality_j")) {
        int jq = cfg.raw["inequality_j"].get<int>();
        InequalityReport ir = verify_inequality_suite(V, jq);
        ordered_json checks = ordered_json::array();
        for (const InequalityCheck& c : ir.checks)
            checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
        rep["inequalities"] = checks;
        rep["all_hold"] = ir.all_hold;
        rep["sobolev_ratio"] = ir.sobolev_ratio;
    }
    fs::path out = outdir / (cfg.output.empty() ? "sobolev.json" : cfg.output);
    write_text(out, rep.dump(2) + "\n");
    return 0;
}

int cmd_heat_trace(const RunConfig& cfg, const fs::path& outdir) {
    if (cfg.potential_paths.size() != 1) config_error("heat-trace: one potential expected");
    Potential V = load_potential(cfg.potential_paths[0]);
    std::vector<double> ts;
    if (cfg.raw.contains("t_grid") && cfg.raw["t_grid"].is_array()) {
        ts = cfg.raw["t_grid"].get<std::vector<double>>();
    } else {
        double t0 = 1e-3, t1 = 1e-2;
        int count = 8;
        if (cfg.raw.contains("t_grid")) {
            const auto& g = cfg.raw["t_grid"];
            t0 = g.value("min", t0);
            t1 = g.value("max", t1);
            count = g.value("count", count);
        }
        for (int i = 0; i < count; ++i)
            ts.push_back(t0 * std::pow(t1 / t0, static_cast<double>(i) / (count - 1)));
    }
    int J = cfg.raw.contains("fit_order") ? cfg.raw["fit_order"].get<int>() : 3;
    std::vector<double> tr = heat_trace(V, ts);
    std::map<int, double> gamma = fit_heat_coefficients(V, ts, J);
    ordered_json rep = report_skeleton(cfg);
    rep["t"] = ts;
    rep["trace"] = tr;
    ordered_json gj, kj;
    for (auto& [k, v] : gamma) gj[std::to_string(k)] = v;
    rep["gamma"] = gj;
    for (auto& [k, v] : gamma) {
        if (k > 3) continue;
        double c = heat_invariant_closed(k, V);
        if (c != 0.0) kj[std::to_string(k)] = v / c;
    }
    rep["kappa"] = kj;
    fs::path out = outdir / (cfg.output.empty() ? "heat_trace.json" : cfg.output);
    write_text(out, rep.dump(2) + "\n");
    return 0;
}

int cmd_det_sweep(const RunConfig& cfg, const fs::path& outdir) {
    if (cfg.potential_paths.size() != 1) config_error("det-sweep: one potential expected");
    if (!cfg.raw.contains("grid")) config_error("det-sweep: grid required");
    Potential V = load_potential(cfg.potential_paths[0]);
    const auto& g = cfg.raw["grid"];
    double re0 = 0, re1 = 0, im0 = 0, im1 = 0;
    int nre = 0, nim = 0;
    try {
        re0 = g.at("re_min").get<double>();
        re1 = g.at("re_max").get<double>();
        im0 = g.at("im_min").get<double>();
        im1 = g.at("im_max").get<double>();
        nre = g.at("re_count").get<int>();
        nim = g.at("im_count").get<int>();
    } catch (const std::exception& e) {
        config_error(std::string("det-sweep grid: ") + e.what());
    }
    std::string csv = "re_lambda,im_lambda,re_D,im_D,log_abs_D\n";
    for (int i = 0; i < nre; ++i)
        for (int k = 0; k < nim; ++k) {
            double re = nre == 1 ? re0 : re0 + (re1 - re0) * i / (nre - 1);
            double im = nim == 1 ? im0 : im0 + (im1 - im0) * k / (nim - 1);
            DeterminantValue D = regularized_determinant(V, Complex(re, im), cfg.nodes, cfg.ell_max);
            Complex plain = D.plain();
            csv += csv_double(re);
            csv += ",";
            csv += csv_double(im);
            csv += ",";
            csv += csv_double(plain.real());
            csv += ",";
            csv += csv_double(plain.imag());
            csv += ",";
            csv += csv_double(D.scaled().log_abs());
            csv += "\n";
        }
    fs::path out = outdir / (cfg.output.empty() ? "det_sweep.csv" : cfg.output);
    write_text(out, csv);
    ordered_json rep = report_skeleton(cfg);
    rep["rows"] = nre * nim;
    rep["csv"] = out.filename().string();
    write_text(out.string() + ".meta.json", rep.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"resonances and heat/wave invariants of compactly supported potentials"};
    std::string config_path, output_dir = ".";
    int threads = 0;
    bool verbose = false;
    app.add_option("--config", config_path, "run configuration (JSON)")->required();
    app.add_option("--output", output_dir, "output directory");
    app.add_option("--threads", threads, "worker threads");
    app.add_flag("--verbose", verbose, "diagnostics on stderr");
    CLI11_PARSE(app, argc, argv);

    RunConfig cfg = parse_config(config_path);
    cfg.verbose = verbose;
    if (threads > 0) set_runtime_threads(threads);
    fs::path outdir(output_dir);
    std::error_code ec;
    fs::create_directories(outdir, ec);

    try {
        if (cfg.command == "resonances") return cmd_resonances(cfg, outdir);
        if (cfg.command == "invariants") return cmd_invariants(cfg, outdir);
        if (cfg.command == "compare") return cmd_compare(cfg, outdir);
        if (cfg.command == "sobolev") return cmd_sobolev(cfg, outdir);
        if (cfg.command == "heat-trace") return cmd_heat_trace(cfg, outdir);
        if (cfg.command == "det-sweep") return cmd_det_sweep(cfg, outdir);
        config_error("unknown command: " + cfg.command);
    } catch (const std::invalid_argument& e) {
        std::cerr << "resodet: invalid input: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "resodet: numerical failure: " << e.what() << "\n";
        return 3;
    }
}

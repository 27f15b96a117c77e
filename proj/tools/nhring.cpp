// Command-line front end: spectrum, gbz, sweep, tearing, localize, validate.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "nhring/classify.hpp"
#include "nhring/gbz.hpp"
#include "nhring/model.hpp"
#include "nhring/spectral.hpp"
#include "nhring/sweep_io.hpp"
#include "nhring/tearing.hpp"
#include "nhring/validation.hpp"

using namespace nhring;

namespace {

struct Globals {
    int threads = 1;
    unsigned long seed = 0;  // accepted for interface stability; nothing is random
    bool quiet = false;
};

void add_model_flags(CLI::App* app, ModelParams& p) {
    app->add_option("--t1", p.t1, "intracell hopping");
    app->add_option("--t2", p.t2, "intercell hopping");
    app->add_option("--gamma", p.gamma, "nonreciprocity");
    app->add_option("--epsilon", p.epsilon, "gain/loss strength");
    app->add_option("--t-boundary", p.t_boundary, "junction hopping");
    app->add_option("--cells", p.n_cells, "cells per chain");
}

int resolve_threads(int t) {
    if (t > 0) return t;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void emit(const std::string& path, const std::string& bytes) {
    if (path.empty() || path == "-") std::cout << bytes;
    else write_file(path, bytes);
}

ExportFormat format_of(const std::string& f) {
    if (f == "csv") return ExportFormat::csv;
    if (f == "json") return ExportFormat::json;
    throw CLI::ValidationError("--format", "expected csv or json");
}

SweepAxis parse_axis(const std::string& s) {
    std::vector<std::string> f;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ':')) f.push_back(part);
    if (f.size() != 4) throw CLI::ValidationError("axis", "expected name:min:max:steps, got '" + s + "'");
    try {
        return {f[0], std::stod(f[1]), std::stod(f[2]), std::stoi(f[3])};
    } catch (const std::exception&) {
        throw CLI::ValidationError("axis", "bad number in '" + s + "'");
    }
}

void apply_base(ModelParams& p, const std::string& s) {
    std::stringstream in(s);
    std::string kv;
    while (std::getline(in, kv, ',')) {
        if (kv.empty()) continue;
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--base", "expected key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        double v = 0.0;
        try {
            v = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--base", "bad number in '" + kv + "'");
        }
        if (key == "n_cells" || key == "cells") p.n_cells = static_cast<int>(v);
        else {
            try {
                set_param(p, key, v);
            } catch (const std::invalid_argument& e) {
                throw CLI::ValidationError("--base", e.what());
            }
        }
    }
}

std::vector<EigenPair> analysed_spectrum(const ModelParams& p) {
    auto pairs = eigendecompose(build_hamiltonian(p));
    std::vector<cplx> reference;
    if (p.t_boundary != p.t2) reference = gbz_curve(p).energy_cloud;
    pairs = detect_special_states(std::move(pairs), p, {}, reference);
    for (auto& q : pairs) {
        try {
            q.loc_modulus = localization_modulus(q, p);
        } catch (const std::exception&) {
        }
    }
    return pairs;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral laboratory for the non-reciprocal SSH ring with a gain/loss domain wall"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--threads", g.threads, "worker threads (0 = auto)");
    app.add_option("--seed", g.seed, "unused; the pipeline is deterministic");
    app.add_flag("--quiet", g.quiet, "suppress progress output");

    ModelParams p;
    std::string out, format = "csv";

    auto* spectrum = app.add_subcommand("spectrum", "numerical spectrum with state tags");
    add_model_flags(spectrum, p);
    spectrum->add_option("--out", out, "output path (- for stdout)");
    spectrum->add_option("--format", format, "csv or json");

    int theta_steps = 512;
    auto* gbz = app.add_subcommand("gbz", "analytical C_beta and spectrum");
    add_model_flags(gbz, p);
    gbz->add_option("--theta-steps", theta_steps, "theta grid size");
    gbz->add_option("--out", out, "output path (- for stdout)");
    gbz->add_option("--format", format, "csv or json");

    std::string ax, ay, base, render, sweep_format = "csv";
    auto* sweep = app.add_subcommand("sweep", "phase diagram over two parameters");
    sweep->add_option("--axis-x", ax, "name:min:max:steps")->required();
    sweep->add_option("--axis-y", ay, "name:min:max:steps")->required();
    sweep->add_option("--base", base, "key=val,... for the fixed parameters");
    sweep->add_option("--out", out, "grid file (- for stdout)");
    sweep->add_option("--format", sweep_format, "csv or json");
    sweep->add_option("--render", render, "P6 heatmap path");

    double eps_min = 0.0, eps_max = 2.0, eps_step = 0.01;
    auto* tearing = app.add_subcommand("tearing", "closure gap scan and critical epsilon");
    add_model_flags(tearing, p);
    tearing->add_option("--eps-min", eps_min, "first grid value");
    tearing->add_option("--eps-max", eps_max, "last grid value");
    tearing->add_option("--eps-step", eps_step, "grid spacing");
    tearing->add_option("--out", out, "output path (- for stdout)");

    auto* localize = app.add_subcommand("localize", "per-state |beta| table");
    add_model_flags(localize, p);
    localize->add_option("--out", out, "output path (- for stdout)");

    std::string suite;
    auto* validate_cmd = app.add_subcommand("validate", "run an oracle suite");
    validate_cmd->add_option("--suite", suite, "bloch|determinant|symmetry|bz-limit")
        ->required()
        ->check(CLI::IsMember({"bloch", "determinant", "symmetry", "bz-limit"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const int threads = resolve_threads(g.threads);

    try {
        if (*spectrum) {
            validate(p);
            const auto pairs = analysed_spectrum(p);
            emit(out, export_spectrum(pairs, p, {}, format_of(format)));
        } else if (*gbz) {
            validate(p);
            const auto c = gbz_curve(p, theta_steps);
            for (const auto& d : c.diagnostics)
                if (!g.quiet) std::cerr << "note: " << d << "\n";
            emit(out, export_spectrum({}, p, c.points, format_of(format)));
        } else if (*sweep) {
            SweepSpec s;
            s.axis_x = parse_axis(ax);
            s.axis_y = parse_axis(ay);
            apply_base(s.base, base);
            try {
                validate(s);
            } catch (const std::invalid_argument& e) {
                std::cerr << "usage error: " << e.what() << "\n";
                return 2;
            }
            if (!g.quiet)
                std::cerr << "sweeping " << s.axis_x.steps * s.axis_y.steps << " cells on " << threads
                          << " thread(s)\n";
            const auto grid = run_sweep(s, threads);
            const ExportFormat f = format_of(sweep_format);
            emit(out, f == ExportFormat::csv ? export_grid_csv(grid) : export_grid_json(grid));
            if (!render.empty()) write_file(render, render_heatmap(grid));
        } else if (*tearing) {
            validate(p);
            const auto scan = critical_epsilon(p, make_grid(eps_min, eps_max, eps_step), {}, threads);
            if (!g.quiet) {
                if (scan.epsilon_star) std::cerr << "epsilon* = " << *scan.epsilon_star << "\n";
                else std::cerr << "no crossing in range\n";
            }
            emit(out, export_tearing_json(scan));
        } else if (*localize) {
            validate(p);
            const auto pairs = analysed_spectrum(p);
            std::string t = "index,re_E,im_E,rho_I,abs_beta,tag\n";
            char buf[256];
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                const auto& q = pairs[i];
                std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.6f,", i, q.energy.real(), q.energy.imag(), q.rho_I);
                t += buf;
                if (q.loc_modulus) {
                    std::snprintf(buf, sizeof buf, "%.9g", *q.loc_modulus);
                    t += buf;
                }
                t += ",";
                t += to_string(q.tag);
                t += "\n";
            }
            emit(out, t);
        } else if (*validate_cmd) {
            const auto r = run_suite(suite);
            if (!g.quiet)
                for (const auto& l : r.lines) std::cout << l << "\n";
            std::cout << r.name << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
            return r.pass ? 0 : 1;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

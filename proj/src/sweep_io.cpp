#include "nhring/sweep_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "nhring/parallel.hpp"

namespace nhring {

using ojson = nlohmann::ordered_json;

namespace {

std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* precision_name(Precision p) {
    switch (p) {
        case Precision::Double: return "double";
        case Precision::Extended: return "extended";
        case Precision::Auto: return "auto";
    }
    return "auto";
}

Precision precision_from(const std::string& s) {
    if (s == "double") return Precision::Double;
    if (s == "extended") return Precision::Extended;
    if (s == "auto") return Precision::Auto;
    throw IoError("unknown precision '" + s + "'");
}

ojson params_to(const ModelParams& p) {
    ojson j;
    j["t1"] = p.t1;
    j["t2"] = p.t2;
    j["gamma"] = p.gamma;
    j["epsilon"] = p.epsilon;
    j["t_boundary"] = p.t_boundary;
    j["n_cells"] = p.n_cells;
    return j;
}

ModelParams params_from(const ojson& j) {
    ModelParams p;
    p.t1 = j.at("t1").get<double>();
    p.t2 = j.at("t2").get<double>();
    p.gamma = j.at("gamma").get<double>();
    p.epsilon = j.at("epsilon").get<double>();
    p.t_boundary = j.at("t_boundary").get<double>();
    p.n_cells = j.at("n_cells").get<int>();
    return p;
}

ojson axis_to(const SweepAxis& a) {
    ojson j;
    j["name"] = a.name;
    j["min"] = a.min;
    j["max"] = a.max;
    j["steps"] = a.steps;
    return j;
}

SweepAxis axis_from(const ojson& j) {
    return {j.at("name").get<std::string>(), j.at("min").get<double>(), j.at("max").get<double>(),
            j.at("steps").get<int>()};
}

ojson classifier_to(const ClassifyOptions& c) {
    ojson j;
    j["rel_tol"] = c.rel_tol;
    j["min_cluster_size"] = c.min_cluster_size;
    j["tol_re"] = c.states.tol_re;
    j["tol_im"] = c.states.tol_im;
    j["wall_weight_min"] = c.states.wall_weight_min;
    j["wall_cells"] = c.states.wall_cells;
    j["isolation_factor"] = c.states.isolation_factor;
    j["precision"] = precision_name(c.precision);
    return j;
}

ClassifyOptions classifier_from(const ojson& j) {
    ClassifyOptions c;
    c.rel_tol = j.at("rel_tol").get<double>();
    c.min_cluster_size = j.at("min_cluster_size").get<int>();
    c.states.tol_re = j.at("tol_re").get<double>();
    c.states.tol_im = j.at("tol_im").get<double>();
    c.states.wall_weight_min = j.at("wall_weight_min").get<double>();
    c.states.wall_cells = j.at("wall_cells").get<int>();
    c.states.isolation_factor = j.at("isolation_factor").get<double>();
    c.precision = precision_from(j.at("precision").get<std::string>());
    return c;
}

ojson parse_or_throw(const std::string& text) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed JSON: ") + e.what());
    }
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw IoError("bad number '" + s + "'");
    }
    if (pos != s.size()) throw IoError("bad number '" + s + "'");
    return v;
}

Branch branch_from(const std::string& s) {
    for (Branch b : {Branch::eqmod_I, Branch::eqmod_II, Branch::prod_outer, Branch::prod_inner})
        if (s == to_string(b)) return b;
    throw IoError("unknown branch '" + s + "'");
}

} // namespace

double SweepAxis::value(int i) const {
    if (i == steps - 1) return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

void set_param(ModelParams& p, const std::string& name, double v) {
    if (name == "t1") p.t1 = v;
    else if (name == "t2") p.t2 = v;
    else if (name == "gamma") p.gamma = v;
    else if (name == "epsilon") p.epsilon = v;
    else if (name == "t_boundary") p.t_boundary = v;
    else throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

void validate(const SweepSpec& s) {
    for (const SweepAxis* a : {&s.axis_x, &s.axis_y}) {
        ModelParams probe;
        set_param(probe, a->name, 0.0);
        if (a->steps < 2) throw std::invalid_argument("axis '" + a->name + "' needs at least 2 steps");
        if (!(a->min < a->max)) throw std::invalid_argument("axis '" + a->name + "' needs min < max");
    }
    if (s.axis_x.name == s.axis_y.name) throw std::invalid_argument("sweep axes must differ");
    if (static_cast<long long>(s.axis_x.steps) * s.axis_y.steps > 1000000)
        throw std::invalid_argument("sweep grid exceeds 1e6 cells");
    validate(s.base);
}

PhaseDiagramGrid run_sweep(const SweepSpec& spec, int threads) {
    validate(spec);
    const int nx = spec.axis_x.steps, ny = spec.axis_y.steps;
    PhaseDiagramGrid g;
    g.spec = spec;
    g.labels.assign(static_cast<std::size_t>(nx) * ny, 0);
    g.diagnostics.assign(g.labels.size(), cell_ok);
    parallel_for(g.labels.size(), threads, [&](std::size_t idx) {
        ModelParams p = spec.base;
        set_param(p, spec.axis_x.name, spec.axis_x.value(static_cast<int>(idx % nx)));
        set_param(p, spec.axis_y.name, spec.axis_y.value(static_cast<int>(idx / nx)));
        std::uint8_t diag = cell_ok;
        if (p.epsilon != 0.0 && p.t_boundary != p.t2) diag |= cell_mixed_path;
        int label = 0;
        try {
            const auto r = classify_point(p, spec.classifier);
            label = to_int(r.label);
            if (r.anomaly) diag |= cell_anomaly;
        } catch (const std::exception&) {
            label = to_int(RegionLabel::degenerate);
            diag |= cell_solver_failure;
        }
        g.labels[idx] = label;
        g.diagnostics[idx] = diag;
    });
    return g;
}

std::string export_grid_csv(const PhaseDiagramGrid& g) {
    std::string out = "x,y,label\n";
    const int nx = g.spec.axis_x.steps, ny = g.spec.axis_y.steps;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            out += fmt9(g.spec.axis_x.value(ix));
            out += ',';
            out += fmt9(g.spec.axis_y.value(iy));
            out += ',';
            out += std::to_string(g.labels[static_cast<std::size_t>(iy) * nx + ix]);
            out += '\n';
        }
    }
    return out;
}

std::vector<GridCsvRow> parse_grid_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "x,y,label") throw IoError("grid CSV: bad header");
    std::vector<GridCsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 3) throw IoError("grid CSV: expected 3 fields in '" + line + "'");
        rows.push_back({to_double(f[0]), to_double(f[1]), static_cast<int>(to_double(f[2]))});
    }
    return rows;
}

std::string export_grid_json(const PhaseDiagramGrid& g) {
    ojson j;
    j["version"] = 1;
    ojson s;
    s["axis_x"] = axis_to(g.spec.axis_x);
    s["axis_y"] = axis_to(g.spec.axis_y);
    s["base"] = params_to(g.spec.base);
    s["classifier"] = classifier_to(g.spec.classifier);
    j["spec"] = s;
    j["labels"] = g.labels;
    j["diagnostics"] = g.diagnostics;
    return j.dump(1) + "\n";
}

PhaseDiagramGrid parse_grid_json(const std::string& text) {
    const ojson j = parse_or_throw(text);
    try {
        if (j.at("version").get<int>() != 1) throw IoError("grid JSON: unsupported version");
        PhaseDiagramGrid g;
        const ojson& s = j.at("spec");
        g.spec.axis_x = axis_from(s.at("axis_x"));
        g.spec.axis_y = axis_from(s.at("axis_y"));
        g.spec.base = params_from(s.at("base"));
        g.spec.classifier = classifier_from(s.at("classifier"));
        g.labels = j.at("labels").get<std::vector<int>>();
        g.diagnostics = j.at("diagnostics").get<std::vector<std::uint8_t>>();
        const std::size_t n = static_cast<std::size_t>(g.spec.axis_x.steps) * g.spec.axis_y.steps;
        if (g.labels.size() != n || g.diagnostics.size() != n) throw IoError("grid JSON: label count mismatch");
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("grid JSON: ") + e.what());
    }
}

Rgb region_color(int label) {
    switch (label) {
        case 1: return {0, 0, 96};
        case 2: return {120, 180, 255};
        case 3: return {0, 160, 0};
        case 4: return {255, 210, 0};
        case 5: return {200, 0, 0};
        case 6: return {40, 90, 200};
        case 7: return {255, 140, 0};
        default: return {0, 0, 0};
    }
}

std::string render_heatmap(const PhaseDiagramGrid& g) {
    const int nx = g.spec.axis_x.steps, ny = g.spec.axis_y.steps;
    std::string out = "P6\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
    out.reserve(out.size() + 3 * g.labels.size());
    for (int row = 0; row < ny; ++row) {
        const int iy = ny - 1 - row;
        for (int ix = 0; ix < nx; ++ix) {
            const Rgb c = region_color(g.labels[static_cast<std::size_t>(iy) * nx + ix]);
            out += static_cast<char>(c.r);
            out += static_cast<char>(c.g);
            out += static_cast<char>(c.b);
        }
    }
    return out;
}

std::string params_json(const ModelParams& p) { return params_to(p).dump(); }

std::string export_spectrum(const std::vector<EigenPair>& pairs, const ModelParams& p,
                            const std::vector<GbzPoint>& gbz, ExportFormat fmt) {
    const long dim = dimension(p);
    for (const auto& q : pairs)
        if (q.vector.size() != 0 && q.vector.size() != dim)
            throw std::invalid_argument("export_spectrum: eigenvector size does not match n_cells");
    if (fmt == ExportFormat::json) {
        ojson j;
        j["version"] = 1;
        j["params"] = params_to(p);
        ojson num = ojson::array();
        for (const auto& q : pairs) {
            ojson r;
            r["re_E"] = q.energy.real();
            r["im_E"] = q.energy.imag();
            r["rho_I"] = q.rho_I;
            r["abs_beta"] = q.loc_modulus ? ojson(*q.loc_modulus) : ojson(nullptr);
            r["tag"] = to_string(q.tag);
            num.push_back(r);
        }
        ojson ana = ojson::array();
        for (const auto& pt : gbz) {
            for (const cplx& b : pt.active_betas()) {
                ojson r;
                r["re_E"] = pt.energy.real();
                r["im_E"] = pt.energy.imag();
                r["re_beta"] = b.real();
                r["im_beta"] = b.imag();
                r["branch"] = to_string(pt.branch);
                r["theta"] = pt.theta;
                ana.push_back(r);
            }
        }
        j["numerical"] = num;
        j["analytical"] = ana;
        return j.dump(1) + "\n";
    }
    std::string out = "kind,re_E,im_E,rho_I,abs_beta,tag,re_beta,im_beta,branch,theta\n";
    for (const auto& q : pairs) {
        out += "numerical," + fmt17(q.energy.real()) + "," + fmt17(q.energy.imag()) + "," + fmt17(q.rho_I) + ",";
        if (q.loc_modulus) out += fmt17(*q.loc_modulus);
        out += ",";
        out += to_string(q.tag);
        out += ",,,,\n";
    }
    for (const auto& pt : gbz) {
        for (const cplx& b : pt.active_betas()) {
            out += "analytical," + fmt17(pt.energy.real()) + "," + fmt17(pt.energy.imag()) + ",,,," +
                   fmt17(b.real()) + "," + fmt17(b.imag()) + "," + to_string(pt.branch) + "," + fmt17(pt.theta) +
                   "\n";
        }
    }
    return out;
}

std::vector<SpectrumRecord> parse_spectrum(const std::string& text, ExportFormat fmt) {
    std::vector<SpectrumRecord> out;
    if (fmt == ExportFormat::json) {
        const ojson j = parse_or_throw(text);
        try {
            for (const auto& r : j.at("numerical")) {
                SpectrumRecord s;
                s.kind = "numerical";
                s.re_e = r.at("re_E").get<double>();
                s.im_e = r.at("im_E").get<double>();
                s.rho_i = r.at("rho_I").get<double>();
                if (!r.at("abs_beta").is_null()) {
                    s.has_beta_modulus = true;
                    s.beta_modulus = r.at("abs_beta").get<double>();
                }
                s.tag = r.at("tag").get<std::string>();
                out.push_back(s);
            }
            for (const auto& r : j.at("analytical")) {
                SpectrumRecord s;
                s.kind = "analytical";
                s.re_e = r.at("re_E").get<double>();
                s.im_e = r.at("im_E").get<double>();
                s.re_beta = r.at("re_beta").get<double>();
                s.im_beta = r.at("im_beta").get<double>();
                s.branch = to_string(branch_from(r.at("branch").get<std::string>()));
                s.theta = r.at("theta").get<double>();
                out.push_back(s);
            }
        } catch (const nlohmann::json::exception& e) {
            throw IoError(std::string("spectrum JSON: ") + e.what());
        }
        return out;
    }
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "kind,re_E,im_E,rho_I,abs_beta,tag,re_beta,im_beta,branch,theta")
        throw IoError("spectrum CSV: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 10) throw IoError("spectrum CSV: expected 10 fields in '" + line + "'");
        SpectrumRecord s;
        s.kind = f[0];
        s.re_e = to_double(f[1]);
        s.im_e = to_double(f[2]);
        if (s.kind == "numerical") {
            s.rho_i = to_double(f[3]);
            if (!f[4].empty()) {
                s.has_beta_modulus = true;
                s.beta_modulus = to_double(f[4]);
            }
            s.tag = f[5];
        } else if (s.kind == "analytical") {
            s.re_beta = to_double(f[6]);
            s.im_beta = to_double(f[7]);
            s.branch = to_string(branch_from(f[8]));
            s.theta = to_double(f[9]);
        } else {
            throw IoError("spectrum CSV: unknown record kind '" + s.kind + "'");
        }
        out.push_back(s);
    }
    return out;
}

std::string export_tearing_json(const TearingScan& scan) {
    ojson j;
    j["version"] = 1;
    j["params_base"] = params_to(scan.params_base);
    j["epsilon_grid"] = scan.epsilon_grid;
    ojson d = ojson::array();
    for (std::size_t i = 0; i < scan.delta_values.size(); ++i)
        d.push_back(scan.applicable[i] ? ojson(scan.delta_values[i]) : ojson(nullptr));
    j["delta_values"] = d;
    j["epsilon_star"] = scan.epsilon_star ? ojson(*scan.epsilon_star) : ojson(nullptr);
    return j.dump(1) + "\n";
}

TearingScan parse_tearing_json(const std::string& text) {
    const ojson j = parse_or_throw(text);
    try {
        TearingScan s;
        s.params_base = params_from(j.at("params_base"));
        s.epsilon_grid = j.at("epsilon_grid").get<std::vector<double>>();
        for (const auto& v : j.at("delta_values")) {
            s.applicable.push_back(!v.is_null());
            s.delta_values.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
        }
        if (!j.at("epsilon_star").is_null()) s.epsilon_star = j.at("epsilon_star").get<double>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("tearing JSON: ") + e.what());
    }
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace nhring

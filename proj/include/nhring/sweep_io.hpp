#pragma once
// Phase-diagram sweeps, file formats (CSV, JSON, P6) and spectrum export.

#include <cstdint>
#include <string>
#include <vector>

#include "nhring/classify.hpp"
#include "nhring/gbz.hpp"
#include "nhring/model.hpp"
#include "nhring/spectral.hpp"
#include "nhring/tearing.hpp"

namespace nhring {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepAxis {
    std::string name;  // t1, t2, gamma, epsilon, t_boundary
    double min = 0.0;
    double max = 1.0;
    int steps = 2;

    /// Uniform, both ends included.
    double value(int i) const;
};

struct SweepSpec {
    SweepAxis axis_x;
    SweepAxis axis_y;
    ModelParams base;
    ClassifyOptions classifier{};
};

void validate(const SweepSpec& s);

/// Sets the named parameter; throws on unknown names.
void set_param(ModelParams& p, const std::string& name, double v);

/// Per-cell diagnostics bits.
enum : std::uint8_t {
    cell_ok = 0,
    cell_solver_failure = 1,
    cell_anomaly = 2,
    cell_mixed_path = 4,  // epsilon != 0 and t_boundary != t2 (informational)
};

struct PhaseDiagramGrid {
    SweepSpec spec;
    std::vector<int> labels;  // index = iy * steps_x + ix
    std::vector<std::uint8_t> diagnostics;
};

PhaseDiagramGrid run_sweep(const SweepSpec& spec, int threads = 1);

std::string export_grid_csv(const PhaseDiagramGrid& g);
std::string export_grid_json(const PhaseDiagramGrid& g);
PhaseDiagramGrid parse_grid_json(const std::string& text);

struct GridCsvRow {
    double x = 0.0;
    double y = 0.0;
    int label = 0;
};
std::vector<GridCsvRow> parse_grid_csv(const std::string& text);

/// P6 pixmap, one pixel per cell; the top row is the largest y.
std::string render_heatmap(const PhaseDiagramGrid& g);

struct Rgb {
    unsigned char r, g, b;
};
Rgb region_color(int label);

enum class ExportFormat { csv, json };

/// Numerical rows (Re E, Im E, rho_I, |beta|, tag) and analytical rows
/// (Re E, Im E, Re beta, Im beta, branch, theta); one analytical row per
/// C_beta value.
std::string export_spectrum(const std::vector<EigenPair>& pairs, const ModelParams& p,
                            const std::vector<GbzPoint>& gbz, ExportFormat fmt);

struct SpectrumRecord {
    std::string kind;  // numerical | analytical
    double re_e = 0.0, im_e = 0.0;
    double rho_i = 0.0;
    bool has_beta_modulus = false;
    double beta_modulus = 0.0;
    std::string tag;
    double re_beta = 0.0, im_beta = 0.0;
    std::string branch;
    double theta = 0.0;
};
std::vector<SpectrumRecord> parse_spectrum(const std::string& text, ExportFormat fmt);

std::string export_tearing_json(const TearingScan& scan);
TearingScan parse_tearing_json(const std::string& text);

std::string params_json(const ModelParams& p);

void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

} // namespace nhring

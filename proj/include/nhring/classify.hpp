#pragma once
// Spectral gaps, the seven phase regions, and closed-form boundary predicates.

#include <string>
#include <vector>

#include "nhring/model.hpp"
#include "nhring/spectral.hpp"

namespace nhring {

struct GapReport {
    bool real_gap_open = false;
    double real_gap_width = 0.0;
    bool imag_gap_open = false;
    double imag_gap_width = 0.0;
    int component_count = 1;
};

/// Labels serialize to 1..7; degenerate is 0.
enum class RegionLabel { degenerate = 0, I = 1, II = 2, III = 3, IV = 4, V = 5, VI = 6, VII = 7 };

const char* to_string(RegionLabel r);
int to_int(RegionLabel r);
RegionLabel region_from_int(int v);

struct SpecialStateSummary {
    int topological_edge = 0;
    int bound = 0;
};

SpecialStateSummary summarize(const std::vector<EigenPair>& pairs);

/// Gap test: the real gap is open when no Re E falls inside a symmetric
/// interval around 0 wider than rel_tol * spectral radius.
GapReport detect_gaps(const std::vector<cplx>& energies, double rel_tol = 1e-3);

/// Single-linkage clusters with link = factor * median nearest-neighbour spacing.
std::vector<int> cluster_labels(const std::vector<cplx>& energies, double link_factor = 5.0);
int count_components(const std::vector<cplx>& energies, double link_factor = 5.0);

/// Removes points whose cluster has fewer than `min_size` members. Finite-size
/// outliers (isolated pairs far from every arc) otherwise close bulk gaps.
std::vector<cplx> drop_small_clusters(const std::vector<cplx>& energies, int min_size,
                                      double link_factor = 5.0);

/// t1 + gamma = 0 or t1 - gamma = 0 (exceptional lines of the bulk).
bool is_degenerate_line(const ModelParams& p);

/// Pure mapping from gaps and tags to a region. `anomaly` (optional) is set
/// when the inputs are inconsistent; the label is then I.
RegionLabel classify_region(const ModelParams& p, const GapReport& report, const SpecialStateSummary& tags,
                            bool* anomaly = nullptr, std::string* warning = nullptr);

struct PhaseBoundaries {
    double obc_margin = 0.0;  // sqrt(t2^2 + gamma^2) - |t1|
    bool inside_obc_region = false;
    double pbc_margin_plus = 0.0;   // |t2 + gamma| - |t1|
    double pbc_margin_minus = 0.0;  // |t1| - |t2 - gamma|
    bool inside_pbc_region = false;  // |t2 - gamma| < |t1| < |t2 + gamma|
    double tearing_margin = 0.0;     // |epsilon| - |gamma|
    bool torn = false;               // |epsilon| > |gamma|
};

PhaseBoundaries analytic_phase_boundaries(const ModelParams& p);

struct PointClassification {
    RegionLabel label = RegionLabel::degenerate;
    GapReport gaps;
    SpecialStateSummary tags;
    bool anomaly = false;
    int isolated = 0;  // states left out of the gap test as small clusters
    Precision precision = Precision::Double;
};

struct ClassifyOptions {
    double rel_tol = 1e-3;
    int min_cluster_size = 3;
    SpecialStateConfig states{};
    Precision precision = Precision::Auto;
};

/// Full pipeline for one parameter point: diagonalize, tag special states,
/// drop them, measure gaps, classify.
PointClassification classify_point(const ModelParams& p, const ClassifyOptions& opt = {});

} // namespace nhring

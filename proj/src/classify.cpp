#include "nhring/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "nhring/gbz.hpp"

namespace nhring {

const char* to_string(RegionLabel r) {
    switch (r) {
        case RegionLabel::degenerate: return "degenerate";
        case RegionLabel::I: return "I";
        case RegionLabel::II: return "II";
        case RegionLabel::III: return "III";
        case RegionLabel::IV: return "IV";
        case RegionLabel::V: return "V";
        case RegionLabel::VI: return "VI";
        case RegionLabel::VII: return "VII";
    }
    return "?";
}

int to_int(RegionLabel r) { return static_cast<int>(r); }

RegionLabel region_from_int(int v) {
    if (v < 0 || v > 7) throw std::invalid_argument("region label out of range: " + std::to_string(v));
    return static_cast<RegionLabel>(v);
}

SpecialStateSummary summarize(const std::vector<EigenPair>& pairs) {
    SpecialStateSummary s;
    for (const auto& q : pairs) {
        if (q.tag == StateTag::topological_edge) ++s.topological_edge;
        if (q.tag == StateTag::bound) ++s.bound;
    }
    return s;
}

std::vector<int> cluster_labels(const std::vector<cplx>& e, double link_factor) {
    const std::size_t n = e.size();
    const double link = link_factor * median_spacing(e);
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(e[i] - e[j]) <= link) parent[find(i)] = find(j);
    // number clusters by first appearance so labels are input-order stable
    std::vector<int> id(n, -1), out(n);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (id[r] < 0) id[r] = next++;
        out[i] = id[r];
    }
    return out;
}

int count_components(const std::vector<cplx>& e, double link_factor) {
    const auto lab = cluster_labels(e, link_factor);
    return lab.empty() ? 0 : *std::max_element(lab.begin(), lab.end()) + 1;
}

std::vector<cplx> drop_small_clusters(const std::vector<cplx>& e, int min_size, double link_factor) {
    if (min_size <= 1 || e.empty()) return e;
    const auto lab = cluster_labels(e, link_factor);
    std::vector<int> size(*std::max_element(lab.begin(), lab.end()) + 1, 0);
    for (int l : lab) ++size[l];
    std::vector<cplx> out;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (size[lab[i]] >= min_size) out.push_back(e[i]);
    return out.empty() ? e : out;
}

GapReport detect_gaps(const std::vector<cplx>& energies, double rel_tol) {
    if (energies.empty()) throw std::invalid_argument("detect_gaps: empty spectrum");
    double radius = 0.0, min_re = std::numeric_limits<double>::infinity(), min_im = min_re;
    for (const cplx& z : energies) {
        radius = std::max(radius, std::abs(z));
        min_re = std::min(min_re, std::abs(z.real()));
        min_im = std::min(min_im, std::abs(z.imag()));
    }
    GapReport r;
    const double thresh = rel_tol * radius;
    if (2.0 * min_re > thresh) {
        r.real_gap_open = true;
        r.real_gap_width = 2.0 * min_re;
    }
    if (2.0 * min_im > thresh) {
        r.imag_gap_open = true;
        r.imag_gap_width = 2.0 * min_im;
    }
    r.component_count = std::max(1, count_components(energies));
    return r;
}

bool is_degenerate_line(const ModelParams& p) {
    const double s = std::max({1.0, std::abs(p.t1), std::abs(p.gamma)});
    return std::abs(p.t1 + p.gamma) < 1e-12 * s || std::abs(p.t1 - p.gamma) < 1e-12 * s;
}

RegionLabel classify_region(const ModelParams& p, const GapReport& g, const SpecialStateSummary& tags,
                            bool* anomaly, std::string* warning) {
    if (anomaly) *anomaly = false;
    if (is_degenerate_line(p)) return RegionLabel::degenerate;
    auto flag = [&](const char* msg) {
        if (anomaly) *anomaly = true;
        if (warning) *warning = msg;
        return RegionLabel::I;
    };
    const bool re = g.real_gap_open, im = g.imag_gap_open;
    const bool topo = tags.topological_edge > 0, bound = tags.bound > 0;
    if (!re && !im) {
        if (topo || bound) return flag("special states tagged in a gapless spectrum");
        return RegionLabel::I;
    }
    if (re && im) return topo ? RegionLabel::V : RegionLabel::IV;
    if (im) return RegionLabel::III;
    if (topo) return RegionLabel::VII;
    if (bound) return RegionLabel::VI;
    return RegionLabel::II;
}

PhaseBoundaries analytic_phase_boundaries(const ModelParams& p) {
    PhaseBoundaries b;
    const double at1 = std::abs(p.t1);
    b.obc_margin = std::sqrt(p.t2 * p.t2 + p.gamma * p.gamma) - at1;
    b.inside_obc_region = b.obc_margin > 0.0;
    b.pbc_margin_plus = std::abs(p.t2 + p.gamma) - at1;
    b.pbc_margin_minus = at1 - std::abs(p.t2 - p.gamma);
    b.inside_pbc_region = b.pbc_margin_plus > 0.0 && b.pbc_margin_minus > 0.0;
    b.tearing_margin = std::abs(p.epsilon) - std::abs(p.gamma);
    b.torn = b.tearing_margin > 0.0;
    return b;
}

PointClassification classify_point(const ModelParams& p, const ClassifyOptions& opt) {
    validate(p);
    PointClassification out;
    if (is_degenerate_line(p)) return out;
    const ComplexMatrix H = build_hamiltonian(p);
    std::vector<EigenPair> pairs = eigendecompose(H, opt.precision);
    out.precision = last_precision_used();
    std::vector<cplx> reference;
    if (p.t_boundary != p.t2) reference = gbz_curve(p).energy_cloud;
    pairs = detect_special_states(std::move(pairs), p, opt.states, reference);
    out.tags = summarize(pairs);
    std::vector<cplx> bulk;
    for (const auto& q : pairs)
        if (q.tag == StateTag::bulk) bulk.push_back(q.energy);
    if (bulk.empty()) throw std::runtime_error("classify_point: every state was tagged special");
    const std::size_t before = bulk.size();
    bulk = drop_small_clusters(bulk, opt.min_cluster_size);
    out.isolated = static_cast<int>(before - bulk.size());
    out.gaps = detect_gaps(bulk, opt.rel_tol);
    out.label = classify_region(p, out.gaps, out.tags, &out.anomaly);
    return out;
}

} // namespace nhring

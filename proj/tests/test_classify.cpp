#include <doctest.h>

#include <cmath>

#include "nhring/classify.hpp"
#include "nhring/model.hpp"

using namespace nhring;

namespace {

ModelParams make(double t1, double g, double eps) {
    ModelParams p;
    p.t1 = t1;
    p.gamma = g;
    p.epsilon = eps;
    return p;
}

} // namespace

TEST_CASE("gap detection on the Hermitian SSH ring") {
    const auto p = make(2.0, 0.0, 0.0);
    const auto r = detect_gaps(eigenvalues(build_hamiltonian(p)));
    CHECK(r.real_gap_open);
    // brute force over the k grid: min |E| = |t1 - t2| at k = pi
    double lo = 1e9;
    for (int j = 0; j < 60; ++j) {
        const double k = 2.0 * 3.14159265358979323846 * j / 60;
        lo = std::min(lo, std::abs(std::sqrt(5.0 + 4.0 * std::cos(k))));
    }
    CHECK(std::abs(r.real_gap_width - 2.0 * lo) < 0.05);
    CHECK(std::abs(r.real_gap_width - 2.0) < 0.05);
    CHECK(!r.imag_gap_open);
}

TEST_CASE("gap detection: closed loop at zero dissipation, four arcs at strong") {
    auto r = detect_gaps(eigenvalues(build_hamiltonian(make(1.7, 1.6, 0.0))));
    CHECK(!r.real_gap_open);
    CHECK(!r.imag_gap_open);
    const auto c = classify_point(make(1.7, 1.6, 2.5));
    CHECK(c.gaps.real_gap_open);
    CHECK(c.gaps.imag_gap_open);
    CHECK(c.gaps.component_count == 4);
}

TEST_CASE("gap detection is invariant under spectral relabelings") {
    const auto e = eigenvalues(build_hamiltonian(make(0.7, 2.0 / 3.0, 0.8)));
    std::vector<cplx> neg, cj;
    for (auto z : e) {
        neg.push_back(-z);
        cj.push_back(std::conj(z));
    }
    const auto a = detect_gaps(e), b = detect_gaps(neg), c = detect_gaps(cj);
    CHECK(a.real_gap_open == b.real_gap_open);
    CHECK(a.imag_gap_open == c.imag_gap_open);
    CHECK(a.real_gap_width == doctest::Approx(b.real_gap_width));
    CHECK(a.imag_gap_width == doctest::Approx(c.imag_gap_width));
    CHECK(a.component_count == c.component_count);
    CHECK_THROWS_AS(detect_gaps({}), std::invalid_argument);
}

TEST_CASE("classify_region mapping table") {
    const auto p = make(1.2, 0.5, 1.0);
    GapReport none, re, im, both;
    re.real_gap_open = true;
    im.imag_gap_open = true;
    both.real_gap_open = both.imag_gap_open = true;
    SpecialStateSummary zero, topo, bound;
    topo.topological_edge = 2;
    bound.bound = 2;
    CHECK(classify_region(p, none, zero) == RegionLabel::I);
    CHECK(classify_region(p, re, zero) == RegionLabel::II);
    CHECK(classify_region(p, re, bound) == RegionLabel::VI);
    CHECK(classify_region(p, re, topo) == RegionLabel::VII);
    CHECK(classify_region(p, im, zero) == RegionLabel::III);
    CHECK(classify_region(p, both, zero) == RegionLabel::IV);
    CHECK(classify_region(p, both, topo) == RegionLabel::V);
    bool anomaly = false;
    CHECK(classify_region(p, none, topo, &anomaly) == RegionLabel::I);
    CHECK(anomaly);
    CHECK(classify_region(make(1.0, 1.0, 0.5), both, topo) == RegionLabel::degenerate);
}

TEST_CASE("label serialization") {
    CHECK(to_int(RegionLabel::degenerate) == 0);
    CHECK(to_int(RegionLabel::V) == 5);
    for (int i = 0; i <= 7; ++i) CHECK(to_int(region_from_int(i)) == i);
    CHECK_THROWS(region_from_int(8));
}

TEST_CASE("closed-form phase boundaries") {
    ModelParams p = make(std::sqrt(1.0 + 1.6 * 1.6), 1.6, 2.5);
    CHECK(analytic_phase_boundaries(p).obc_margin == doctest::Approx(0.0));
    p.t1 = 1.7;
    const auto b = analytic_phase_boundaries(p);
    CHECK(b.inside_obc_region);
    CHECK(b.obc_margin == doctest::Approx(std::sqrt(3.56) - 1.7));
    CHECK(b.torn);
    p.epsilon = 1.0;
    CHECK(!analytic_phase_boundaries(p).torn);
}

TEST_CASE("phase paths along increasing dissipation") {
    CHECK(classify_point(make(1.7, 1.6, 0.0)).label == RegionLabel::I);
    CHECK(classify_point(make(1.7, 1.6, 1.44)).label == RegionLabel::III);
    CHECK(classify_point(make(1.7, 1.6, 2.5)).label == RegionLabel::V);
    CHECK(classify_point(make(0.7, 2.0 / 3.0, 0.4)).label == RegionLabel::I);
    CHECK(classify_point(make(0.7, 2.0 / 3.0, 0.61)).label == RegionLabel::II);
    CHECK(classify_point(make(0.7, 2.0 / 3.0, 0.8)).label == RegionLabel::V);
}

TEST_CASE("single-linkage clusters") {
    std::vector<cplx> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(cplx(0.1 * i, 0.0));
    for (int i = 0; i < 10; ++i) pts.push_back(cplx(5.0 + 0.1 * i, 0.0));
    pts.push_back(cplx(0.0, 3.0));
    CHECK(count_components(pts) == 3);
    CHECK(drop_small_clusters(pts, 3).size() == 20);
}

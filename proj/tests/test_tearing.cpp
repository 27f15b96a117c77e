#include <doctest.h>

#include <cmath>

#include "nhring/classify.hpp"
#include "nhring/model.hpp"
#include "nhring/spectral.hpp"
#include "nhring/tearing.hpp"

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

TEST_CASE("closure gap on both sides of the transition") {
    const auto torn = delta_gap(make(0.7, 2.0 / 3.0, 0.70));
    REQUIRE(torn.has_value());
    CHECK(*torn == 0.0);
    const auto open = delta_gap(make(0.7, 2.0 / 3.0, 0.40));
    REQUIRE(open.has_value());
    CHECK(*open > 0.0);
    // not yet four components below the transition
    CHECK(classify_point(make(0.7, 2.0 / 3.0, 0.40)).gaps.component_count < 4);
}

TEST_CASE("closure gap is stable under theta refinement away from the transition") {
    for (double eps : {0.40, 0.50}) {
        DeltaOptions coarse, fine;
        fine.theta_steps = 1024;
        const double a = *delta_gap(make(0.7, 2.0 / 3.0, eps), coarse);
        const double b = *delta_gap(make(0.7, 2.0 / 3.0, eps), fine);
        CHECK(std::abs(a - b) < 0.1 * a);
    }
}

TEST_CASE("critical epsilon for three parameter sets") {
    struct Case {
        double t1, g, lo, hi;
    };
    for (const Case& c : {Case{0.7, 2.0 / 3.0, 0.3, 1.0}, Case{1.7, 1.6, 1.0, 2.0}, Case{1.2, 1.0, 0.5, 1.5}}) {
        const auto scan = critical_epsilon(make(c.t1, c.g, 0.0), make_grid(c.lo, c.hi, 0.01));
        REQUIRE(scan.epsilon_star.has_value());
        CHECK(std::abs(*scan.epsilon_star - c.g) <= 0.01 + 1e-12);
        // non-increasing along the grid
        double prev = INFINITY;
        for (std::size_t i = 0; i < scan.delta_values.size(); ++i) {
            REQUIRE(scan.applicable[i]);
            CHECK(scan.delta_values[i] <= prev + 1e-12);
            prev = scan.delta_values[i];
        }
    }
}

TEST_CASE("sign of gamma does not matter") {
    const auto grid = make_grid(0.5, 0.9, 0.05);
    const auto a = critical_epsilon(make(0.7, 2.0 / 3.0, 0.0), grid);
    const auto b = critical_epsilon(make(0.7, -2.0 / 3.0, 0.0), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a.delta_values[i] == doctest::Approx(b.delta_values[i]).epsilon(1e-9));
}

TEST_CASE("critical epsilon lines up with the wall-mode crossover and four components") {
    const double g = 2.0 / 3.0;
    const auto scan = critical_epsilon(make(0.7, g, 0.0), make_grid(0.60, 0.80, 0.01));
    REQUIRE(scan.epsilon_star.has_value());
    double first_edge = NAN, first_four = NAN, prev_weight = 0.0;
    bool rising = true;
    for (double eps : scan.epsilon_grid) {
        const auto p = make(0.7, g, eps);
        const auto c = classify_point(p);
        if (std::isnan(first_edge) && c.tags.topological_edge > 0) first_edge = eps;
        if (std::isnan(first_four) && c.gaps.component_count == 4) first_four = eps;
        // wall weight of the real-axis pair that becomes the wall mode
        double w = 0.0;
        for (const auto& q : eigendecompose(build_hamiltonian(p)))
            if (std::abs(q.energy.imag()) < 1e-6) w = std::max(w, wall_weight(q, p.n_cells));
        if (eps >= *scan.epsilon_star) {
            rising &= w >= prev_weight - 1e-9;
            prev_weight = w;
        }
    }
    CHECK(rising);
    // the pair delocalizes as the transition is approached, so a fixed
    // weight threshold tags it a few grid steps late
    CHECK(first_edge >= *scan.epsilon_star);
    CHECK(first_edge - *scan.epsilon_star <= 0.1);
    CHECK(std::abs(first_four - *scan.epsilon_star) <= 0.03 + 1e-9);
}

TEST_CASE("scan rejects unordered grids") {
    CHECK_THROWS_AS(critical_epsilon(make(0.7, 0.5, 0.0), {0.5, 0.4}), std::invalid_argument);
    const auto g = make_grid(0.3, 1.0, 0.01);
    CHECK(g.size() == 71);
    CHECK(g.back() == doctest::Approx(1.0));
}

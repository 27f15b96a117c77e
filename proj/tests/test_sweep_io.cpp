#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "nhring/gbz.hpp"
#include "nhring/sweep_io.hpp"
#include "oracles.hpp"

using namespace nhring;

namespace {

PhaseDiagramGrid small_grid(std::vector<int> labels, int nx, int ny) {
    PhaseDiagramGrid g;
    g.spec.axis_x = {"t1", 0.5, 1.5, nx};
    g.spec.axis_y = {"gamma", -1.0, 1.0, ny};
    g.labels = std::move(labels);
    g.diagnostics.assign(g.labels.size(), 0);
    return g;
}

} // namespace

TEST_CASE("grid CSV layout") {
    const auto g = small_grid({1, 2, 3, 4}, 2, 2);
    const std::string csv = export_grid_csv(g);
    CHECK(csv == "x,y,label\n0.5,-1,1\n1.5,-1,2\n0.5,1,3\n1.5,1,4\n");
    const auto rows = parse_grid_csv(csv);
    REQUIRE(rows.size() == 4);
    CHECK(rows[3].label == 4);
    CHECK_THROWS_AS(parse_grid_csv("a,b\n"), IoError);
}

TEST_CASE("grid JSON round trip") {
    auto g = small_grid({0, 5, 7, 2, 1, 3}, 3, 2);
    g.spec.base.epsilon = 0.1 + 0.2;  // not exactly representable
    g.spec.classifier.rel_tol = 1.0 / 3.0;
    g.diagnostics[2] = cell_anomaly | cell_mixed_path;
    const std::string text = export_grid_json(g);
    const auto back = parse_grid_json(text);
    CHECK(back.labels == g.labels);
    CHECK(back.diagnostics == g.diagnostics);
    CHECK(back.spec.base.epsilon == g.spec.base.epsilon);
    CHECK(back.spec.classifier.rel_tol == g.spec.classifier.rel_tol);
    CHECK(back.spec.axis_x.name == "t1");
    CHECK(export_grid_json(back) == text);
    CHECK(text.find("\"version\": 1") != std::string::npos);
    CHECK_THROWS_AS(parse_grid_json("{"), IoError);
}

TEST_CASE("heatmap bytes") {
    const auto g = small_grid({1, 2, 3, 4}, 2, 2);
    const std::string ppm = render_heatmap(g);
    const std::string header = "P6\n2 2\n255\n";
    REQUIRE(ppm.size() == header.size() + 12);
    CHECK(ppm.substr(0, header.size()) == header);
    // top row is the larger y: labels 3, 4
    CHECK(static_cast<unsigned char>(ppm[header.size() + 1]) == 160);
    CHECK(static_cast<unsigned char>(ppm[header.size() + 3]) == 255);
    const auto red = small_grid(std::vector<int>(6, 5), 3, 2);
    const std::string r = render_heatmap(red);
    for (std::size_t i = std::string("P6\n3 2\n255\n").size(); i < r.size(); i += 3) {
        CHECK(static_cast<unsigned char>(r[i]) == 200);
        CHECK(r[i + 1] == 0);
        CHECK(r[i + 2] == 0);
    }
}

TEST_CASE("sweep spec validation") {
    SweepSpec s;
    s.axis_x = {"t1", 0.0, 1.0, 3};
    s.axis_y = {"t1", 0.0, 1.0, 3};
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s.axis_y = {"kappa", 0.0, 1.0, 3};
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s.axis_y = {"gamma", 1.0, 0.0, 3};
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s.axis_y = {"gamma", 0.0, 1.0, 1};
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
}

TEST_CASE("3x3 sweeps around (1.7, 1.6)") {
    SweepSpec s;
    s.axis_x = {"t1", 1.65, 1.75, 3};
    s.axis_y = {"gamma", 1.55, 1.65, 3};
    s.base.epsilon = 2.5;
    auto g = run_sweep(s, 2);
    CHECK(g.labels[4] == to_int(RegionLabel::V));
    s.base.epsilon = 0.0;
    g = run_sweep(s, 2);
    CHECK(g.labels[4] == to_int(RegionLabel::I));
}

TEST_CASE("sweep is independent of thread count") {
    SweepSpec s;
    s.axis_x = {"t1", 0.2, 2.2, 6};
    s.axis_y = {"epsilon", 0.0, 2.0, 5};
    s.base.gamma = 0.9;
    s.base.n_cells = 6;
    const auto a = export_grid_json(run_sweep(s, 1));
    const auto b = export_grid_json(run_sweep(s, 3));
    CHECK(a == b);
}

TEST_CASE("sweep CSV re-import reproduces labels at random cells") {
    SweepSpec s;
    s.axis_x = {"gamma", 0.2, 2.0, 8};
    s.axis_y = {"epsilon", 0.0, 2.5, 8};
    s.base.t1 = 1.7;
    s.base.n_cells = 10;
    const auto rows = parse_grid_csv(export_grid_csv(run_sweep(s, 2)));
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
    for (int t = 0; t < 10; ++t) {
        const auto& r = rows[pick(rng)];
        ModelParams p = s.base;
        p.gamma = r.x;
        p.epsilon = r.y;
        CHECK(to_int(classify_point(p, s.classifier).label) == r.label);
    }
}

TEST_CASE("spectrum export") {
    ModelParams p;
    p.t1 = 1.7;
    p.gamma = 1.6;
    p.epsilon = 2.5;
    SUBCASE("empty inputs give a header-only file") {
        const std::string csv = export_spectrum({}, p, {}, ExportFormat::csv);
        CHECK(csv == "kind,re_E,im_E,rho_I,abs_beta,tag,re_beta,im_beta,branch,theta\n");
        CHECK(parse_spectrum(csv, ExportFormat::csv).empty());
        CHECK(parse_spectrum(export_spectrum({}, p, {}, ExportFormat::json), ExportFormat::json).empty());
    }
    SUBCASE("full export round trips") {
        auto pairs = detect_special_states(eigendecompose(build_hamiltonian(p)), p);
        pairs[0].loc_modulus = 0.25;
        const auto c = gbz_curve(p);
        for (ExportFormat f : {ExportFormat::csv, ExportFormat::json}) {
            const auto recs = parse_spectrum(export_spectrum(pairs, p, c.points, f), f);
            std::vector<cplx> num, ana;
            for (const auto& r : recs) {
                if (r.kind == "numerical" && r.tag == "bulk") num.push_back({r.re_e, r.im_e});
                if (r.kind == "analytical") ana.push_back({r.re_e, r.im_e});
            }
            std::size_t n_num = 0;
            for (const auto& r : recs) n_num += r.kind == "numerical";
            CHECK(n_num == 120);
            CHECK(recs[0].has_beta_modulus);
            CHECK(recs[0].beta_modulus == 0.25);
            CHECK(recs[0].re_e == pairs[0].energy.real());
            CHECK(oracle::hausdorff(num, ana) < 0.05);
        }
    }
    SUBCASE("mismatched sizes are rejected") {
        EigenPair q;
        q.vector = Eigen::VectorXcd::Zero(8);
        CHECK_THROWS_AS(export_spectrum({q}, p, {}, ExportFormat::csv), std::invalid_argument);
    }
}

TEST_CASE("tearing scan JSON round trip") {
    TearingScan s;
    s.params_base.t1 = 0.7;
    s.epsilon_grid = {0.1, 0.2, 0.3};
    s.delta_values = {1.5, NAN, 0.0};
    s.applicable = {true, false, true};
    s.epsilon_star = 0.3;
    const auto back = parse_tearing_json(export_tearing_json(s));
    CHECK(back.epsilon_grid == s.epsilon_grid);
    CHECK(back.applicable == s.applicable);
    CHECK(back.delta_values[0] == 1.5);
    CHECK(back.epsilon_star == s.epsilon_star);
}

TEST_CASE("file errors carry the path") {
    try {
        read_file("/nonexistent/dir/x.csv");
        FAIL("expected an error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/dir/x.csv") != std::string::npos);
    }
}

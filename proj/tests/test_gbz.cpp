#include <doctest.h>

#include <cmath>
#include <random>

#include "nhring/gbz.hpp"
#include "nhring/spectral.hpp"
#include "oracles.hpp"

using namespace nhring;

namespace {

ModelParams make(double t1, double g, double eps, int n = 30) {
    ModelParams p;
    p.t1 = t1;
    p.gamma = g;
    p.epsilon = eps;
    p.n_cells = n;
    return p;
}

} // namespace

TEST_CASE("characteristic roots solve the quadratic and are ordered") {
    const auto k = characteristic_coeffs(make(1.7, 1.6, 0.0));
    CHECK(k.a == doctest::Approx(0.1));
    CHECK(k.b == doctest::Approx(3.3));
    CHECK(k.c == doctest::Approx(1.7 * 1.7 - 1.6 * 1.6 + 1.0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 50; ++i) {
        const cplx e(u(rng), u(rng));
        const auto [b1, b2] = characteristic_roots(e, k);
        for (cplx b : {b1, b2}) CHECK(std::abs(k.b * b * b + (k.c - e * e) * b + k.a) < 1e-9);
        CHECK(std::abs(b1) <= std::abs(b2) + 1e-15);
        CHECK(std::abs(b1 * b2 - k.a / k.b) < 1e-12);
    }
    CHECK_THROWS_AS(characteristic_roots(1.0, characteristic_coeffs(make(1.0, -1.0, 0.0))), GbzError);
}

TEST_CASE("polynomial roots") {
    // (z - 1)(z + 2)(z - i)(z - 0.5)
    std::vector<cplx> want = {1.0, -2.0, cplx(0, 1), 0.5};
    std::vector<cplx> c = {1.0};
    for (cplx r : want) {
        std::vector<cplx> n(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            n[i] += c[i];
            n[i + 1] -= c[i] * r;
        }
        c = n;
    }
    CHECK(oracle::hausdorff(polynomial_roots(c), want) < 1e-12);
    // leading zeros reduce the degree
    c.insert(c.begin(), 0.0);
    CHECK(polynomial_roots(c).size() == 4);
}

TEST_CASE("equal-modulus branch: the constructed chain has |beta1| = |beta2|") {
    const auto p = make(1.7, 1.6, 2.5);
    for (double th : {0.3, 1.7, 4.0}) {
        for (const auto& pt : solve_equal_modulus_branch(p, Chain::II, th)) {
            CHECK(std::abs(std::abs(pt.betas[2]) - std::abs(pt.betas[3])) < 1e-9);
            // f(beta) = f(beta e^{i theta}) for the pair
            const auto k = characteristic_coeffs(p);
            const cplx es = pt.energy + cplx(0, p.epsilon);
            CHECK(std::abs(f_beta(k, pt.betas[2]) - es * es) < 1e-9);
        }
        for (const auto& pt : solve_equal_modulus_branch(p, Chain::I, th))
            CHECK(std::abs(std::abs(pt.betas[0]) - std::abs(pt.betas[1])) < 1e-9);
    }
}

TEST_CASE("product branch candidates satisfy both chain equations") {
    const auto p = make(1.7, 1.6, 1.0);
    const auto k = characteristic_coeffs(p);
    for (double th : {0.2, 2.0, 5.5}) {
        const auto cands = solve_product_one_branch(p, ProductPair::outer, th);
        CHECK(!cands.empty());
        for (const auto& pt : cands) {
            const cplx ei = pt.energy - cplx(0, 1.0), eii = pt.energy + cplx(0, 1.0);
            for (int i = 0; i < 2; ++i) CHECK(std::abs(f_beta(k, pt.betas[i]) - ei * ei) < 1e-8);
            for (int i = 2; i < 4; ++i) CHECK(std::abs(f_beta(k, pt.betas[i]) - eii * eii) < 1e-8);
        }
    }
}

TEST_CASE("screening inequalities hold on accepted points") {
    for (double eps : {1.0, 2.5}) {
        const auto c = gbz_curve(make(1.7, 1.6, eps));
        REQUIRE(!c.points.empty());
        for (const auto& pt : c.points) {
            const auto [g1, g2, g3, g4] = pt.g;
            switch (pt.branch) {
                case Branch::eqmod_II:
                    CHECK((g1 >= g2 - 1e-9 && g2 >= 1 - 1e-9 && g3 <= 1 + 1e-9 && g4 <= g3 + 1e-9));
                    break;
                case Branch::eqmod_I:
                    CHECK((g1 >= g3 - 1e-9 && g3 >= 1 - 1e-9 && g2 <= 1 + 1e-9 && g4 <= g2 + 1e-9));
                    break;
                case Branch::prod_outer: CHECK(std::abs(g1 - 1) < 1e-6); break;
                case Branch::prod_inner: CHECK(std::abs(g4 - 1) < 1e-6); break;
            }
        }
    }
}

TEST_CASE("GBZ reduces to the BZ at zero dissipation") {
    for (auto [t1, g] : {std::pair{1.7, 1.6}, std::pair{0.7, 2.0 / 3.0}}) {
        const auto c = gbz_curve(make(t1, g, 0.0));
        REQUIRE(!c.beta_cloud.empty());
        for (const cplx& b : c.beta_cloud) CHECK(std::abs(std::abs(b) - 1.0) <= 1e-8);
        // the eqmod branches contribute nothing here
        for (const auto& pt : c.points) CHECK((pt.branch == Branch::prod_outer || pt.branch == Branch::prod_inner));
    }
}

TEST_CASE("tiny dissipation stays near the BZ") {
    const auto c = gbz_curve(make(0.7, 2.0 / 3.0, 1e-8));
    REQUIRE(!c.beta_cloud.empty());
    for (const cplx& b : c.beta_cloud) CHECK(std::abs(std::abs(b) - 1.0) <= 1e-6);
}

TEST_CASE("analytical spectrum at strong dissipation matches numerics") {
    const auto p = make(1.7, 1.6, 2.5);
    const auto c = gbz_curve(p);
    CHECK(!c.anomalous);
    auto pairs = detect_special_states(eigendecompose(build_hamiltonian(p)), p);
    std::vector<cplx> bulk;
    for (const auto& q : pairs)
        if (q.tag == StateTag::bulk) bulk.push_back(q.energy);
    CHECK(oracle::hausdorff(bulk, c.energy_cloud) < 0.05);
}

TEST_CASE("boundary determinant factored form equals the 4x4 determinant") {
    auto p = make(1.2, 0.7, 0.9, 2);
    const auto k = characteristic_coeffs(p);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 10; ++t) {
        const cplx e(u(rng), u(rng));
        const cplx ei = e - cplx(0, p.epsilon), eii = e + cplx(0, p.epsilon);
        const auto [b1, b2] = characteristic_roots(ei, k);
        const auto [c1, c2] = characteristic_roots(eii, k);
        // psi_A / psi_B from the A-row of the bulk equation
        auto eta = [&](cplx b, cplx es) { return ((p.t1 + p.gamma) + p.t2 / b) / es; };
        const cplx e1 = eta(b1, ei), e2 = eta(b2, ei), f1 = eta(c1, eii), f2 = eta(c2, eii);
        Eigen::Matrix4cd m;
        m << -1.0, -1.0, c1 * c1, c2 * c2,
            -e1 * b1 * b1 * b1, -e2 * b2 * b2 * b2, f1 * c1, f2 * c2,
            b1 * b1, b2 * b2, -1.0, -1.0,
            e1 * b1, e2 * b2, -f1 * c1 * c1 * c1, -f2 * c2 * c2 * c2;
        const cplx det = m.determinant();
        const auto s = boundary_determinant_sides(e, p, false);
        const double scale = std::max({std::abs(s.lhs), std::abs(s.rhs), 1.0});
        CHECK(std::abs((s.lhs - s.rhs) - det) / scale < 1e-10);
    }
}

TEST_CASE("boundary determinant vanishes on the ring spectrum") {
    const auto p = make(0.7, 2.0 / 3.0, 0.8, 8);
    const auto ev = eigenvalues(build_hamiltonian(p));
    for (const cplx& e : ev) CHECK(boundary_determinant_residual(e, p) <= 1e-6);
    CHECK(boundary_determinant_residual(ev[0] + 0.3, p) >= 1e-2);
    auto q = p;
    q.t_boundary = 0.5;
    CHECK_THROWS_AS(boundary_determinant_residual(ev[0], q), GbzError);
}

TEST_CASE("open-chain reference modulus") {
    // 0.1562 is the value quoted for (0.7, 2/3)
    CHECK(obc_reference_modulus(make(0.7, 2.0 / 3.0, 0.0)) == doctest::Approx(0.1562).epsilon(1e-3));
}

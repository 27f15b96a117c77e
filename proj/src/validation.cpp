#include "nhring/validation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "nhring/gbz.hpp"
#include "nhring/model.hpp"
#include "nhring/spectral.hpp"

namespace nhring {

namespace {

std::string line(bool ok, const char* what, double value, double bound) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s %s: %.3e (bound %.1e)", ok ? "ok  " : "FAIL", what, value, bound);
    return buf;
}

double directed(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (const cplx& x : a) {
        double m = std::numeric_limits<double>::infinity();
        for (const cplx& y : b) m = std::min(m, std::abs(x - y));
        d = std::max(d, m);
    }
    return d;
}

} // namespace

SuiteResult validate_bloch() {
    SuiteResult r{"bloch", true, {}};
    ModelParams p;
    p.t1 = 1.7;
    p.gamma = 1.6;
    const auto num = eigenvalues(build_hamiltonian(p));
    const auto ref = bloch_grid(p);
    const double d = std::max(directed(num, ref), directed(ref, num));
    const bool ok = d <= 1e-8;
    r.pass = ok;
    r.lines.push_back(line(ok, "ring spectrum vs Bloch grid", d, 1e-8));
    return r;
}

SuiteResult validate_determinant() {
    SuiteResult r{"determinant", true, {}};
    ModelParams p;
    p.t1 = 1.7;
    p.gamma = 1.6;
    p.epsilon = 1.0;
    p.n_cells = 8;
    const auto ev = eigenvalues(build_hamiltonian(p));
    double worst = 0.0;
    for (const cplx& e : ev) worst = std::max(worst, boundary_determinant_residual(e, p));
    bool ok = worst <= 1e-6;
    r.pass &= ok;
    r.lines.push_back(line(ok, "max residual at eigenvalues", worst, 1e-6));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double weakest = std::numeric_limits<double>::infinity();
    int probes = 0;
    while (probes < 20) {
        const cplx e(u(rng), u(rng));
        double gap = std::numeric_limits<double>::infinity();
        for (const cplx& x : ev) gap = std::min(gap, std::abs(x - e));
        if (gap < 0.05) continue;
        weakest = std::min(weakest, boundary_determinant_residual(e, p));
        ++probes;
    }
    ok = weakest >= 1e-2;
    r.pass &= ok;
    r.lines.push_back(line(ok, "min residual at 20 off-spectrum probes", weakest, 1e-2));

    // n_cells = 2: the factored form against the 4x4 matching determinant
    ModelParams q = p;
    q.n_cells = 2;
    const auto k = characteristic_coeffs(q);
    double worst_rel = 0.0;
    for (int t = 0; t < 10; ++t) {
        const cplx e(u(rng), u(rng));
        const cplx ei = e - cplx(0, q.epsilon), eii = e + cplx(0, q.epsilon);
        const auto [b1, b2] = characteristic_roots(ei, k);
        const auto [c1, c2] = characteristic_roots(eii, k);
        auto eta = [&](cplx b, cplx es) { return ((q.t1 + q.gamma) + q.t2 / b) / es; };
        const cplx e1 = eta(b1, ei), e2 = eta(b2, ei), f1 = eta(c1, eii), f2 = eta(c2, eii);
        const int n = q.n_cells;
        Eigen::Matrix4cd m;
        m << -1.0, -1.0, std::pow(c1, n), std::pow(c2, n),
            -e1 * std::pow(b1, n + 1), -e2 * std::pow(b2, n + 1), f1 * c1, f2 * c2,
            std::pow(b1, n), std::pow(b2, n), -1.0, -1.0,
            e1 * b1, e2 * b2, -f1 * std::pow(c1, n + 1), -f2 * std::pow(c2, n + 1);
        const cplx det = m.determinant();
        const auto sides = boundary_determinant_sides(e, q, false);
        const double scale = std::max({std::abs(sides.lhs), std::abs(sides.rhs), std::abs(det), 1e-300});
        worst_rel = std::max(worst_rel, std::abs((sides.lhs - sides.rhs) - det) / scale);
    }
    ok = worst_rel <= 1e-10;
    r.pass &= ok;
    r.lines.push_back(line(ok, "n_cells=2 factored form vs 4x4 determinant", worst_rel, 1e-10));
    return r;
}

SuiteResult validate_symmetry(unsigned seed) {
    SuiteResult r{"symmetry", true, {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut1(0.3, 2.0), ug(-1.2, 1.2), ue(0.0, 2.0), utb(0.3, 1.0);
    double worst_sym = 0.0, worst_res = 0.0;
    for (int k = 0; k < 10; ++k) {
        ModelParams p;
        p.t1 = ut1(rng);
        p.gamma = ug(rng);
        p.epsilon = ue(rng);
        p.t_boundary = k % 2 == 0 ? 1.0 : utb(rng);
        p.n_cells = 12;
        const ComplexMatrix H = build_hamiltonian(p);
        const auto pairs = eigendecompose(H);
        std::vector<cplx> e, neg, cj;
        for (const auto& q : pairs) {
            e.push_back(q.energy);
            neg.push_back(-q.energy);
            cj.push_back(std::conj(q.energy));
            worst_res = std::max(worst_res, residual(H, q) / std::max(1.0, matrix_norm(H)));
        }
        worst_sym = std::max({worst_sym, directed(neg, e), directed(cj, e)});
    }
    bool ok = worst_sym <= 1e-8;
    r.pass &= ok;
    r.lines.push_back(line(ok, "closure under E -> -E and E -> conj(E)", worst_sym, 1e-8));
    ok = worst_res <= 1e-9;
    r.pass &= ok;
    r.lines.push_back(line(ok, "max eigen residual / |H|", worst_res, 1e-9));
    return r;
}

SuiteResult validate_bz_limit() {
    SuiteResult r{"bz-limit", true, {}};
    for (auto [t1, g] : {std::pair{1.7, 1.6}, std::pair{0.7, 2.0 / 3.0}}) {
        ModelParams p;
        p.t1 = t1;
        p.gamma = g;
        const auto c = gbz_curve(p);
        double worst = c.beta_cloud.empty() ? INFINITY : 0.0;
        for (const cplx& b : c.beta_cloud) worst = std::max(worst, std::abs(std::abs(b) - 1.0));
        const bool ok = worst <= 1e-8;
        r.pass &= ok;
        char what[96];
        std::snprintf(what, sizeof what, "max ||beta|-1| at eps=0 (t1=%.3g, gamma=%.3g)", t1, g);
        r.lines.push_back(line(ok, what, worst, 1e-8));
    }
    return r;
}

SuiteResult run_suite(const std::string& name) {
    if (name == "bloch") return validate_bloch();
    if (name == "determinant") return validate_determinant();
    if (name == "symmetry") return validate_symmetry();
    if (name == "bz-limit") return validate_bz_limit();
    throw std::invalid_argument("unknown suite '" + name + "'");
}

} // namespace nhring

#include "nhring/gbz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nhring/spectral.hpp"

namespace nhring {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I1(0.0, 1.0);

bool ge(double x, double y, double tol) { return x - y >= -tol; }

cplx eval_poly(const std::vector<cplx>& c, cplx z) {
    cplx v = 0.0;
    for (const cplx& x : c) v = v * z + x;
    return v;
}

cplx eval_dpoly(const std::vector<cplx>& c, cplx z) {
    const int deg = static_cast<int>(c.size()) - 1;
    cplx v = 0.0;
    for (int i = 0; i < deg; ++i) v = v * z + c[i] * double(deg - i);
    return v;
}

// [(x y)^N - 1] / (max(1,|x|)^N max(1,|y|)^N)
cplx bracket(cplx x, cplx y, int n, bool balanced) {
    if (!balanced) return std::pow(x * y, n) - 1.0;
    const double sx = std::max(1.0, std::abs(x));
    const double sy = std::max(1.0, std::abs(y));
    return std::pow((x / sx) * (y / sy), n) - std::pow(1.0 / (sx * sy), n);
}

} // namespace

CharacteristicCoeffs characteristic_coeffs(const ModelParams& p) {
    return {p.t2 * (p.t1 - p.gamma), p.t2 * (p.t1 + p.gamma), p.t1 * p.t1 - p.gamma * p.gamma + p.t2 * p.t2};
}

std::pair<cplx, cplx> characteristic_roots(cplx e_shifted, const CharacteristicCoeffs& k) {
    if (k.b == 0.0) throw GbzError("characteristic equation is degenerate (t1 + gamma = 0)");
    const cplx B = k.c - e_shifted * e_shifted;
    const cplx disc = std::sqrt(B * B - 4.0 * k.b * k.a);
    // pick the larger-magnitude root first to avoid cancellation
    const cplx q = -0.5 * (B + (std::real(std::conj(B) * disc) >= 0.0 ? disc : -disc));
    cplx r1, r2;
    if (std::abs(q) == 0.0) {
        r1 = r2 = 0.0;
    } else {
        r1 = q / k.b;
        r2 = k.a / q;
    }
    auto before = [](cplx x, cplx y) {
        const double ax = std::abs(x), ay = std::abs(y);
        if (std::abs(ax - ay) > 1e-12 * std::max(ax, ay)) return ax < ay;
        return std::arg(x) < std::arg(y);
    };
    if (before(r2, r1)) std::swap(r1, r2);
    return {r1, r2};
}

const char* to_string(Branch b) {
    switch (b) {
        case Branch::eqmod_I: return "eqmod_I";
        case Branch::eqmod_II: return "eqmod_II";
        case Branch::prod_outer: return "prod_outer";
        case Branch::prod_inner: return "prod_inner";
    }
    return "?";
}

std::array<cplx, 2> GbzPoint::active_betas() const {
    switch (branch) {
        case Branch::eqmod_I: return {betas[0], betas[1]};
        case Branch::eqmod_II: return {betas[2], betas[3]};
        case Branch::prod_outer: return {betas[1], betas[3]};
        case Branch::prod_inner: return {betas[0], betas[2]};
    }
    return {betas[0], betas[1]};
}

GbzPoint make_point(const ModelParams& p, Branch br, double theta, cplx energy) {
    const auto k = characteristic_coeffs(p);
    const auto [i1, i2] = characteristic_roots(energy - I1 * p.epsilon, k);
    const auto [j1, j2] = characteristic_roots(energy + I1 * p.epsilon, k);
    GbzPoint pt;
    pt.branch = br;
    pt.theta = theta;
    pt.energy = energy;
    pt.betas = {i1, i2, j1, j2};
    pt.g = {std::abs(i2 * j2), std::abs(i2 * j1), std::abs(i1 * j2), std::abs(i1 * j1)};
    return pt;
}

std::vector<GbzPoint> solve_equal_modulus_branch(const ModelParams& p, Chain chain, double theta) {
    validate(p);
    const auto k = characteristic_coeffs(p);
    if (k.b == 0.0) throw GbzError("characteristic equation is degenerate (t1 + gamma = 0)");
    // f(beta) = f(beta e^{i theta})  =>  beta^2 = a e^{-i theta} / b
    const cplx s = std::sqrt(k.a * std::exp(-I1 * theta) / k.b);
    const cplx shift = chain == Chain::I ? I1 * p.epsilon : -I1 * p.epsilon;
    const Branch br = chain == Chain::I ? Branch::eqmod_I : Branch::eqmod_II;
    std::vector<GbzPoint> out;
    for (cplx beta : {s, -s}) {
        if (beta == 0.0) continue;
        const cplx r = std::sqrt(f_beta(k, beta));
        for (double sg : {1.0, -1.0}) out.push_back(make_point(p, br, theta, shift + sg * r));
    }
    return out;
}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
    std::size_t lead = 0;
    while (lead < coeffs.size() && coeffs[lead] == 0.0) ++lead;
    std::vector<cplx> c(coeffs.begin() + lead, coeffs.end());
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg < 1) return {};
    if (deg == 1) return {-c[1] / c[0]};
    ComplexMatrix comp = ComplexMatrix::Zero(deg, deg);
    for (int j = 0; j < deg; ++j) comp(0, j) = -c[j + 1] / c[0];
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    std::vector<cplx> r = eigenvalues(comp, Precision::Double);
    for (cplx& z : r) {
        for (int it = 0; it < 8; ++it) {
            const cplx v = eval_poly(c, z);
            const cplx d = eval_dpoly(c, z);
            if (std::abs(d) == 0.0) break;
            const cplx step = v / d;
            const cplx zn = z - step;
            if (!(std::abs(eval_poly(c, zn)) < std::abs(v))) break;
            z = zn;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
        }
    }
    return r;
}

std::vector<GbzPoint> solve_product_one_branch(const ModelParams& p, ProductPair pair, double theta,
                                               const GbzTolerances& tol, std::string* diagnostic) {
    validate(p);
    const auto k = characteristic_coeffs(p);
    if (k.b == 0.0) throw GbzError("characteristic equation is degenerate (t1 + gamma = 0)");
    const Branch br = pair == ProductPair::outer ? Branch::prod_outer : Branch::prod_inner;
    const double eps = p.epsilon;
    const cplx e = std::exp(I1 * theta);
    std::vector<GbzPoint> out;

    if (eps == 0.0) {
        // Bloch limit: beta beta' = e^{i theta} with beta = beta'
        const cplx h = std::exp(I1 * theta / 2.0);
        for (cplx beta : {h, -h}) {
            const cplx r = std::sqrt(f_beta(k, beta));
            for (double sg : {1.0, -1.0}) out.push_back(make_point(p, br, theta, sg * r));
        }
        return out;
    }

    const cplx q2 = k.a / e - k.b;
    const cplx q1 = 4.0 * eps * eps;
    const cplx q0 = k.b * e - k.a;
    const double e16 = 16.0 * eps * eps;
    // Q^2 + 16 eps^2 beta (b beta^2 + c beta + a)
    std::vector<cplx> P = {q2 * q2, 2.0 * q2 * q1 + e16 * k.b, q1 * q1 + 2.0 * q2 * q0 + e16 * k.c,
                           2.0 * q1 * q0 + e16 * k.a, q0 * q0};
    if (std::norm(q2) < 1e-14) {
        P[0] = 0.0;
        if (diagnostic) *diagnostic = "quartic leading coefficient vanishes; degree reduced";
    }
    for (const cplx& beta : polynomial_roots(P)) {
        if (std::abs(beta) < 1e-300 || !std::isfinite(std::abs(beta))) continue;
        const cplx bp = e / beta;
        const cplx s1 = std::sqrt(f_beta(k, beta));
        const cplx s2 = std::sqrt(f_beta(k, bp));
        double best = INFINITY;
        cplx energy;
        for (double x : {1.0, -1.0}) {
            for (double y : {1.0, -1.0}) {
                const double res = std::abs(I1 * eps + x * s1 - (-I1 * eps + y * s2));
                if (res < best) {
                    best = res;
                    energy = I1 * eps + x * s1;
                }
            }
        }
        if (best < tol.unsquared_residual) out.push_back(make_point(p, br, theta, energy));
    }
    return out;
}

bool accepts(const GbzPoint& pt, const GbzTolerances& tol) {
    const auto [g1, g2, g3, g4] = pt.g;
    const double s = tol.screen;
    switch (pt.branch) {
        case Branch::eqmod_II: return ge(g1, g2, s) && ge(g2, 1, s) && ge(1, g3, s) && ge(g3, g4, s);
        case Branch::eqmod_I: return ge(g1, g3, s) && ge(g3, 1, s) && ge(1, g2, s) && ge(g2, g4, s);
        case Branch::prod_outer:
            return std::abs(g1 - 1) < tol.product_equality && ge(1, g2, s) && ge(1, g3, s) && ge(1, g4, s);
        case Branch::prod_inner:
            return std::abs(g4 - 1) < tol.product_equality && ge(g1, 1, s) && ge(g2, 1, s) && ge(g3, 1, s);
    }
    return false;
}

std::vector<GbzPoint> screen_candidates(const std::vector<GbzPoint>& candidates, const GbzTolerances& tol) {
    std::vector<GbzPoint> out;
    for (const auto& c : candidates) {
        if (accepts(c, tol)) out.push_back(c);
    }
    return out;
}

std::vector<GbzPoint> all_candidates(const ModelParams& p, double theta, const GbzTolerances& tol) {
    std::vector<GbzPoint> out;
    for (Chain ch : {Chain::I, Chain::II}) {
        auto v = solve_equal_modulus_branch(p, ch, theta);
        out.insert(out.end(), v.begin(), v.end());
    }
    for (ProductPair pp : {ProductPair::outer, ProductPair::inner}) {
        auto v = solve_product_one_branch(p, pp, theta, tol);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

GbzCurve gbz_curve(const ModelParams& p, int theta_steps, const GbzTolerances& tol) {
    validate(p);
    if (theta_steps < 1) throw std::invalid_argument("theta_steps must be positive");
    std::array<std::vector<GbzPoint>, 4> per_branch;
    GbzCurve curve;
    bool reduced = false;
    for (int j = 0; j < theta_steps; ++j) {
        const double th = 2.0 * kPi * j / theta_steps;
        std::vector<GbzPoint> cand;
        for (Chain ch : {Chain::I, Chain::II}) {
            auto v = solve_equal_modulus_branch(p, ch, th);
            cand.insert(cand.end(), v.begin(), v.end());
        }
        for (ProductPair pp : {ProductPair::outer, ProductPair::inner}) {
            std::string diag;
            auto v = solve_product_one_branch(p, pp, th, tol, &diag);
            if (!diag.empty()) reduced = true;
            cand.insert(cand.end(), v.begin(), v.end());
        }
        for (const auto& c : cand) {
            if (accepts(c, tol)) per_branch[static_cast<int>(c.branch)].push_back(c);
        }
    }
    if (reduced) curve.diagnostics.push_back("quartic degree reduced at one or more theta");

    auto close = [&](const GbzPoint& x, const GbzPoint& y) {
        if (std::abs(x.energy - y.energy) >= tol.dedup) return false;
        for (int i = 0; i < 4; ++i) {
            if (std::abs(x.betas[i] - y.betas[i]) >= tol.dedup) return false;
        }
        return true;
    };
    for (const auto& bucket : per_branch) {
        for (const auto& c : bucket) {
            bool dup = false;
            for (const auto& q : curve.points) {
                if (close(c, q)) {
                    dup = true;
                    break;
                }
            }
            if (!dup) curve.points.push_back(c);
        }
    }
    for (const auto& pt : curve.points) {
        curve.energy_cloud.push_back(pt.energy);
        for (const cplx& b : pt.active_betas()) {
            curve.beta_cloud.push_back(b);
            curve.beta_branch.push_back(pt.branch);
        }
    }
    if (p.epsilon > 0.0 && curve.points.empty()) {
        curve.anomalous = true;
        curve.diagnostics.push_back("no candidate survived screening");
    }
    return curve;
}

BoundarySides boundary_determinant_sides(cplx energy, const ModelParams& p, bool balanced) {
    validate(p);
    if (p.t_boundary != p.t2) {
        throw GbzError("boundary determinant is only defined for t_boundary == t2");
    }
    const auto k = characteristic_coeffs(p);
    const int N = p.n_cells;
    const cplx eI = energy - I1 * p.epsilon;
    const cplx eII = energy + I1 * p.epsilon;
    const auto [b1, b2] = characteristic_roots(eI, k);
    const auto [c1, c2] = characteristic_roots(eII, k);
    const double scale = std::max({1.0, std::abs(p.t1) + std::abs(p.gamma), std::abs(p.t2)});
    if (std::abs(b1 - b2) < 1e-12 * std::max(1.0, std::abs(b2)) ||
        std::abs(c1 - c2) < 1e-12 * std::max(1.0, std::abs(c2))) {
        throw GbzError("energy sits on a branch point of the characteristic equation");
    }
    // eta = psi_A / psi_B for a bulk solution; the second form covers E_s = 0
    auto eta = [&](cplx beta, cplx es) -> cplx {
        if (std::abs(es) > 1e-12 * scale) return ((p.t1 + p.gamma) + p.t2 / beta) / es;
        const cplx den = (p.t1 - p.gamma) + p.t2 * beta;
        if (std::abs(den) <= 1e-12 * scale) throw GbzError("sublattice ratio undefined at this energy");
        return es / den;
    };
    const cplx e1 = eta(b1, eI), e2 = eta(b2, eI);
    const cplx f1 = eta(c1, eII), f2 = eta(c2, eII);
    const cplx lhs = bracket(b1, c1, N, balanced) * bracket(b2, c2, N, balanced) * (e1 * b1 - f2 * c2) *
                     (e2 * b2 - f1 * c1);
    const cplx rhs = bracket(b2, c1, N, balanced) * bracket(b1, c2, N, balanced) * (e1 * b1 - f1 * c1) *
                     (e2 * b2 - f2 * c2);
    return {lhs, rhs};
}

double boundary_determinant_residual(cplx energy, const ModelParams& p) {
    const auto s = boundary_determinant_sides(energy, p, true);
    const double den = std::max({std::abs(s.lhs), std::abs(s.rhs), 1e-300});
    return std::abs(s.lhs - s.rhs) / den;
}

double obc_reference_modulus(const ModelParams& p) {
    const double den = std::abs(p.t1 + p.gamma);
    if (den == 0.0) throw GbzError("t1 + gamma = 0");
    return std::sqrt(std::abs(p.t1 - p.gamma) / den);
}

} // namespace nhring

#include "nhring/tearing.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "nhring/parallel.hpp"

namespace nhring {

namespace {

// prod_outer and prod_inner share the same quartic roots
int family(Branch b) {
    switch (b) {
        case Branch::eqmod_I: return 0;
        case Branch::eqmod_II: return 1;
        default: return 2;
    }
}

std::vector<GbzPoint> quadrant(const ModelParams& p, double theta, const GbzTolerances& tol) {
    std::vector<GbzPoint> out;
    for (const auto& c : all_candidates(p, theta, tol))
        if (accepts(c, tol) && c.energy.real() > 0.0 && c.energy.imag() > 0.0) out.push_back(c);
    return out;
}

double directed(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    double d = 0.0;
    for (const cplx& a : x) {
        double m = std::numeric_limits<double>::infinity();
        for (const cplx& b : y) m = std::min(m, std::abs(a - b));
        d = std::max(d, m);
    }
    return d;
}

} // namespace

std::optional<double> delta_gap(const ModelParams& p, const DeltaOptions& opt) {
    validate(p);
    const double dth = 2.0 * std::numbers::pi / opt.theta_steps;
    const auto plus = quadrant(p, dth, opt.tol);
    const auto minus = quadrant(p, 2.0 * std::numbers::pi - dth, opt.tol);
    if (plus.empty() || minus.empty()) return std::nullopt;
    const auto at_zero = all_candidates(p, 0.0, opt.tol);
    auto limit = [&](const GbzPoint& q) {
        cplx best = q.energy;
        double d = std::numeric_limits<double>::infinity();
        for (const auto& c : at_zero) {
            if (family(c.branch) != family(q.branch)) continue;
            const double dd = std::abs(c.energy - q.energy);
            if (dd < d) {
                d = dd;
                best = c.energy;
            }
        }
        return best;
    };
    std::vector<cplx> l1, l2;
    for (const auto& q : plus) l1.push_back(limit(q));
    for (const auto& q : minus) l2.push_back(limit(q));
    const double h = std::max(directed(l1, l2), directed(l2, l1));
    return h < opt.zero_threshold ? 0.0 : h;
}

TearingScan critical_epsilon(const ModelParams& base, const std::vector<double>& grid, const DeltaOptions& opt,
                             int threads) {
    validate(base);
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("epsilon grid must be strictly increasing");
    TearingScan scan;
    scan.params_base = base;
    scan.epsilon_grid = grid;
    scan.delta_values.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<char> ok(grid.size(), 0);
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        ModelParams q = base;
        q.epsilon = grid[i];
        if (auto d = delta_gap(q, opt)) {
            scan.delta_values[i] = *d;
            ok[i] = 1;
        }
    });
    scan.applicable.assign(ok.begin(), ok.end());
    // walk back from the top while Delta stays at zero
    std::optional<std::size_t> star;
    for (std::size_t k = grid.size(); k-- > 0;) {
        if (!ok[k] || scan.delta_values[k] >= opt.zero_threshold) break;
        star = k;
    }
    if (star) scan.epsilon_star = grid[*star];
    return scan;
}

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("invalid grid range");
    std::vector<double> g;
    const long n = std::lround(std::floor((hi - lo) / step + 0.5));
    for (long i = 0; i <= n; ++i) g.push_back(lo + step * static_cast<double>(i));
    return g;
}

} // namespace nhring

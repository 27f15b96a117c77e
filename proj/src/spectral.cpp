#include "nhring/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "nhring/qr_engine.hpp"

namespace nhring {

namespace {

using DD = DDReal;
template <class R> using Cx = qr::Cx<R>;

thread_local Precision g_last = Precision::Double;

template <class R>
qr::Dense<R> dense_from(const ComplexMatrix& m) {
    const std::size_t n = static_cast<std::size_t>(m.rows());
    qr::Dense<R> A(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const cplx z = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            A(i, j) = Cx<R>(R(z.real()), R(z.imag()));
        }
    return A;
}

template <class R>
cplx to_cplx(const Cx<R>& z) {
    return {to_double(z.re), to_double(z.im)};
}

double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    auto directed = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
        double worst = 0.0;
        for (const cplx& p : x) {
            double best = std::numeric_limits<double>::infinity();
            for (const cplx& q : y) best = std::min(best, std::abs(p - q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

// Banded view after a symmetric permutation; ring matrices become
// pentadiagonal under the folded ordering 0, n-1, 1, n-2, ...
struct BandLayout {
    std::vector<int> perm;  // perm[new] = old
    int kl = 0;
    int ku = 0;
};

BandLayout band_layout(const ComplexMatrix& m) {
    const int n = static_cast<int>(m.rows());
    auto measure = [&](const std::vector<int>& perm) {
        BandLayout b{perm, 0, 0};
        std::vector<int> pos(n);
        for (int i = 0; i < n; ++i) pos[perm[i]] = i;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (m(i, j) == cplx(0.0, 0.0)) continue;
                int d = pos[i] - pos[j];
                b.kl = std::max(b.kl, d);
                b.ku = std::max(b.ku, -d);
            }
        return b;
    };
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    std::vector<int> folded;
    folded.reserve(n);
    for (int lo = 0, hi = n - 1; lo <= hi; ++lo, --hi) {
        folded.push_back(lo);
        if (hi != lo) folded.push_back(hi);
    }
    BandLayout a = measure(id);
    BandLayout b = measure(folded);
    return std::max(a.kl, a.ku) <= std::max(b.kl, b.ku) ? a : b;
}

// LU with partial pivoting of a banded matrix, rows stored over columns
// [i - kl, i + kl + ku].
template <class R>
class BandLU {
public:
    BandLU(int n, int kl, int ku) : n_(n), kl_(kl), ku_(ku), w_(2 * kl + ku + 1), a_(n * w_), piv_(n) {}

    Cx<R>& at(int i, int j) { return a_[i * w_ + (j - i + kl_)]; }

    void factor(const R& tiny) {
        for (int k = 0; k < n_; ++k) {
            const int last = std::min(n_ - 1, k + kl_);
            const int jend = std::min(n_ - 1, k + kl_ + ku_);
            int p = k;
            R best = qr::norm1(at(k, k));
            for (int i = k + 1; i <= last; ++i) {
                R v = qr::norm1(at(i, k));
                if (v > best) { best = v; p = i; }
            }
            piv_[k] = p;
            if (p != k)
                for (int j = k; j <= jend; ++j) std::swap(at(k, j), at(p, j));
            if (qr::norm1(at(k, k)) < tiny) at(k, k) = Cx<R>(tiny);
            for (int i = k + 1; i <= last; ++i) {
                Cx<R> l = at(i, k) / at(k, k);
                at(i, k) = l;
                for (int j = k + 1; j <= jend; ++j) at(i, j) = at(i, j) - l * at(k, j);
            }
        }
    }

    void solve(std::vector<Cx<R>>& b) {
        for (int k = 0; k < n_; ++k) {
            if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
            const int last = std::min(n_ - 1, k + kl_);
            for (int i = k + 1; i <= last; ++i) b[i] = b[i] - at(i, k) * b[k];
        }
        for (int i = n_ - 1; i >= 0; --i) {
            Cx<R> s = b[i];
            const int jend = std::min(n_ - 1, i + kl_ + ku_);
            for (int j = i + 1; j <= jend; ++j) s = s - at(i, j) * b[j];
            b[i] = s / at(i, i);
        }
    }

private:
    int n_, kl_, ku_, w_;
    std::vector<Cx<R>> a_;
    std::vector<int> piv_;
};

// Inverse iteration for every eigenvalue on the banded layout. Vectors of
// (numerically) coincident eigenvalues are orthogonalized against each other.
template <class R>
std::vector<std::vector<Cx<R>>> band_vectors(const ComplexMatrix& m, const BandLayout& lay,
                                             const std::vector<Cx<R>>& values) {
    const int n = static_cast<int>(m.rows());
    const double hnorm = matrix_norm(m);
    const R tiny = R(hnorm * qr::eps_of<R>());
    const double cluster_tol = 1e-10 * std::max(hnorm, 1.0);
    std::vector<std::vector<Cx<R>>> out(values.size());
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<std::vector<std::pair<int, cplx>>> nz(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx z = m(lay.perm[i], lay.perm[j]);
            if (z != cplx(0.0, 0.0)) nz[i].emplace_back(j, z);
        }
    for (std::size_t k = 0; k < values.size(); ++k) {
        BandLU<R> lu(n, lay.kl, lay.ku);
        for (int i = 0; i < n; ++i)
            for (int j = std::max(0, i - lay.kl); j <= std::min(n - 1, i + lay.ku); ++j) {
                cplx z = m(lay.perm[i], lay.perm[j]);
                Cx<R> e(R(z.real()), R(z.imag()));
                if (i == j) e = e - values[k];
                lu.at(i, j) = e;
            }
        lu.factor(tiny);
        std::vector<std::size_t> cluster;
        for (std::size_t j = 0; j < k; ++j)
            if (std::abs(to_cplx(values[j]) - to_cplx(values[k])) <= cluster_tol) cluster.push_back(j);
        std::vector<Cx<R>> start(n);
        for (int i = 0; i < n; ++i) start[i] = Cx<R>(R(uni(rng)), R(uni(rng)));
        auto overlap = [&](std::size_t j, const std::vector<Cx<R>>& x) {
            Cx<R> dot(R(0.0));
            for (int i = 0; i < n; ++i) dot = dot + qr::conj(out[j][lay.perm[i]]) * x[i];
            return dot;
        };
        auto iterate = [&](bool orthogonalize) {
            std::vector<Cx<R>> x = start;
            for (int it = 0; it < 3; ++it) {
                lu.solve(x);
                if (orthogonalize) {
                    for (std::size_t j : cluster) {
                        Cx<R> dot = overlap(j, x);
                        for (int i = 0; i < n; ++i) x[i] = x[i] - out[j][lay.perm[i]] * dot;
                    }
                }
                R big(0.0);
                for (const auto& z : x) big = std::max(big, qr::norm1(z));
                if (big == R(0.0)) big = R(1.0);
                R nrm(0.0);
                for (auto& z : x) {
                    z = z * (R(1.0) / big);
                    nrm += qr::abs2(z);
                }
                R inv = R(1.0) / qr::sqrt(nrm);
                for (auto& z : x) z = z * inv;
            }
            return x;
        };
        // Orthogonalize only when plain iteration reproduces a vector already
        // found for a coincident eigenvalue (a genuinely degenerate eigenspace).
        // (A - lambda) x in the permuted basis
        auto resid = [&](const std::vector<Cx<R>>& x) {
            R r(0.0);
            for (int i = 0; i < n; ++i) {
                Cx<R> s = Cx<R>(R(0.0)) - values[k] * x[i];
                for (const auto& [j, z] : nz[i]) s = s + Cx<R>(R(z.real()), R(z.imag())) * x[j];
                r += qr::abs2(s);
            }
            return qr::sqrt(r);
        };
        // A coincident eigenvalue may reproduce a vector already found; then
        // try the orthogonalized iterate and keep it if it is as good.
        std::vector<Cx<R>> x = iterate(false);
        for (std::size_t j : cluster) {
            if (to_double(qr::cabs(overlap(j, x))) > 0.9) {
                std::vector<Cx<R>> y = iterate(true);
                if (resid(y) <= std::max(resid(x), R(1e-12 * hnorm))) x = std::move(y);
                break;
            }
        }
        std::vector<Cx<R>> v(n);
        for (int i = 0; i < n; ++i) v[lay.perm[i]] = x[i];
        out[k] = std::move(v);
    }
    return out;
}

std::vector<cplx> double_values(const ComplexMatrix& m) {
    auto w = qr::eigenvalues<double>(dense_from<double>(m));
    std::vector<cplx> out;
    out.reserve(w.size());
    for (const auto& z : w) out.push_back(to_cplx(z));
    return out;
}

// Returns eigenvalues in double-double; `chosen` reports the arithmetic
// whose result was kept.
std::vector<Cx<DD>> values_dd(const ComplexMatrix& m, Precision prec, Precision& chosen) {
    if (prec == Precision::Double || prec == Precision::Auto) {
        std::vector<cplx> w = double_values(m);
        bool keep = prec == Precision::Double;
        if (!keep) {
            ComplexMatrix mt = m.transpose();
            std::vector<cplx> wt = double_values(mt);
            keep = hausdorff(w, wt) <= 1e-10 * std::max(matrix_norm(m), 1.0);
        }
        if (keep) {
            chosen = Precision::Double;
            std::vector<Cx<DD>> out;
            out.reserve(w.size());
            for (const cplx& z : w) out.emplace_back(DD(z.real()), DD(z.imag()));
            return out;
        }
    }
    chosen = Precision::Extended;
    return qr::eigenvalues<DD>(dense_from<DD>(m));
}

void check_square(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("matrix must be square and nonempty");
    if (!m.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
}

} // namespace

const char* to_string(StateTag t) {
    switch (t) {
        case StateTag::bulk: return "bulk";
        case StateTag::topological_edge: return "topological_edge";
        case StateTag::bound: return "bound";
    }
    return "bulk";
}

double matrix_norm(const ComplexMatrix& m) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, m.row(i).cwiseAbs().sum());
    return best;
}

Precision last_precision_used() { return g_last; }

std::vector<cplx> eigenvalues(const ComplexMatrix& m, Precision prec) {
    check_square(m);
    Precision chosen;
    std::vector<Cx<DD>> w;
    try {
        w = values_dd(m, prec, chosen);
    } catch (const qr::ConvergenceError& e) {
        throw EigenSolverError(e.what());
    }
    g_last = chosen;
    std::vector<cplx> out;
    out.reserve(w.size());
    for (const auto& z : w) out.push_back(to_cplx(z));
    return out;
}

double residual(const ComplexMatrix& m, const EigenPair& p) {
    return (m * p.vector - p.energy * p.vector).norm();
}

std::vector<EigenPair> eigendecompose(const ComplexMatrix& m, Precision prec) {
    check_square(m);
    const int n = static_cast<int>(m.rows());
    const double hnorm = matrix_norm(m);
    Precision chosen = Precision::Extended;
    std::vector<EigenPair> pairs(n);
    try {
        std::vector<Cx<DD>> w = values_dd(m, prec, chosen);
        BandLayout lay = band_layout(m);
        bool ok = std::max(lay.kl, lay.ku) <= 8;
        if (ok) {
            auto vecs = band_vectors<DD>(m, lay, w);
            for (int k = 0; k < n; ++k) {
                pairs[k].energy = to_cplx(w[k]);
                pairs[k].vector.resize(n);
                for (int i = 0; i < n; ++i) pairs[k].vector(i) = to_cplx(vecs[k][i]);
                if (residual(m, pairs[k]) > 1e-9 * std::max(hnorm, 1e-300)) ok = false;
            }
        }
        if (!ok) {
            std::vector<Cx<DD>> values;
            qr::Dense<DD> V;
            qr::eigensystem<DD>(dense_from<DD>(m), values, V);
            chosen = Precision::Extended;
            for (int k = 0; k < n; ++k) {
                pairs[k].energy = to_cplx(values[k]);
                pairs[k].vector.resize(n);
                for (int i = 0; i < n; ++i) pairs[k].vector(i) = to_cplx(V(i, k));
            }
        }
    } catch (const qr::ConvergenceError& e) {
        throw EigenSolverError(e.what());
    }
    g_last = chosen;
    double worst = 0.0;
    for (auto& p : pairs) {
        p.vector.normalize();
        worst = std::max(worst, residual(m, p));
        p.rho_I = p.vector.head(n / 2).squaredNorm();
    }
    if (worst > 1e-9 * std::max(hnorm, 1e-300)) {
        std::ostringstream os;
        os << "eigensolver residual too large (dimension " << n << ", residual " << worst << ", norm " << hnorm << ")";
        throw EigenSolverError(os.str());
    }
    std::sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) {
        if (a.energy.imag() != b.energy.imag()) return a.energy.imag() < b.energy.imag();
        if (a.energy.real() != b.energy.real()) return a.energy.real() < b.energy.real();
        return a.rho_I < b.rho_I;
    });
    return pairs;
}

double chain_weight(const EigenPair& pair, int n_cells) {
    if (pair.vector.size() != 4 * n_cells) throw std::invalid_argument("vector length does not match 4*n_cells");
    return pair.vector.head(2 * n_cells).squaredNorm() / pair.vector.squaredNorm();
}

double wall_weight(const EigenPair& pair, int n_cells, int cells) {
    if (pair.vector.size() != 4 * n_cells) throw std::invalid_argument("vector length does not match 4*n_cells");
    const int w = 2 * std::min(cells, n_cells / 2);
    double s = 0.0;
    for (int c = 0; c < 2; ++c) {
        const int off = 2 * n_cells * c;
        s += pair.vector.segment(off, w).squaredNorm();
        s += pair.vector.segment(off + 2 * n_cells - w, w).squaredNorm();
    }
    return s / pair.vector.squaredNorm();
}

double localization_modulus(const Eigen::VectorXcd& chain, int n_cells) {
    if (chain.size() != 2 * n_cells) throw std::invalid_argument("chain vector must have 2*n_cells entries");
    const int lo = std::max(3, n_cells / 3);
    const int hi = std::min(n_cells - 3, (2 * n_cells + 2) / 3);  // exclusive
    if (2 * (hi - lo) < 6) throw std::invalid_argument("fit window shorter than 6 sites");
    // cell amplitudes sqrt(|psi_A|^2 + |psi_B|^2), slope per cell
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = hi - lo;
    for (int c = lo; c < hi; ++c) {
        double amp2 = std::norm(chain(2 * c)) + std::norm(chain(2 * c + 1));
        if (!(std::sqrt(amp2) >= 1e-300)) throw std::invalid_argument("amplitude below 1e-300 in fit window");
        double y = 0.5 * std::log(amp2);
        sx += c;
        sy += y;
        sxx += double(c) * c;
        sxy += c * y;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return std::exp(slope);
}

double localization_modulus(const EigenPair& pair, const ModelParams& p) {
    const int N = p.n_cells;
    const double rho = chain_weight(pair, N);
    if (rho > 0.6) return localization_modulus(Eigen::VectorXcd(pair.vector.head(2 * N)), N);
    if (rho < 0.4) return localization_modulus(Eigen::VectorXcd(pair.vector.tail(2 * N)), N);
    throw std::invalid_argument("state is not predominantly on one chain");
}

cplx wall_mode_energy(const ModelParams& p) {
    const double k = p.t_boundary == p.t2 ? p.t2 * p.t2 - p.t1 * p.t1 + p.gamma * p.gamma : 0.0;
    const double e2 = k - p.epsilon * p.epsilon;
    return e2 >= 0.0 ? cplx(std::sqrt(e2), 0.0) : cplx(0.0, std::sqrt(-e2));
}

double median_spacing(const std::vector<cplx>& pts) {
    if (pts.size() < 2) return 0.0;
    std::vector<double> nn(pts.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (i != j) nn[i] = std::min(nn[i], std::abs(pts[i] - pts[j]));
    auto mid = nn.begin() + nn.size() / 2;
    std::nth_element(nn.begin(), mid, nn.end());
    return *mid;
}

std::vector<EigenPair> detect_special_states(std::vector<EigenPair> pairs, const ModelParams& p,
                                             const SpecialStateConfig& cfg,
                                             const std::vector<cplx>& bulk_reference) {
    const cplx etop = wall_mode_energy(p);
    const bool open_t_path = p.epsilon == 0.0 && p.t_boundary != p.t2;
    auto energy_matches = [&](cplx e) {
        if (open_t_path) return std::abs(e) < cfg.tol_re;
        if (etop.imag() > 0.0)
            return std::abs(e.real()) < cfg.tol_re && std::abs(std::abs(e.imag()) - etop.imag()) < cfg.tol_im;
        return std::abs(e.imag()) < cfg.tol_re && std::abs(std::abs(e.real()) - etop.real()) < cfg.tol_im;
    };
    double spacing = 0.0;
    if (!bulk_reference.empty()) {
        std::vector<cplx> es;
        es.reserve(pairs.size());
        for (const auto& q : pairs) es.push_back(q.energy);
        spacing = median_spacing(es);
    }
    for (auto& q : pairs) {
        q.tag = StateTag::bulk;
        const double ww = wall_weight(q, p.n_cells, cfg.wall_cells);
        if (ww <= cfg.wall_weight_min) continue;
        if (energy_matches(q.energy)) {
            q.tag = StateTag::topological_edge;
            continue;
        }
        // bound states only arise on the weakened-junction path
        if (bulk_reference.empty() || p.t_boundary == p.t2) continue;
        double d = std::numeric_limits<double>::infinity();
        for (const cplx& r : bulk_reference) d = std::min(d, std::abs(q.energy - r));
        if (d > cfg.isolation_factor * spacing) q.tag = StateTag::bound;
    }
    return pairs;
}

} // namespace nhring

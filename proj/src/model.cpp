#include "nhring/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nhring {

void validate(const ModelParams& p) {
    for (double v : {p.t1, p.t2, p.gamma, p.epsilon, p.t_boundary}) {
        if (!std::isfinite(v)) throw std::invalid_argument("model parameters must be finite");
    }
    if (p.t2 == 0.0) throw std::invalid_argument("t2 must be nonzero");
    if (p.n_cells < 2) {
        throw std::invalid_argument("n_cells must be >= 2 (got " + std::to_string(p.n_cells) + ")");
    }
}

ComplexMatrix build_hamiltonian(const ModelParams& p) {
    validate(p);
    const int N = p.n_cells;
    const int n = 4 * N;
    ComplexMatrix H = ComplexMatrix::Zero(n, n);
    for (int c = 0; c < 2; ++c) {
        const Chain chain = c == 0 ? Chain::I : Chain::II;
        const cplx onsite(0.0, c == 0 ? p.epsilon : -p.epsilon);
        for (int m = 0; m < N; ++m) {
            const int a = site_index(chain, m, Sublattice::A, N);
            const int b = a + 1;
            H(a, a) = onsite;
            H(b, b) = onsite;
            H(a, b) = p.t1 + p.gamma;
            H(b, a) = p.t1 - p.gamma;
            if (m + 1 < N) {
                H(b, a + 2) = p.t2;
                H(a + 2, b) = p.t2;
            }
        }
    }
    // junctions: I_NB <-> II_1A and II_NB <-> I_1A
    const int iNB = site_index(Chain::I, N - 1, Sublattice::B, N);
    const int iiA = site_index(Chain::II, 0, Sublattice::A, N);
    const int iiNB = site_index(Chain::II, N - 1, Sublattice::B, N);
    H(iNB, iiA) = p.t_boundary;
    H(iiA, iNB) = p.t_boundary;
    H(iiNB, 0) = p.t_boundary;
    H(0, iiNB) = p.t_boundary;
    return H;
}

std::array<cplx, 2> bloch_spectrum(const ModelParams& p, double k) {
    const cplx x = p.t1 + p.t2 * std::cos(k);
    const cplx y = cplx(p.t2 * std::sin(k), p.gamma);
    const cplx e = std::sqrt(x * x + y * y);
    return {e, -e};
}

std::vector<cplx> bloch_grid(const ModelParams& p) {
    const int m = 2 * p.n_cells;
    std::vector<cplx> out;
    out.reserve(2 * m);
    for (int j = 0; j < m; ++j) {
        auto e = bloch_spectrum(p, 2.0 * std::numbers::pi * j / m);
        out.push_back(e[0]);
        out.push_back(e[1]);
    }
    return out;
}

} // namespace nhring

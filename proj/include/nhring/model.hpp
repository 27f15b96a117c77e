#pragma once
// Two-chain non-reciprocal SSH ring with a gain/loss domain wall.

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace nhring {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

struct ModelParams {
    double t1 = 1.0;
    double t2 = 1.0;
    double gamma = 0.0;
    double epsilon = 0.0;
    double t_boundary = 1.0;  // hopping on both chain-I/chain-II junctions
    int n_cells = 30;         // cells per chain; dimension 4*n_cells
};

/// Throws std::invalid_argument on non-finite fields, t2 == 0 or n_cells < 2.
void validate(const ModelParams& p);

/// Dimension of the real-space Hamiltonian.
inline int dimension(const ModelParams& p) { return 4 * p.n_cells; }

enum class Chain { I = 0, II = 1 };
enum class Sublattice { A = 0, B = 1 };

/// Position of (chain, cell, sublattice) in the state vector.
inline int site_index(Chain c, int cell, Sublattice s, int n_cells) {
    return static_cast<int>(c) * 2 * n_cells + 2 * cell + static_cast<int>(s);
}

ComplexMatrix build_hamiltonian(const ModelParams& p);

/// The two bands +-sqrt((t1 + t2 cos k)^2 + (t2 sin k + i gamma)^2).
std::array<cplx, 2> bloch_spectrum(const ModelParams& p, double k);

/// Bloch energies on the ring's k grid k_m = 2 pi m / (2 n_cells).
std::vector<cplx> bloch_grid(const ModelParams& p);

} // namespace nhring

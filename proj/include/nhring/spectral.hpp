#pragma once
// Dense non-Hermitian eigendecomposition and per-state analysis.

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nhring/model.hpp"

namespace nhring {

/// Arithmetic used by the QR engine. Double is fast but loses most digits on
/// strongly skin-localized rings; Extended runs in double-double. Auto solves
/// A and A^T in double and escalates when the two spectra disagree.
enum class Precision { Double, Extended, Auto };

enum class StateTag { bulk, topological_edge, bound };

const char* to_string(StateTag t);

struct EigenPair {
    cplx energy;
    Eigen::VectorXcd vector;
    double rho_I = 0.0;
    std::optional<double> loc_modulus;
    StateTag tag = StateTag::bulk;
};

class EigenSolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Max-row-sum norm.
double matrix_norm(const ComplexMatrix& m);

/// Eigenvalues only, unsorted.
std::vector<cplx> eigenvalues(const ComplexMatrix& m, Precision prec = Precision::Auto);

/// All eigenpairs, unit-norm right vectors, sorted by (Im, Re, rho_I).
/// rho_I is the weight on the first half of the vector.
std::vector<EigenPair> eigendecompose(const ComplexMatrix& m, Precision prec = Precision::Auto);

/// Precision Auto settled on for the last eigenvalue call on this thread.
Precision last_precision_used();

double residual(const ComplexMatrix& m, const EigenPair& p);

/// Weight on the first 2*n_cells entries.
double chain_weight(const EigenPair& pair, int n_cells);

/// Weight within `cells` cells of either end of both chains.
double wall_weight(const EigenPair& pair, int n_cells, int cells = 3);

/// Per-cell modulus |beta| from a log-linear fit of the cell amplitudes over
/// the middle third of the dominant chain.
double localization_modulus(const EigenPair& pair, const ModelParams& p);
double localization_modulus(const Eigen::VectorXcd& chain_vector, int n_cells);

struct SpecialStateConfig {
    double tol_re = 1e-3;
    double tol_im = 0.05;
    double wall_weight_min = 0.5;
    int wall_cells = 3;
    double isolation_factor = 5.0;
};

/// Energy of the domain-wall modes; imaginary when epsilon^2 exceeds
/// t2^2 - t1^2 + gamma^2 on the full ring, +-i epsilon for open junctions.
cplx wall_mode_energy(const ModelParams& p);

/// Tags topological_edge and bound states. `bulk_reference` is the analytical
/// bulk spectrum; without it no state is tagged bound.
std::vector<EigenPair> detect_special_states(std::vector<EigenPair> pairs, const ModelParams& p,
                                             const SpecialStateConfig& cfg = {},
                                             const std::vector<cplx>& bulk_reference = {});

/// Median nearest-neighbour distance of a point cloud.
double median_spacing(const std::vector<cplx>& pts);

} // namespace nhring

#pragma once
// Generalized Brillouin zone of the domain-wall ring: characteristic roots,
// the four branch solvers, screening, and the finite-N boundary determinant.

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nhring/model.hpp"

namespace nhring {

class GbzError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// f(beta) = c + a/beta + b*beta is the squared bulk energy of one chain.
struct CharacteristicCoeffs {
    double a = 0.0;  // t2 (t1 - gamma)
    double b = 0.0;  // t2 (t1 + gamma)
    double c = 0.0;  // t1^2 - gamma^2 + t2^2
};

CharacteristicCoeffs characteristic_coeffs(const ModelParams& p);

inline cplx f_beta(const CharacteristicCoeffs& k, cplx beta) { return k.c + k.a / beta + k.b * beta; }

/// Roots of b beta^2 + (c - E^2) beta + a = 0 with |beta1| <= |beta2|.
std::pair<cplx, cplx> characteristic_roots(cplx e_shifted, const CharacteristicCoeffs& k);

enum class Branch { eqmod_I = 0, eqmod_II = 1, prod_outer = 2, prod_inner = 3 };
const char* to_string(Branch b);

enum class ProductPair { outer, inner };

struct GbzPoint {
    Branch branch = Branch::prod_outer;
    double theta = 0.0;
    cplx energy;
    // beta^I_1, beta^I_2, beta^II_1, beta^II_2
    std::array<cplx, 4> betas{};
    // |b^I_2 b^II_2|, |b^I_2 b^II_1|, |b^I_1 b^II_2|, |b^I_1 b^II_1|
    std::array<double, 4> g{};

    /// The two beta values that make up C_beta for this branch.
    std::array<cplx, 2> active_betas() const;
};

struct GbzTolerances {
    double char_residual = 1e-9;
    double unsquared_residual = 1e-8;
    double screen = 1e-9;
    double product_equality = 1e-6;  // |g - 1| on the product branches
    double dedup = 1e-9;
};

/// Builds a candidate from an energy: roots of both chains and the g values.
GbzPoint make_point(const ModelParams& p, Branch br, double theta, cplx energy);

std::vector<GbzPoint> solve_equal_modulus_branch(const ModelParams& p, Chain chain, double theta);

/// Candidates of a product branch; `diagnostic` (optional) receives a note
/// when the quartic degenerates.
std::vector<GbzPoint> solve_product_one_branch(const ModelParams& p, ProductPair pair, double theta,
                                               const GbzTolerances& tol = {},
                                               std::string* diagnostic = nullptr);

bool accepts(const GbzPoint& pt, const GbzTolerances& tol = {});
std::vector<GbzPoint> screen_candidates(const std::vector<GbzPoint>& candidates,
                                        const GbzTolerances& tol = {});

struct GbzCurve {
    std::vector<GbzPoint> points;  // accepted, deduplicated, ordered by branch then theta
    std::vector<cplx> beta_cloud;  // C_beta
    std::vector<cplx> energy_cloud;
    std::vector<Branch> beta_branch;
    bool anomalous = false;  // epsilon > 0 and nothing accepted
    std::vector<std::string> diagnostics;
};

GbzCurve gbz_curve(const ModelParams& p, int theta_steps = 512, const GbzTolerances& tol = {});

/// All candidates (unscreened) of every branch at one theta.
std::vector<GbzPoint> all_candidates(const ModelParams& p, double theta, const GbzTolerances& tol = {});

/// Roots of sum coeffs[i] z^(deg-i) (highest power first) from the companion
/// matrix eigenvalues, Newton-polished.
std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs);

struct BoundarySides {
    cplx lhs;
    cplx rhs;
};

/// Both sides of the ring determinant condition at energy E, each bracket
/// [(x y)^N - 1] divided by max(1,|x|)^N max(1,|y|)^N (same scale on both sides).
BoundarySides boundary_determinant_sides(cplx energy, const ModelParams& p, bool balanced = true);

/// |lhs - rhs| / max(|lhs|, |rhs|, floor); near zero at eigenvalues of the finite ring.
double boundary_determinant_residual(cplx energy, const ModelParams& p);

/// sqrt(|t1 - gamma| / |t1 + gamma|).
double obc_reference_modulus(const ModelParams& p);

} // namespace nhring

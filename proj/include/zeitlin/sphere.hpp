#pragma once

#include <vector>

#include "zeitlin/matrix.hpp"

namespace zeitlin {

/// Gauss-Legendre colatitudes x theta-uniform longitudes. Weights integrate
/// polynomials in cos(theta) exactly up to degree 2*n_theta - 1.
struct SphereGrid {
    std::vector<double> theta;   // colatitude nodes, size n_theta
    std::vector<double> weight;  // Gauss-Legendre weights for d(cos theta)
    std::vector<double> phi;     // longitudes, size n_phi, spacing 2pi/n_phi

    int n_theta() const { return static_cast<int>(theta.size()); }
    int n_phi() const { return static_cast<int>(phi.size()); }
};

SphereGrid make_gauss_grid(int n_theta, int n_phi);

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Scalar field on a grid, row-major: value(i_theta, i_phi).
struct GridField {
    int n_theta = 0;
    int n_phi = 0;
    std::vector<double> values;

    double& at(int i, int j) { return values[static_cast<size_t>(i) * n_phi + j]; }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * n_phi + j]; }
};

/// omega(theta, phi) = sum omega^{lm} Y_lm with orthonormal real spherical
/// harmonics; theta on Gauss-Legendre nodes, phi uniform.
GridField sph_evaluate(const CoeffField& c, int n_theta, int n_phi);
GridField sph_evaluate(const CoeffField& c, const SphereGrid& grid);

/// Quadrature analysis of a grid field into coefficients up to l_max.
CoeffField sph_analyze_grid(const GridField& f, const SphereGrid& grid, int n,
                            int l_max);

/// Poisson bracket {psi, omega} = grad psi . grad^perp omega evaluated
/// spectrally on the grid.
GridField poisson_bracket_grid(const CoeffField& psi, const CoeffField& omega,
                               const SphereGrid& grid);

/// Surface integral of a grid field.
double sphere_integral(const GridField& f, const SphereGrid& grid);

/// Largest singular value by power iteration on A^dagger A (deterministic
/// start vector), relative tolerance tol.
double operator_norm(const CMatrix& a, double tol = 1e-8);

/// For each N in n_list: quantize psi, omega and the grid-evaluated bracket
/// coefficient-identically, and return
///   || p_N{psi,omega} - N^{3/2} [p_N psi, p_N omega] ||_op.
/// Inputs must be band-limited to l_max <= min(n_list) - 1.
std::vector<double> bracket_consistency(const CoeffField& psi,
                                        const CoeffField& omega,
                                        const std::vector<int>& n_list);

} // namespace zeitlin

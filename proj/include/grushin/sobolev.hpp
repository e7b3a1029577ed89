#pragma once

#include <functional>
#include <vector>

#include "grushin/alpha.hpp"
#include "grushin/grid_function.hpp"
#include "grushin/rearrangement.hpp"

namespace grushin {

// phi(r) = (a + b r^2)^{-1/2}, the equality profile of the radial inequality with (p, m) = (2, 3).
struct ExtremalProfile {
    double a = 1.0;
    double b = 1.0;

    ExtremalProfile(double a, double b);
    double operator()(double r) const;
    double derivative(double r) const;
};

// sqrt(3) (pi/16)^{1/3}: the sharp constant of
// (int r^2 phi'^2)^{1/2} >= D (int r^2 phi^6)^{1/6} on (0, inf).
double talenti_radial_constant();

// Radial quotient (int r^{m-1}|phi'|^p)^{1/p} / (int r^{m-1}|phi|^q)^{1/q}, q = mp/(m-p),
// of the profile (a + b r^{p'})^{1-m/p}, by adaptive quadrature on (0, inf).
// Throws DomainError unless 1 < p < m.
double talenti_constant_general(double p, double m, double a = 1.0, double b = 1.0);

// The closed form m^{1/p} ((p-1)/(m-1))^{-1/p'} [B(m/p, m/p')/p']^{1/m} as it is usually printed.
// For (p, m) = (2, 3) it exceeds the quadrature value by the factor sqrt 2.
double talenti_printed_constant(double p, double m);

// L = (2 pi / n)^{1/3} (a+1)^{1/3} D: the sector Rayleigh quotient of every radial extremal.
double sobolev_lower_bound(const AlphaParam& alpha);
// The same expression with both exponents -1/3.
double sobolev_lower_bound_printed(const AlphaParam& alpha);

struct RayleighReport {
    double numerator = 0.0;    // Grushin energy (squared gradient norm)
    double denominator = 0.0;  // weighted L^q norm
    double quotient = 0.0;     // sqrt(numerator) / denominator
    double alpha = 0.0;
    double q = 0.0;
};

// Throws DomainError for u = 0.
RayleighReport rayleigh_quotient(const GridFunction3D& u, double q, const AlphaParam& alpha, Region region = {});

// Rayleigh quotient of u = phi(r) over one sector from the one-dimensional integrals.
double radial_rayleigh_quotient(const std::function<double(double)>& phi, const std::function<double(double)>& dphi,
                                double q, const AlphaParam& alpha);

// (3a+3)/q - (a+1)/2: the quotient of u(l x, l^{a+1} y) is l^{exponent} times that of u.
double scaling_exponent(double q, const AlphaParam& alpha);

// The unique q with scaling_exponent(q, a) = 0 for every a.
constexpr int critical_exponent() { return 6; }

struct FamilyConfig {
    double q = 6.0;
    int resolution = 64;             // cells per axis of the full-space grid
    double truncation_radius = 20.0; // profiles are shifted to vanish at this Grushin radius
    double b_min = 0.25;             // search range of the concentration parameter
    double b_max = 64.0;
    bool perturbations = true;
    int max_evaluations = 80;
};

struct MinimizeResult {
    double estimate = 0.0;
    double b = 0.0;
    std::vector<double> coefficients;  // perturbation amplitudes
    int evaluations = 0;
};

// Truncated extremal (1 + b r^2)^{-1/2} - (1 + b R^2)^{-1/2}, clipped at 0.
double truncated_extremal(double r, double b, double truncation_radius);

// Grid sampling of the truncated extremal times (1 + sum_i c_i psi_i) on the full-space box
// enclosing {r < R}.
GridFunction3D extremal_family_member(const AlphaParam& alpha, const FamilyConfig& cfg, double b,
                                      const std::vector<double>& coefficients);

// Minimizes the first-sector grid Rayleigh quotient over the family: golden-section search in log b,
// then a Nelder-Mead simplex over the perturbation amplitudes. Throws DomainError when q != 6.
MinimizeResult minimize_rayleigh(const AlphaParam& alpha, const FamilyConfig& cfg = {});

}  // namespace grushin

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "grushin/alpha.hpp"
#include "grushin/grid_function.hpp"

namespace grushin {

// lambda(t_k) = |{u > t_k}|_{2,a} at increasing levels t_k.
struct DistributionFunction {
    std::vector<double> levels;
    std::vector<double> measures;
};

// Nonincreasing radial profile phi(r) in the Grushin radius r, piecewise linear between
// breakpoints radii[0] = 0 < radii[1] < ... and zero beyond radii.back().
struct RadialProfile {
    double alpha = 1.0;
    std::vector<double> radii;
    std::vector<double> values;

    double operator()(double r) const;
    double max_value() const { return values.empty() ? 0.0 : values.front(); }
    // Largest r with phi(r) > t (0 when t >= max).
    double superlevel_radius(double t) const;
};

// Uniform levels t_k = max * k / count for k = 0..count.
std::vector<double> uniform_levels(double max, int count);

// Cell-centre weighted measure of the superlevel sets over active cells. Throws DomainError for u < 0.
DistributionFunction distribution_function(const GridFunction3D& u, const AlphaParam& alpha,
                                           const std::vector<double>& levels);

// Measure of {r < R} inside one sector: 2 pi R^3 / (3 n (a+1)^2).
double sector_ball_measure(double radius, const AlphaParam& alpha);
// Inverse of sector_ball_measure.
double radius_from_measure(double m, const AlphaParam& alpha);

// Weighted decreasing rearrangement onto the first sector. level_count uniform levels.
RadialProfile rearrange(const GridFunction3D& u, const AlphaParam& alpha, int level_count = 256);

// Restriction of grid sums to a sector: cells weighted by their sector membership (walls 1/2).
struct Region {
    std::optional<int> sector;
};

double weighted_lq_norm(const GridFunction3D& u, double q, const AlphaParam& alpha, Region region = {});
double weighted_lq_norm(const RadialProfile& phi, double q);

// Discrete int |grad_G u|^2 from face differences with zero outside the active cells;
// y-faces carry the weight |x|^{2a} of the cell centres. Equals h^3 u^T A u for the 7-point operator.
double grushin_energy(const GridFunction3D& u, const AlphaParam& alpha, Region region = {});
// (2 pi / n) int r^2 phi'(r)^2 dr, exact for the piecewise-linear profile.
double grushin_energy(const RadialProfile& phi);

struct PolyaSzegoReport {
    double energy = 0.0;             // grushin_energy(u)
    double rearranged_energy = 0.0;  // grushin_energy(u*)
    double gap = 0.0;                // energy - rearranged_energy, predicted >= 0
    double ratio = 0.0;              // rearranged_energy / energy (0 for u = 0)
};

PolyaSzegoReport polya_szego_gap(const GridFunction3D& u, const AlphaParam& alpha, int level_count = 256);

struct EquimeasurabilityReport {
    double support_measure = 0.0;
    double sup_gap = 0.0;  // max over midpoint levels of |lambda_u - lambda_{u*}|
    double relative_gap = 0.0;
};

// Compares |{u > t}| with |{u* > t}| at level_count uniform levels, the latter measured by
// sampling u* on a grid of the same dimensions over the first sector.
EquimeasurabilityReport equimeasurability(const GridFunction3D& u, const RadialProfile& phi,
                                          const AlphaParam& alpha, int level_count = 256);

struct CoareaComparison {
    double lhs = 0.0;  // -d/dt |{u > t}|_{2,a}
    double rhs = 0.0;  // -d/dt |{u* > t}|_{2,a}
    bool plateau = false;  // a positive-measure level set sits at t; the comparison is unreliable
};

// Central-difference estimate of the coarea integrals at level t with step dt
// (default max u / 32). Throws DomainError unless 0 < t < max u.
CoareaComparison coarea_derivative_compare(const GridFunction3D& u, const AlphaParam& alpha, double t,
                                           std::optional<double> dt = std::nullopt);

// Two-column CSV "r,phi".
void write_profile_csv(std::ostream& out, const RadialProfile& phi);

}  // namespace grushin

#pragma once

#include <string>

#include "grushin/alpha.hpp"
#include "grushin/grid_function.hpp"
#include "grushin/grushin_solver.hpp"
#include "grushin/weighted_geometry.hpp"

namespace grushin {

// (3a+3)/(p+1) - (a+1)/2. Zero exactly at p = 5. Throws DomainError for p < 1.
double pohozaev_coefficient(double p, const AlphaParam& alpha);

enum class ExponentRegime { subcritical, critical, supercritical };

ExponentRegime nonexistence_classify(double p);
std::string to_string(ExponentRegime r);
// One-line statement of what the regime implies on star-shaped domains.
std::string regime_consequence(ExponentRegime r);

struct StarShapedReport {
    bool star_shaped = false;
    double min_value = 0.0;  // min over boundary samples of x1 nu1 + x2 nu2 + (1+a) y nu3
    std::size_t samples = 0;
};

// x1 nu1 + x2 nu2 + (1+a) y nu3.
double dilation_flux(const Vec3& p, const Vec3& normal, const AlphaParam& alpha);

// Verdict true iff the minimum is >= -1e-10. Throws DomainError when the origin is not inside.
StarShapedReport star_shaped_check(const Domain& domain, const AlphaParam& alpha);
StarShapedReport star_shaped_check(const ImplicitShape& shape, const AlphaParam& alpha,
                                   const QuadratureConfig& cfg = {});

// Coefficient times h^3 sum |x|^{2a} |u|^{p+1}.
double pohozaev_lhs(const Domain& domain, const GridFunction3D& u, double p, const AlphaParam& alpha);

struct BoundaryTerm {
    double value = 0.0;    // 1/2 sum over faces of flux * density * (du/dnu)^2 * area
    double printed = 0.0;  // the same sum without the factor 1/2
};

// Boundary integral over the box faces. du/dnu from the zero wall value and the two nearest
// interior nodes (second-order one-sided difference). Throws DomainError on masked domains.
BoundaryTerm pohozaev_rhs(const Domain& domain, const GridFunction3D& u, const AlphaParam& alpha);

struct PohozaevReport {
    double p = 0.0;
    double coefficient = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double rhs_printed = 0.0;
    double residual = 0.0;          // |lhs - rhs| / max(|lhs|, |rhs|, 1e-14)
    double residual_printed = 0.0;  // same with rhs_printed
    bool trivial = false;           // u == 0
    ExponentRegime regime = ExponentRegime::subcritical;
    StarShapedReport star;
};

PohozaevReport pohozaev_residual(const Domain& domain, const GridFunction3D& u, double p, const AlphaParam& alpha);

}  // namespace grushin

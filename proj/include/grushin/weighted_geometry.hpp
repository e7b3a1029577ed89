#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "grushin/alpha.hpp"
#include "grushin/vec3.hpp"

namespace grushin {

using ScalarField = std::function<double(const Vec3&)>;

// Parametrized piece of a boundary surface over [s_min, s_max] x [t_min, t_max].
// normal() returns unit outward normals; area_element() the Hausdorff area Jacobian.
struct SurfacePatch {
    double s_min = 0.0, s_max = 1.0;
    double t_min = 0.0, t_max = 1.0;
    std::function<Vec3(double, double)> point;
    std::function<Vec3(double, double)> normal;
    std::function<double(double, double)> area_element;
};

// Builds a patch from a parametrization and its partial derivatives. The normal is
// orientation * (d_s P x d_t P) / |d_s P x d_t P|.
SurfacePatch make_patch(double s_min, double s_max, double t_min, double t_max,
                        std::function<Vec3(double, double)> point,
                        std::function<Vec3(double, double)> d_s, std::function<Vec3(double, double)> d_t,
                        double orientation);

// Bounded open set E = {level < 0} inside bbox.
//
// When confining_sector is set, E lies in the closure of that sector and its
// perimeter is measured relative to the open sector: faces lying on the sector
// walls are not boundary. Built-in sector shapes carry patches for the curved part only.
struct ImplicitShape {
    std::string name;
    ScalarField level;
    Box bbox;
    std::vector<SurfacePatch> patches;
    std::optional<int> confining_sector;
};

struct QuadratureConfig {
    int volume_resolution = 128;  // cells per bbox axis
    int surface_resolution = 64;  // panels per patch axis (4-point Gauss-Legendre each)
    int refine_depth = 3;         // recursive octree splits of boundary cells, <= 8

    void validate() const;
    QuadratureConfig coarsened() const;  // half resolutions, used for error estimates
};

// One quadrature sample on the boundary.
struct BoundarySample {
    Vec3 point;
    Vec3 normal;
    double weight;  // area element times quadrature weight
};

// Boundary samples from the analytic patches, or from a marching-tetrahedra
// triangulation of the level function when the shape has none.
std::vector<BoundarySample> boundary_samples(const ImplicitShape& shape, const QuadratureConfig& cfg);

// Integral of weight over E by voxel quadrature with octree refinement near the boundary.
double integrate_over(const ImplicitShape& shape, const ScalarField& weight, const QuadratureConfig& cfg);

// |E|_{2,alpha} = int_E |x|^{2 alpha}.
double weighted_volume(const ImplicitShape& shape, const AlphaParam& alpha, const QuadratureConfig& cfg);

// Lebesgue volume of E.
double euclidean_volume(const ImplicitShape& shape, const QuadratureConfig& cfg);

// Surface density |x|^a sqrt(nu1^2 + nu2^2 + |x|^{2a} nu3^2) of the weighted perimeter.
double perimeter_density(const Vec3& p, const Vec3& normal, const AlphaParam& alpha);

// P_{2,alpha}(E). For confined shapes only the boundary inside the open sector counts.
double weighted_perimeter(const ImplicitShape& shape, const AlphaParam& alpha, const QuadratureConfig& cfg);

// P_{2,alpha,j}(E): the weighted perimeter of the boundary portion strictly inside sector j.
double sector_perimeter(const ImplicitShape& shape, const AlphaParam& alpha, int j,
                        const QuadratureConfig& cfg);

// Analytic reference values of the ball sector B_{s_j}.
double reference_volume(const AlphaParam& alpha);
double reference_sector_perimeter(const AlphaParam& alpha);
double reference_quotient(const AlphaParam& alpha);

// P^{3/2} / |E|_{2,alpha}. Throws DomainError on zero volume.
double isoperimetric_quotient(const ImplicitShape& shape, const AlphaParam& alpha, const QuadratureConfig& cfg);

struct DeficitReport {
    double volume = 0.0;
    double perimeter = 0.0;
    double quotient = 0.0;
    double reference_quotient = 0.0;
    double deficit = 0.0;         // quotient - reference_quotient, predicted >= 0
    double error_estimate = 0.0;  // |quotient(cfg) - quotient(cfg.coarsened())|
};

DeficitReport isoperimetric_deficit(const ImplicitShape& shape, const AlphaParam& alpha,
                                    const QuadratureConfig& cfg);

// E_lambda = {(lambda x1, lambda x2, lambda^{alpha+1} y) : (x1, x2, y) in E}.
ImplicitShape anisotropic_scale(const ImplicitShape& shape, double lambda, const AlphaParam& alpha);

}  // namespace grushin

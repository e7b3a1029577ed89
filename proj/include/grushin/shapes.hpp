#pragma once

#include <string>
#include <vector>

#include "grushin/alpha.hpp"
#include "grushin/vec3.hpp"
#include "grushin/weighted_geometry.hpp"

namespace grushin {

// Parameters understood by make_shape. Unused fields are ignored by a given shape.
//
// Anisotropic shapes live in flattened coordinates xi = |x|^{alpha+1}/(alpha+1):
// {xi^2/a^2 + y^2/b^2 < 1} with a = radius * semi_axes.x1 and b = radius * semi_axes.y.
struct ShapeParams {
    Vec3 center{};
    double radius = 1.0;
    double half_height = 1.0;
    Vec3 semi_axes{1.0, 1.0, 1.0};
    Box box{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
    int sector = 1;
    double exponent = 4.0;  // superellipsoid power
};

ImplicitShape make_ellipsoid(const Vec3& center, const Vec3& semi_axes);
ImplicitShape make_ball(const Vec3& center, double radius);
ImplicitShape make_cylinder(const Vec3& center, double radius, double half_height);
ImplicitShape make_box(const Box& box);
ImplicitShape make_anisotropic_ball(double a, double b, const AlphaParam& alpha);
// Anisotropic ball intersected with sector j; only the curved boundary carries patches.
ImplicitShape make_ball_sector(double a, double b, int j, const AlphaParam& alpha);
// {sum |p_i - c_i|^k / s_i^k < 1}; level function only, so perimeters go through triangulation.
ImplicitShape make_superellipsoid(const Vec3& center, const Vec3& semi_axes, double exponent);
ImplicitShape make_empty();

// Names accepted by make_shape.
const std::vector<std::string>& shape_names();

// Throws DomainError for an unknown name or invalid parameters.
ImplicitShape make_shape(const std::string& name, const ShapeParams& params, const AlphaParam& alpha);

struct ReferenceBall {
    ImplicitShape shape;
    double volume;
    double sector_perimeter;
};

// B_{s_j} = {|x|^{2a+2}/(a+1)^2 + y^2 < 1} within sector j, with its analytic measures.
ReferenceBall reference_ball(const AlphaParam& alpha, int j);

// Shapes used by the isoperimetric sweep.
std::vector<ImplicitShape> isoperimetric_corpus(const AlphaParam& alpha);

}  // namespace grushin

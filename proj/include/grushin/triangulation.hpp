#pragma once

#include <vector>

#include "grushin/vec3.hpp"
#include "grushin/weighted_geometry.hpp"

namespace grushin {

struct Triangle {
    Vec3 a, b, c;

    double area() const { return 0.5 * norm(cross(b - a, c - a)); }
    Vec3 centroid() const { return (a + b + c) / 3.0; }
};

// Marching-tetrahedra triangulation of {level = 0} on a regular lattice with
// `resolution` cells per bbox axis (each cube split into six tetrahedra).
std::vector<Triangle> triangulate_level_set(const ScalarField& level, const Box& bbox, int resolution);

// Unit gradient of level at p by central differences with step h.
Vec3 level_normal(const ScalarField& level, const Vec3& p, double h);

}  // namespace grushin

#pragma once

#include "grushin/alpha.hpp"
#include "grushin/vec3.hpp"
#include "grushin/weighted_geometry.hpp"

namespace grushin {

// Cylindrical coordinates (r, theta, y) with r > 0 and theta in (0, pi/n) for the first sector.
struct PolarTriple {
    double r = 0.0;
    double theta = 0.0;
    double y = 0.0;
};

// (r, theta, y) -> (r cos theta, r sin theta, y).
Vec3 phi1(const PolarTriple& t);
PolarTriple phi1_inverse(const Vec3& p);

// (r, theta, eta) -> (r^{a+1} cos((a+1) theta) / (a+1), r^{a+1} sin((a+1) theta) / (a+1), eta).
Vec3 phi2(const PolarTriple& t, const AlphaParam& alpha);
PolarTriple phi2_inverse(const Vec3& q, const AlphaParam& alpha);

// The measure-flattening map phi2 o phi1^{-1}: sends a set E in the first sector to
// a set in the wedge of angle (a+1) pi / n whose Euclidean volume is |E|_{2,a} and
// whose Euclidean boundary area inside the wedge is P_{2,a,1}(E).
// Both directions throw DomainError outside the open (image) sector.
Vec3 flatten(const Vec3& p, const AlphaParam& alpha);
Vec3 unflatten(const Vec3& q, const AlphaParam& alpha);

// Opening angle (a+1) pi / n of the flattened sector.
double flattened_sector_angle(const AlphaParam& alpha);

struct PushforwardReport {
    double weighted = 0.0;   // measure of E computed with the Grushin weights
    double euclidean = 0.0;  // Euclidean measure of the flattened set
    double rel_gap = 0.0;
};

// |E|_{2,a} against the Euclidean volume of flatten(E).
// Throws DomainError when E leaves the closed first sector.
PushforwardReport pushforward_volume_check(const ImplicitShape& shape, const AlphaParam& alpha,
                                           const QuadratureConfig& cfg);

// P_{2,a,1}(E) against the Euclidean area of flatten(boundary of E inside the sector).
PushforwardReport pushforward_perimeter_check(const ImplicitShape& shape, const AlphaParam& alpha,
                                              const QuadratureConfig& cfg);

}  // namespace grushin

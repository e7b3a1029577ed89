#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "grushin/vec3.hpp"

namespace grushin {

// Smallest positive integer n with n >= alpha + 1. Throws DomainError for alpha <= 0.
int sector_count(double alpha);

// The degeneracy exponent alpha > 0 together with the derived sector count n(alpha).
class AlphaParam {
public:
    explicit AlphaParam(double alpha);

    double value() const { return alpha_; }
    int sector_count() const { return n_; }
    // Number of sectors R^3_{s_j}, j = 1..2n.
    int sectors() const { return 2 * n_; }
    // Opening angle pi / n of one sector.
    double sector_angle() const { return std::numbers::pi / n_; }

    // |x|^{2 alpha}, the volume weight.
    double volume_weight(const Vec3& p) const { return std::pow(horizontal_norm(p), 2.0 * alpha_); }

    // Grushin radius r = (|x|^{2a+2} + (a+1)^2 y^2)^{1/2}.
    double grushin_radius(const Vec3& p) const {
        const double rho = horizontal_norm(p);
        const double a1 = alpha_ + 1.0;
        return std::sqrt(std::pow(rho, 2.0 * a1) + a1 * a1 * p.y * p.y);
    }

private:
    double alpha_;
    int n_;
};

// Polar angle of (x1, x2) in [0, 2 pi).
inline double polar_angle(const Vec3& p) {
    double theta = std::atan2(p.x2, p.x1);
    if (theta < 0.0) theta += 2.0 * std::numbers::pi;
    return theta;
}

// Sector index j in 1..2n whose open angular interval contains p, or nullopt for
// points on a sector wall or on the y-axis.
std::optional<int> sector_of_point(const Vec3& p, const AlphaParam& alpha);

// Sector-j indicator with walls counted as 1/2. Used to restrict grid sums to a sector.
double sector_membership(const Vec3& p, const AlphaParam& alpha, int j);

// Throws DomainError unless 1 <= j <= 2n(alpha).
void check_sector_index(const AlphaParam& alpha, int j);

}  // namespace grushin

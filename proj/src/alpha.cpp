#include "grushin/alpha.hpp"

#include <string>

#include "grushin/errors.hpp"

namespace grushin {

int sector_count(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("alpha must be a positive finite number, got " + std::to_string(alpha));
    }
    return static_cast<int>(std::ceil(alpha + 1.0));
}

AlphaParam::AlphaParam(double alpha) : alpha_(alpha), n_(grushin::sector_count(alpha)) {}

std::optional<int> sector_of_point(const Vec3& p, const AlphaParam& alpha) {
    if (p.x1 == 0.0 && p.x2 == 0.0) return std::nullopt;
    const double theta = polar_angle(p);
    const double width = alpha.sector_angle();
    const double q = theta / width;
    const double k = std::floor(q);
    // A point is on a wall when theta is (to rounding) an integer multiple of pi/n.
    const double tol = 1e-14 * std::max(1.0, q);
    if (q - k <= tol || k + 1.0 - q <= tol) return std::nullopt;
    const int j = static_cast<int>(k) + 1;
    return j > alpha.sectors() ? std::nullopt : std::optional<int>(j);
}

double sector_membership(const Vec3& p, const AlphaParam& alpha, int j) {
    if (const auto s = sector_of_point(p, alpha)) return *s == j ? 1.0 : 0.0;
    if (p.x1 == 0.0 && p.x2 == 0.0) return 1.0 / alpha.sectors();
    // On a wall: shared by the two adjacent sectors.
    const double theta = polar_angle(p);
    const int wall = static_cast<int>(std::lround(theta / alpha.sector_angle())) % alpha.sectors();
    const int left = wall == 0 ? alpha.sectors() : wall;
    const int right = wall + 1;
    return (j == left || j == right) ? 0.5 : 0.0;
}

void check_sector_index(const AlphaParam& alpha, int j) {
    if (j < 1 || j > alpha.sectors()) {
        throw DomainError("sector index " + std::to_string(j) + " outside 1.." +
                          std::to_string(alpha.sectors()));
    }
}

}  // namespace grushin

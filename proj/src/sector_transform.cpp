#include "grushin/sector_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "grushin/errors.hpp"
#include "grushin/parallel.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/triangulation.hpp"

namespace grushin {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 flatten_unchecked(const Vec3& p, double a1) {
    const double rho = horizontal_norm(p);
    const double theta = std::atan2(p.x2, p.x1);
    const double xi = std::pow(rho, a1) / a1;
    return {xi * std::cos(a1 * theta), xi * std::sin(a1 * theta), p.y};
}

Vec3 unflatten_unchecked(const Vec3& q, double a1) {
    const double xi = horizontal_norm(q);
    const double phi = std::atan2(q.x2, q.x1);
    const double rho = std::pow(a1 * xi, 1.0 / a1);
    return {rho * std::cos(phi / a1), rho * std::sin(phi / a1), q.y};
}

double rel_gap(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

// Throws unless every lattice point inside E lies in the closed first sector.
void require_first_sector(const ImplicitShape& shape, const AlphaParam& alpha) {
    constexpr int n = 48;
    const Box& bb = shape.bbox;
    const Vec3 h = bb.extent() / static_cast<double>(n);
    const double wall = alpha.sector_angle();
    const double tol = 1e-9;
    for (int k = 0; k <= n; ++k) {
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= n; ++i) {
                const Vec3 p{bb.lo.x1 + i * h.x1, bb.lo.x2 + j * h.x2, bb.lo.y + k * h.y};
                if (!(shape.level(p) < 0.0) || horizontal_norm(p) == 0.0) continue;
                const double theta = std::atan2(p.x2, p.x1);
                if (theta < -tol || theta > wall + tol) {
                    throw DomainError("shape '" + shape.name + "' is not contained in the first sector");
                }
            }
        }
    }
}

// Bounding box of flatten(bbox restricted to the closed first sector).
Box flattened_bbox(const Box& bb, const AlphaParam& alpha) {
    const double a1 = alpha.value() + 1.0;
    double rho_min = 0.0;
    const double dx1 = std::max({bb.lo.x1, 0.0, -bb.hi.x1});
    const double dx2 = std::max({bb.lo.x2, 0.0, -bb.hi.x2});
    rho_min = std::hypot(dx1, dx2);
    double rho_max = 0.0;
    for (const double x1 : {bb.lo.x1, bb.hi.x1})
        for (const double x2 : {bb.lo.x2, bb.hi.x2}) rho_max = std::max(rho_max, std::hypot(x1, x2));

    double t_min = 0.0, t_max = alpha.sector_angle();
    if (bb.lo.x1 > 0.0) {
        t_min = alpha.sector_angle();
        t_max = 0.0;
        for (const double x1 : {bb.lo.x1, bb.hi.x1}) {
            for (const double x2 : {bb.lo.x2, bb.hi.x2}) {
                const double t = std::clamp(std::atan2(x2, x1), 0.0, alpha.sector_angle());
                t_min = std::min(t_min, t);
                t_max = std::max(t_max, t);
            }
        }
    }
    const double xi_lo = std::pow(rho_min, a1) / a1;
    const double xi_hi = std::pow(rho_max, a1) / a1;
    const double phi_lo = a1 * t_min, phi_hi = a1 * t_max;
    Box out{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(), bb.lo.y},
            {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(), bb.hi.y}};
    auto include = [&out](double xi, double phi) {
        out.lo.x1 = std::min(out.lo.x1, xi * std::cos(phi));
        out.hi.x1 = std::max(out.hi.x1, xi * std::cos(phi));
        out.lo.x2 = std::min(out.lo.x2, xi * std::sin(phi));
        out.hi.x2 = std::max(out.hi.x2, xi * std::sin(phi));
    };
    for (const double xi : {xi_lo, xi_hi}) {
        include(xi, phi_lo);
        include(xi, phi_hi);
        for (int k = 0; k < 8; ++k) {
            const double phi = 0.5 * kPi * k;
            if (phi > phi_lo && phi < phi_hi) include(xi, phi);
        }
    }
    const Vec3 pad = out.extent() * 0.01 + Vec3{1e-12, 1e-12, 0.0};
    out.lo -= pad;
    out.hi += pad;
    return out;
}

}  // namespace

Vec3 phi1(const PolarTriple& t) { return {t.r * std::cos(t.theta), t.r * std::sin(t.theta), t.y}; }

PolarTriple phi1_inverse(const Vec3& p) { return {horizontal_norm(p), polar_angle(p), p.y}; }

Vec3 phi2(const PolarTriple& t, const AlphaParam& alpha) {
    const double a1 = alpha.value() + 1.0;
    const double xi = std::pow(t.r, a1) / a1;
    return {xi * std::cos(a1 * t.theta), xi * std::sin(a1 * t.theta), t.y};
}

PolarTriple phi2_inverse(const Vec3& q, const AlphaParam& alpha) {
    const double a1 = alpha.value() + 1.0;
    return {std::pow(a1 * horizontal_norm(q), 1.0 / a1), polar_angle(q) / a1, q.y};
}

double flattened_sector_angle(const AlphaParam& alpha) { return (alpha.value() + 1.0) * alpha.sector_angle(); }

Vec3 flatten(const Vec3& p, const AlphaParam& alpha) {
    if (sector_of_point(p, alpha) != 1) throw DomainError("flatten: point is not inside the open first sector");
    return flatten_unchecked(p, alpha.value() + 1.0);
}

Vec3 unflatten(const Vec3& q, const AlphaParam& alpha) {
    const double phi = std::atan2(q.x2, q.x1);
    if (horizontal_norm(q) == 0.0 || !(phi > 0.0) || !(phi < flattened_sector_angle(alpha))) {
        throw DomainError("unflatten: point is not inside the open flattened sector");
    }
    return unflatten_unchecked(q, alpha.value() + 1.0);
}

PushforwardReport pushforward_volume_check(const ImplicitShape& shape, const AlphaParam& alpha,
                                           const QuadratureConfig& cfg) {
    require_first_sector(shape, alpha);
    PushforwardReport r;
    r.weighted = weighted_volume(shape, alpha, cfg);

    const double a1 = alpha.value() + 1.0;
    const double big = flattened_sector_angle(alpha);
    // The flattened wedge is convex (opening <= pi): intersection of two half-planes.
    const Vec3 w1{-std::sin(big), std::cos(big), 0.0};
    ImplicitShape image;
    image.name = shape.name + "-flattened";
    image.bbox = flattened_bbox(shape.bbox, alpha);
    image.level = [level = shape.level, a1, big, w1](const Vec3& q) {
        const double wedge = std::max(-q.x2, dot(q, w1));
        double phi = std::atan2(q.x2, q.x1);
        if (phi < 0.0) phi = phi < -0.5 * (2.0 * kPi - big) ? big : 0.0;
        phi = std::clamp(phi, 0.0, big);
        const double xi = horizontal_norm(q);
        const Vec3 clamped{xi * std::cos(phi), xi * std::sin(phi), q.y};
        return std::max(wedge, level(unflatten_unchecked(clamped, a1)));
    };
    r.euclidean = euclidean_volume(image, cfg);
    r.rel_gap = rel_gap(r.weighted, r.euclidean);
    return r;
}

PushforwardReport pushforward_perimeter_check(const ImplicitShape& shape, const AlphaParam& alpha,
                                              const QuadratureConfig& cfg) {
    require_first_sector(shape, alpha);
    PushforwardReport r;
    r.weighted = sector_perimeter(shape, alpha, 1, cfg);
    const double a1 = alpha.value() + 1.0;

    if (!shape.patches.empty()) {
        const GaussRule rule = gauss_legendre(4);
        const int panels = cfg.surface_resolution;
        std::vector<double> partial;
        for (const auto& patch : shape.patches) {
            const double ds = (patch.s_max - patch.s_min) / panels;
            const double dt = (patch.t_max - patch.t_min) / panels;
            const double hs = 1e-6 * ds, ht = 1e-6 * dt;
            auto mapped = [&](double s, double t) { return flatten_unchecked(patch.point(s, t), a1); };
            double sum = 0.0;
            for (int ps = 0; ps < panels; ++ps) {
                for (int pt = 0; pt < panels; ++pt) {
                    for (int a = 0; a < 4; ++a) {
                        const double s = patch.s_min + ds * (ps + 0.5 * (rule.nodes[a] + 1.0));
                        for (int b = 0; b < 4; ++b) {
                            const double t = patch.t_min + dt * (pt + 0.5 * (rule.nodes[b] + 1.0));
                            if (sector_of_point(patch.point(s, t), alpha) != 1) continue;
                            const Vec3 d_s = (mapped(s + hs, t) - mapped(s - hs, t)) / (2.0 * hs);
                            const Vec3 d_t = (mapped(s, t + ht) - mapped(s, t - ht)) / (2.0 * ht);
                            sum += rule.weights[a] * rule.weights[b] * 0.25 * ds * dt * norm(cross(d_s, d_t));
                        }
                    }
                }
            }
            partial.push_back(sum);
        }
        r.euclidean = pairwise_sum(partial);
    } else {
        const auto tris = triangulate_level_set(shape.level, shape.bbox, cfg.volume_resolution);
        std::vector<double> areas;
        areas.reserve(tris.size());
        const Vec3 e = shape.bbox.extent();
        const double tol = 1e-6 * std::max({e.x1, e.x2, e.y});
        const Vec3 w0{0.0, 1.0, 0.0};
        const Vec3 w1{-std::sin(alpha.sector_angle()), std::cos(alpha.sector_angle()), 0.0};
        for (const auto& tri : tris) {
            const Vec3 c = tri.centroid();
            if (sector_of_point(c, alpha) != 1) continue;
            // Faces lying on a confining wall are not boundary inside the open sector.
            bool on_wall = false;
            for (const Vec3& w : {w0, w1}) {
                on_wall = on_wall || (std::abs(dot(tri.a, w)) < tol && std::abs(dot(tri.b, w)) < tol &&
                                      std::abs(dot(tri.c, w)) < tol);
            }
            if (on_wall) continue;
            const Triangle img{flatten_unchecked(tri.a, a1), flatten_unchecked(tri.b, a1), flatten_unchecked(tri.c, a1)};
            areas.push_back(img.area());
        }
        r.euclidean = pairwise_sum(areas);
    }
    r.rel_gap = rel_gap(r.weighted, r.euclidean);
    return r;
}

}  // namespace grushin

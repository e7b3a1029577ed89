#include "grushin/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "grushin/errors.hpp"

namespace grushin {

namespace {

constexpr double kPi = std::numbers::pi;

Box padded(Box b, double fraction) {
    const Vec3 pad = b.extent() * fraction;
    b.lo -= pad;
    b.hi += pad;
    return b;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

// Flattened horizontal radius xi = rho^{a+1}/(a+1) and its inverse.
double flatten_radius(double rho, double a1) { return std::pow(rho, a1) / a1; }
double unflatten_radius(double xi, double a1) { return std::pow(a1 * xi, 1.0 / a1); }

// Curved boundary of {xi^2/a^2 + y^2/b^2 < 1} over polar angles [t0, t1].
SurfacePatch anisotropic_patch(double a, double b, double t0, double t1, double a1) {
    auto rho = [a, a1](double phi) { return unflatten_radius(a * std::sin(phi), a1); };
    auto drho = [a, a1](double phi) {
        // d/dphi ((a1 a sin phi)^{1/a1}) = (a1 a sin phi)^{1/a1 - 1} a cos phi
        return std::pow(a1 * a * std::sin(phi), 1.0 / a1 - 1.0) * a * std::cos(phi);
    };
    return make_patch(
        0.0, kPi, t0, t1,
        [rho, b](double phi, double t) {
            const double r = rho(phi);
            return Vec3{r * std::cos(t), r * std::sin(t), b * std::cos(phi)};
        },
        [drho, b](double phi, double t) {
            const double d = drho(phi);
            return Vec3{d * std::cos(t), d * std::sin(t), -b * std::sin(phi)};
        },
        [rho](double phi, double t) {
            const double r = rho(phi);
            return Vec3{-r * std::sin(t), r * std::cos(t), 0.0};
        },
        1.0);
}

ScalarField anisotropic_level(double a, double b, double a1) {
    return [a, b, a1](const Vec3& p) {
        const double xi = flatten_radius(horizontal_norm(p), a1) / a;
        const double eta = p.y / b;
        return std::sqrt(xi * xi + eta * eta) - 1.0;
    };
}

}  // namespace

ImplicitShape make_ellipsoid(const Vec3& c, const Vec3& s) {
    require_positive(s.x1, "ellipsoid semi-axis");
    require_positive(s.x2, "ellipsoid semi-axis");
    require_positive(s.y, "ellipsoid semi-axis");
    ImplicitShape shape;
    shape.name = "ellipsoid";
    const double smin = std::min({s.x1, s.x2, s.y});
    shape.level = [c, s, smin](const Vec3& p) {
        const Vec3 d = p - c;
        return smin * (norm(Vec3{d.x1 / s.x1, d.x2 / s.x2, d.y / s.y}) - 1.0);
    };
    shape.bbox = padded({c - s, c + s}, 0.01);
    shape.patches.push_back(make_patch(
        0.0, kPi, 0.0, 2.0 * kPi,
        [c, s](double phi, double t) {
            return c + Vec3{s.x1 * std::sin(phi) * std::cos(t), s.x2 * std::sin(phi) * std::sin(t), s.y * std::cos(phi)};
        },
        [s](double phi, double t) {
            return Vec3{s.x1 * std::cos(phi) * std::cos(t), s.x2 * std::cos(phi) * std::sin(t), -s.y * std::sin(phi)};
        },
        [s](double phi, double t) {
            return Vec3{-s.x1 * std::sin(phi) * std::sin(t), s.x2 * std::sin(phi) * std::cos(t), 0.0};
        },
        1.0));
    return shape;
}

ImplicitShape make_ball(const Vec3& center, double radius) {
    require_positive(radius, "ball radius");
    ImplicitShape shape = make_ellipsoid(center, {radius, radius, radius});
    shape.name = "ball";
    return shape;
}

ImplicitShape make_cylinder(const Vec3& c, double radius, double half_height) {
    require_positive(radius, "cylinder radius");
    require_positive(half_height, "cylinder half-height");
    ImplicitShape shape;
    shape.name = "cylinder";
    shape.level = [c, radius, half_height](const Vec3& p) {
        const Vec3 d = p - c;
        return std::max(horizontal_norm(d) - radius, std::abs(d.y) - half_height);
    };
    shape.bbox = padded({c - Vec3{radius, radius, half_height}, c + Vec3{radius, radius, half_height}}, 0.01);
    shape.patches.push_back(make_patch(
        0.0, 2.0 * kPi, -half_height, half_height,
        [c, radius](double t, double y) { return c + Vec3{radius * std::cos(t), radius * std::sin(t), y}; },
        [radius](double t, double) { return Vec3{-radius * std::sin(t), radius * std::cos(t), 0.0}; },
        [](double, double) { return Vec3{0.0, 0.0, 1.0}; }, 1.0));
    for (const double side : {1.0, -1.0}) {
        const double h = side * half_height;
        shape.patches.push_back(make_patch(
            0.0, radius, 0.0, 2.0 * kPi,
            [c, h](double r, double t) { return c + Vec3{r * std::cos(t), r * std::sin(t), h}; },
            [](double, double t) { return Vec3{std::cos(t), std::sin(t), 0.0}; },
            [](double r, double t) { return Vec3{-r * std::sin(t), r * std::cos(t), 0.0}; }, side));
    }
    return shape;
}

ImplicitShape make_box(const Box& box) {
    if (box.degenerate()) throw DomainError("box must have positive extent on every axis");
    ImplicitShape shape;
    shape.name = "box";
    shape.level = [box](const Vec3& p) {
        double v = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k) v = std::max({v, box.lo[k] - p[k], p[k] - box.hi[k]});
        return v;
    };
    shape.bbox = padded(box, 0.01);
    for (int k = 0; k < 3; ++k) {
        const int ks = (k + 1) % 3;
        const int kt = (k + 2) % 3;
        for (const bool upper : {true, false}) {
            const double fixed = upper ? box.hi[k] : box.lo[k];
            Vec3 es, et;
            es[ks] = 1.0;
            et[kt] = 1.0;
            shape.patches.push_back(make_patch(
                box.lo[ks], box.hi[ks], box.lo[kt], box.hi[kt],
                [k, ks, kt, fixed](double s, double t) {
                    Vec3 p;
                    p[k] = fixed;
                    p[ks] = s;
                    p[kt] = t;
                    return p;
                },
                [es](double, double) { return es; }, [et](double, double) { return et; }, upper ? 1.0 : -1.0));
        }
    }
    return shape;
}

ImplicitShape make_anisotropic_ball(double a, double b, const AlphaParam& alpha) {
    require_positive(a, "anisotropic ball horizontal semi-axis");
    require_positive(b, "anisotropic ball vertical semi-axis");
    const double a1 = alpha.value() + 1.0;
    ImplicitShape shape;
    shape.name = "anisotropic-ball";
    shape.level = anisotropic_level(a, b, a1);
    const double rmax = unflatten_radius(a, a1);
    shape.bbox = padded({{-rmax, -rmax, -b}, {rmax, rmax, b}}, 0.01);
    shape.patches.push_back(anisotropic_patch(a, b, 0.0, 2.0 * kPi, a1));
    return shape;
}

ImplicitShape make_ball_sector(double a, double b, int j, const AlphaParam& alpha) {
    require_positive(a, "ball sector horizontal semi-axis");
    require_positive(b, "ball sector vertical semi-axis");
    check_sector_index(alpha, j);
    const double a1 = alpha.value() + 1.0;
    const double t0 = (j - 1) * alpha.sector_angle();
    const double t1 = j * alpha.sector_angle();
    ImplicitShape shape;
    shape.name = "ball-sector";
    shape.confining_sector = j;
    // The sector is convex (opening pi/n <= pi/2), so it is the intersection of two half-planes.
    const Vec3 w0{-std::sin(t0), std::cos(t0), 0.0};
    const Vec3 w1{-std::sin(t1), std::cos(t1), 0.0};
    shape.level = [ball = anisotropic_level(a, b, a1), w0, w1](const Vec3& p) {
        return std::max({ball(p), -dot(p, w0), dot(p, w1)});
    };
    const double rmax = unflatten_radius(a, a1);
    Box bb{{0.0, 0.0, -b}, {0.0, 0.0, b}};
    auto include = [&bb, rmax](double t) {
        bb.lo.x1 = std::min(bb.lo.x1, rmax * std::cos(t));
        bb.hi.x1 = std::max(bb.hi.x1, rmax * std::cos(t));
        bb.lo.x2 = std::min(bb.lo.x2, rmax * std::sin(t));
        bb.hi.x2 = std::max(bb.hi.x2, rmax * std::sin(t));
    };
    include(t0);
    include(t1);
    for (int k = 0; k < 8; ++k) {
        const double t = 0.5 * kPi * k;
        if (t > t0 && t < t1) include(t);
    }
    shape.bbox = padded(bb, 0.01);
    shape.patches.push_back(anisotropic_patch(a, b, t0, t1, a1));
    return shape;
}

ImplicitShape make_superellipsoid(const Vec3& c, const Vec3& s, double k) {
    require_positive(s.x1, "superellipsoid semi-axis");
    require_positive(s.x2, "superellipsoid semi-axis");
    require_positive(s.y, "superellipsoid semi-axis");
    if (!(k >= 2.0)) throw DomainError("superellipsoid exponent must be >= 2");
    ImplicitShape shape;
    shape.name = "superellipsoid";
    const double smin = std::min({s.x1, s.x2, s.y});
    shape.level = [c, s, k, smin](const Vec3& p) {
        const Vec3 d = p - c;
        const double sum = std::pow(std::abs(d.x1 / s.x1), k) + std::pow(std::abs(d.x2 / s.x2), k) +
                           std::pow(std::abs(d.y / s.y), k);
        return smin * (std::pow(sum, 1.0 / k) - 1.0);
    };
    shape.bbox = padded({c - s, c + s}, 0.02);
    return shape;
}

ImplicitShape make_empty() {
    ImplicitShape shape;
    shape.name = "empty";
    shape.level = [](const Vec3&) { return 1.0; };
    shape.bbox = {{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
    return shape;
}

const std::vector<std::string>& shape_names() {
    static const std::vector<std::string> names{"ball",          "ellipsoid",  "cylinder",
                                                "box",           "anisotropic-ball", "ball-sector",
                                                "superellipsoid", "empty"};
    return names;
}

ImplicitShape make_shape(const std::string& name, const ShapeParams& p, const AlphaParam& alpha) {
    if (name == "ball") return make_ball(p.center, p.radius);
    if (name == "ellipsoid") return make_ellipsoid(p.center, p.semi_axes);
    if (name == "cylinder") return make_cylinder(p.center, p.radius, p.half_height);
    if (name == "box") return make_box(p.box);
    if (name == "anisotropic-ball") return make_anisotropic_ball(p.radius * p.semi_axes.x1, p.radius * p.semi_axes.y, alpha);
    if (name == "ball-sector")
        return make_ball_sector(p.radius * p.semi_axes.x1, p.radius * p.semi_axes.y, p.sector, alpha);
    if (name == "superellipsoid") return make_superellipsoid(p.center, p.semi_axes, p.exponent);
    if (name == "empty") return make_empty();
    throw DomainError("unknown shape '" + name + "'");
}

ReferenceBall reference_ball(const AlphaParam& alpha, int j) {
    ImplicitShape shape = make_ball_sector(1.0, 1.0, j, alpha);
    shape.name = "reference-ball-sector";
    return {std::move(shape), reference_volume(alpha), reference_sector_perimeter(alpha)};
}

std::vector<ImplicitShape> isoperimetric_corpus(const AlphaParam& alpha) {
    std::vector<ImplicitShape> corpus;
    auto add = [&corpus](ImplicitShape s, const std::string& label) {
        s.name = label;
        corpus.push_back(std::move(s));
    };
    add(make_ball({0.0, 0.0, 0.0}, 1.0), "ball");
    add(make_ball({0.5, 0.0, 0.0}, 1.0), "ball-shifted");
    add(make_ball({2.0, 1.0, 0.5}, 0.7), "ball-off-axis");
    add(make_ellipsoid({0.0, 0.0, 0.0}, {1.0, 0.6, 0.4}), "ellipsoid-flat");
    add(make_ellipsoid({0.3, -0.2, 0.1}, {0.5, 1.2, 2.0}), "ellipsoid-tall");
    add(make_ellipsoid({0.0, 0.0, 0.0}, {2.0, 2.0, 0.3}), "ellipsoid-disc");
    add(make_cylinder({0.0, 0.0, 0.0}, 1.0, 1.0), "cylinder");
    add(make_cylinder({0.8, 0.0, 0.0}, 0.5, 2.0), "cylinder-shifted");
    add(make_box({{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}}), "cube");
    add(make_box({{0.2, -0.5, -0.3}, {1.4, 0.7, 0.3}}), "box-off-axis");
    add(make_anisotropic_ball(1.0, 1.0, alpha), "anisotropic-ball");
    add(make_ball_sector(1.0, 1.0, 1, alpha), "ball-sector");
    add(make_ball_sector(0.5, 0.5, 2, alpha), "ball-sector-small");
    add(make_ball_sector(1.0, 0.4, 1, alpha), "ball-sector-oblate");
    add(make_superellipsoid({0.0, 0.0, 0.0}, {1.0, 0.8, 0.6}, 4.0), "superellipsoid");
    return corpus;
}

}  // namespace grushin

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "grushin/alpha.hpp"
#include "grushin/errors.hpp"
#include "grushin/shapes.hpp"
#include "grushin/weighted_geometry.hpp"

using namespace grushin;
using std::numbers::pi;

namespace {
QuadratureConfig quick() {
    QuadratureConfig c;
    c.volume_resolution = 64;
    c.surface_resolution = 48;
    c.refine_depth = 3;
    return c;
}
}  // namespace

TEST_CASE("sector count is the smallest integer above alpha + 1") {
    CHECK(sector_count(1.0) == 2);
    CHECK(sector_count(0.5) == 2);
    CHECK(sector_count(2.5) == 4);
    CHECK(sector_count(2.0) == 3);
    CHECK_THROWS_AS(sector_count(0.0), DomainError);
    CHECK_THROWS_AS(AlphaParam(-1.0), DomainError);
}

TEST_CASE("sector lookup") {
    const AlphaParam a(1.0);
    CHECK(sector_of_point({1, 1, 0}, a) == 1);
    CHECK(sector_of_point({-1, 0.0001, 5}, a) == 2);
    CHECK_FALSE(sector_of_point({0, 0, 1}, a).has_value());
    CHECK_FALSE(sector_of_point({0, 1, 0}, a).has_value());  // wall between sectors 1 and 2
    CHECK(sector_of_point({1, -1, 0}, a) == 4);
    CHECK_THROWS_AS(check_sector_index(a, 5), DomainError);
}

TEST_CASE("weighted volume of the unit cylinder and the reference sector") {
    const AlphaParam a(1.0);
    const auto cfg = quick();
    CHECK(weighted_volume(make_cylinder({}, 1.0, 1.0), a, cfg) == doctest::Approx(pi).epsilon(2e-4));
    const ReferenceBall ref = reference_ball(a, 1);
    CHECK(ref.volume == doctest::Approx(2 * pi / 3).epsilon(1e-14));
    CHECK(weighted_volume(ref.shape, a, cfg) == doctest::Approx(2 * pi / 3).epsilon(1e-3));
    CHECK(weighted_volume(make_empty(), a, cfg) == 0.0);
}

TEST_CASE("reference values for several alpha") {
    CHECK(reference_ball(AlphaParam(0.5), 1).volume == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK(reference_ball(AlphaParam(2.0), 1).sector_perimeter == doctest::Approx(2 * pi).epsilon(1e-14));
    CHECK(reference_quotient(AlphaParam(1.0)) == doctest::Approx(3 * std::sqrt(2 * pi)).epsilon(1e-14));
}

TEST_CASE("weighted perimeter of the unit cylinder") {
    const AlphaParam a(1.0);
    CHECK(weighted_perimeter(make_cylinder({}, 1.0, 1.0), a, quick()) == doctest::Approx(5 * pi).epsilon(1e-9));
    CHECK(weighted_perimeter(make_empty(), a, quick()) == 0.0);
}

TEST_CASE("sector perimeters of the reference sector") {
    const AlphaParam a(1.0);
    const ReferenceBall ref = reference_ball(a, 1);
    CHECK(sector_perimeter(ref.shape, a, 1, quick()) == doctest::Approx(2 * pi).epsilon(1e-6));
    CHECK(sector_perimeter(ref.shape, a, 2, quick()) == 0.0);
    CHECK_THROWS_AS(sector_perimeter(ref.shape, a, 0, quick()), DomainError);
    CHECK_THROWS_AS(sector_perimeter(ref.shape, a, 5, quick()), DomainError);
}

TEST_CASE("isoperimetric quotient and deficit") {
    const AlphaParam a(1.0);
    const auto cfg = quick();
    CHECK(isoperimetric_quotient(reference_ball(a, 1).shape, a, cfg) == doctest::Approx(7.51988).epsilon(1e-3));
    const auto cyl = make_cylinder({}, 1.0, 1.0);
    CHECK(isoperimetric_quotient(cyl, a, cfg) == doctest::Approx(std::pow(5 * pi, 1.5) / pi).epsilon(5e-4));
    const DeficitReport d = isoperimetric_deficit(cyl, a, cfg);
    CHECK(d.deficit == doctest::Approx(12.302).epsilon(1e-3));
    CHECK(d.error_estimate >= 0.0);
    CHECK_THROWS_AS(isoperimetric_quotient(make_empty(), a, cfg), DomainError);
}

TEST_CASE("random ellipsoids satisfy the isoperimetric inequality") {
    const AlphaParam a(1.0);
    const double qref = reference_quotient(a);
    const Vec3 axes[] = {{0.3, 0.9, 0.5}, {1.2, 0.4, 0.7}, {0.6, 0.6, 1.5}, {0.8, 1.1, 0.2}};
    for (const Vec3& s : axes) {
        const auto d = isoperimetric_deficit(make_ellipsoid({0.1, -0.2, 0.3}, s), a, quick());
        CHECK(d.deficit >= -0.01 * qref);
    }
}

TEST_CASE("anisotropic scaling exponents") {
    for (const double av : {0.5, 1.0, 2.0}) {
        const AlphaParam a(av);
        const auto cfg = quick();
        const auto e = make_ellipsoid({0.2, 0.1, -0.1}, {0.7, 0.5, 0.4});
        const auto e2 = anisotropic_scale(e, 2.0, a);
        const double vol = std::log2(weighted_volume(e2, a, cfg) / weighted_volume(e, a, cfg));
        const double per = std::log2(weighted_perimeter(e2, a, cfg) / weighted_perimeter(e, a, cfg));
        CHECK(vol == doctest::Approx(3 * av + 3).epsilon(1e-3 / (3 * av + 3)));
        CHECK(per == doctest::Approx(2 * av + 2).epsilon(1e-3 / (2 * av + 2)));
        const auto e1 = anisotropic_scale(e, 1.0, a);
        CHECK(weighted_volume(e1, a, cfg) == weighted_volume(e, a, cfg));
    }
}

TEST_CASE("quotient is invariant under anisotropic scaling") {
    const AlphaParam a(1.0);
    const auto cyl = make_cylinder({0.3, 0.0, 0.0}, 0.8, 0.6);
    const double q1 = isoperimetric_quotient(cyl, a, quick());
    const double q3 = isoperimetric_quotient(anisotropic_scale(cyl, 3.0, a), a, quick());
    CHECK(q3 == doctest::Approx(q1).epsilon(2e-3));
}

TEST_CASE("sector perimeters add up below the full perimeter") {
    const AlphaParam a(1.0);
    for (const auto& shape : {make_ball({0.3, 0.2, 0.1}, 0.8), make_box({{-0.5, -0.2, -0.4}, {0.7, 0.9, 0.3}})}) {
        const double full = weighted_perimeter(shape, a, quick());
        double sum = 0.0, sum32 = 0.0;
        for (int j = 1; j <= a.sectors(); ++j) {
            const double pj = sector_perimeter(shape, a, j, quick());
            sum += pj;
            sum32 += std::pow(pj, 1.5);
        }
        CHECK(sum <= full * (1 + 1e-12));
        CHECK(std::pow(full, 1.5) >= sum32 * (1 - 1e-12));
    }
}

TEST_CASE("volume quadrature converges at least at first order") {
    // With weight |x|^2 the integral over a ball is V (c1^2 + c2^2 + 2 R^2 / 5).
    const AlphaParam a(1.0);
    const double r = 0.9;
    const auto ball = make_ball({0.1, 0.2, 0.0}, r);
    const double exact = 4.0 / 3.0 * M_PI * r * r * r * (0.01 + 0.04 + 0.4 * r * r);
    QuadratureConfig c;
    c.refine_depth = 0;
    c.volume_resolution = 20;
    const double coarse = std::abs(weighted_volume(ball, a, c) - exact);
    c.volume_resolution = 160;
    const double fine = std::abs(weighted_volume(ball, a, c) - exact);
    // Single doublings are noisy for voxel quadrature; fit over three.
    CHECK(std::log2(coarse / fine) / 3.0 >= 1.0);
}

TEST_CASE("normals of built-in patches are unit vectors") {
    const AlphaParam a(1.0);
    for (const auto& shape : {make_cylinder({}, 1.0, 1.0), make_anisotropic_ball(1.0, 0.5, a),
                              reference_ball(a, 1).shape, make_ellipsoid({}, {1, 2, 3})}) {
        for (const auto& s : boundary_samples(shape, quick())) CHECK(std::abs(norm(s.normal) - 1.0) <= 1e-12);
    }
}

TEST_CASE("level-set shapes fall back to triangulation") {
    const AlphaParam a(1.0);
    // A superellipsoid with exponent 2 is the unit ball.
    const auto sup = make_superellipsoid({}, {1, 1, 1}, 2.0);
    const auto ball = make_ball({}, 1.0);
    QuadratureConfig c = quick();
    c.volume_resolution = 96;
    CHECK(weighted_perimeter(sup, a, c) == doctest::Approx(weighted_perimeter(ball, a, c)).epsilon(5e-3));
}

TEST_CASE("configuration validation") {
    QuadratureConfig c;
    c.refine_depth = 9;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.refine_depth = 2;
    c.volume_resolution = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    CHECK_THROWS_AS(make_shape("blob", {}, AlphaParam(1.0)), DomainError);
    ImplicitShape flat = make_ball({}, 1.0);
    flat.bbox = {{0, 0, 0}, {0, 1, 1}};
    CHECK_THROWS_AS(weighted_volume(flat, AlphaParam(1.0), quick()), DomainError);
}

TEST_CASE("corpus covers the required shape families") {
    const auto corpus = isoperimetric_corpus(AlphaParam(1.0));
    CHECK(corpus.size() >= 12);
}

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "grushin/errors.hpp"
#include "grushin/rearrangement.hpp"
#include "grushin/shapes.hpp"
#include "grushin/weighted_geometry.hpp"

using namespace grushin;
using std::numbers::pi;

namespace {

// Box enclosing {r < 1}.
Box unit_r_box(const AlphaParam& a) {
    const double x = std::pow(1.0, 1.0 / (a.value() + 1.0)) * 1.001;
    const double y = 1.0 / (a.value() + 1.0) * 1.001;
    return {{-x, -x, -y}, {x, x, y}};
}

GridFunction3D radial(const AlphaParam& a, int n, const std::function<double(double)>& g) {
    return GridFunction3D::sample(unit_r_box(a), {n, n, n}, [&](const Vec3& p) { return g(a.grushin_radius(p)); });
}

double bump(double r) { return r < 1.0 ? (1 - r * r) * (1 - r * r) : 0.0; }

}  // namespace

TEST_CASE("distribution function basics") {
    const AlphaParam a(1.0);
    const Box box{{-1.2, -1.2, -1.2}, {1.2, 1.2, 1.2}};
    const auto zero = GridFunction3D(box, {8, 8, 8});
    const auto dz = distribution_function(zero, a, uniform_levels(1.0, 4));
    for (double m : dz.measures) CHECK(m == 0.0);

    // Plateau of height 1 on the unit cylinder: lambda = pi below 1, 0 at and above.
    const auto plateau = GridFunction3D::sample(box, {96, 96, 96}, [](const Vec3& p) {
        return std::hypot(p.x1, p.x2) < 1.0 && std::abs(p.y) < 1.0 ? 1.0 : 0.0;
    });
    const auto d = distribution_function(plateau, a, {0.0, 0.5, 0.999, 1.0, 1.5});
    CHECK(d.measures[1] == doctest::Approx(pi).epsilon(2e-2));
    CHECK(d.measures[2] == d.measures[1]);
    CHECK(d.measures[3] == 0.0);
    CHECK(d.measures[4] == 0.0);

    auto neg = zero;
    neg.values()[3] = -1.0;
    CHECK_THROWS_AS(distribution_function(neg, a, {0.0}), DomainError);
}

TEST_CASE("distribution function is nonincreasing for random data") {
    const AlphaParam a(0.5);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto f = GridFunction3D({{-1, -1, -1}, {1, 1, 1}}, {12, 12, 12});
    for (double& v : f.values()) v = u(rng);
    const auto d = distribution_function(f, a, uniform_levels(1.0, 64));
    for (std::size_t k = 1; k < d.measures.size(); ++k) CHECK(d.measures[k] <= d.measures[k - 1]);
}

TEST_CASE("radius from measure") {
    const AlphaParam a(1.0);
    CHECK(radius_from_measure(2 * pi / 3, a) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(radius_from_measure(0.0, a) == 0.0);
    CHECK(radius_from_measure(8 * 0.37, a) == doctest::Approx(2 * radius_from_measure(0.37, a)).epsilon(1e-14));
    CHECK(sector_ball_measure(radius_from_measure(1.3, a), a) == doctest::Approx(1.3).epsilon(1e-14));
    CHECK_THROWS_AS(radius_from_measure(-1.0, a), DomainError);
}

TEST_CASE("rearranging a radial function rescales its radius") {
    for (const double av : {0.5, 1.0, 2.0}) {
        const AlphaParam a(av);
        const auto u = radial(a, 64, bump);
        const RadialProfile phi = rearrange(u, a);
        CHECK(phi.max_value() == u.max_value());
        const double c = std::cbrt(2.0 * a.sector_count());
        for (const double r : {0.3, 0.6, 0.9, 1.2}) {
            CHECK(phi(r) == doctest::Approx(bump(r / c)).epsilon(0.03));
        }
        for (std::size_t k = 1; k < phi.values.size(); ++k) CHECK(phi.values[k] <= phi.values[k - 1]);
        CHECK(phi(phi.radii.back()) == 0.0);
        CHECK(phi(phi.radii.back() * 2) == 0.0);
    }
}

TEST_CASE("rearranging zero gives zero") {
    const AlphaParam a(1.0);
    const auto phi = rearrange(GridFunction3D({{-1, -1, -1}, {1, 1, 1}}, {8, 8, 8}), a);
    CHECK(phi.max_value() == 0.0);
    CHECK(phi(0.5) == 0.0);
    CHECK(grushin_energy(phi) == 0.0);
}

TEST_CASE("weighted Lq norms") {
    const AlphaParam a(1.0);
    const Box box{{-1.2, -1.2, -1.2}, {1.2, 1.2, 1.2}};
    const auto plateau = GridFunction3D::sample(box, {96, 96, 96}, [](const Vec3& p) {
        return std::hypot(p.x1, p.x2) < 1.0 && std::abs(p.y) < 1.0 ? 1.0 : 0.0;
    });
    CHECK(weighted_lq_norm(plateau, 6, a) == doctest::Approx(std::pow(pi, 1.0 / 6)).epsilon(5e-3));
    CHECK(weighted_lq_norm(GridFunction3D(box, {4, 4, 4}), 2, a) == 0.0);
    CHECK_THROWS_AS(weighted_lq_norm(plateau, 0.5, a), DomainError);

    const auto u = radial(a, 64, bump);
    const auto phi = rearrange(u, a);
    for (const double q : {2.0, 4.0, 6.0}) {
        CHECK(weighted_lq_norm(phi, q) == doctest::Approx(weighted_lq_norm(u, q, a)).epsilon(0.01));
    }
}

TEST_CASE("grid energy of a radial function matches the one-dimensional formula") {
    // Full-space energy is 4 pi int r^2 g'(r)^2 dr for every alpha; for the bump 4 pi * 128/315.
    const double exact = 4 * pi * 128.0 / 315.0;
    for (const double av : {0.5, 1.0, 2.0}) {
        const AlphaParam a(av);
        CHECK(grushin_energy(radial(a, 64, bump), a) == doctest::Approx(exact).epsilon(5e-3));
    }
    CHECK(grushin_energy(GridFunction3D({{-1, -1, -1}, {1, 1, 1}}, {4, 4, 4}), AlphaParam(1.0)) == 0.0);
}

TEST_CASE("grid energy converges at second order") {
    const AlphaParam a(1.0);
    // g(r) = (1 - r^2)^3 has g' continuous up to the support edge.
    auto g = [](double r) { return r < 1.0 ? std::pow(1 - r * r, 3) : 0.0; };
    const double exact = 4 * pi * 1536.0 / 5005.0;  // 4 pi int r^2 (6 r (1-r^2)^2)^2
    const double e1 = std::abs(grushin_energy(radial(a, 24, g), a) - exact);
    const double e2 = std::abs(grushin_energy(radial(a, 48, g), a) - exact);
    CHECK(std::log2(e1 / e2) >= 1.8);
}

TEST_CASE("constant function with a zero ring") {
    const AlphaParam a(1.0);
    auto u = GridFunction3D({{-1, -1, -1}, {1, 1, 1}}, {10, 10, 10});
    for (double& v : u.values()) v = 1.0;
    const double e = grushin_energy(u, a);
    CHECK(e > 0.0);
    // Every difference vanishes except across the outer faces, so scaling the inside leaves it quadratic.
    for (double& v : u.values()) v = 2.0;
    CHECK(grushin_energy(u, a) == doctest::Approx(4 * e).epsilon(1e-14));
}

TEST_CASE("Polya-Szego ratio on a radial function") {
    const AlphaParam a(1.0);
    const auto r = polya_szego_gap(radial(a, 64, bump), a);
    CHECK(r.ratio == doctest::Approx(std::pow(4.0, -2.0 / 3.0)).epsilon(0.02));
    CHECK(r.gap == doctest::Approx(0.60315 * r.energy).epsilon(0.02));
    const auto z = polya_szego_gap(GridFunction3D({{-1, -1, -1}, {1, 1, 1}}, {4, 4, 4}), a);
    CHECK(z.gap == 0.0);
    CHECK(z.ratio == 0.0);
}

TEST_CASE("Polya-Szego on random bumps") {
    const AlphaParam a(1.0);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Box box{{-1, -1, -1}, {1, 1, 1}};
    for (int i = 0; i < 5; ++i) {
        const Vec3 c{0.6 * u(rng) - 0.3, 0.6 * u(rng) - 0.3, 0.6 * u(rng) - 0.3};
        const Vec3 s{0.3 + 0.4 * u(rng), 0.3 + 0.4 * u(rng), 0.3 + 0.4 * u(rng)};
        const auto f = GridFunction3D::sample(box, {40, 40, 40}, [&](const Vec3& p) {
            double t = 0.0;
            for (int k = 0; k < 3; ++k) t += std::pow((p[k] - c[k]) / s[k], 2);
            return t < 1.0 ? std::pow(1 - t, 3) : 0.0;
        });
        const auto r = polya_szego_gap(f, a);
        CHECK(r.gap >= -0.02 * r.energy);
    }
}

TEST_CASE("equimeasurability of the rearrangement") {
    const AlphaParam a(1.0);
    const Box box{{-1, -1, -1}, {1, 1, 1}};
    const auto f = GridFunction3D::sample(box, {40, 40, 40}, [](const Vec3& p) {
        const double t = std::pow((p.x1 - 0.2) / 0.6, 2) + std::pow(p.x2 / 0.5, 2) + std::pow((p.y + 0.1) / 0.7, 2);
        return t < 1.0 ? 1 - t : 0.0;
    });
    const auto phi = rearrange(f, a);
    const auto eq = equimeasurability(f, phi, a);
    CHECK(eq.support_measure > 0.0);
    CHECK(eq.sup_gap <= 0.01 * eq.support_measure);
}

TEST_CASE("coarea comparison") {
    const AlphaParam a(1.0);
    const auto u = radial(a, 64, bump);
    for (const double t : {0.3, 0.5, 0.7}) {
        const auto c = coarea_derivative_compare(u, a, t);
        CHECK_FALSE(c.plateau);
        CHECK(c.rhs == doctest::Approx(c.lhs).epsilon(0.05));
    }
    const Box box{{-1.2, -1.2, -1.2}, {1.2, 1.2, 1.2}};
    const auto plateau = GridFunction3D::sample(box, {32, 32, 32}, [](const Vec3& p) {
        const double r = norm(p);
        return r < 0.5 ? 1.0 : (r < 1.0 ? 2 * (1 - r) : 0.0);
    });
    CHECK(coarea_derivative_compare(plateau, a, 1.0 - 1e-12, 0.01).plateau);
    CHECK_THROWS_AS(coarea_derivative_compare(GridFunction3D(box, {4, 4, 4}), a, 0.5), DomainError);
}

TEST_CASE("profile CSV") {
    RadialProfile phi;
    phi.radii = {0.0, 1.0};
    phi.values = {1.0, 0.0};
    std::ostringstream s;
    write_profile_csv(s, phi);
    CHECK(s.str().rfind("r,phi\n", 0) == 0);
}

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "grushin/errors.hpp"
#include "grushin/sobolev.hpp"

using namespace grushin;
using std::numbers::pi;

TEST_CASE("radial constant closed form and quadrature") {
    const double d = talenti_radial_constant();
    CHECK(d == doctest::Approx(1.0067089369692754).epsilon(1e-15));
    // The frequently quoted decimal 1.006704 is 4.9e-6 below the closed form.
    CHECK(std::abs(d - 1.006704) == doctest::Approx(4.937e-6).epsilon(1e-3));
    CHECK(std::abs(talenti_constant_general(2, 3) - d) <= 1e-9);
}

TEST_CASE("radial quotient is the same for every extremal") {
    double lo = 1e9, hi = 0.0;
    for (const double a : {0.5, 1.0, 2.0}) {
        for (const double b : {0.5, 1.0, 2.0}) {
            const double v = talenti_constant_general(2, 3, a, b);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    CHECK(hi - lo <= 1e-5);
    CHECK(hi - lo <= 1e-9);
}

TEST_CASE("full-space sharp constant in three dimensions") {
    // Restoring the solid angle 4 pi gives sqrt(3 pi) (Gamma(3/2)/Gamma(3))^{1/3}.
    const double classical = std::sqrt(3 * pi) * std::cbrt(std::tgamma(1.5) / std::tgamma(3.0));
    CHECK(std::cbrt(4 * pi) * talenti_radial_constant() == doctest::Approx(classical).epsilon(1e-13));
    CHECK(classical == doctest::Approx(2.3403).epsilon(1e-4));
}

TEST_CASE("general radial constant") {
    // (p, m) = (2, 4): profile (1 + r^2)^{-1}, q = 4, integrals 2/3 and 1/12 in closed form.
    const double v = talenti_constant_general(2, 4);
    CHECK(v == doctest::Approx(std::sqrt(2.0 / 3.0) * std::pow(12.0, 0.25)).epsilon(1e-9));
    CHECK(talenti_constant_general(2, 4, 3.0, 0.2) == doctest::Approx(v).epsilon(1e-9));
    CHECK_THROWS_AS(talenti_constant_general(1.0, 3.0), DomainError);
    CHECK_THROWS_AS(talenti_constant_general(3.0, 3.0), DomainError);
}

TEST_CASE("printed closed form is off by sqrt 2") {
    CHECK(talenti_printed_constant(2, 3) == doctest::Approx(std::sqrt(2.0) * talenti_radial_constant()).epsilon(1e-12));
    CHECK(talenti_printed_constant(2, 3) == doctest::Approx(1.4237014320).epsilon(1e-10));
}

TEST_CASE("sector lower bound") {
    const AlphaParam a1(1.0), a05(0.5), a2(2.0);
    CHECK(sobolev_lower_bound(a1) == doctest::Approx(std::cbrt(2 * pi) * talenti_radial_constant()).epsilon(1e-14));
    CHECK(sobolev_lower_bound(a1) == doctest::Approx(1.85764995).epsilon(1e-8));
    CHECK(sobolev_lower_bound(a05) == doctest::Approx(1.68778699).epsilon(1e-8));
    // n(2) = 3 cancels the factor 3 = alpha + 1, so alpha = 2 lands exactly on the alpha = 1 value.
    CHECK(sobolev_lower_bound(a2) == doctest::Approx(sobolev_lower_bound(a1)).epsilon(1e-14));
    MESSAGE("L(1) = " << sobolev_lower_bound(a1) << ", L(2) = " << sobolev_lower_bound(a2));
    CHECK(sobolev_lower_bound_printed(a1) == doctest::Approx(0.54556182).epsilon(1e-8));
    CHECK(sobolev_lower_bound_printed(a1) == doctest::Approx(talenti_radial_constant() / std::cbrt(2 * pi)).epsilon(1e-14));
}

TEST_CASE("the lower bound equals the radial quotient of every extremal") {
    for (const double av : {0.5, 1.0, 2.0, 3.7}) {
        const AlphaParam a(av);
        for (const double b : {0.3, 1.0, 5.0}) {
            const ExtremalProfile e(1.0, b);
            const double q = radial_rayleigh_quotient([&](double r) { return e(r); },
                                                      [&](double r) { return e.derivative(r); }, 6.0, a);
            CHECK(q == doctest::Approx(sobolev_lower_bound(a)).epsilon(1e-9));
        }
    }
}

TEST_CASE("scaling exponent") {
    CHECK(scaling_exponent(6, AlphaParam(1.0)) == 0.0);
    CHECK(scaling_exponent(2, AlphaParam(1.0)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(scaling_exponent(6, AlphaParam(0.5)) == 0.0);
    CHECK(scaling_exponent(6, AlphaParam(3.0)) == 0.0);
    CHECK(critical_exponent() == 6);
    CHECK_THROWS_AS(scaling_exponent(0.0, AlphaParam(1.0)), DomainError);
}

TEST_CASE("radial quotient obeys the scaling law") {
    // u(l x, l^{a+1} y) has Grushin radius l^{a+1} r.
    for (const double av : {0.5, 1.0, 2.0}) {
        const AlphaParam a(av);
        for (const double q : {2.0, 4.0, 6.0}) {
            const double lam = 2.0, s = std::pow(lam, av + 1);
            auto quotient = [&](double c) {
                return radial_rayleigh_quotient([&](double r) { return std::exp(-c * c * r * r); },
                                                [&](double r) { return -2 * c * c * r * std::exp(-c * c * r * r); }, q, a);
            };
            const double measured = std::log(quotient(s) / quotient(1.0)) / std::log(lam);
            CHECK(std::abs(measured - scaling_exponent(q, a)) <= 1e-10);
        }
    }
}

TEST_CASE("grid Rayleigh quotient") {
    const AlphaParam a(1.0);
    FamilyConfig fc;
    fc.resolution = 48;
    const auto u = extremal_family_member(a, fc, 4.0, {});
    const auto r = rayleigh_quotient(u, 6.0, a, Region{1});
    CHECK(r.quotient >= 0.98 * sobolev_lower_bound(a));
    CHECK(r.quotient == doctest::Approx(std::sqrt(r.numerator) / r.denominator).epsilon(1e-15));
    auto v = u;
    for (double& x : v.values()) x *= 3.7;
    CHECK(std::abs(rayleigh_quotient(v, 6.0, a, Region{1}).quotient / r.quotient - 1.0) <= 1e-12);
    CHECK_THROWS_AS(rayleigh_quotient(GridFunction3D({{-1, -1, -1}, {1, 1, 1}}, {4, 4, 4}), 6.0, a), DomainError);
}

TEST_CASE("grid quotient obeys the scaling law after resampling") {
    const AlphaParam a(1.0);
    const double lam = 2.0;
    auto f = [](const Vec3& p) {
        const double t = p.x1 * p.x1 + 0.5 * p.x2 * p.x2 + 2 * p.y * p.y;
        return t < 1.0 ? std::pow(1 - t, 3) : 0.0;
    };
    const Box box{{-1.2, -1.2, -1.2}, {1.2, 1.2, 1.2}};
    const Box small{{-1.2 / lam, -1.2 / lam, -1.2 / (lam * lam)}, {1.2 / lam, 1.2 / lam, 1.2 / (lam * lam)}};
    const auto u = GridFunction3D::sample(box, {32, 32, 32}, f);
    const auto us = GridFunction3D::sample(small, {32, 32, 32},
                                           [&](const Vec3& p) { return f({lam * p.x1, lam * p.x2, lam * lam * p.y}); });
    for (const double q : {2.0, 4.0, 6.0}) {
        const double measured = std::log2(rayleigh_quotient(us, q, a).quotient / rayleigh_quotient(u, q, a).quotient);
        CHECK(std::abs(measured - scaling_exponent(q, a)) <= 1e-3);
    }
}

TEST_CASE("sector grid matches the radial integrals") {
    const AlphaParam a(1.0);
    FamilyConfig fc;
    fc.resolution = 64;
    fc.truncation_radius = 3.0;
    const double b = 1.0;
    const auto u = extremal_family_member(a, fc, b, {});
    auto phi = [&](double r) { return truncated_extremal(r, b, 3.0); };
    auto dphi = [&](double r) { return r < 3.0 ? -b * r * std::pow(1 + b * r * r, -1.5) : 0.0; };
    // One sector of the radial integrals: energy (2 pi / n) int r^2 phi'^2, measure (2 pi/(n (a+1)^2)) int r^2 phi^6.
    const double quotient_1d = radial_rayleigh_quotient(phi, dphi, 6.0, a);
    const double quotient_grid = rayleigh_quotient(u, 6.0, a, Region{1}).quotient;
    CHECK(quotient_grid == doctest::Approx(quotient_1d).epsilon(1e-2));
}

TEST_CASE("Rayleigh minimization") {
    const AlphaParam a(1.0);
    FamilyConfig fc;
    fc.resolution = 32;
    fc.max_evaluations = 24;
    const auto m = minimize_rayleigh(a, fc);
    CHECK(m.estimate >= 0.98 * sobolev_lower_bound(a));
    CHECK(m.evaluations <= 24);
    fc.q = 4.0;
    CHECK_THROWS_AS(minimize_rayleigh(a, fc), DomainError);
}

TEST_CASE("extremal profile validation") {
    CHECK_THROWS_AS(ExtremalProfile(0.0, 1.0), DomainError);
    const ExtremalProfile e(1.0, 1.0);
    CHECK(e(0.0) == 1.0);
    CHECK(e.derivative(1.0) < 0.0);
}

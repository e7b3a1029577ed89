#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "grushin/errors.hpp"
#include "grushin/grushin_solver.hpp"
#include "grushin/nonlinearity.hpp"
#include "grushin/sobolev.hpp"

using namespace grushin;
using std::numbers::pi;

namespace {

const Box cube{{-1, -1, -1}, {1, 1, 1}};

double inner(const Domain& d, const GridFunction3D& a, const GridFunction3D& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) s += a.values()[i] * b.values()[i];
    return s * d.cell_volume();
}

GridFunction3D random_function(const Domain& d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto f = d.make_function();
    for (std::size_t i = 0; i < d.size(); ++i) f.values()[i] = d.active(i) ? u(rng) : 0.0;
    return f;
}

bool interior(const Domain& d, std::size_t idx, int layers) {
    const auto& n = d.dims();
    const int i = static_cast<int>(idx % n[0]), j = static_cast<int>((idx / n[0]) % n[1]),
              k = static_cast<int>(idx / (static_cast<std::size_t>(n[0]) * n[1]));
    return i >= layers && j >= layers && k >= layers && i < n[0] - layers && j < n[1] - layers && k < n[2] - layers;
}

}  // namespace

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(Domain::box({{0.5, -1, -1}, {1, 1, 1}}, {8, 8, 8}), DomainError);
    CHECK_THROWS_AS(Domain::box(cube, {7, 8, 8}), DomainError);
    CHECK_THROWS_AS(Domain::box(cube, {8, 8, 0}), DomainError);
    CHECK_NOTHROW(Domain::box(cube, {8, 8, 7}));
    // Two separate blobs.
    CHECK_THROWS_AS(Domain::masked(cube, {16, 16, 16}, [](const Vec3& p) { return std::abs(p.x1) > 0.5 || norm(p) < 0.1; }),
                    DomainError);
    CHECK_THROWS_AS(Domain::masked(cube, {16, 16, 16}, [](const Vec3& p) { return p.x1 > 0.3; }), DomainError);
    const Domain ball = Domain::masked(cube, {16, 16, 16}, [](const Vec3& p) { return norm(p) < 0.9; });
    CHECK_FALSE(ball.is_box());
    CHECK(ball.weighted_measure(AlphaParam(1.0)) < Domain::box(cube, {16, 16, 16}).weighted_measure(AlphaParam(1.0)));
    for (const auto& f : ball.boundary_faces()) CHECK(ball.active(f.cell));
}

TEST_CASE("box faces sit on the walls") {
    const Domain d = Domain::box(cube, {6, 6, 6});
    CHECK(d.boundary_faces().size() == 6u * 36u);
    for (const auto& f : d.boundary_faces()) {
        int axis = 0;
        while (f.normal[axis] == 0.0) ++axis;
        CHECK(f.center[axis] == doctest::Approx(f.normal[axis]).epsilon(1e-14));
    }
}

TEST_CASE("operator on polynomials") {
    const AlphaParam a(1.0);
    const Domain d = Domain::box(cube, {12, 12, 12});
    const GrushinOperator op(d, a);
    const auto lin = op.apply(d.sample([](const Vec3& p) { return p.x1; }));
    const auto quad = op.apply(d.sample([](const Vec3& p) { return p.y * p.y; }));
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!interior(d, i, 1)) continue;
        CHECK(std::abs(lin.values()[i]) <= 1e-12);
        CHECK(quad.values()[i] == doctest::Approx(-2 * a.volume_weight(d.node(i))).epsilon(1e-10));
    }
}

TEST_CASE("operator is symmetric and positive definite") {
    for (const double av : {0.5, 1.0, 2.0}) {
        const AlphaParam a(av);
        const Domain d = Domain::masked(cube, {10, 10, 10}, [](const Vec3& p) { return norm(p) < 0.95; });
        const GrushinOperator op(d, a);
        const auto u = random_function(d, 1), v = random_function(d, 2);
        const double uav = inner(d, u, op.apply(v)), vau = inner(d, v, op.apply(u));
        CHECK(std::abs(uav - vau) <= 1e-12 * std::abs(uav));
        CHECK(inner(d, u, op.apply(u)) > 0.0);
    }
}

TEST_CASE("linear solves") {
    const AlphaParam a(1.0);
    const Domain d = Domain::box(cube, {10, 10, 10});
    const GrushinOperator op(d, a);
    const auto known = random_function(d, 7);
    const auto r = linear_solve(op, op.apply(known));
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        err = std::max(err, std::abs(r.u.values()[i] - known.values()[i]));
        ref = std::max(ref, std::abs(known.values()[i]));
    }
    CHECK(err <= 1e-7 * ref);
    CHECK(r.relative_residual <= 1e-10);
    const auto z = linear_solve(op, d.make_function());
    CHECK(z.u.is_zero());
    CHECK(z.iterations == 0);
    SolverConfig tight;
    tight.linear_max_iterations = 1;
    CHECK_THROWS_AS(linear_solve(op, op.apply(known), tight), IterationError);
    try {
        linear_solve(op, op.apply(known), tight);
    } catch (const IterationError& e) {
        CHECK(e.iterations() == 1);
        CHECK(e.last_residual() > 0.0);
    }
}

TEST_CASE("manufactured solution converges at second order") {
    const AlphaParam a(1.0);
    const double k = pi / 2;
    auto exact = [&](const Vec3& p) { return std::cos(k * p.x1) * std::cos(k * p.x2) * std::cos(k * p.y); };
    // Even x dims make h = 2/(n+1) only roughly halve, so orders use the true ratio.
    double prev = 0.0, prev_h = 0.0;
    for (const int n : {6, 14, 30}) {
        const double h = 2.0 / (n + 1);
        const Domain d = Domain::box(cube, {n, n, n + 1});
        const GrushinOperator op(d, a);
        const auto rhs = d.sample([&](const Vec3& p) { return k * k * (2 + a.volume_weight(p)) * exact(p); });
        const auto u = linear_solve(op, rhs).u;
        double e = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) e += std::pow(u.values()[i] - exact(d.node(i)), 2);
        e = std::sqrt(e * d.cell_volume());
        if (prev > 0.0) CHECK(std::log(prev / e) / std::log(prev_h / h) >= 1.8);
        prev = e;
        prev_h = h;
    }
}

TEST_CASE("discrete maximum principle") {
    const AlphaParam a(0.5);
    const Domain d = Domain::box(cube, {12, 12, 12});
    const GrushinOperator op(d, a);
    const auto rhs = d.sample([](const Vec3& p) { return p.x1 > 0.2 && p.y < 0.0 ? 1.0 : 0.0; });
    const auto u = linear_solve(op, rhs).u;
    CHECK(u.min_value() >= -1e-10 * u.max_value());
}

TEST_CASE("energy and its homogeneity") {
    const AlphaParam a(1.0);
    const Domain d = Domain::box(cube, {10, 10, 10});
    const GrushinOperator op(d, a);
    const auto nl = power_nonlinearity(4.0, a);
    CHECK(energy(op, d.make_function(), nl) == 0.0);
    const auto v = d.sample([](const Vec3& p) { return std::cos(pi / 2 * p.x1) * std::cos(pi / 2 * p.x2) * std::cos(pi / 2 * p.y); });
    const double aa = inner(d, v, op.apply(v));
    double bb = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) bb += a.volume_weight(d.node(i)) * std::pow(v.values()[i], 4);
    bb *= d.cell_volume();
    for (const double t : {0.5, 1.0, 2.0}) {
        auto tv = v;
        for (double& x : tv.values()) x *= t;
        const double expected = t * t / 2 * aa - std::pow(t, 4) / 4 * bb;
        CHECK(std::abs(energy(op, tv, nl) - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
    }
    auto big = v;
    for (double& x : big.values()) x *= 1e3;
    CHECK(energy(op, big, nl) < 0.0);
}

TEST_CASE("gradient matches finite differences") {
    const AlphaParam a(1.0);
    const Domain d = Domain::box(cube, {8, 8, 8});
    const GrushinOperator op(d, a);
    const auto custom = custom_nonlinearity([](const Vec3& p, double x) { return std::sin(x) + p.x1 * x * x; },
                                            [](const Vec3& p, double x) { return 1 - std::cos(x) + p.x1 * x * x * x / 3; }, a);
    for (const auto& nl : {power_nonlinearity(4.0, a), power_nonlinearity(3.0, a), custom}) {
        for (std::uint64_t s = 0; s < 3; ++s) {
            const auto u = random_function(d, 10 + s), v = random_function(d, 20 + s);
            const double eps = 1e-5;
            auto up = u, um = u;
            for (std::size_t i = 0; i < d.size(); ++i) {
                up.values()[i] += eps * v.values()[i];
                um.values()[i] -= eps * v.values()[i];
            }
            const double fd = (energy(op, up, nl) - energy(op, um, nl)) / (2 * eps);
            const double exact = directional_derivative(op, u, v, nl);
            CHECK(std::abs(fd - exact) <= 1e-6 * std::abs(exact));
        }
    }
}

TEST_CASE("gradient special cases") {
    const AlphaParam a(1.0);
    const Domain d = Domain::box(cube, {8, 8, 8});
    const GrushinOperator op(d, a);
    CHECK(energy_gradient(op, d.make_function(), power_nonlinearity(4.0, a)).is_zero());
    CHECK(weak_residual(op, d.make_function(), power_nonlinearity(4.0, a)) == 0.0);
    const auto zero_f = custom_nonlinearity([](const Vec3&, double) { return 0.0; }, [](const Vec3&, double) { return 0.0; }, a);
    const auto u = random_function(d, 3);
    CHECK(energy_gradient(op, u, zero_f).values() == op.apply(u).values());
}

TEST_CASE("weak residual of a linear solve") {
    const AlphaParam a(1.0);
    const Domain d = Domain::box(cube, {10, 10, 10});
    const GrushinOperator op(d, a);
    const auto rhs = random_function(d, 5);
    const auto nl = custom_nonlinearity([&](const Vec3& p, double) {
        // Source term independent of u, looked up by node.
        const auto& h = d.spacing();
        const int i = static_cast<int>(std::lround((p.x1 + 1) / h.x1)) - 1, j = static_cast<int>(std::lround((p.x2 + 1) / h.x2)) - 1,
                  k = static_cast<int>(std::lround((p.y + 1) / h.y)) - 1;
        return rhs.values()[d.index(i, j, k)];
    }, [](const Vec3&, double) { return 0.0; }, a);
    SolverConfig cfg;
    cfg.linear_tolerance = 1e-12;
    const auto u = linear_solve(op, rhs, cfg).u;
    const double rn = std::sqrt(inner(d, rhs, rhs));
    CHECK(weak_residual(op, u, nl) <= 1e-8 * rn);
}

TEST_CASE("Nehari scaling") {
    const AlphaParam a(1.0);
    const Domain d = Domain::box(cube, {10, 10, 10});
    const GrushinOperator op(d, a);
    const auto nl = power_nonlinearity(4.0, a);
    const auto u = d.sample([](const Vec3& p) { return (1 - p.x1 * p.x1) * (1 - p.x2 * p.x2) * (1 - p.y * p.y); });
    const double t = nehari_scale(op, u, nl);
    auto u2 = u, tu = u;
    for (double& x : u2.values()) x *= 2;
    for (double& x : tu.values()) x *= t;
    CHECK(nehari_scale(op, u2, nl) == doctest::Approx(t / 2).epsilon(1e-14));
    CHECK(std::abs(nehari_scale(op, tu, nl) - 1.0) <= 1e-10);
    const double aa = inner(d, tu, op.apply(tu));
    CHECK(std::abs(directional_derivative(op, tu, tu, nl)) <= 1e-10 * 2 * aa);
    CHECK_THROWS_AS(nehari_scale(op, d.make_function(), nl), DomainError);
    CHECK_THROWS_AS(nehari_scale(op, u, power_nonlinearity(2.0, a)), DomainError);
}

TEST_CASE("ground state on a small cube") {
    const AlphaParam a(1.0);
    const Domain d = Domain::box(cube, {16, 16, 16});
    const auto nl = power_nonlinearity(4.0, a);
    const SolverConfig cfg;
    const auto s = solve_ground_state(d, nl, a, cfg);
    CHECK_FALSE(s.u.is_zero());
    CHECK(s.energy > 0.0);
    CHECK(s.gradient_norm <= cfg.outer_tolerance);
    const GrushinOperator op(d, a);
    CHECK(std::abs(weak_residual(op, s.u, nl) - s.gradient_norm) <= 1e-12 * std::max(1.0, s.gradient_norm) + 1e-15);
    CHECK(std::abs(energy(op, s.u, nl) - s.energy) <= 1e-12 * s.energy);
    REQUIRE(s.beta.has_value());
    CHECK(*s.beta >= s.energy * (1 - 1e-9));
    auto abs_u = s.u;
    for (double& x : abs_u.values()) x = std::abs(x);
    CHECK(energy(op, abs_u, nl) <= energy(op, s.u, nl) + 1e-10);
}

TEST_CASE("ground-state solver errors") {
    const AlphaParam a(1.0);
    const Domain d = Domain::box(cube, {8, 8, 8});
    CHECK_THROWS_AS(solve_ground_state(d, power_nonlinearity(6.0, a), a), DomainError);
    CHECK_THROWS_AS(solve_ground_state(d, power_nonlinearity(2.0, a), a), DomainError);
    SolverConfig collapse;
    collapse.collapse_threshold = 1e9;
    CHECK_THROWS_AS(solve_ground_state(d, power_nonlinearity(4.0, a), a, collapse), DegeneracyError);
    SolverConfig short_run;
    short_run.max_outer_iterations = 1;
    CHECK_THROWS_AS(solve_ground_state(d, power_nonlinearity(4.0, a), a, short_run), IterationError);
}

TEST_CASE("solver configuration file") {
    std::istringstream good("# comment\nlinear_tolerance = 1e-9\ninitial_center = 0.1 0.2 0.0  # trailing\n\nmax_outer_iterations=50\n");
    const auto cfg = parse_solver_config(good);
    CHECK(cfg.linear_tolerance == 1e-9);
    CHECK(cfg.max_outer_iterations == 50);
    REQUIRE(cfg.initial_center.has_value());
    CHECK(cfg.initial_center->x2 == 0.2);
    std::istringstream unknown("linear_tolerance = 1e-9\nspeed = 3\n");
    try {
        parse_solver_config(unknown);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream bad("outer_tolerance = fast\n");
    CHECK_THROWS_AS(parse_solver_config(bad), ParseError);
    std::istringstream negative("outer_tolerance = -1\n");
    CHECK_THROWS_AS(parse_solver_config(negative), ParseError);
    CHECK_THROWS_AS(load_solver_config("/nonexistent/solver.cfg"), ParseError);
}

TEST_CASE("Poincare constant") {
    const AlphaParam a(1.0);
    const auto p1 = poincare_constant(Domain::box(cube, {12, 12, 12}), a);
    const auto p2 = poincare_constant(Domain::box({{-2, -2, -2}, {2, 2, 2}}, {12, 12, 12}), a);
    CHECK(p1.lambda1 > 0.0);
    CHECK(p2.lambda1 < p1.lambda1);
    CHECK(p1.constant == doctest::Approx(1 / std::sqrt(p1.lambda1)));
    const auto fine = poincare_constant(Domain::box(cube, {24, 24, 24}), a);
    CHECK(fine.lambda1 == doctest::Approx(p1.lambda1).epsilon(0.01));
}

TEST_CASE("embedding check") {
    const AlphaParam a(1.0);
    const Domain d = Domain::box(cube, {20, 20, 20});
    auto corpus = random_bump_corpus(d, 12, 99);
    CHECK(corpus.size() == 12u);
    // A concentrated extremal profile is the tightest member.
    corpus.push_back(d.sample([&](const Vec3& p) { return truncated_extremal(a.grushin_radius(p), 40.0, 0.9); }));
    const auto r6 = embedding_check(d, 6.0, a, corpus);
    CHECK(r6.violations == 0);
    CHECK(r6.constant == doctest::Approx(1 / sobolev_lower_bound(a)));
    CHECK(r6.tightest == corpus.size() - 1);
    const auto r2 = embedding_check(d, 2.0, a, corpus);
    for (const auto& e : r2.entries) CHECK(std::isfinite(e.lq_norm / e.bound));
    CHECK_THROWS_AS(embedding_check(d, 7.0, a, corpus), DomainError);
    CHECK_THROWS_AS(embedding_check(d, 0.5, a, corpus), DomainError);
}

TEST_CASE("growth conditions of power nonlinearities") {
    const AlphaParam a(1.0);
    const auto r4 = validate_growth_conditions(power_nonlinearity(4.0, a));
    for (const Verdict v : r4.verdicts) CHECK(v == Verdict::pass);
    const auto r2 = validate_growth_conditions(power_nonlinearity(2.0, a));
    CHECK(r2.verdicts[3] == Verdict::fail);
}

TEST_CASE("growth conditions of custom nonlinearities") {
    const AlphaParam a(1.0);
    const auto shifted = custom_nonlinearity([](const Vec3&, double x) { return 1.0 + x * x * x; },
                                             [](const Vec3&, double x) { return x + x * x * x * x / 4; }, a);
    const auto r = validate_growth_conditions(shifted);
    CHECK(r.verdicts[3] == Verdict::fail);
    CHECK(r.verdicts[0] == Verdict::not_applicable);
    CHECK(r.verdicts[1] == Verdict::not_applicable);
    CHECK(to_string(Verdict::heuristic) == "heuristic");
}

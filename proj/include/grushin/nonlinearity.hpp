#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "grushin/alpha.hpp"
#include "grushin/vec3.hpp"

namespace grushin {

using PointFunction = std::function<double(const Vec3&)>;
using Reaction = std::function<double(const Vec3&, double)>;

// Declared witnesses for the growth conditions of a custom reaction term.
struct GrowthWitness {
    // |f| <= |x|^{2a} (f1 + f2 |xi|^{q-1}) with f1 in L^{p1}, f2 in L^{p2}.
    std::optional<double> q, p1, p2;
    PointFunction f1, f2;
    // |f| <= |x|^{2a} psi for |xi| <= C; f/xi monotone for |xi| >= C.
    std::optional<double> C;
    PointFunction psi;
    // Nonpositive lower bound of f/xi for xi > 0.
    PointFunction lower;
};

struct Nonlinearity {
    enum class Kind { power, custom };

    Kind kind = Kind::power;
    double exponent = 0.0;  // q of the power kind
    double alpha = 1.0;
    Reaction f;
    Reaction F;  // primitive: F(p, xi) = int_0^xi f(p, t) dt
    std::optional<GrowthWitness> witness;
};

// f = |x|^{2a} |xi|^{q-2} xi, F = |x|^{2a} |xi|^q / q. Throws DomainError for q <= 1.
Nonlinearity power_nonlinearity(double q, const AlphaParam& alpha);

Nonlinearity custom_nonlinearity(Reaction f, Reaction F, const AlphaParam& alpha,
                                 std::optional<GrowthWitness> witness = std::nullopt);

enum class Verdict { pass, fail, heuristic, not_applicable };

std::string to_string(Verdict v);

struct GrowthSampleConfig {
    Box region{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
    int points = 64;            // spatial sample points
    std::uint64_t seed = 12345;
};

struct GrowthReport {
    std::array<Verdict, 5> verdicts{};  // (A1) .. (A5)
    std::array<std::string, 5> notes;
};

// Power kind: closed-form verdicts. Custom kind: sampled checks, reported as heuristic
// when no violation is found (finite sampling cannot certify a limit or a bound).
GrowthReport validate_growth_conditions(const Nonlinearity& nl, const GrowthSampleConfig& cfg = {});

}  // namespace grushin

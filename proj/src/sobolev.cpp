#include "grushin/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "grushin/errors.hpp"
#include "grushin/quadrature.hpp"

namespace grushin {

namespace {

constexpr double kPi = std::numbers::pi;

double integral_to_infinity(const std::function<double(double)>& f) {
    return integrate_to_infinity(f, 0.0).value;
}

}  // namespace

ExtremalProfile::ExtremalProfile(double a_, double b_) : a(a_), b(b_) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("extremal profile needs a > 0 and b > 0");
}

double ExtremalProfile::operator()(double r) const { return 1.0 / std::sqrt(a + b * r * r); }

double ExtremalProfile::derivative(double r) const {
    const double s = a + b * r * r;
    return -b * r / (s * std::sqrt(s));
}

double talenti_radial_constant() { return std::sqrt(3.0) * std::cbrt(kPi / 16.0); }

double talenti_constant_general(double p, double m, double a, double b) {
    if (!(p > 1.0 && p < m)) throw DomainError("talenti constant needs 1 < p < m");
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("talenti constant needs a > 0 and b > 0");
    const double pp = p / (p - 1.0);
    const double q = m * p / (m - p);
    const double e = 1.0 - m / p;
    auto phi = [=](double r) { return std::pow(a + b * std::pow(r, pp), e); };
    auto dphi = [=](double r) { return e * std::pow(a + b * std::pow(r, pp), e - 1.0) * b * pp * std::pow(r, pp - 1.0); };
    const double num = integral_to_infinity([&](double r) { return std::pow(r, m - 1.0) * std::pow(std::abs(dphi(r)), p); });
    const double den = integral_to_infinity([&](double r) { return std::pow(r, m - 1.0) * std::pow(phi(r), q); });
    return std::pow(num, 1.0 / p) / std::pow(den, 1.0 / q);
}

double talenti_printed_constant(double p, double m) {
    if (!(p > 1.0 && p < m)) throw DomainError("talenti constant needs 1 < p < m");
    const double pp = p / (p - 1.0);
    return std::pow(m, 1.0 / p) * std::pow((p - 1.0) / (m - 1.0), -1.0 / pp) *
           std::pow(std::beta(m / p, m / pp) / pp, 1.0 / m);
}

double sobolev_lower_bound(const AlphaParam& alpha) {
    return std::cbrt(2.0 * kPi / alpha.sector_count()) * std::cbrt(alpha.value() + 1.0) * talenti_radial_constant();
}

double sobolev_lower_bound_printed(const AlphaParam& alpha) {
    return talenti_radial_constant() / (std::cbrt(2.0 * kPi / alpha.sector_count()) * std::cbrt(alpha.value() + 1.0));
}

RayleighReport rayleigh_quotient(const GridFunction3D& u, double q, const AlphaParam& alpha, Region region) {
    if (u.is_zero()) throw DomainError("rayleigh quotient of the zero function");
    RayleighReport r;
    r.alpha = alpha.value();
    r.q = q;
    r.numerator = grushin_energy(u, alpha, region);
    r.denominator = weighted_lq_norm(u, q, alpha, region);
    if (!(r.denominator > 0.0)) throw DomainError("rayleigh quotient: zero weighted norm on the region");
    r.quotient = std::sqrt(r.numerator) / r.denominator;
    return r;
}

double radial_rayleigh_quotient(const std::function<double(double)>& phi, const std::function<double(double)>& dphi,
                                double q, const AlphaParam& alpha) {
    if (!(q >= 1.0)) throw DomainError("radial rayleigh quotient: q must be >= 1");
    const double n = alpha.sector_count();
    const double a1 = alpha.value() + 1.0;
    const double energy = 2.0 * kPi / n * integral_to_infinity([&](double r) {
        const double d = dphi(r);
        return r * r * d * d;
    });
    const double norm_q = 2.0 * kPi / (n * a1 * a1) *
                          integral_to_infinity([&](double r) { return r * r * std::pow(std::abs(phi(r)), q); });
    if (!(norm_q > 0.0)) throw DomainError("radial rayleigh quotient of the zero profile");
    return std::sqrt(energy) / std::pow(norm_q, 1.0 / q);
}

double scaling_exponent(double q, const AlphaParam& alpha) {
    if (!(q > 0.0)) throw DomainError("scaling exponent needs q > 0");
    // (3a+3)/q - (a+1)/2 written so that q = 6 gives exactly zero.
    return (alpha.value() + 1.0) * (3.0 / q - 0.5);
}

double truncated_extremal(double r, double b, double truncation_radius) {
    if (r >= truncation_radius) return 0.0;
    return std::max(0.0, 1.0 / std::sqrt(1.0 + b * r * r) -
                             1.0 / std::sqrt(1.0 + b * truncation_radius * truncation_radius));
}

GridFunction3D extremal_family_member(const AlphaParam& alpha, const FamilyConfig& cfg, double b,
                                      const std::vector<double>& c) {
    const double a1 = alpha.value() + 1.0;
    const double R = cfg.truncation_radius;
    const double X = std::pow(R, 1.0 / a1);
    const double Y = R / a1;
    const int n = cfg.resolution + cfg.resolution % 2;
    const int two_n = 2 * alpha.sector_count();
    return GridFunction3D::sample({{-X, -X, -Y}, {X, X, Y}}, {n, n, n}, [&](const Vec3& p) {
        const double rho2 = p.x1 * p.x1 + p.x2 * p.x2;
        const double r = alpha.grushin_radius(p);
        double factor = 1.0;
        if (!c.empty()) {
            // cos(2n theta) with a smooth cutoff at the axis.
            const double rho_n = std::pow(rho2, 0.5 * two_n);
            const double angular = rho_n > 0.0 ? rho_n * std::cos(two_n * std::atan2(p.x2, p.x1)) / (1.0 + rho_n) : 0.0;
            const double tilt = a1 * p.y / std::sqrt(1.0 + r * r);
            const double stretch = (std::pow(rho2, a1) - a1 * a1 * p.y * p.y) / (1.0 + r * r);
            const double psi[3] = {angular, tilt, stretch};
            for (std::size_t i = 0; i < c.size() && i < 3; ++i) factor += c[i] * psi[i];
        }
        return factor * truncated_extremal(r, b, R);
    });
}

MinimizeResult minimize_rayleigh(const AlphaParam& alpha, const FamilyConfig& cfg) {
    if (cfg.q != 6.0) {
        throw DomainError("minimize_rayleigh: only q = 6 is supported; for q != 6 the quotient scales like l^" +
                          std::to_string(scaling_exponent(cfg.q, alpha)) +
                          " under anisotropic dilation, so its infimum is 0 or not attained");
    }
    if (!(cfg.b_min > 0.0 && cfg.b_max > cfg.b_min)) throw DomainError("minimize_rayleigh: invalid b range");
    if (cfg.resolution < 4 || cfg.max_evaluations < 4) throw DomainError("minimize_rayleigh: budget too small");

    MinimizeResult best;
    best.estimate = std::numeric_limits<double>::infinity();
    auto evaluate = [&](double b, const std::vector<double>& c) {
        ++best.evaluations;
        const auto u = extremal_family_member(alpha, cfg, b, c);
        const double v = rayleigh_quotient(u, cfg.q, alpha, Region{1}).quotient;
        if (v < best.estimate) {
            best.estimate = v;
            best.b = b;
            best.coefficients = c;
        }
        return v;
    };

    // Golden-section search over log b.
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::log(cfg.b_min), hi = std::log(cfg.b_max);
    const int golden_budget = cfg.perturbations ? cfg.max_evaluations / 3 : cfg.max_evaluations;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = evaluate(std::exp(x1), {}), f2 = evaluate(std::exp(x2), {});
    while (best.evaluations < golden_budget) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = evaluate(std::exp(x1), {});
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = evaluate(std::exp(x2), {});
        }
    }
    if (!cfg.perturbations) return best;

    // Nelder-Mead over the three perturbation amplitudes, clamped to [-0.9, 0.9].
    const double b = best.b;
    constexpr int dim = 3;
    auto clamp = [](std::vector<double> c) {
        for (auto& v : c) v = std::clamp(v, -0.9, 0.9);
        return c;
    };
    std::vector<std::vector<double>> simplex(dim + 1, std::vector<double>(dim, 0.0));
    std::vector<double> values(dim + 1);
    for (int i = 0; i < dim; ++i) simplex[i + 1][i] = 0.2;
    for (int i = 0; i <= dim; ++i) values[i] = evaluate(b, simplex[i]);
    while (best.evaluations < cfg.max_evaluations) {
        std::vector<int> order(dim + 1);
        for (int i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int x, int y) { return values[x] < values[y]; });
        const int worst = order[dim], second = order[dim - 1], top = order[0];
        std::vector<double> centroid(dim, 0.0);
        for (int i = 0; i < dim; ++i)
            for (int d = 0; d < dim; ++d) centroid[d] += simplex[order[i]][d] / dim;
        auto along = [&](double t) {
            std::vector<double> p(dim);
            for (int d = 0; d < dim; ++d) p[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
            return clamp(p);
        };
        const auto reflected = along(-1.0);
        const double fr = evaluate(b, reflected);
        if (fr < values[top]) {
            const auto expanded = along(-2.0);
            const double fe = evaluate(b, expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if (fr < values[second]) {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            const auto contracted = along(0.5);
            const double fc = evaluate(b, contracted);
            if (fc < values[worst]) {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                for (int i = 1; i <= dim; ++i) {
                    const int idx = order[i];
                    for (int d = 0; d < dim; ++d) simplex[idx][d] = 0.5 * (simplex[idx][d] + simplex[top][d]);
                    values[idx] = evaluate(b, simplex[idx]);
                }
            }
        }
    }
    return best;
}

}  // namespace grushin

#pragma once

#include <functional>
#include <vector>

namespace grushin {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

struct IntegrationResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int intervals = 0;
};

struct AdaptiveOptions {
    double abs_tol = 1e-14;
    double rel_tol = 1e-13;
    int max_intervals = 20000;
};

// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.
IntegrationResult integrate(const std::function<double(double)>& f, double a, double b,
                            const AdaptiveOptions& opts = {});

// Integral over [a, inf) through the substitution r = a + t / (1 - t).
IntegrationResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                        const AdaptiveOptions& opts = {});

}  // namespace grushin

#include "grushin/pohozaev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grushin/errors.hpp"
#include "grushin/parallel.hpp"

namespace grushin {

double pohozaev_coefficient(double p, const AlphaParam& alpha) {
    if (!(p >= 1.0)) throw DomainError("Pohozaev exponent must satisfy p >= 1");
    const double a1 = alpha.value() + 1.0;
    // Written as a1 (6 - (p+1)) / (2 (p+1)) so that p = 5 gives an exact zero.
    return a1 * (5.0 - p) / (2.0 * (p + 1.0));
}

ExponentRegime nonexistence_classify(double p) {
    if (!(p >= 1.0)) throw DomainError("Pohozaev exponent must satisfy p >= 1");
    if (p < 5.0) return ExponentRegime::subcritical;
    if (p == 5.0) return ExponentRegime::critical;
    return ExponentRegime::supercritical;
}

std::string to_string(ExponentRegime r) {
    switch (r) {
        case ExponentRegime::subcritical: return "subcritical";
        case ExponentRegime::critical: return "critical";
        case ExponentRegime::supercritical: return "supercritical";
    }
    return "unknown";
}

std::string regime_consequence(ExponentRegime r) {
    switch (r) {
        case ExponentRegime::subcritical:
            return "positive coefficient: the identity does not obstruct solutions";
        case ExponentRegime::critical:
            return "zero coefficient: a solution must have vanishing boundary term";
        case ExponentRegime::supercritical:
            return "negative coefficient: no nontrivial solution on star-shaped domains";
    }
    return {};
}

double dilation_flux(const Vec3& p, const Vec3& normal, const AlphaParam& alpha) {
    return p.x1 * normal.x1 + p.x2 * normal.x2 + (1.0 + alpha.value()) * p.y * normal.y;
}

namespace {
constexpr double star_tolerance = 1e-10;
}

StarShapedReport star_shaped_check(const Domain& domain, const AlphaParam& alpha) {
    // Domains are built with the origin strictly inside; masked ones keep the origin node.
    StarShapedReport rep;
    rep.min_value = std::numeric_limits<double>::infinity();
    for (const BoundaryFace& f : domain.boundary_faces()) {
        rep.min_value = std::min(rep.min_value, dilation_flux(f.center, f.normal, alpha));
    }
    rep.samples = domain.boundary_faces().size();
    rep.star_shaped = rep.min_value >= -star_tolerance;
    return rep;
}

StarShapedReport star_shaped_check(const ImplicitShape& shape, const AlphaParam& alpha,
                                   const QuadratureConfig& cfg) {
    if (!(shape.level({0.0, 0.0, 0.0}) < 0.0)) throw DomainError("the origin is not inside '" + shape.name + "'");
    const auto samples = boundary_samples(shape, cfg);
    if (samples.empty()) throw DomainError("shape '" + shape.name + "' has no boundary samples");
    StarShapedReport rep;
    rep.min_value = std::numeric_limits<double>::infinity();
    for (const BoundarySample& s : samples) {
        rep.min_value = std::min(rep.min_value, dilation_flux(s.point, s.normal, alpha));
    }
    rep.samples = samples.size();
    rep.star_shaped = rep.min_value >= -star_tolerance;
    return rep;
}

double pohozaev_lhs(const Domain& domain, const GridFunction3D& u, double p, const AlphaParam& alpha) {
    const double c = pohozaev_coefficient(p, alpha);
    if (u.size() != domain.size()) throw DomainError("grid function does not match the domain");
    const std::size_t slab = static_cast<std::size_t>(domain.dims()[0]) * domain.dims()[1];
    const double sum = chunked_sum(static_cast<std::size_t>(domain.dims()[2]), [&](std::size_t k) {
        double s = 0.0;
        for (std::size_t i = k * slab; i < (k + 1) * slab; ++i) {
            if (domain.active(i)) s += alpha.volume_weight(domain.node(i)) * std::pow(std::abs(u.values()[i]), p + 1.0);
        }
        return s;
    });
    return c * domain.cell_volume() * sum;
}

BoundaryTerm pohozaev_rhs(const Domain& domain, const GridFunction3D& u, const AlphaParam& alpha) {
    if (!domain.is_box()) throw DomainError("the Pohozaev boundary term is evaluated on box domains only");
    if (u.size() != domain.size()) throw DomainError("grid function does not match the domain");
    const auto& faces = domain.boundary_faces();
    const auto& dims = domain.dims();
    const Vec3 h = domain.spacing();
    constexpr std::size_t chunk = 1024;
    const double sum = chunked_sum((faces.size() + chunk - 1) / chunk, [&](std::size_t c) {
        double s = 0.0;
        for (std::size_t fi = c * chunk; fi < std::min(faces.size(), (c + 1) * chunk); ++fi) {
            const BoundaryFace& f = faces[fi];
            int axis = 0;
            while (f.normal[axis] == 0.0) ++axis;
            const int dir = f.normal[axis] > 0.0 ? 1 : -1;
            // Second node inward; a single interior layer falls back to first order.
            const Vec3 n1 = domain.node(f.cell);
            std::array<int, 3> ijk{};
            for (int a = 0; a < 3; ++a) ijk[a] = static_cast<int>(std::lround((n1[a] - domain.bounds().lo[a]) / h[a])) - 1;
            ijk[axis] -= dir;
            const double u1 = u.values()[f.cell];
            double dudn;
            if (ijk[axis] >= 0 && ijk[axis] < dims[axis]) {
                const double u2 = u.values()[domain.index(ijk[0], ijk[1], ijk[2])];
                dudn = (u2 - 4.0 * u1) / (2.0 * h[axis]);
            } else {
                dudn = -u1 / h[axis];
            }
            const Vec3& x = f.center;
            const double density = f.normal.x1 * f.normal.x1 + f.normal.x2 * f.normal.x2 +
                                   alpha.volume_weight(x) * f.normal.y * f.normal.y;
            s += dilation_flux(x, f.normal, alpha) * density * dudn * dudn * f.area;
        }
        return s;
    });
    return {0.5 * sum, sum};
}

PohozaevReport pohozaev_residual(const Domain& domain, const GridFunction3D& u, double p, const AlphaParam& alpha) {
    constexpr double eps = 1e-14;
    PohozaevReport rep;
    rep.p = p;
    rep.coefficient = pohozaev_coefficient(p, alpha);
    rep.regime = nonexistence_classify(p);
    rep.lhs = pohozaev_lhs(domain, u, p, alpha);
    const BoundaryTerm b = pohozaev_rhs(domain, u, alpha);
    rep.rhs = b.value;
    rep.rhs_printed = b.printed;
    rep.residual = std::abs(rep.lhs - rep.rhs) / std::max({std::abs(rep.lhs), std::abs(rep.rhs), eps});
    rep.residual_printed =
        std::abs(rep.lhs - rep.rhs_printed) / std::max({std::abs(rep.lhs), std::abs(rep.rhs_printed), eps});
    rep.trivial = u.is_zero();
    rep.star = star_shaped_check(domain, alpha);
    return rep;
}

}  // namespace grushin

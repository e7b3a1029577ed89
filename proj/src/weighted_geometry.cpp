#include "grushin/weighted_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "grushin/errors.hpp"
#include "grushin/parallel.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/triangulation.hpp"

namespace grushin {

SurfacePatch make_patch(double s_min, double s_max, double t_min, double t_max,
                        std::function<Vec3(double, double)> point,
                        std::function<Vec3(double, double)> d_s, std::function<Vec3(double, double)> d_t,
                        double orientation) {
    SurfacePatch patch;
    patch.s_min = s_min;
    patch.s_max = s_max;
    patch.t_min = t_min;
    patch.t_max = t_max;
    patch.point = std::move(point);
    patch.normal = [d_s, d_t, orientation](double s, double t) {
        const Vec3 c = cross(d_s(s, t), d_t(s, t));
        return c * (orientation / norm(c));
    };
    patch.area_element = [d_s, d_t](double s, double t) { return norm(cross(d_s(s, t), d_t(s, t))); };
    return patch;
}

void QuadratureConfig::validate() const {
    if (volume_resolution < 1 || surface_resolution < 1 || refine_depth < 0 || refine_depth > 8) {
        throw DomainError("quadrature config: resolutions must be positive and refine_depth in [0, 8]");
    }
}

QuadratureConfig QuadratureConfig::coarsened() const {
    return {std::max(1, volume_resolution / 2), std::max(1, surface_resolution / 2), refine_depth};
}

namespace {

constexpr int kPanelGauss = 4;

std::vector<BoundarySample> patch_samples(const std::vector<SurfacePatch>& patches, int panels) {
    const GaussRule rule = gauss_legendre(kPanelGauss);
    std::vector<BoundarySample> out;
    out.reserve(patches.size() * panels * panels * kPanelGauss * kPanelGauss);
    for (const auto& patch : patches) {
        const double ds = (patch.s_max - patch.s_min) / panels;
        const double dt = (patch.t_max - patch.t_min) / panels;
        for (int ps = 0; ps < panels; ++ps) {
            for (int pt = 0; pt < panels; ++pt) {
                for (int a = 0; a < kPanelGauss; ++a) {
                    const double s = patch.s_min + ds * (ps + 0.5 * (rule.nodes[a] + 1.0));
                    for (int b = 0; b < kPanelGauss; ++b) {
                        const double t = patch.t_min + dt * (pt + 0.5 * (rule.nodes[b] + 1.0));
                        const double w = rule.weights[a] * rule.weights[b] * 0.25 * ds * dt;
                        out.push_back({patch.point(s, t), patch.normal(s, t), w * patch.area_element(s, t)});
                    }
                }
            }
        }
    }
    return out;
}

// Sector walls of a confining sector j: returns the two unit wall normals (horizontal).
std::array<Vec3, 2> wall_normals(int j, int n) {
    const double a0 = (j - 1) * std::numbers::pi / n;
    const double a1 = j * std::numbers::pi / n;
    return {Vec3{-std::sin(a0), std::cos(a0), 0.0}, Vec3{-std::sin(a1), std::cos(a1), 0.0}};
}

std::vector<BoundarySample> triangulation_samples(const ImplicitShape& shape, const QuadratureConfig& cfg) {
    const auto tris = triangulate_level_set(shape.level, shape.bbox, cfg.volume_resolution);
    if (tris.empty()) return {};
    const Vec3 ext = shape.bbox.extent();
    const double h = std::min({ext.x1, ext.x2, ext.y}) / cfg.volume_resolution;
    std::vector<BoundarySample> out;
    out.reserve(tris.size());
    for (const auto& t : tris) {
        const double area = t.area();
        if (area == 0.0) continue;
        const Vec3 c = t.centroid();
        const Vec3 nrm = level_normal(shape.level, c, 1e-3 * h);
        if (norm(nrm) == 0.0) {
            throw ComputationError("triangulation of '" + shape.name + "' hit a vanishing level gradient");
        }
        out.push_back({c, nrm, area});
    }
    return out;
}

// True when a triangulation sample of a confined shape lies on one of the sector walls.
bool on_confining_wall(const BoundarySample& s, int j, int n, double tol) {
    for (const Vec3& wn : wall_normals(j, n)) {
        if (std::abs(dot(s.point, wn)) < tol && std::abs(dot(s.normal, wn)) > 0.999) return true;
    }
    return false;
}

}  // namespace

std::vector<BoundarySample> boundary_samples(const ImplicitShape& shape, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!shape.patches.empty()) return patch_samples(shape.patches, cfg.surface_resolution);
    if (!shape.level) throw ComputationError("shape '" + shape.name + "' has neither patches nor a level function");
    return triangulation_samples(shape, cfg);
}

namespace {

struct VoxelContext {
    const ScalarField& level;
    const ScalarField& weight;
    int max_depth;
};

double refine_cell(const VoxelContext& ctx, const Vec3& lo, const Vec3& h, const std::array<double, 8>& corners,
                   int depth) {
    const double vol = h.x1 * h.x2 * h.y;
    if (depth >= ctx.max_depth) {
        const Vec3 c = lo + h * 0.5;
        return ctx.level(c) < 0.0 ? ctx.weight(c) * vol : 0.0;
    }
    const Vec3 hh = h * 0.5;
    std::array<double, 27> v{};
    for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 3; ++i) {
                const int idx = i + 3 * (j + 3 * k);
                if (i != 1 && j != 1 && k != 1) {
                    v[idx] = corners[(i / 2) + 2 * (j / 2) + 4 * (k / 2)];
                } else {
                    v[idx] = ctx.level({lo.x1 + i * hh.x1, lo.x2 + j * hh.x2, lo.y + k * hh.y});
                }
            }
        }
    }
    double sum = 0.0;
    for (int c = 0; c < 8; ++c) {
        const int ci = c & 1, cj = (c >> 1) & 1, ck = (c >> 2) & 1;
        std::array<double, 8> cc{};
        int n_in = 0;
        for (int q = 0; q < 8; ++q) {
            cc[q] = v[(ci + (q & 1)) + 3 * ((cj + ((q >> 1) & 1)) + 3 * (ck + ((q >> 2) & 1)))];
            if (cc[q] < 0.0) ++n_in;
        }
        const Vec3 clo{lo.x1 + ci * hh.x1, lo.x2 + cj * hh.x2, lo.y + ck * hh.y};
        if (n_in == 8) sum += ctx.weight(clo + hh * 0.5) * (vol / 8.0);
        else if (n_in > 0) sum += refine_cell(ctx, clo, hh, cc, depth + 1);
    }
    return sum;
}

}  // namespace

double integrate_over(const ImplicitShape& shape, const ScalarField& weight, const QuadratureConfig& cfg) {
    cfg.validate();
    if (shape.bbox.degenerate()) throw DomainError("shape '" + shape.name + "' has a degenerate bounding box");
    const int n = cfg.volume_resolution;
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    const Box& bb = shape.bbox;
    const Vec3 h = bb.extent() / static_cast<double>(n);
    std::vector<double> lattice(m * m * m);
    parallel_for(m, [&](std::size_t k) {
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < m; ++i)
                lattice[i + m * (j + m * k)] = shape.level({bb.lo.x1 + i * h.x1, bb.lo.x2 + j * h.x2, bb.lo.y + k * h.y});
    });
    const VoxelContext ctx{shape.level, weight, cfg.refine_depth};
    const double vol = h.x1 * h.x2 * h.y;
    return chunked_sum(static_cast<std::size_t>(n), [&](std::size_t k) {
        double slab = 0.0;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                std::array<double, 8> corners{};
                int n_in = 0;
                for (int q = 0; q < 8; ++q) {
                    corners[q] = lattice[(i + (q & 1)) + m * ((j + ((q >> 1) & 1)) + m * (k + ((q >> 2) & 1)))];
                    if (corners[q] < 0.0) ++n_in;
                }
                if (n_in == 0) continue;
                const Vec3 lo{bb.lo.x1 + i * h.x1, bb.lo.x2 + j * h.x2, bb.lo.y + k * h.y};
                if (n_in == 8) slab += weight(lo + h * 0.5) * vol;
                else slab += refine_cell(ctx, lo, h, corners, 0);
            }
        }
        return slab;
    });
}

double weighted_volume(const ImplicitShape& shape, const AlphaParam& alpha, const QuadratureConfig& cfg) {
    return integrate_over(shape, [&](const Vec3& p) { return alpha.volume_weight(p); }, cfg);
}

double euclidean_volume(const ImplicitShape& shape, const QuadratureConfig& cfg) {
    return integrate_over(shape, [](const Vec3&) { return 1.0; }, cfg);
}

double perimeter_density(const Vec3& p, const Vec3& nu, const AlphaParam& alpha) {
    const double rho = horizontal_norm(p);
    const double ra = std::pow(rho, alpha.value());
    return ra * std::sqrt(nu.x1 * nu.x1 + nu.x2 * nu.x2 + ra * ra * nu.y * nu.y);
}

namespace {

// Sum of density * weight over samples accepted by keep().
template <typename Keep>
double boundary_sum(const std::vector<BoundarySample>& samples, const AlphaParam& alpha, Keep keep) {
    const std::size_t chunk = 4096;
    const std::size_t n_chunks = (samples.size() + chunk - 1) / chunk;
    return chunked_sum(n_chunks, [&](std::size_t c) {
        double s = 0.0;
        const std::size_t end = std::min(samples.size(), (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < end; ++i) {
            if (keep(samples[i])) s += perimeter_density(samples[i].point, samples[i].normal, alpha) * samples[i].weight;
        }
        return s;
    });
}

double wall_tolerance(const ImplicitShape& shape, const QuadratureConfig& cfg) {
    const Vec3 e = shape.bbox.extent();
    return 1e-6 * std::max({e.x1, e.x2, e.y}) + 1e-3 * std::min({e.x1, e.x2, e.y}) / cfg.volume_resolution;
}

}  // namespace

double weighted_perimeter(const ImplicitShape& shape, const AlphaParam& alpha, const QuadratureConfig& cfg) {
    const auto samples = boundary_samples(shape, cfg);
    if (!shape.confining_sector) return boundary_sum(samples, alpha, [](const BoundarySample&) { return true; });
    const int j = *shape.confining_sector;
    check_sector_index(alpha, j);
    const bool triangulated = shape.patches.empty();
    const double tol = wall_tolerance(shape, cfg);
    return boundary_sum(samples, alpha, [&](const BoundarySample& s) {
        if (triangulated && on_confining_wall(s, j, alpha.sector_count(), tol)) return false;
        return sector_of_point(s.point, alpha) == j;
    });
}

double sector_perimeter(const ImplicitShape& shape, const AlphaParam& alpha, int j, const QuadratureConfig& cfg) {
    check_sector_index(alpha, j);
    const auto samples = boundary_samples(shape, cfg);
    const bool drop_walls = shape.confining_sector && shape.patches.empty();
    const double tol = wall_tolerance(shape, cfg);
    return boundary_sum(samples, alpha, [&](const BoundarySample& s) {
        if (drop_walls && on_confining_wall(s, *shape.confining_sector, alpha.sector_count(), tol)) return false;
        return sector_of_point(s.point, alpha) == j;
    });
}

double reference_volume(const AlphaParam& alpha) {
    return 2.0 * std::numbers::pi * (alpha.value() + 1.0) / (3.0 * alpha.sector_count());
}

double reference_sector_perimeter(const AlphaParam& alpha) {
    return 2.0 * (alpha.value() + 1.0) * std::numbers::pi / alpha.sector_count();
}

double reference_quotient(const AlphaParam& alpha) {
    return std::pow(reference_sector_perimeter(alpha), 1.5) / reference_volume(alpha);
}

double isoperimetric_quotient(const ImplicitShape& shape, const AlphaParam& alpha, const QuadratureConfig& cfg) {
    const double vol = weighted_volume(shape, alpha, cfg);
    if (!(vol > 0.0)) throw DomainError("isoperimetric quotient of '" + shape.name + "': zero weighted volume");
    return std::pow(weighted_perimeter(shape, alpha, cfg), 1.5) / vol;
}

DeficitReport isoperimetric_deficit(const ImplicitShape& shape, const AlphaParam& alpha, const QuadratureConfig& cfg) {
    DeficitReport r;
    r.volume = weighted_volume(shape, alpha, cfg);
    if (!(r.volume > 0.0)) throw DomainError("isoperimetric deficit of '" + shape.name + "': zero weighted volume");
    r.perimeter = weighted_perimeter(shape, alpha, cfg);
    r.quotient = std::pow(r.perimeter, 1.5) / r.volume;
    r.reference_quotient = reference_quotient(alpha);
    r.deficit = r.quotient - r.reference_quotient;
    const QuadratureConfig coarse = cfg.coarsened();
    const double v2 = weighted_volume(shape, alpha, coarse);
    const double p2 = weighted_perimeter(shape, alpha, coarse);
    r.error_estimate = v2 > 0.0 ? std::abs(std::pow(p2, 1.5) / v2 - r.quotient) : r.quotient;
    return r;
}

ImplicitShape anisotropic_scale(const ImplicitShape& shape, double lambda, const AlphaParam& alpha) {
    if (!(lambda > 0.0)) throw DomainError("anisotropic scale: lambda must be positive");
    const double sx = lambda;
    const double sy = std::pow(lambda, alpha.value() + 1.0);
    auto scale = [sx, sy](const Vec3& p) { return Vec3{sx * p.x1, sx * p.x2, sy * p.y}; };
    // Covector transform S^{-T} nu, unnormalized.
    auto cotransform = [sx, sy](const Vec3& n) { return Vec3{n.x1 / sx, n.x2 / sx, n.y / sy}; };
    const double det = sx * sx * sy;

    ImplicitShape out;
    out.name = shape.name;
    out.confining_sector = shape.confining_sector;
    if (shape.level) {
        out.level = [level = shape.level, sx, sy](const Vec3& p) { return level({p.x1 / sx, p.x2 / sx, p.y / sy}); };
    }
    out.bbox = {scale(shape.bbox.lo), scale(shape.bbox.hi)};
    for (const auto& patch : shape.patches) {
        SurfacePatch sp = patch;
        sp.point = [f = patch.point, scale](double s, double t) { return scale(f(s, t)); };
        sp.normal = [f = patch.normal, cotransform](double s, double t) {
            const Vec3 n = cotransform(f(s, t));
            return n / norm(n);
        };
        // Nanson: dA' = det(S) |S^{-T} nu| dA.
        sp.area_element = [fa = patch.area_element, fn = patch.normal, cotransform, det](double s, double t) {
            return det * norm(cotransform(fn(s, t))) * fa(s, t);
        };
        out.patches.push_back(std::move(sp));
    }
    return out;
}

}  // namespace grushin

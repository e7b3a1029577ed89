#include "grushin/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <utility>

#include "grushin/errors.hpp"
#include "grushin/parallel.hpp"
#include "grushin/quadrature.hpp"

namespace grushin {

namespace {

constexpr double kPi = std::numbers::pi;

void require_nonnegative(const GridFunction3D& u, const char* op) {
    if (!u.all_finite()) throw DomainError(std::string(op) + ": grid function has non-finite values");
    if (u.min_value() < 0.0) throw DomainError(std::string(op) + ": grid function must be nonnegative");
}

// Active cells with u > 0 sorted by decreasing value, with running weighted measure.
struct SortedCells {
    std::vector<double> values;      // decreasing
    std::vector<double> cumulative;  // measure of the first i+1 cells
};

SortedCells sort_cells(const GridFunction3D& u, const AlphaParam& alpha) {
    std::vector<std::pair<double, double>> cells;
    const double vol = u.cell_volume();
    for (std::size_t idx = 0; idx < u.size(); ++idx) {
        const double v = u.values()[idx];
        if (!u.active(idx) || !(v > 0.0)) continue;
        cells.emplace_back(v, alpha.volume_weight(u.cell_center(idx)) * vol);
    }
    std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    SortedCells s;
    s.values.reserve(cells.size());
    s.cumulative.reserve(cells.size());
    double acc = 0.0;
    for (const auto& [v, w] : cells) {
        acc += w;
        s.values.push_back(v);
        s.cumulative.push_back(acc);
    }
    return s;
}

double measure_above(const SortedCells& s, double t) {
    // Number of cells with value > t.
    const auto it = std::partition_point(s.values.begin(), s.values.end(), [t](double v) { return v > t; });
    const auto count = static_cast<std::size_t>(it - s.values.begin());
    return count == 0 ? 0.0 : s.cumulative[count - 1];
}

RadialProfile profile_from_sorted(const SortedCells& s, const AlphaParam& alpha, double max, int level_count) {
    RadialProfile phi;
    phi.alpha = alpha.value();
    if (!(max > 0.0)) {
        phi.radii = {0.0};
        phi.values = {0.0};
        return phi;
    }
    const auto levels = uniform_levels(max, level_count);
    phi.radii = {0.0};
    phi.values = {max};
    for (int k = level_count - 1; k >= 0; --k) {
        const double r = radius_from_measure(measure_above(s, levels[k]), alpha);
        if (r > phi.radii.back()) {
            phi.radii.push_back(r);
            phi.values.push_back(levels[k]);
        } else if (phi.radii.size() > 1) {
            // Superlevel measure unchanged between levels: keep the lower level at this radius.
            phi.values.back() = levels[k];
        }
    }
    return phi;
}

double sector_factor(const AlphaParam& alpha) {
    const double a1 = alpha.value() + 1.0;
    return 2.0 * kPi / (alpha.sector_count() * a1 * a1);
}

}  // namespace

double RadialProfile::operator()(double r) const {
    if (radii.size() < 2 || r >= radii.back()) return 0.0;
    if (r <= 0.0) return values.front();
    const auto it = std::upper_bound(radii.begin(), radii.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - radii.begin());
    const double s = (r - radii[i - 1]) / (radii[i] - radii[i - 1]);
    return values[i - 1] + s * (values[i] - values[i - 1]);
}

double RadialProfile::superlevel_radius(double t) const {
    if (radii.size() < 2 || t >= values.front()) return 0.0;
    if (t < 0.0) return radii.back();
    std::size_t i = 1;
    while (values[i] > t) ++i;  // values.back() == 0 <= t terminates the scan
    const double s = (values[i - 1] - t) / (values[i - 1] - values[i]);
    return radii[i - 1] + s * (radii[i] - radii[i - 1]);
}

std::vector<double> uniform_levels(double max, int count) {
    if (count < 1) throw DomainError("level count must be positive");
    std::vector<double> t(count + 1);
    for (int k = 0; k <= count; ++k) t[k] = max * k / count;
    t[count] = max;
    return t;
}

DistributionFunction distribution_function(const GridFunction3D& u, const AlphaParam& alpha,
                                           const std::vector<double>& levels) {
    require_nonnegative(u, "distribution_function");
    if (!std::is_sorted(levels.begin(), levels.end())) throw DomainError("levels must be increasing");
    const SortedCells s = sort_cells(u, alpha);
    DistributionFunction d;
    d.levels = levels;
    d.measures.reserve(levels.size());
    for (const double t : levels) d.measures.push_back(measure_above(s, t));
    return d;
}

double sector_ball_measure(double radius, const AlphaParam& alpha) {
    return sector_factor(alpha) * radius * radius * radius / 3.0;
}

double radius_from_measure(double m, const AlphaParam& alpha) {
    if (m < 0.0 || std::isnan(m)) throw DomainError("measure must be nonnegative");
    const double a1 = alpha.value() + 1.0;
    return std::cbrt(3.0 * alpha.sector_count() * a1 * a1 * m / (2.0 * kPi));
}

RadialProfile rearrange(const GridFunction3D& u, const AlphaParam& alpha, int level_count) {
    require_nonnegative(u, "rearrange");
    if (level_count < 1) throw DomainError("level count must be positive");
    double max = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u.active(i)) max = std::max(max, u.values()[i]);
    return profile_from_sorted(sort_cells(u, alpha), alpha, max, level_count);
}

double weighted_lq_norm(const GridFunction3D& u, double q, const AlphaParam& alpha, Region region) {
    if (!(q >= 1.0)) throw DomainError("weighted_lq_norm: q must be >= 1");
    if (region.sector) check_sector_index(alpha, *region.sector);
    const auto& d = u.dims();
    const double vol = u.cell_volume();
    const double sum = chunked_sum(d[2], [&](std::size_t k) {
        double s = 0.0;
        for (int j = 0; j < d[1]; ++j) {
            for (int i = 0; i < d[0]; ++i) {
                const std::size_t idx = u.index(i, j, static_cast<int>(k));
                const double v = u.values()[idx];
                if (v == 0.0 || !u.active(idx)) continue;
                const Vec3 c = u.cell_center(i, j, static_cast<int>(k));
                const double m = region.sector ? sector_membership(c, alpha, *region.sector) : 1.0;
                if (m == 0.0) continue;
                s += m * alpha.volume_weight(c) * std::pow(std::abs(v), q);
            }
        }
        return s;
    });
    return std::pow(sum * vol, 1.0 / q);
}

double weighted_lq_norm(const RadialProfile& phi, double q) {
    if (!(q >= 1.0)) throw DomainError("weighted_lq_norm: q must be >= 1");
    const AlphaParam alpha(phi.alpha);
    const GaussRule rule = gauss_legendre(8);
    std::vector<double> parts;
    for (std::size_t i = 1; i < phi.radii.size(); ++i) {
        const double r0 = phi.radii[i - 1], r1 = phi.radii[i];
        const double half = 0.5 * (r1 - r0);
        double s = 0.0;
        for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
            const double r = r0 + half * (rule.nodes[g] + 1.0);
            const double v = phi.values[i - 1] + (r - r0) / (r1 - r0) * (phi.values[i] - phi.values[i - 1]);
            s += rule.weights[g] * r * r * std::pow(std::abs(v), q);
        }
        parts.push_back(s * half);
    }
    return std::pow(sector_factor(alpha) * pairwise_sum(parts), 1.0 / q);
}

double grushin_energy(const GridFunction3D& u, const AlphaParam& alpha, Region region) {
    if (region.sector) check_sector_index(alpha, *region.sector);
    const auto& d = u.dims();
    const Vec3 h = u.spacing();
    const double vol = u.cell_volume();
    auto at = [&u, &d](int i, int j, int k) {
        if (i < 0 || j < 0 || k < 0 || i >= d[0] || j >= d[1] || k >= d[2]) return 0.0;
        return u(i, j, k);
    };
    auto member = [&](const Vec3& p) { return region.sector ? sector_membership(p, alpha, *region.sector) : 1.0; };
    // Chunk k handles the y-faces below layer k and, for k < n3, the horizontal faces of layer k.
    const double sum = chunked_sum(static_cast<std::size_t>(d[2]) + 1, [&](std::size_t kk) {
        const int k = static_cast<int>(kk);
        double s = 0.0;
        for (int j = 0; j < d[1]; ++j) {
            for (int i = 0; i < d[0]; ++i) {
                const Vec3 c = u.cell_center(i, j, k);
                const double dy = at(i, j, k) - at(i, j, k - 1);
                if (dy != 0.0) {
                    s += member(c) * alpha.volume_weight(c) * dy * dy / (h.y * h.y);
                }
            }
        }
        if (k == d[2]) return s;
        for (int j = 0; j <= d[1]; ++j) {
            for (int i = 0; i <= d[0]; ++i) {
                const Vec3 c = u.cell_center(i, j, k);
                if (j < d[1]) {
                    const double dx = at(i, j, k) - at(i - 1, j, k);
                    if (dx != 0.0) s += member(c - Vec3{0.5 * h.x1, 0.0, 0.0}) * dx * dx / (h.x1 * h.x1);
                }
                if (i < d[0]) {
                    const double dx = at(i, j, k) - at(i, j - 1, k);
                    if (dx != 0.0) s += member(c - Vec3{0.0, 0.5 * h.x2, 0.0}) * dx * dx / (h.x2 * h.x2);
                }
            }
        }
        return s;
    });
    return sum * vol;
}

double grushin_energy(const RadialProfile& phi) {
    const AlphaParam alpha(phi.alpha);
    std::vector<double> parts;
    for (std::size_t i = 1; i < phi.radii.size(); ++i) {
        const double r0 = phi.radii[i - 1], r1 = phi.radii[i];
        const double slope = (phi.values[i] - phi.values[i - 1]) / (r1 - r0);
        parts.push_back(slope * slope * (r1 * r1 * r1 - r0 * r0 * r0) / 3.0);
    }
    return 2.0 * kPi / alpha.sector_count() * pairwise_sum(parts);
}

PolyaSzegoReport polya_szego_gap(const GridFunction3D& u, const AlphaParam& alpha, int level_count) {
    PolyaSzegoReport r;
    const RadialProfile phi = rearrange(u, alpha, level_count);
    r.energy = grushin_energy(u, alpha);
    r.rearranged_energy = grushin_energy(phi);
    r.gap = r.energy - r.rearranged_energy;
    r.ratio = r.energy > 0.0 ? r.rearranged_energy / r.energy : 0.0;
    return r;
}

EquimeasurabilityReport equimeasurability(const GridFunction3D& u, const RadialProfile& phi,
                                          const AlphaParam& alpha, int level_count) {
    require_nonnegative(u, "equimeasurability");
    EquimeasurabilityReport r;
    const SortedCells s = sort_cells(u, alpha);
    r.support_measure = s.cumulative.empty() ? 0.0 : s.cumulative.back();
    const double max = s.values.empty() ? 0.0 : s.values.front();
    if (!(max > 0.0) || phi.radii.size() < 2) return r;

    // u* sampled on a grid of the same shape covering the first sector, cells weighted by membership.
    const double a1 = alpha.value() + 1.0;
    const double r_max = phi.radii.back();
    const double rho = std::pow(r_max, 1.0 / a1) * 1.001;
    const double y = r_max / a1 * 1.001;
    const double wall = alpha.sector_angle();
    const Box box{{0.0, 0.0, -y}, {rho, rho * std::sin(std::min(wall, 0.5 * kPi)), y}};
    const GridFunction3D star = GridFunction3D::sample(box, u.dims(), [&](const Vec3& p) {
        return phi(alpha.grushin_radius(p));
    });
    std::vector<std::pair<double, double>> cells;
    for (std::size_t idx = 0; idx < star.size(); ++idx) {
        const double v = star.values()[idx];
        if (!(v > 0.0)) continue;
        const Vec3 c = star.cell_center(idx);
        const double m = sector_membership(c, alpha, 1);
        if (m > 0.0) cells.emplace_back(v, m * alpha.volume_weight(c) * star.cell_volume());
    }
    std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    SortedCells t;
    double acc = 0.0;
    for (const auto& [v, w] : cells) {
        acc += w;
        t.values.push_back(v);
        t.cumulative.push_back(acc);
    }
    const auto levels = uniform_levels(max, level_count);
    for (int k = 0; k < level_count; ++k) {
        r.sup_gap = std::max(r.sup_gap, std::abs(measure_above(s, levels[k]) - measure_above(t, levels[k])));
    }
    r.relative_gap = r.sup_gap / r.support_measure;
    return r;
}

CoareaComparison coarea_derivative_compare(const GridFunction3D& u, const AlphaParam& alpha, double t,
                                           std::optional<double> dt) {
    require_nonnegative(u, "coarea_derivative_compare");
    const SortedCells s = sort_cells(u, alpha);
    const double max = s.values.empty() ? 0.0 : s.values.front();
    if (!(t > 0.0 && t < max)) throw DomainError("coarea_derivative_compare: level must lie strictly inside (0, max u)");
    const double step = std::min(dt.value_or(max / 32.0), 0.999 * std::min(t, max - t));
    if (!(step > 0.0)) throw DomainError("coarea_derivative_compare: step must be positive");

    CoareaComparison c;
    c.lhs = (measure_above(s, t - step) - measure_above(s, t + step)) / (2.0 * step);
    const RadialProfile phi = profile_from_sorted(s, alpha, max, 256);
    auto star = [&](double level) { return sector_ball_measure(phi.superlevel_radius(level), alpha); };
    c.rhs = (star(t - step) - star(t + step)) / (2.0 * step);

    const double band = 1e-9 * max;
    const double on_level = measure_above(s, t - band) - measure_above(s, t + band);
    const double support = s.cumulative.back();
    c.plateau = on_level > 1e-3 * support;
    return c;
}

void write_profile_csv(std::ostream& out, const RadialProfile& phi) {
    out << "r,phi\n";
    for (std::size_t i = 0; i < phi.radii.size(); ++i) {
        out << format_double(phi.radii[i]) << ',' << format_double(phi.values[i]) << '\n';
    }
}

}  // namespace grushin

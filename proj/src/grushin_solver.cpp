#include "grushin/grushin_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <queue>
#include <tuple>
#include <utility>
#include <random>
#include <sstream>

#include "grushin/errors.hpp"
#include "grushin/parallel.hpp"
#include "grushin/sobolev.hpp"

namespace grushin {

namespace {

void check_dims(std::array<int, 3> dims) {
    if (dims[0] < 2 || dims[1] < 2 || dims[2] < 1) throw DomainError("domain dims must be positive");
    if (dims[0] % 2 || dims[1] % 2) throw DomainError("domain dims must be even in x1 and x2");
}

std::size_t slabs(const std::array<int, 3>& d) { return static_cast<std::size_t>(d[2]); }

std::size_t slab_size(const std::array<int, 3>& d) {
    return static_cast<std::size_t>(d[0]) * static_cast<std::size_t>(d[1]);
}

// h^3-free inner product over all entries, reduced slab by slab in a fixed order.
double dot(const std::array<int, 3>& d, const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t m = slab_size(d);
    return chunked_sum(slabs(d), [&](std::size_t k) {
        double s = 0.0;
        for (std::size_t i = k * m; i < (k + 1) * m; ++i) s += a[i] * b[i];
        return s;
    });
}

}  // namespace

Domain Domain::box(const Box& box, std::array<int, 3> dims) {
    check_dims(dims);
    if (box.degenerate()) throw DomainError("domain box is degenerate");
    if (!box.strictly_contains({0.0, 0.0, 0.0})) throw DomainError("the origin must lie strictly inside the domain");
    Domain d;
    d.box_ = box;
    d.dims_ = dims;
    const Vec3 e = box.extent();
    d.h_ = {e.x1 / (dims[0] + 1), e.x2 / (dims[1] + 1), e.y / (dims[2] + 1)};
    d.mask_.assign(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], 1);
    d.build_faces();
    return d;
}

Domain Domain::masked(const Box& box, std::array<int, 3> dims, const std::function<bool(const Vec3&)>& inside) {
    Domain d = Domain::box(box, dims);
    d.is_box_ = false;
    for (std::size_t i = 0; i < d.size(); ++i) d.mask_[i] = inside(d.node(i)) ? 1 : 0;

    // Node nearest to the origin.
    auto nearest = [&](int a) {
        const double t = (0.0 - box.lo[a]) / d.h_[a] - 1.0;
        return std::clamp(static_cast<int>(std::lround(t)), 0, dims[a] - 1);
    };
    const std::size_t origin = d.index(nearest(0), nearest(1), nearest(2));
    if (!d.mask_[origin]) throw DomainError("the origin node is not inside the masked domain");

    std::vector<std::uint8_t> seen(d.size(), 0);
    std::queue<std::size_t> todo;
    todo.push(origin);
    seen[origin] = 1;
    std::size_t reached = 0;
    const auto n1 = static_cast<std::size_t>(dims[0]);
    const std::size_t n12 = n1 * dims[1];
    while (!todo.empty()) {
        const std::size_t c = todo.front();
        todo.pop();
        ++reached;
        const std::size_t i = c % n1, j = (c / n1) % dims[1], k = c / n12;
        const std::size_t nb[6] = {i > 0 ? c - 1 : c,  i + 1 < n1 ? c + 1 : c,
                                   j > 0 ? c - n1 : c, j + 1 < static_cast<std::size_t>(dims[1]) ? c + n1 : c,
                                   k > 0 ? c - n12 : c, k + 1 < static_cast<std::size_t>(dims[2]) ? c + n12 : c};
        for (const std::size_t m : nb) {
            if (d.mask_[m] && !seen[m]) {
                seen[m] = 1;
                todo.push(m);
            }
        }
    }
    const auto active = static_cast<std::size_t>(std::count(d.mask_.begin(), d.mask_.end(), 1));
    if (reached != active) throw DomainError("masked domain is not connected");
    d.build_faces();
    return d;
}

Vec3 Domain::node(std::size_t idx) const {
    const auto n1 = static_cast<std::size_t>(dims_[0]);
    const auto n2 = static_cast<std::size_t>(dims_[1]);
    return node(static_cast<int>(idx % n1), static_cast<int>((idx / n1) % n2), static_cast<int>(idx / (n1 * n2)));
}

void Domain::build_faces() {
    faces_.clear();
    const double areas[3] = {h_.x2 * h_.y, h_.x1 * h_.y, h_.x1 * h_.x2};
    for (int k = 0; k < dims_[2]; ++k) {
        for (int j = 0; j < dims_[1]; ++j) {
            for (int i = 0; i < dims_[0]; ++i) {
                const std::size_t c = index(i, j, k);
                if (!mask_[c]) continue;
                for (int a = 0; a < 3; ++a) {
                    for (const int s : {-1, 1}) {
                        int nb[3] = {i, j, k};
                        nb[a] += s;
                        const bool outside = nb[a] < 0 || nb[a] >= dims_[a];
                        if (!outside && mask_[index(nb[0], nb[1], nb[2])]) continue;
                        Vec3 nrm;
                        nrm[a] = s;
                        Vec3 ctr = node(i, j, k);
                        ctr[a] += s * h_[a];
                        faces_.push_back({c, ctr, nrm, areas[a]});
                    }
                }
            }
        }
    }
}

GridFunction3D Domain::make_function() const {
    const Box grid{box_.lo + h_ * 0.5, box_.hi - h_ * 0.5};
    GridFunction3D u(grid, dims_);
    if (!is_box_) u.set_mask(mask_);
    return u;
}

GridFunction3D Domain::sample(const std::function<double(const Vec3&)>& f) const {
    GridFunction3D u = make_function();
    for (std::size_t i = 0; i < size(); ++i) u.values()[i] = mask_[i] ? f(node(i)) : 0.0;
    return u;
}

double Domain::weighted_measure(const AlphaParam& alpha) const {
    const std::size_t m = slab_size(dims_);
    return cell_volume() * chunked_sum(slabs(dims_), [&](std::size_t k) {
        double s = 0.0;
        for (std::size_t i = k * m; i < (k + 1) * m; ++i)
            if (mask_[i]) s += alpha.volume_weight(node(i));
        return s;
    });
}

GrushinOperator::GrushinOperator(const Domain& domain, const AlphaParam& alpha) : domain_(&domain), alpha_(alpha) {
    const Vec3 h = domain.spacing();
    weight_.resize(domain.size());
    diag_.resize(domain.size());
    for (std::size_t i = 0; i < domain.size(); ++i) {
        weight_[i] = alpha.volume_weight(domain.node(i));
        diag_[i] = domain.active(i) ? 2.0 / (h.x1 * h.x1) + 2.0 / (h.x2 * h.x2) + 2.0 * weight_[i] / (h.y * h.y) : 0.0;
    }
}

void GrushinOperator::apply(const std::vector<double>& u, std::vector<double>& out) const {
    const Domain& d = *domain_;
    const auto& dims = d.dims();
    const Vec3 h = d.spacing();
    const double cx = 1.0 / (h.x1 * h.x1), cy = 1.0 / (h.x2 * h.x2), cz = 1.0 / (h.y * h.y);
    const std::size_t n1 = dims[0], n12 = slab_size(dims);
    out.resize(u.size());
    const auto& mask = d.mask();
    parallel_for(slabs(dims), [&](std::size_t k) {
        for (int j = 0; j < dims[1]; ++j) {
            for (int i = 0; i < dims[0]; ++i) {
                const std::size_t c = d.index(i, j, static_cast<int>(k));
                if (!mask[c]) {
                    out[c] = 0.0;
                    continue;
                }
                auto nb = [&](bool ok, std::size_t idx) { return ok && mask[idx] ? u[idx] : 0.0; };
                const double xs = nb(i > 0, c - 1) + nb(i + 1 < dims[0], c + 1);
                const double ys = nb(j > 0, c - n1) + nb(j + 1 < dims[1], c + n1);
                const double zs = nb(k > 0, c - n12) + nb(static_cast<int>(k) + 1 < dims[2], c + n12);
                out[c] = diag_[c] * u[c] - cx * xs - cy * ys - cz * weight_[c] * zs;
            }
        }
    });
}

GridFunction3D GrushinOperator::apply(const GridFunction3D& u) const {
    GridFunction3D out = u;
    apply(u.values(), out.values());
    return out;
}

GrushinOperator assemble_grushin(const Domain& domain, const AlphaParam& alpha) { return {domain, alpha}; }

void SolverConfig::validate() const {
    if (!(linear_tolerance > 0.0) || !(outer_tolerance > 0.0) || linear_max_iterations < 1 ||
        max_outer_iterations < 1) {
        throw DomainError("solver tolerances and iteration limits must be positive");
    }
    if (!(armijo > 0.0 && armijo < 1.0) || !(backtrack > 0.0 && backtrack < 1.0) || !(min_step > 0.0)) {
        throw DomainError("line-search parameters out of range");
    }
    if (!(initial_radius > 0.0 && initial_radius <= 1.0)) throw DomainError("initial_radius must lie in (0, 1]");
    if (!(collapse_threshold >= 0.0) || !(path_max > 0.0) || path_samples < 2) {
        throw DomainError("invalid collapse threshold or path sampling");
    }
}

SolverConfig parse_solver_config(std::istream& in) {
    SolverConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
        std::string key = line.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t\r") + 1);
        std::istringstream value(line.substr(eq + 1));
        auto number = [&]() {
            double v = 0.0;
            if (!(value >> v) || !std::isfinite(v)) throw ParseError("invalid value for '" + key + "'", line_no);
            return v;
        };
        auto integer = [&]() {
            const double v = number();
            if (v != std::floor(v) || std::abs(v) > 1e9) throw ParseError("'" + key + "' must be an integer", line_no);
            return static_cast<int>(v);
        };
        if (key == "linear_tolerance") cfg.linear_tolerance = number();
        else if (key == "linear_max_iterations") cfg.linear_max_iterations = integer();
        else if (key == "outer_tolerance") cfg.outer_tolerance = number();
        else if (key == "max_outer_iterations") cfg.max_outer_iterations = integer();
        else if (key == "armijo") cfg.armijo = number();
        else if (key == "backtrack") cfg.backtrack = number();
        else if (key == "min_step") cfg.min_step = number();
        else if (key == "initial_center") cfg.initial_center = Vec3{number(), number(), number()};
        else if (key == "initial_radius") cfg.initial_radius = number();
        else if (key == "collapse_threshold") cfg.collapse_threshold = number();
        else if (key == "path_max") cfg.path_max = number();
        else if (key == "path_samples") cfg.path_samples = integer();
        else throw ParseError("unknown key '" + key + "'", line_no);
        std::string rest;
        if (value >> rest) throw ParseError("trailing text after value of '" + key + "'", line_no);
    }
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what(), 0);
    }
    return cfg;
}

SolverConfig load_solver_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return parse_solver_config(in);
}

LinearSolveResult linear_solve(const GrushinOperator& op, const GridFunction3D& rhs, const SolverConfig& cfg,
                               const GridFunction3D* initial) {
    const Domain& d = op.domain();
    const auto& dims = d.dims();
    if (rhs.size() != d.size()) throw DomainError("right-hand side does not match the domain");
    LinearSolveResult res;
    res.u = d.make_function();
    auto& x = res.u.values();
    std::vector<double> b = rhs.values();
    for (std::size_t i = 0; i < b.size(); ++i)
        if (!d.active(i)) b[i] = 0.0;
    const double bnorm = std::sqrt(dot(dims, b, b));
    if (bnorm == 0.0) return res;
    if (initial) {
        x = initial->values();
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!d.active(i)) x[i] = 0.0;
    }

    std::vector<double> r(b.size()), z(b.size()), p(b.size()), ap(b.size());
    op.apply(x, ap);
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = b[i] - ap[i];
    const auto& diag = op.diagonal();
    auto precondition = [&]() {
        for (std::size_t i = 0; i < r.size(); ++i) z[i] = diag[i] > 0.0 ? r[i] / diag[i] : 0.0;
    };
    precondition();
    p = z;
    double rz = dot(dims, r, z);
    double rnorm = std::sqrt(dot(dims, r, r));
    int it = 0;
    while (rnorm > cfg.linear_tolerance * bnorm) {
        if (it >= cfg.linear_max_iterations) {
            throw IterationError("conjugate gradients did not converge", it, rnorm / bnorm);
        }
        op.apply(p, ap);
        const double pap = dot(dims, p, ap);
        if (!(pap > 0.0)) throw IterationError("conjugate gradients lost positive definiteness", it, rnorm / bnorm);
        const double step = rz / pap;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        precondition();
        const double rz_new = dot(dims, r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
        rnorm = std::sqrt(dot(dims, r, r));
        ++it;
    }
    res.iterations = it;
    res.relative_residual = rnorm / bnorm;
    return res;
}

namespace {

double quadratic_form(const GrushinOperator& op, const GridFunction3D& u) {
    std::vector<double> au;
    op.apply(u.values(), au);
    return op.domain().cell_volume() * dot(op.domain().dims(), u.values(), au);
}

double primitive_sum(const Domain& d, const GridFunction3D& u, const Nonlinearity& nl) {
    const std::size_t m = slab_size(d.dims());
    return d.cell_volume() * chunked_sum(slabs(d.dims()), [&](std::size_t k) {
        double s = 0.0;
        for (std::size_t i = k * m; i < (k + 1) * m; ++i)
            if (d.active(i)) s += nl.F(d.node(i), u.values()[i]);
        return s;
    });
}

double weighted_power_sum(const Domain& d, const GridFunction3D& u, const AlphaParam& alpha, double q) {
    const std::size_t m = slab_size(d.dims());
    return d.cell_volume() * chunked_sum(slabs(d.dims()), [&](std::size_t k) {
        double s = 0.0;
        for (std::size_t i = k * m; i < (k + 1) * m; ++i)
            if (d.active(i)) s += alpha.volume_weight(d.node(i)) * std::pow(std::abs(u.values()[i]), q);
        return s;
    });
}

void require_match(const GrushinOperator& op, const GridFunction3D& u) {
    if (u.size() != op.domain().size()) throw DomainError("grid function does not match the domain");
}

GridFunction3D scaled(const GridFunction3D& u, double t) {
    GridFunction3D v = u;
    for (double& x : v.values()) x *= t;
    return v;
}

}  // namespace

double energy(const GrushinOperator& op, const GridFunction3D& u, const Nonlinearity& nl) {
    require_match(op, u);
    return 0.5 * quadratic_form(op, u) - primitive_sum(op.domain(), u, nl);
}

GridFunction3D energy_gradient(const GrushinOperator& op, const GridFunction3D& u, const Nonlinearity& nl) {
    require_match(op, u);
    const Domain& d = op.domain();
    GridFunction3D g = op.apply(u);
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d.active(i)) g.values()[i] -= nl.f(d.node(i), u.values()[i]);
    return g;
}

double directional_derivative(const GrushinOperator& op, const GridFunction3D& u, const GridFunction3D& v,
                              const Nonlinearity& nl) {
    require_match(op, v);
    const GridFunction3D g = energy_gradient(op, u, nl);
    return op.domain().cell_volume() * dot(op.domain().dims(), g.values(), v.values());
}

double weak_residual(const GrushinOperator& op, const GridFunction3D& u, const Nonlinearity& nl) {
    const GridFunction3D g = energy_gradient(op, u, nl);
    return std::sqrt(op.domain().cell_volume() * dot(op.domain().dims(), g.values(), g.values()));
}

double nehari_scale(const GrushinOperator& op, const GridFunction3D& u, const Nonlinearity& nl) {
    if (nl.kind != Nonlinearity::Kind::power || !(nl.exponent > 2.0)) {
        throw DomainError("nehari_scale needs a power nonlinearity with q > 2");
    }
    require_match(op, u);
    const double a = quadratic_form(op, u);
    const double b = weighted_power_sum(op.domain(), u, op.alpha(), nl.exponent);
    if (!(b > 0.0)) throw DomainError("nehari_scale: u vanishes where the weight is positive");
    return std::pow(a / b, 1.0 / (nl.exponent - 2.0));
}

SolutionReport solve_ground_state(const Domain& domain, const Nonlinearity& nl, const AlphaParam& alpha,
                                  const SolverConfig& cfg) {
    cfg.validate();
    if (nl.kind != Nonlinearity::Kind::power || !(nl.exponent > 2.0 && nl.exponent < 6.0)) {
        throw DomainError("solve_ground_state needs a power nonlinearity with 2 < q < 6");
    }
    if (nl.alpha != alpha.value()) throw DomainError("nonlinearity and operator use different alpha");
    const GrushinOperator op(domain, alpha);
    const double vol = domain.cell_volume();
    const auto& dims = domain.dims();

    // Positive bump around the configured centre.
    const Box& b = domain.bounds();
    const Vec3 e = b.extent();
    const double radius = cfg.initial_radius * 0.5 * std::min({e.x1, e.x2, e.y});
    const Vec3 center = cfg.initial_center.value_or(b.center() + Vec3{0.25 * e.x1, 0.25 * e.x2, 0.0});
    GridFunction3D u = domain.sample([&](const Vec3& p) {
        const double s = norm(p - center) / radius;
        return s < 1.0 ? (1.0 - s * s) * (1.0 - s * s) : 0.0;
    });
    if (u.is_zero()) throw DegeneracyError("initial bump misses every active node");

    auto weighted_norm = [&](const GridFunction3D& v) { return std::sqrt(weighted_power_sum(domain, v, alpha, 2.0)); };
    auto project = [&](const GridFunction3D& v) {
        if (weighted_norm(v) <= cfg.collapse_threshold) throw DegeneracyError("iterate collapsed to zero");
        return scaled(v, nehari_scale(op, v, nl));
    };

    SolutionReport rep;
    u = project(u);
    double phi = energy(op, u, nl);
    GridFunction3D d = domain.make_function();
    GridFunction3D d_prev, p;
    double gd_prev = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (;;) {
        const GridFunction3D g = energy_gradient(op, u, nl);
        rep.gradient_norm = std::sqrt(vol * dot(dims, g.values(), g.values()));
        if (rep.gradient_norm <= cfg.outer_tolerance) break;
        if (rep.iterations >= cfg.max_outer_iterations) {
            throw IterationError("ground-state descent did not converge", rep.iterations, rep.gradient_norm);
        }
        // Sobolev gradient: solve A d = Phi'(u).
        auto ls = linear_solve(op, g, cfg, &d);
        rep.linear_iterations += ls.iterations;
        d_prev = std::move(d);
        d = std::move(ls.u);
        const double gd = vol * dot(dims, g.values(), d.values());
        // Polak-Ribiere+ conjugation in the A inner product; restart when it stops being a descent.
        double slope = gd;
        if (rep.iterations == 0 || !(gd_prev > 0.0)) {
            p = d;
        } else {
            const double beta = std::max(0.0, (gd - vol * dot(dims, g.values(), d_prev.values())) / gd_prev);
            for (std::size_t i = 0; i < p.size(); ++i) p.values()[i] = d.values()[i] + beta * p.values()[i];
            slope = vol * dot(dims, g.values(), p.values());
            if (!(slope > 0.0)) {
                p = d;
                slope = gd;
            }
        }
        gd_prev = gd;
        // Step along p followed by Nehari rescaling. The step comes from a quadratic model of
        // the energy fitted at tau = 1, then Armijo backtracking from the better candidate.
        auto step = [&](double tau) {
            GridFunction3D trial = u;
            for (std::size_t i = 0; i < trial.size(); ++i) trial.values()[i] -= tau * p.values()[i];
            trial = project(trial);
            const double val = energy(op, trial, nl);
            return std::pair{std::move(trial), val};
        };
        auto accepted = [&](double tau, double val) {
            return val <= phi - cfg.armijo * tau * slope + 10.0 * eps * std::abs(phi);
        };
        double tau = 1.0;
        auto [trial, val] = step(tau);
        const double curvature = val - phi + slope;
        if (curvature > 0.0) {
            const double tq = std::clamp(slope / (2.0 * curvature), 0.1, 10.0);
            if (std::abs(tq - 1.0) > 0.05) {
                auto [trial_q, val_q] = step(tq);
                if (val_q < val || !accepted(tau, val)) {
                    tau = tq;
                    trial = std::move(trial_q);
                    val = val_q;
                }
            }
        }
        while (!accepted(tau, val)) {
            tau *= cfg.backtrack;
            if (tau < cfg.min_step) {
                throw IterationError("line search failed to decrease the energy", rep.iterations, rep.gradient_norm);
            }
            std::tie(trial, val) = step(tau);
        }
        u = std::move(trial);
        phi = val;
        ++rep.iterations;
    }
    if (weighted_norm(u) <= cfg.collapse_threshold) throw DegeneracyError("solution collapsed to zero");
    rep.energy = phi;
    rep.nehari_residual = directional_derivative(op, u, u, nl);
    double beta = 0.0;
    for (int s = 0; s < cfg.path_samples; ++s) {
        const double t = cfg.path_max * s / (cfg.path_samples - 1);
        beta = std::max(beta, energy(op, scaled(u, t), nl));
    }
    rep.beta = beta;
    rep.u = std::move(u);
    return rep;
}

PoincareReport poincare_constant(const Domain& domain, const AlphaParam& alpha, const SolverConfig& cfg) {
    const GrushinOperator op(domain, alpha);
    const auto& dims = domain.dims();
    const Vec3 c = domain.bounds().center();
    const Vec3 e = domain.bounds().extent();
    GridFunction3D v = domain.sample([&](const Vec3& p) {
        double s = 1.0;
        for (int a = 0; a < 3; ++a) s *= std::cos(3.0 * (p[a] - c[a]) / e[a]);
        return s;
    });
    SolverConfig inner = cfg;
    inner.linear_tolerance = std::min(cfg.linear_tolerance, 1e-12);
    PoincareReport rep;
    double lambda = 0.0;
    GridFunction3D w = domain.make_function();
    for (rep.iterations = 1; rep.iterations <= 500; ++rep.iterations) {
        const double vn = std::sqrt(dot(dims, v.values(), v.values()));
        for (double& x : v.values()) x /= vn;
        std::vector<double> av;
        op.apply(v.values(), av);
        const double next = dot(dims, v.values(), av);
        if (rep.iterations > 1 && std::abs(next - lambda) <= 1e-12 * next) {
            lambda = next;
            break;
        }
        lambda = next;
        // Warm start with the expected scaling of the next iterate.
        w = scaled(v, 1.0 / lambda);
        w = linear_solve(op, v, inner, &w).u;
        v = std::move(w);
        w = domain.make_function();
    }
    if (rep.iterations > 500) throw IterationError("inverse power iteration did not converge", 500, lambda);
    if (!(lambda > 0.0)) throw ComputationError("nonpositive smallest eigenvalue");
    rep.lambda1 = lambda;
    rep.constant = 1.0 / std::sqrt(lambda);
    return rep;
}

}  // namespace grushin

namespace grushin {

EmbeddingReport embedding_check(const Domain& domain, double q, const AlphaParam& alpha,
                                const std::vector<GridFunction3D>& corpus, double slack) {
    if (!(q >= 1.0 && q <= 6.0)) throw DomainError("embedding_check needs 1 <= q <= 6");
    if (!(slack >= 0.0)) throw DomainError("slack must be nonnegative");
    const GrushinOperator op(domain, alpha);
    EmbeddingReport rep;
    rep.q = q;
    rep.slack = slack;
    // Hoelder from L^6 down to L^q on a set of finite weighted measure.
    rep.constant = std::pow(domain.weighted_measure(alpha), 1.0 / q - 1.0 / 6.0) / sobolev_lower_bound(alpha);
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < corpus.size(); ++c) {
        const GridFunction3D& u = corpus[c];
        require_match(op, u);
        EmbeddingEntry e;
        e.lq_norm = std::pow(weighted_power_sum(domain, u, alpha, q), 1.0 / q);
        e.bound = rep.constant * std::sqrt(quadratic_form(op, u));
        e.margin = e.bound > 0.0 ? 1.0 - e.lq_norm / e.bound : (e.lq_norm > 0.0 ? -1.0 : 1.0);
        e.violated = e.lq_norm > e.bound * (1.0 + slack);
        if (e.violated) ++rep.violations;
        if (e.margin < rep.min_margin) {
            rep.min_margin = e.margin;
            rep.tightest = c;
        }
        rep.entries.push_back(e);
    }
    return rep;
}

std::vector<GridFunction3D> random_bump_corpus(const Domain& domain, int count, std::uint64_t seed) {
    if (count < 0) throw DomainError("corpus size must be nonnegative");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Box& b = domain.bounds();
    const Vec3 e = b.extent();
    const Vec3 h = domain.spacing();
    std::vector<GridFunction3D> out;
    out.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(out.size()) < count) {
        struct Bump { Vec3 c, r; double amp; };
        std::vector<Bump> bumps;
        const int k = 1 + static_cast<int>(unit(rng) * 3.0);
        for (int m = 0; m < k; ++m) {
            Bump bp;
            for (int a = 0; a < 3; ++a) {
                bp.r[a] = e[a] * (0.08 + 0.3 * unit(rng));
                const double lo = b.lo[a] + bp.r[a] + h[a], hi = b.hi[a] - bp.r[a] - h[a];
                bp.c[a] = lo + (hi - lo) * unit(rng);
            }
            bp.amp = (unit(rng) < 0.8 ? 1.0 : -1.0) * (0.2 + unit(rng));
            bumps.push_back(bp);
        }
        GridFunction3D u = domain.sample([&](const Vec3& p) {
            double v = 0.0;
            for (const Bump& bp : bumps) {
                double s = 0.0;
                for (int a = 0; a < 3; ++a) s += std::pow((p[a] - bp.c[a]) / bp.r[a], 2);
                if (s < 1.0) v += bp.amp * std::pow(1.0 - s, 3);
            }
            return v;
        });
        // Reject draws whose support leaves the active set of a masked domain.
        bool inside = true;
        if (!domain.is_box()) {
            for (std::size_t i = 0; i < domain.size() && inside; ++i) {
                if (domain.active(i)) continue;
                const Vec3 p = domain.node(i);
                for (const Bump& bp : bumps) {
                    double s = 0.0;
                    for (int a = 0; a < 3; ++a) s += std::pow((p[a] - bp.c[a]) / bp.r[a], 2);
                    if (s < 1.0) inside = false;
                }
            }
        }
        if (inside && !u.is_zero()) out.push_back(std::move(u));
    }
    return out;
}

}  // namespace grushin

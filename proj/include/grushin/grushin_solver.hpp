#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "grushin/alpha.hpp"
#include "grushin/grid_function.hpp"
#include "grushin/nonlinearity.hpp"

namespace grushin {

// Boundary face of a discrete domain: between an active node and a Dirichlet (zero) neighbour.
struct BoundaryFace {
    std::size_t cell;  // active node next to the face
    Vec3 center;       // where the zero value sits: on the wall for box faces, else the inactive node
    Vec3 normal;       // outward unit normal (an axis direction)
    double area;
};

// Uniform node grid inside a box with homogeneous Dirichlet data. Nodes sit at
// lo + (i+1) h with h = extent / (dims+1), so ghost zeros lie exactly on the box faces.
// A mask may switch nodes off; switched-off nodes act as further Dirichlet zeros.
class Domain {
public:
    // Full box. Throws DomainError unless the origin is strictly inside, dims are positive
    // and the x1, x2 dims are even.
    static Domain box(const Box& box, std::array<int, 3> dims);
    // Nodes with inside(p) true. Additionally requires the node nearest the origin to be
    // active and the active set to be 6-connected.
    static Domain masked(const Box& box, std::array<int, 3> dims, const std::function<bool(const Vec3&)>& inside);

    const Box& bounds() const { return box_; }
    const std::array<int, 3>& dims() const { return dims_; }
    Vec3 spacing() const { return h_; }
    double cell_volume() const { return h_.x1 * h_.x2 * h_.y; }
    std::size_t size() const { return mask_.size(); }
    bool is_box() const { return is_box_; }

    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(dims_[0]) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_[1]) * k);
    }
    Vec3 node(int i, int j, int k) const {
        return {box_.lo.x1 + (i + 1) * h_.x1, box_.lo.x2 + (j + 1) * h_.x2, box_.lo.y + (k + 1) * h_.y};
    }
    Vec3 node(std::size_t idx) const;
    const std::vector<std::uint8_t>& mask() const { return mask_; }
    bool active(std::size_t idx) const { return mask_[idx] != 0; }

    // Cell-centred grid whose cell centres are the nodes (the box shrunk by h/2), zero and masked.
    GridFunction3D make_function() const;
    GridFunction3D sample(const std::function<double(const Vec3&)>& f) const;

    const std::vector<BoundaryFace>& boundary_faces() const { return faces_; }

    // int_Omega |x|^{2a} over active nodes.
    double weighted_measure(const AlphaParam& alpha) const;

private:
    Box box_{};
    std::array<int, 3> dims_{};
    Vec3 h_{};
    std::vector<std::uint8_t> mask_;
    std::vector<BoundaryFace> faces_;
    bool is_box_ = true;

    void build_faces();
};

// Matrix-free 7-point discretization of -Delta_x - |x|^{2a} d^2/dy^2 with ghost-zero Dirichlet data.
class GrushinOperator {
public:
    GrushinOperator(const Domain& domain, const AlphaParam& alpha);

    const Domain& domain() const { return *domain_; }
    const AlphaParam& alpha() const { return alpha_; }
    // out = A u on active nodes, 0 elsewhere.
    void apply(const std::vector<double>& u, std::vector<double>& out) const;
    GridFunction3D apply(const GridFunction3D& u) const;
    const std::vector<double>& diagonal() const { return diag_; }

private:
    const Domain* domain_;
    AlphaParam alpha_;
    std::vector<double> weight_;  // |x|^{2a} at the nodes
    std::vector<double> diag_;
};

GrushinOperator assemble_grushin(const Domain& domain, const AlphaParam& alpha);

struct SolverConfig {
    double linear_tolerance = 1e-10;  // relative residual of each CG solve
    int linear_max_iterations = 5000;
    double outer_tolerance = 1e-6;    // on the weak residual
    int max_outer_iterations = 400;
    double armijo = 1e-4;
    double backtrack = 0.5;
    double min_step = 1e-6;
    // Centre of the initial bump. Default: box centre shifted by a quarter of the x1 and x2
    // extents, off the axis where the weight vanishes.
    std::optional<Vec3> initial_center;
    double initial_radius = 0.5;      // as a fraction of the smallest half-extent
    double collapse_threshold = 1e-8; // weighted L^2 norm below which u counts as zero
    double path_max = 3.0;            // beta estimate: max of Phi(t u) over t in [0, path_max]
    int path_samples = 301;

    void validate() const;
};

// key = value lines, '#' comments. Keys match the field names; initial_center takes three numbers.
// Throws ParseError with the line number on unknown keys or bad values.
SolverConfig parse_solver_config(std::istream& in);
SolverConfig load_solver_config(const std::string& path);

struct LinearSolveResult {
    GridFunction3D u;
    int iterations = 0;
    double relative_residual = 0.0;
};

// Jacobi-preconditioned CG for A u = rhs. Throws IterationError when the tolerance is not reached.
LinearSolveResult linear_solve(const GrushinOperator& op, const GridFunction3D& rhs, const SolverConfig& cfg = {},
                               const GridFunction3D* initial = nullptr);

// Phi(u) = 1/2 h^3 u^T A u - h^3 sum F(node, u).
double energy(const GrushinOperator& op, const GridFunction3D& u, const Nonlinearity& nl);
// A u - f(., u): the L^2 representative of Phi'(u).
GridFunction3D energy_gradient(const GrushinOperator& op, const GridFunction3D& u, const Nonlinearity& nl);
// <Phi'(u), v> = h^3 sum (A u - f(u)) v.
double directional_derivative(const GrushinOperator& op, const GridFunction3D& u, const GridFunction3D& v,
                              const Nonlinearity& nl);
// (h^3 sum (A u - f(u))^2)^{1/2}.
double weak_residual(const GrushinOperator& op, const GridFunction3D& u, const Nonlinearity& nl);

// t* = (a/b)^{1/(q-2)} with a = h^3 u^T A u, b = h^3 sum |x|^{2a}|u|^q, so that <Phi'(t* u), t* u> = 0.
// Throws DomainError for non-power kinds, q <= 2 or b = 0.
double nehari_scale(const GrushinOperator& op, const GridFunction3D& u, const Nonlinearity& nl);

struct SolutionReport {
    GridFunction3D u;
    double energy = 0.0;
    double gradient_norm = 0.0;    // weak residual
    double nehari_residual = 0.0;  // <Phi'(u), u>
    int iterations = 0;
    int linear_iterations = 0;
    std::optional<double> beta;    // max of Phi along t u
};

// Nehari-projected Sobolev-gradient descent for -L u = f(u), power kind with 2 < q < 6.
// Throws DegeneracyError on collapse to zero and IterationError on non-convergence.
SolutionReport solve_ground_state(const Domain& domain, const Nonlinearity& nl, const AlphaParam& alpha,
                                  const SolverConfig& cfg = {});

struct PoincareReport {
    double lambda1 = 0.0;   // smallest eigenvalue of the discrete operator
    double constant = 0.0;  // lambda1^{-1/2}: ||u||_2 <= constant ||grad_G u||
    int iterations = 0;
};

PoincareReport poincare_constant(const Domain& domain, const AlphaParam& alpha, const SolverConfig& cfg = {});

struct EmbeddingEntry {
    double lq_norm = 0.0;  // ||u||_{L^q_w}
    double bound = 0.0;    // C_q ||grad_G u||
    double margin = 0.0;   // 1 - lq_norm / bound
    bool violated = false;
};

struct EmbeddingReport {
    double q = 0.0;
    double constant = 0.0;  // C_q = |Omega|_w^{1/q - 1/6} / L
    double slack = 0.0;
    std::vector<EmbeddingEntry> entries;
    int violations = 0;
    double min_margin = 0.0;
    std::size_t tightest = 0;  // index of the entry with the smallest margin
};

// ||u||_{L^q_w} <= C_q ||grad_G u|| (1 + slack) for each corpus function on the domain grid.
// Throws DomainError unless 1 <= q <= 6.
EmbeddingReport embedding_check(const Domain& domain, double q, const AlphaParam& alpha,
                                const std::vector<GridFunction3D>& corpus, double slack = 0.02);

// Sums of one to three smooth compactly supported bumps with random centres, radii,
// anisotropy and signs, all supported inside the active set. Deterministic for a seed.
std::vector<GridFunction3D> random_bump_corpus(const Domain& domain, int count, std::uint64_t seed);

}  // namespace grushin

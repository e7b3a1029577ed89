#include "grushin/triangulation.hpp"

#include <array>
#include <cstddef>

namespace grushin {

namespace {

// Six tetrahedra around the main diagonal 0-7 (corner bit index i + 2j + 4k).
constexpr int kTets[6][4] = {{0, 1, 3, 7}, {0, 3, 2, 7}, {0, 2, 6, 7},
                             {0, 6, 4, 7}, {0, 4, 5, 7}, {0, 5, 1, 7}};

Vec3 crossing(const Vec3& a, const Vec3& b, double va, double vb) {
    const double t = va / (va - vb);
    return a + (b - a) * t;
}

void emit_tet(const std::array<Vec3, 4>& p, const std::array<double, 4>& v, std::vector<Triangle>& out) {
    std::array<int, 4> in{}, outside{};
    int n_in = 0, n_out = 0;
    for (int i = 0; i < 4; ++i) {
        if (v[i] < 0.0) in[n_in++] = i;
        else outside[n_out++] = i;
    }
    if (n_in == 0 || n_in == 4) return;
    if (n_in == 1 || n_in == 3) {
        const int apex = n_in == 1 ? in[0] : outside[0];
        const auto& others = n_in == 1 ? outside : in;
        std::array<Vec3, 3> q;
        for (int k = 0; k < 3; ++k) q[k] = crossing(p[apex], p[others[k]], v[apex], v[others[k]]);
        out.push_back({q[0], q[1], q[2]});
        return;
    }
    // Two inside, two outside: the cut is a quadrilateral.
    const Vec3 q0 = crossing(p[in[0]], p[outside[0]], v[in[0]], v[outside[0]]);
    const Vec3 q1 = crossing(p[in[0]], p[outside[1]], v[in[0]], v[outside[1]]);
    const Vec3 q2 = crossing(p[in[1]], p[outside[1]], v[in[1]], v[outside[1]]);
    const Vec3 q3 = crossing(p[in[1]], p[outside[0]], v[in[1]], v[outside[0]]);
    out.push_back({q0, q1, q2});
    out.push_back({q0, q2, q3});
}

}  // namespace

std::vector<Triangle> triangulate_level_set(const ScalarField& level, const Box& bbox, int resolution) {
    const int n = resolution;
    const Vec3 h = bbox.extent() / static_cast<double>(n);
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    auto lattice_point = [&](int i, int j, int k) {
        return Vec3{bbox.lo.x1 + i * h.x1, bbox.lo.x2 + j * h.x2, bbox.lo.y + k * h.y};
    };
    std::vector<double> values(m * m * m);
    for (int k = 0; k <= n; ++k)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) values[i + m * (j + m * k)] = level(lattice_point(i, j, k));

    std::vector<Triangle> tris;
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                std::array<Vec3, 8> cp;
                std::array<double, 8> cv;
                bool any_in = false, any_out = false;
                for (int c = 0; c < 8; ++c) {
                    const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
                    cp[c] = lattice_point(i + di, j + dj, k + dk);
                    cv[c] = values[(i + di) + m * ((j + dj) + m * (k + dk))];
                    (cv[c] < 0.0 ? any_in : any_out) = true;
                }
                if (!(any_in && any_out)) continue;
                for (const auto& tet : kTets) {
                    emit_tet({cp[tet[0]], cp[tet[1]], cp[tet[2]], cp[tet[3]]},
                             {cv[tet[0]], cv[tet[1]], cv[tet[2]], cv[tet[3]]}, tris);
                }
            }
        }
    }
    return tris;
}

Vec3 level_normal(const ScalarField& level, const Vec3& p, double h) {
    Vec3 g;
    for (int d = 0; d < 3; ++d) {
        Vec3 e;
        e[d] = h;
        g[d] = (level(p + e) - level(p - e)) / (2.0 * h);
    }
    const double len = norm(g);
    return len > 0.0 ? g / len : Vec3{};
}

}  // namespace grushin

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "grushin/vec3.hpp"

namespace grushin {

// Scalar field on a uniform cell-centred grid over bbox. Index order: x1 fastest, then x2, then y.
// Masked-out cells carry the value zero (compact support convention).
class GridFunction3D {
public:
    GridFunction3D() = default;
    GridFunction3D(const Box& bbox, std::array<int, 3> dims);

    // Samples f at every cell centre.
    static GridFunction3D sample(const Box& bbox, std::array<int, 3> dims, const std::function<double(const Vec3&)>& f);

    const Box& bbox() const { return bbox_; }
    const std::array<int, 3>& dims() const { return dims_; }
    std::size_t size() const { return values_.size(); }
    Vec3 spacing() const { return spacing_; }
    double cell_volume() const { return spacing_.x1 * spacing_.x2 * spacing_.y; }

    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(dims_[0]) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_[1]) * k);
    }
    Vec3 cell_center(int i, int j, int k) const {
        return {bbox_.lo.x1 + (i + 0.5) * spacing_.x1, bbox_.lo.x2 + (j + 0.5) * spacing_.x2,
                bbox_.lo.y + (k + 0.5) * spacing_.y};
    }
    Vec3 cell_center(std::size_t idx) const;

    double& operator()(int i, int j, int k) { return values_[index(i, j, k)]; }
    double operator()(int i, int j, int k) const { return values_[index(i, j, k)]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    // 1 for active cells. Setting the mask zeroes the inactive values.
    const std::vector<std::uint8_t>& mask() const { return mask_; }
    void set_mask(std::vector<std::uint8_t> mask);
    bool active(std::size_t idx) const { return mask_[idx] != 0; }

    double max_value() const;
    double min_value() const;
    bool all_finite() const;
    bool is_zero() const;

private:
    Box bbox_{};
    std::array<int, 3> dims_{0, 0, 0};
    Vec3 spacing_{};
    std::vector<double> values_;
    std::vector<std::uint8_t> mask_;
};

// Text format:
//   grushin-grid v1
//   n1 n2 n3
//   x1_min x2_min y_min x1_max x2_max y_max
//   values, one x1-row per line, 17 significant digits
void write_grid(std::ostream& out, const GridFunction3D& u);
// Throws ParseError (with line number) on malformed input or non-finite values.
GridFunction3D read_grid(std::istream& in);
void save_grid(const std::string& path, const GridFunction3D& u);
GridFunction3D load_grid(const std::string& path);

// Shortest round-trip text of v with 17 significant digits.
std::string format_double(double v);

}  // namespace grushin

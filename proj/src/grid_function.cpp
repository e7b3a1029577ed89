#include "grushin/grid_function.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "grushin/errors.hpp"

namespace grushin {

GridFunction3D::GridFunction3D(const Box& bbox, std::array<int, 3> dims) : bbox_(bbox), dims_(dims) {
    if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1) throw DomainError("grid dims must be positive");
    if (bbox.degenerate()) throw DomainError("grid bbox is degenerate");
    const Vec3 e = bbox.extent();
    spacing_ = {e.x1 / dims[0], e.x2 / dims[1], e.y / dims[2]};
    const std::size_t n = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    values_.assign(n, 0.0);
    mask_.assign(n, 1);
}

GridFunction3D GridFunction3D::sample(const Box& bbox, std::array<int, 3> dims,
                                      const std::function<double(const Vec3&)>& f) {
    GridFunction3D u(bbox, dims);
    for (int k = 0; k < dims[2]; ++k)
        for (int j = 0; j < dims[1]; ++j)
            for (int i = 0; i < dims[0]; ++i) u(i, j, k) = f(u.cell_center(i, j, k));
    return u;
}

Vec3 GridFunction3D::cell_center(std::size_t idx) const {
    const auto n1 = static_cast<std::size_t>(dims_[0]);
    const auto n2 = static_cast<std::size_t>(dims_[1]);
    const int i = static_cast<int>(idx % n1);
    const int j = static_cast<int>((idx / n1) % n2);
    const int k = static_cast<int>(idx / (n1 * n2));
    return cell_center(i, j, k);
}

void GridFunction3D::set_mask(std::vector<std::uint8_t> mask) {
    if (mask.size() != values_.size()) throw DomainError("mask size does not match grid");
    mask_ = std::move(mask);
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!mask_[i]) values_[i] = 0.0;
}

double GridFunction3D::max_value() const {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double GridFunction3D::min_value() const {
    return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

bool GridFunction3D::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool GridFunction3D::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_grid(std::ostream& out, const GridFunction3D& u) {
    const auto& d = u.dims();
    const Box& b = u.bbox();
    out << "grushin-grid v1\n" << d[0] << ' ' << d[1] << ' ' << d[2] << '\n';
    out << format_double(b.lo.x1) << ' ' << format_double(b.lo.x2) << ' ' << format_double(b.lo.y) << ' '
        << format_double(b.hi.x1) << ' ' << format_double(b.hi.x2) << ' ' << format_double(b.hi.y) << '\n';
    const auto& v = u.values();
    for (std::size_t row = 0; row < v.size(); row += d[0]) {
        for (int i = 0; i < d[0]; ++i) {
            if (i) out << ' ';
            out << format_double(v[row + i]);
        }
        out << '\n';
    }
}

namespace {

// Whitespace tokenizer that remembers the line of each token.
class TokenReader {
public:
    explicit TokenReader(std::istream& in) : in_(in) {}

    bool next_line(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++line_no_;
        return true;
    }
    int line() const { return line_no_; }

    // Next token from the remaining stream, spanning lines.
    bool next_token(std::string& tok) {
        while (!(current_ >> tok)) {
            std::string line;
            if (!next_line(line)) return false;
            current_.clear();
            current_.str(line);
        }
        return true;
    }

private:
    std::istream& in_;
    std::istringstream current_;
    int line_no_ = 0;
};

double parse_double(const std::string& tok, int line) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) throw ParseError("invalid number '" + tok + "'", line);
    if (!std::isfinite(v)) throw ParseError("non-finite value '" + tok + "'", line);
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::istringstream s(line);
    std::vector<std::string> out;
    std::string t;
    while (s >> t) out.push_back(t);
    return out;
}

}  // namespace

GridFunction3D read_grid(std::istream& in) {
    TokenReader reader(in);
    std::string line;
    if (!reader.next_line(line)) throw ParseError("empty grid file", 1);
    if (split(line) != std::vector<std::string>{"grushin-grid", "v1"}) {
        throw ParseError("expected header 'grushin-grid v1'", reader.line());
    }
    if (!reader.next_line(line)) throw ParseError("missing dims line", reader.line() + 1);
    const auto dtok = split(line);
    if (dtok.size() != 3) throw ParseError("expected three grid dimensions", reader.line());
    std::array<int, 3> dims{};
    for (int a = 0; a < 3; ++a) {
        const auto res = std::from_chars(dtok[a].data(), dtok[a].data() + dtok[a].size(), dims[a]);
        if (res.ec != std::errc() || res.ptr != dtok[a].data() + dtok[a].size() || dims[a] < 1) {
            throw ParseError("invalid grid dimension '" + dtok[a] + "'", reader.line());
        }
    }
    if (!reader.next_line(line)) throw ParseError("missing bbox line", reader.line() + 1);
    const auto btok = split(line);
    if (btok.size() != 6) throw ParseError("expected six bbox coordinates", reader.line());
    double b[6];
    for (int a = 0; a < 6; ++a) b[a] = parse_double(btok[a], reader.line());
    const Box bbox{{b[0], b[1], b[2]}, {b[3], b[4], b[5]}};
    if (bbox.degenerate()) throw ParseError("bbox has non-positive extent", reader.line());

    GridFunction3D u(bbox, dims);
    auto& v = u.values();
    std::string tok;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!reader.next_token(tok)) {
            throw ParseError("expected " + std::to_string(v.size()) + " values, found " + std::to_string(i),
                             reader.line());
        }
        v[i] = parse_double(tok, reader.line());
    }
    if (reader.next_token(tok)) throw ParseError("trailing data after grid values", reader.line());
    return u;
}

void save_grid(const std::string& path, const GridFunction3D& u) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_grid(out, u);
    if (!out) throw Error("failed writing '" + path + "'");
}

GridFunction3D load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return read_grid(in);
}

}  // namespace grushin

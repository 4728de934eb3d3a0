#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kpplab/errors.hpp"
#include "kpplab/vec.hpp"

namespace kpplab {

// Rectangular lattice of cell centers: cell (i0,..) sits at origin + i*h.
// Row-major storage, last axis contiguous.
struct GridSpec {
    int dim = 0;
    std::array<int, kMaxDim> dims{1, 1, 1};
    std::array<double, kMaxDim> h{1.0, 1.0, 1.0};
    std::array<double, kMaxDim> origin{0.0, 0.0, 0.0};

    // Snaps the origin onto the global lattice {k*h}: cells of any two grids
    // with the same spacing then land on bitwise-identical coordinates, so
    // rasterized sets agree cell for cell across domain enlargements.
    static GridSpec from_box(const Box& b, double spacing) {
        GridSpec g;
        g.dim = b.dim();
        for (int a = 0; a < g.dim; ++a) {
            g.h[a] = spacing;
            long long i0 = std::llround(b.lo[a] / spacing);
            g.origin[a] = static_cast<double>(i0) * spacing;
            g.dims[a] = static_cast<int>(std::llround((b.hi[a] - b.lo[a]) / spacing)) + 1;
            if (g.dims[a] < 1) throw ConfigError("degenerate grid axis");
        }
        return g;
    }

    size_t size() const {
        size_t n = 1;
        for (int a = 0; a < dim; ++a) n *= static_cast<size_t>(dims[a]);
        return n;
    }

    size_t index(const std::array<int, kMaxDim>& i) const {
        size_t idx = 0;
        for (int a = 0; a < dim; ++a) idx = idx * dims[a] + i[a];
        return idx;
    }

    std::array<int, kMaxDim> unindex(size_t idx) const {
        std::array<int, kMaxDim> i{0, 0, 0};
        for (int a = dim - 1; a >= 0; --a) {
            i[a] = static_cast<int>(idx % dims[a]);
            idx /= dims[a];
        }
        return i;
    }

    // Lattice-aligned grids compute coordinates as (integer index) * h:
    // exact negation makes symmetric boxes bitwise mirror-even, and the same
    // physical cell gets the same bits in every grid that shares h. Grids
    // with an off-lattice origin (e.g. loaded from a container file) fall
    // back to an end-to-end affine combination, which is still
    // mirror-symmetric.
    VecN coord(const std::array<int, kMaxDim>& i) const {
        VecN x(dim);
        for (int a = 0; a < dim; ++a) {
            double ratio = origin[a] / h[a];
            long long i0 = std::llround(ratio);
            if (std::abs(ratio - static_cast<double>(i0)) < 1e-9) {
                x[a] = static_cast<double>(i0 + i[a]) * h[a];
                continue;
            }
            int n1 = dims[a] - 1;
            if (n1 == 0) {
                x[a] = origin[a];
            } else {
                double hi_end = origin[a] + n1 * h[a];
                x[a] = (origin[a] * (n1 - i[a]) + hi_end * i[a]) / n1;
            }
        }
        return x;
    }

    // Nearest cell multi-index to x, clamped into the grid.
    std::array<int, kMaxDim> nearest_cell(const VecN& x) const {
        std::array<int, kMaxDim> i{0, 0, 0};
        for (int a = 0; a < dim; ++a) {
            int k = static_cast<int>(std::llround((x[a] - origin[a]) / h[a]));
            i[a] = std::max(0, std::min(dims[a] - 1, k));
        }
        return i;
    }

    bool uniform_spacing() const {
        for (int a = 1; a < dim; ++a)
            if (h[a] != h[0]) return false;
        return true;
    }

    bool same_layout(const GridSpec& o) const {
        if (dim != o.dim) return false;
        for (int a = 0; a < dim; ++a)
            if (dims[a] != o.dims[a] || h[a] != o.h[a] || origin[a] != o.origin[a]) return false;
        return true;
    }

    Box box() const {
        Box b{VecN(dim), VecN(dim)};
        for (int a = 0; a < dim; ++a) {
            b.lo[a] = origin[a];
            b.hi[a] = origin[a] + (dims[a] - 1) * h[a];
        }
        return b;
    }
};

struct GridMask {
    GridSpec spec;
    std::vector<uint8_t> bits;

    explicit GridMask(GridSpec s) : spec(s), bits(s.size(), 0) {}
    GridMask() = default;

    bool get(size_t idx) const { return bits[idx] != 0; }
    void set(size_t idx, bool v) { bits[idx] = v ? 1 : 0; }
    size_t count() const {
        size_t n = 0;
        for (auto b : bits) n += b;
        return n;
    }
};

// A time-stamped scalar field u(t,.) on the lattice; solver state / snapshot.
struct GridField {
    GridSpec spec;
    double time = 0.0;
    std::vector<double> values;

    explicit GridField(GridSpec s, double t = 0.0) : spec(s), time(t), values(s.size(), 0.0) {}
    GridField() = default;

    double& at(const std::array<int, kMaxDim>& i) { return values[spec.index(i)]; }
    double at(const std::array<int, kMaxDim>& i) const { return values[spec.index(i)]; }

    // Multilinear interpolation; clamps to the grid.
    double interp(const VecN& x) const {
        std::array<int, kMaxDim> base{0, 0, 0};
        std::array<double, kMaxDim> frac{0.0, 0.0, 0.0};
        for (int a = 0; a < spec.dim; ++a) {
            double s = (x[a] - spec.origin[a]) / spec.h[a];
            int i = static_cast<int>(std::floor(s));
            i = std::max(0, std::min(spec.dims[a] - 2 >= 0 ? spec.dims[a] - 2 : 0, i));
            base[a] = i;
            frac[a] = std::max(0.0, std::min(1.0, s - i));
        }
        double acc = 0.0;
        int corners = 1 << spec.dim;
        for (int m = 0; m < corners; ++m) {
            std::array<int, kMaxDim> idx = base;
            double w = 1.0;
            for (int a = 0; a < spec.dim; ++a) {
                if (m & (1 << a)) {
                    idx[a] = std::min(idx[a] + 1, spec.dims[a] - 1);
                    w *= frac[a];
                } else {
                    w *= 1.0 - frac[a];
                }
            }
            acc += w * values[spec.index(idx)];
        }
        return acc;
    }
};

}  // namespace kpplab

#include "kpplab/edt.hpp"

#include <cmath>

namespace kpplab {

namespace {

// 1D squared-distance transform along one line (Felzenszwalb-Huttenlocher).
// f holds input squared values (kEdtInf where unset); feat holds the source
// index carried along with each value. Results overwrite f/feat.
void transform_line(std::vector<int64_t>& f, std::vector<int64_t>& feat, int n,
                    std::vector<int>& v, std::vector<double>& z,
                    std::vector<int64_t>& out, std::vector<int64_t>& outfeat) {
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        if (f[q] >= kEdtInf) continue;
        if (f[v[0]] >= kEdtInf) {
            v[0] = q;
            continue;
        }
        double s;
        for (;;) {
            int p = v[k];
            s = (static_cast<double>(f[q] - f[p]) + static_cast<double>(q) * q -
                 static_cast<double>(p) * p) /
                (2.0 * (q - p));
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }

    if (f[v[0]] >= kEdtInf) {
        for (int q = 0; q < n; ++q) {
            out[q] = kEdtInf;
            outfeat[q] = -1;
        }
        return;
    }

    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        int64_t dq = q - v[k];
        out[q] = dq * dq + f[v[k]];
        outfeat[q] = feat[v[k]];
    }
}

}  // namespace

EdtResult exact_edt(const GridMask& mask, bool of_complement) {
    const GridSpec& g = mask.spec;
    if (!g.uniform_spacing()) throw ConfigError("exact_edt requires uniform spacing");

    const size_t total = g.size();
    EdtResult r;
    r.dist_sq_cells.assign(total, kEdtInf);
    r.feature.assign(total, -1);

    for (size_t i = 0; i < total; ++i) {
        bool marked = mask.get(i);
        if (of_complement) marked = !marked;
        if (marked) {
            r.dist_sq_cells[i] = 0;
            r.feature[i] = static_cast<int64_t>(i);
        }
    }

    int nmax = 0;
    for (int a = 0; a < g.dim; ++a) nmax = std::max(nmax, g.dims[a]);
    std::vector<int64_t> line(nmax), lfeat(nmax), out(nmax), outfeat(nmax);
    std::vector<int> v(nmax);
    std::vector<double> z(nmax + 1);

    // Sweep each axis in turn; after axis a the array holds squared distances
    // restricted to displacements along the processed axes.
    for (int a = 0; a < g.dim; ++a) {
        const int n = g.dims[a];
        // stride of axis a in the linear layout
        size_t stride = 1;
        for (int b = g.dim - 1; b > a; --b) stride *= static_cast<size_t>(g.dims[b]);
        const size_t lines = total / n;
        for (size_t l = 0; l < lines; ++l) {
            // Decompose l into (outer, inner) so the line start is
            // outer*stride*n + inner.
            size_t inner = l % stride;
            size_t outer = l / stride;
            size_t base = outer * stride * n + inner;
            for (int q = 0; q < n; ++q) {
                line[q] = r.dist_sq_cells[base + q * stride];
                lfeat[q] = r.feature[base + q * stride];
            }
            transform_line(line, lfeat, n, v, z, out, outfeat);
            for (int q = 0; q < n; ++q) {
                r.dist_sq_cells[base + q * stride] = out[q];
                r.feature[base + q * stride] = outfeat[q];
            }
        }
    }
    return r;
}

}  // namespace kpplab

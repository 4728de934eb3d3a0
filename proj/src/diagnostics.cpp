#include "kpplab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace kpplab {

namespace {

// Largest-eigenvalue eigenvector of a symmetric PSD 2x2/3x3 (power
// iteration with deterministic start; adequate for structure tensors).
VecN principal_direction(const double T[3][3], int dim) {
    VecN v = VecN::of_dim(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    for (int it = 0; it < 200; ++it) {
        VecN w(dim);
        for (int i = 0; i < dim; ++i) {
            double s = 0.0;
            for (int j = 0; j < dim; ++j) s += T[i][j] * v[j];
            w[i] = s;
        }
        double n = w.norm();
        if (n < 1e-300) return v;
        w = w * (1.0 / n);
        double delta = std::min(distance(w, v), distance(w * -1.0, v));
        v = w;
        if (delta < 1e-14 && it > 8) break;
    }
    return v;
}

struct BallCells {
    std::vector<size_t> idx;
    std::vector<VecN> pos;
};

BallCells cells_in_ball(const GridField& u, const VecN& x, double radius, int margin) {
    const GridSpec& g = u.spec;
    BallCells out;
    std::array<int, kMaxDim> lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) {
        lo[a] = std::max(margin,
                         static_cast<int>(std::floor((x[a] - radius - g.origin[a]) / g.h[a])));
        hi[a] = std::min(g.dims[a] - 1 - margin,
                         static_cast<int>(std::ceil((x[a] + radius - g.origin[a]) / g.h[a])));
        if (lo[a] > hi[a]) throw ConfigError("diagnostics: window degenerate or outside the grid");
    }
    std::array<int, kMaxDim> it = lo;
    for (;;) {
        VecN p = g.coord(it);
        if (distance(p, x) <= radius) {
            out.idx.push_back(g.index(it));
            out.pos.push_back(p);
        }
        int a = g.dim - 1;
        for (; a >= 0; --a) {
            if (++it[a] <= hi[a]) break;
            it[a] = lo[a];
        }
        if (a < 0) break;
    }
    if (out.idx.empty()) throw ConfigError("diagnostics: empty ball window");
    return out;
}

VecN gradient_at(const GridField& u, const std::array<int, kMaxDim>& i) {
    const GridSpec& g = u.spec;
    VecN grad(g.dim);
    size_t strides[kMaxDim];
    size_t s = 1;
    for (int a = g.dim - 1; a >= 0; --a) {
        strides[a] = s;
        s *= static_cast<size_t>(g.dims[a]);
    }
    size_t idx = g.index(i);
    for (int a = 0; a < g.dim; ++a)
        grad[a] = (u.values[idx + strides[a]] - u.values[idx - strides[a]]) / (2.0 * g.h[a]);
    return grad;
}

double default_radius(const GridSpec& g) {
    double h = g.h[0];
    for (int a = 1; a < g.dim; ++a) h = std::max(h, g.h[a]);
    // must exceed the front thickness (~2 for logistic) to see curvature,
    // which 10h alone does not at fine resolutions
    return std::max(10.0 * h, 3.0);
}

}  // namespace

double sigma_from_matrix(const double A[3][3], int dim, int k) {
    if (k < 1 || k > dim) throw ConfigError("sigma_k: k out of range");
    double tr = 0.0;
    for (int i = 0; i < dim; ++i) tr += A[i][i];
    if (k == 1) return tr;
    if (k == 2) {
        double tr2 = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) tr2 += A[i][j] * A[j][i];
        return 0.5 * (tr * tr - tr2);
    }
    return A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
           A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
           A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
}

SigmaResult hessian_sigma(const GridField& field, int k, const Box& window) {
    const GridSpec& g = field.spec;
    if (k < 2 || k > g.dim) throw ConfigError("hessian_sigma: need 2 <= k <= N");
    if (field.time < 1.0)
        throw ConfigError("hessian_sigma: field must be past the initial smoothing (t >= 1)");

    std::array<int, kMaxDim> lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) {
        lo[a] = static_cast<int>(std::ceil((window.lo[a] - g.origin[a]) / g.h[a] - 1e-9));
        hi[a] = static_cast<int>(std::floor((window.hi[a] - g.origin[a]) / g.h[a] + 1e-9));
        if (lo[a] < 2 || hi[a] > g.dims[a] - 3)
            throw ConfigError("hessian_sigma: window must be >= 2 cells interior to the grid");
        if (lo[a] > hi[a]) throw ConfigError("hessian_sigma: empty window");
    }

    size_t strides[kMaxDim];
    {
        size_t s = 1;
        for (int a = g.dim - 1; a >= 0; --a) {
            strides[a] = s;
            s *= static_cast<size_t>(g.dims[a]);
        }
    }

    SigmaResult best;
    best.argmax = VecN(g.dim);
    std::array<int, kMaxDim> it = lo;
    for (;;) {
        size_t idx = g.index(it);
        double A[3][3] = {{0}};
        for (int a = 0; a < g.dim; ++a) {
            A[a][a] = (field.values[idx + strides[a]] - 2.0 * field.values[idx] +
                       field.values[idx - strides[a]]) /
                      (g.h[a] * g.h[a]);
            for (int b = a + 1; b < g.dim; ++b) {
                double v = (field.values[idx + strides[a] + strides[b]] -
                            field.values[idx + strides[a] - strides[b]] -
                            field.values[idx - strides[a] + strides[b]] +
                            field.values[idx - strides[a] - strides[b]]) /
                           (4.0 * g.h[a] * g.h[b]);
                A[a][b] = A[b][a] = v;
            }
        }
        double s = std::abs(sigma_from_matrix(A, g.dim, k));
        if (s > best.sup_abs) {
            best.sup_abs = s;
            best.argmax = g.coord(it);
        }
        int a = g.dim - 1;
        for (; a >= 0; --a) {
            if (++it[a] <= hi[a]) break;
            it[a] = lo[a];
        }
        if (a < 0) break;
    }
    return best;
}

namespace {

struct StructureTensor {
    double T[3][3] = {{0}};
    VecN grad_mean;
    double osc = 0.0;
    BallCells cells;
};

StructureTensor structure_in_ball(const GridField& field, const VecN& x, double radius) {
    StructureTensor st;
    st.cells = cells_in_ball(field, x, radius, 1);
    const GridSpec& g = field.spec;
    st.grad_mean = VecN(g.dim);
    double umin = 1e300, umax = -1e300;
    for (size_t c = 0; c < st.cells.idx.size(); ++c) {
        auto mi = g.unindex(st.cells.idx[c]);
        VecN gr = gradient_at(field, mi);
        for (int i = 0; i < g.dim; ++i)
            for (int j = 0; j < g.dim; ++j) st.T[i][j] += gr[i] * gr[j];
        st.grad_mean += gr;
        double v = field.values[st.cells.idx[c]];
        umin = std::min(umin, v);
        umax = std::max(umax, v);
    }
    st.osc = umax - umin;
    return st;
}

}  // namespace

double planarity_defect(const GridField& field, const VecN& x, double radius) {
    const GridSpec& g = field.spec;
    if (radius <= 0.0) radius = default_radius(g);
    StructureTensor st = structure_in_ball(field, x, radius);
    if (st.osc < 1e-3) return 0.0;  // flat: constant limit profiles live here

    VecN e = principal_direction(st.T, g.dim);
    // 1D reprojection: bin means along e*, evaluated back by linear
    // interpolation between bin centers so an exactly planar field leaves
    // only the O(w^2) quantization residual
    double w = g.h[0];
    std::map<long, std::pair<double, int>> bins;
    std::vector<double> svals(st.cells.idx.size());
    for (size_t c = 0; c < st.cells.idx.size(); ++c) {
        double s = (st.cells.pos[c] - x).dot(e);
        svals[c] = s;
        auto& acc = bins[std::lround(s / w)];
        acc.first += field.values[st.cells.idx[c]];
        acc.second += 1;
    }
    auto bin_mean = [&](long b, bool& ok) {
        auto it = bins.find(b);
        if (it == bins.end()) {
            ok = false;
            return 0.0;
        }
        ok = true;
        return it->second.first / it->second.second;
    };
    double rss = 0.0;
    for (size_t c = 0; c < st.cells.idx.size(); ++c) {
        double sw = svals[c] / w;
        long k = static_cast<long>(std::floor(sw));
        double frac = sw - k;
        bool ok0, ok1;
        double m0 = bin_mean(k, ok0), m1 = bin_mean(k + 1, ok1);
        double model;
        if (ok0 && ok1)
            model = m0 * (1.0 - frac) + m1 * frac;
        else if (ok0)
            model = m0;
        else
            model = m1;
        double r = field.values[st.cells.idx[c]] - model;
        rss += r * r;
    }
    double rms = std::sqrt(rss / st.cells.idx.size());
    return rms / st.osc;
}

VecN planarity_direction(const GridField& field, const VecN& x, double radius) {
    const GridSpec& g = field.spec;
    if (radius <= 0.0) radius = default_radius(g);
    StructureTensor st = structure_in_ball(field, x, radius);
    VecN e = principal_direction(st.T, g.dim);
    if (e.dot(st.grad_mean) > 0.0) e = e * -1.0;  // point toward decreasing u
    return e;
}

std::vector<std::pair<double, double>> extract_profile(const GridField& field, const VecN& x,
                                                       const VecN& e, double half_length) {
    const GridSpec& g = field.spec;
    VecN dir = e.normalized();
    double step = g.h[0];
    Box b = g.box();
    std::vector<std::pair<double, double>> out;
    for (double s = -half_length; s <= half_length + 1e-12; s += step) {
        VecN p = x + dir * s;
        if (!b.contains(p)) throw ConfigError("extract_profile: segment exits the grid");
        out.emplace_back(s, field.interp(p));
    }
    return out;
}

double profile_sup_distance(const std::vector<std::pair<double, double>>& samples,
                            const FrontProfile& phi) {
    if (samples.empty()) throw ConfigError("profile_sup_distance: no samples");
    auto sup_at = [&](double shift) {
        double worst = 0.0;
        for (auto& [s, u] : samples) worst = std::max(worst, std::abs(u - phi.eval(s - shift)));
        return worst;
    };
    // the front's half level must land inside the sampled segment, otherwise
    // saturated profiles would trivially match far tails
    double best = std::numeric_limits<double>::infinity(), best_shift = 0.0;
    for (double shift = samples.front().first; shift <= samples.back().first;
         shift += 0.25) {
        double v = sup_at(shift);
        if (v < best) {
            best = v;
            best_shift = shift;
        }
    }
    double lo = best_shift - 0.3, hi = best_shift + 0.3;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = hi - gr * (hi - lo), c2 = lo + gr * (hi - lo);
    for (int it = 0; it < 80; ++it) {
        if (sup_at(c1) < sup_at(c2)) {
            hi = c2;
            c2 = c1;
            c1 = hi - gr * (hi - lo);
        } else {
            lo = c1;
            c1 = c2;
            c2 = lo + gr * (hi - lo);
        }
    }
    return std::min(best, sup_at(0.5 * (lo + hi)));
}

double level_set_radius(const GridField& field, double level, const SetDescriptor& anchor) {
    if (!(level > 0.0 && level < 1.0))
        throw ConfigError("level_set_radius: level must be in (0,1)");
    const GridSpec& g = field.spec;
    double best = -1.0;
    for (size_t i = 0; i < field.values.size(); ++i) {
        if (field.values[i] < level) continue;
        best = std::max(best, dist(anchor, g.coord(g.unindex(i))));
    }
    if (best < 0.0) throw EmptyLevelError("level_set_radius: no cell reaches the level");
    return best;
}

DirectionSetEstimate estimate_E_from_run(const std::vector<GridField>& snapshots,
                                         double gradient_threshold,
                                         size_t max_cells_per_snapshot) {
    std::vector<const GridField*> usable;
    for (const auto& s : snapshots)
        if (s.time >= 1.0) usable.push_back(&s);
    if (usable.size() < 3)
        throw ConfigError("estimate_E_from_run: need at least 3 snapshots at t >= 1");

    std::vector<VecN> dirs;
    std::vector<double> weights;
    for (const GridField* sp : usable) {
        const GridField& u = *sp;
        const GridSpec& g = u.spec;
        std::vector<std::pair<double, size_t>> cand;  // (|grad|, index)
        std::array<int, kMaxDim> lo{0, 0, 0}, hi{0, 0, 0};
        for (int a = 0; a < g.dim; ++a) {
            lo[a] = 2;
            hi[a] = g.dims[a] - 3;
        }
        std::array<int, kMaxDim> it = lo;
        for (;;) {
            auto gr = gradient_at(u, it);
            double n = gr.norm();
            if (n >= gradient_threshold) cand.emplace_back(n, g.index(it));
            int a = g.dim - 1;
            for (; a >= 0; --a) {
                if (++it[a] <= hi[a]) break;
                it[a] = lo[a];
            }
            if (a < 0) break;
        }
        // Cap by raising the effective threshold to the top-K quantile and
        // keeping all ties: a purely value-based cut, so mirror-twin cells
        // (whose gradient norms are exactly equal) are kept or dropped
        // together.
        if (cand.size() > max_cells_per_snapshot) {
            std::vector<double> norms;
            norms.reserve(cand.size());
            for (auto& [n, i] : cand) norms.push_back(n);
            std::nth_element(norms.begin(), norms.begin() + max_cells_per_snapshot - 1,
                             norms.end(), std::greater<double>());
            double cutoff = norms[max_cells_per_snapshot - 1];
            std::vector<std::pair<double, size_t>> kept;
            for (auto& c : cand)
                if (c.first >= cutoff) kept.push_back(c);
            cand.swap(kept);
        }
        for (auto& [norm_unused, cidx] : cand) {
            (void)norm_unused;
            auto mi = g.unindex(cidx);
            VecN p = g.coord(mi);
            double defect;
            try {
                defect = planarity_defect(u, p);
            } catch (const ConfigError&) {
                continue;  // ball clipped by the boundary
            }
            if (defect > 0.1) continue;
            VecN gr = gradient_at(u, mi);
            double n = gr.norm();
            dirs.push_back(gr * (-1.0 / n));
            weights.push_back(n);
        }
    }
    return cluster_directions(std::move(dirs), std::move(weights), 2.0 * M_PI / 180.0);
}

TruncationReport truncation_error(const SetDescriptor& U, double sigma, double tau,
                                  const GridSpec& grid, const ReactionFn& f, SolverConfig cfg,
                                  double L, double delta) {
    if (tau < 1.0) throw ConfigError("truncation_error: tau must be >= 1");
    if (!(sigma > 0.0)) throw ConfigError("truncation_error: sigma must be positive");
    const int dim = grid.dim;
    double cstar = minimal_speed(f);
    if (!(sigma < 0.5 * cstar)) throw ScenarioError("truncation_error: need sigma < c*/2");

    GridField u0 = rasterize(U, grid);

    // geometry precondition (sampled): outside |x'| <= L the support must
    // sit under the cone x_N <= sigma/(2 c*) |x'|
    double slope = sigma / (2.0 * cstar);
    for (size_t i = 0; i < u0.values.size(); ++i) {
        if (u0.values[i] == 0.0) continue;
        VecN x = grid.coord(grid.unindex(i));
        double xp = 0.0;
        for (int a = 0; a < dim - 1; ++a) xp += x[a] * x[a];
        xp = std::sqrt(xp);
        if (xp <= L) continue;
        if (x[dim - 1] > slope * xp + grid.h[0])
            throw ScenarioError("truncation_error: support violates the cone condition");
    }
    {
        auto Ud = (U.kind() == SetKind::HalfSpace || U.kind() == SetKind::Ball ||
                   U.kind() == SetKind::Polytope || U.kind() == SetKind::Raster)
                      ? erode(U, delta)
                      : erode(U, delta, RasterWindow{grid.box(), grid.h[0]});
        bool found = false;
        for (size_t i = 0; i < grid.size() && !found; ++i) {
            VecN x = grid.coord(grid.unindex(i));
            double xp = 0.0;
            for (int a = 0; a < dim - 1; ++a) xp += x[a] * x[a];
            if (std::sqrt(xp) <= L && Ud.contains(x)) found = true;
        }
        if (!found) throw ScenarioError("truncation_error: eroded support misses the ball B_L");
    }

    const double trunc = 3.0 * sigma * tau;
    GridField v0 = u0;
    for (size_t i = 0; i < v0.values.size(); ++i) {
        VecN x = grid.coord(grid.unindex(i));
        double xp = 0.0;
        for (int a = 0; a < dim - 1; ++a) xp += x[a] * x[a];
        if (std::sqrt(xp) > trunc) v0.values[i] = 0.0;
    }

    cfg.horizon = tau;
    cfg.snapshot_every = tau;
    GridField uf = run(std::move(u0), f, cfg);
    GridField vf = run(std::move(v0), f, cfg);

    TruncationReport rep;
    rep.tau = tau;
    rep.sigma = sigma;
    rep.trunc_radius = trunc;
    size_t strides[kMaxDim];
    {
        size_t s = 1;
        for (int a = dim - 1; a >= 0; --a) {
            strides[a] = s;
            s *= static_cast<size_t>(grid.dims[a]);
        }
    }
    for (size_t i = 0; i < uf.values.size(); ++i) {
        auto mi = grid.unindex(i);
        VecN x = grid.coord(mi);
        double xp = 0.0;
        for (int a = 0; a < dim - 1; ++a) xp += x[a] * x[a];
        if (std::sqrt(xp) > sigma * tau) continue;
        if (x[dim - 1] < 0.0) continue;
        rep.sup_c0 = std::max(rep.sup_c0, std::abs(uf.values[i] - vf.values[i]));
        bool interior = true;
        for (int a = 0; a < dim; ++a)
            if (mi[a] < 1 || mi[a] > grid.dims[a] - 2) interior = false;
        if (interior) {
            for (int a = 0; a < dim; ++a) {
                double du =
                    (uf.values[i + strides[a]] - uf.values[i - strides[a]]) / (2.0 * grid.h[a]);
                double dv =
                    (vf.values[i + strides[a]] - vf.values[i - strides[a]]) / (2.0 * grid.h[a]);
                rep.sup_grad_diff = std::max(rep.sup_grad_diff, std::abs(du - dv));
            }
        }
    }
    return rep;
}

void DiagnosticsReport::add_sigma(int k, int dim, SigmaSample s) {
    if (k < 2 || k > dim) throw ConfigError("DiagnosticsReport: sigma key out of {2..N}");
    if (!std::isfinite(s.sup_abs)) throw ConfigError("DiagnosticsReport: non-finite sigma");
    sigma_stats[k].push_back(std::move(s));
}

void DiagnosticsReport::add_defect(DefectSample d) {
    if (!std::isfinite(d.defect)) throw ConfigError("DiagnosticsReport: non-finite defect");
    planarity_defects.push_back(std::move(d));
}

void DiagnosticsReport::check_finite() const {
    auto fin = [](double v) {
        if (!std::isfinite(v)) throw ConfigError("DiagnosticsReport: non-finite entry");
    };
    if (has_speed_fit) {
        fin(speed_fit.c_fit);
        fin(speed_fit.log_coef);
        fin(speed_fit.shift_fit);
    }
    for (auto& [k, v] : sigma_stats)
        for (auto& s : v) fin(s.sup_abs);
    for (auto& d : planarity_defects) fin(d.defect);
    for (auto& [k, v] : extras) fin(v);
}

}  // namespace kpplab

#include "kpplab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kpplab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Solve A x = b for n <= 3, Gaussian elimination with partial pivoting.
// Returns false if (nearly) singular.
bool solve_small(int n, double A[3][3], double b[3], double x[3]) {
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[perm[r]][col]) > std::abs(A[perm[piv]][col])) piv = r;
        std::swap(perm[col], perm[piv]);
        double p = A[perm[col]][col];
        if (std::abs(p) < 1e-13) return false;
        for (int r = col + 1; r < n; ++r) {
            double m = A[perm[r]][col] / p;
            for (int c = col; c < n; ++c) A[perm[r]][c] -= m * A[perm[col]][c];
            b[perm[r]] -= m * b[perm[col]];
        }
    }
    for (int row = n - 1; row >= 0; --row) {
        double s = b[perm[row]];
        for (int c = row + 1; c < n; ++c) s -= A[perm[row]][c] * x[c];
        x[row] = s / A[perm[row]][row];
    }
    return true;
}

// Feasible point of { x : n_i . x <= b_i } by alternating projections.
std::optional<VecN> polytope_feasible_point(const std::vector<HalfSpacePlane>& faces, int dim) {
    VecN x(dim);
    for (int it = 0; it < 2000; ++it) {
        double worst = 0.0;
        for (const auto& f : faces) {
            double v = f.normal.dot(x) - f.offset;
            if (v > 0.0) x += f.normal * (-v);
            worst = std::max(worst, v);
        }
        if (worst <= 1e-10) return x;
    }
    // One more slack pass: accept anything within loose tolerance, else empty.
    double worst = 0.0;
    for (const auto& f : faces) worst = std::max(worst, f.normal.dot(x) - f.offset);
    if (worst <= 1e-6) return x;
    return std::nullopt;
}

// Exact projection of x onto a convex polytope (dim <= 3) by enumerating
// active face subsets. Assumes the polytope is nonempty.
VecN project_polytope(const std::vector<HalfSpacePlane>& faces, int dim, const VecN& x) {
    auto feasible = [&](const VecN& y) {
        for (const auto& f : faces)
            if (f.normal.dot(y) > f.offset + 1e-9) return false;
        return true;
    };
    if (feasible(x)) return x;

    double best = kInf;
    VecN best_y = x;
    const int m = static_cast<int>(faces.size());
    std::vector<int> subset;

    auto try_subset = [&](const std::vector<int>& s) {
        int k = static_cast<int>(s.size());
        // y = x - A^T (A A^T)^{-1} (A x - b)
        double G[3][3] = {{0}};
        double rhs[3] = {0};
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) G[i][j] = faces[s[i]].normal.dot(faces[s[j]].normal);
            rhs[i] = faces[s[i]].normal.dot(x) - faces[s[i]].offset;
        }
        double lam[3] = {0};
        if (!solve_small(k, G, rhs, lam)) return;
        VecN y = x;
        for (int i = 0; i < k; ++i) y += faces[s[i]].normal * (-lam[i]);
        if (!feasible(y)) return;
        double d = distance(x, y);
        if (d < best) {
            best = d;
            best_y = y;
        }
    };

    std::vector<int> s1(1), s2(2), s3(3);
    for (int i = 0; i < m; ++i) {
        s1[0] = i;
        try_subset(s1);
        for (int j = i + 1; j < m && dim >= 2; ++j) {
            s2[0] = i;
            s2[1] = j;
            try_subset(s2);
            for (int k = j + 1; k < m && dim >= 3; ++k) {
                s3[0] = i;
                s3[1] = j;
                s3[2] = k;
                try_subset(s3);
            }
        }
    }
    return best_y;
}

// dist to a subgraph { (y', y_N) : y_N <= gamma(y') } for x outside it.
// Minimizes h(y') = sqrt(|x'-y'|^2 + max(x_N - gamma(y'), 0)^2). The
// horizontal offset of the minimizer is at most the vertical drop, which
// bounds the search window.
struct SubgraphMin {
    double dist;
    std::vector<VecN> argmins;  // minimizing boundary points (y', gamma(y'))
};

SubgraphMin subgraph_nearest(const GammaFn& gamma, int dim, const VecN& x, double tol) {
    const int dp = dim - 1;
    VecN xp(dp);
    for (int a = 0; a < dp; ++a) xp[a] = x[a];
    const double xN = x[dim - 1];

    auto value = [&](const VecN& yp) {
        double dv = xN - gamma(yp);
        double horiz2 = 0.0;
        for (int a = 0; a < dp; ++a) {
            double d = xp[a] - yp[a];
            horiz2 += d * d;
        }
        double vert = std::max(dv, 0.0);
        return std::sqrt(horiz2 + vert * vert);
    };

    double d_up = std::max(xN - gamma(xp), 0.0);  // drop straight down
    double W = d_up + 1.0;

    SubgraphMin out{kInf, {}};
    std::vector<std::pair<double, VecN>> samples;

    if (dp == 1) {
        const int K = 4096;
        for (int i = 0; i <= K; ++i) {
            VecN yp(1);
            yp[0] = xp[0] - W + 2.0 * W * i / K;
            samples.emplace_back(value(yp), yp);
        }
        // refine every local minimum of the sampled values by golden section
        auto refine = [&](double lo, double hi) {
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double a = lo, b = hi;
            double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
            VecN y1(1), y2(1);
            for (int it = 0; it < 80 && (b - a) > 1e-12 * (1.0 + std::abs(a)); ++it) {
                y1[0] = c1;
                y2[0] = c2;
                if (value(y1) < value(y2)) {
                    b = c2;
                    c2 = c1;
                    c1 = b - gr * (b - a);
                } else {
                    a = c1;
                    c1 = c2;
                    c2 = a + gr * (b - a);
                }
            }
            VecN y(1);
            y[0] = 0.5 * (a + b);
            return std::make_pair(value(y), y);
        };
        std::vector<std::pair<double, VecN>> mins;
        for (int i = 1; i < K; ++i) {
            if (samples[i].first <= samples[i - 1].first &&
                samples[i].first <= samples[i + 1].first) {
                mins.push_back(refine(samples[i - 1].second[0], samples[i + 1].second[0]));
            }
        }
        mins.push_back(samples.front());
        mins.push_back(samples.back());
        for (auto& m : mins) out.dist = std::min(out.dist, m.first);
        for (auto& m : mins) {
            if (m.first <= out.dist + tol) {
                VecN b(dim);
                b[0] = m.second[0];
                b[dim - 1] = gamma(m.second);
                // deduplicate
                bool dup = false;
                for (auto& p : out.argmins)
                    if (distance(p, b) < std::max(1e-6, tol)) dup = true;
                if (!dup) out.argmins.push_back(b);
            }
        }
    } else {
        // dp == 2: coarse grid then coordinate-wise golden refinement
        const int K = 160;
        double bestv = kInf;
        VecN besty(2);
        for (int i = 0; i <= K; ++i) {
            for (int j = 0; j <= K; ++j) {
                VecN yp(2);
                yp[0] = xp[0] - W + 2.0 * W * i / K;
                yp[1] = xp[1] - W + 2.0 * W * j / K;
                double v = value(yp);
                if (v < bestv) {
                    bestv = v;
                    besty = yp;
                }
            }
        }
        double step = 2.0 * W / K;
        for (int round = 0; round < 60; ++round) {
            bool improved = false;
            for (int a = 0; a < 2; ++a) {
                for (double sgn : {-1.0, 1.0}) {
                    VecN y = besty;
                    y[a] += sgn * step;
                    double v = value(y);
                    if (v < bestv) {
                        bestv = v;
                        besty = y;
                        improved = true;
                    }
                }
            }
            if (!improved) step *= 0.5;
            if (step < 1e-10) break;
        }
        out.dist = bestv;
        VecN b(dim);
        b[0] = besty[0];
        b[1] = besty[1];
        b[dim - 1] = gamma(besty);
        out.argmins.push_back(b);
    }
    return out;
}

}  // namespace

std::string kind_name(SetKind k) {
    switch (k) {
        case SetKind::Empty: return "empty";
        case SetKind::HalfSpace: return "half-space";
        case SetKind::Ball: return "ball";
        case SetKind::Polytope: return "convex-polytope";
        case SetKind::VShape: return "v-shape";
        case SetKind::Subgraph: return "subgraph";
        case SetKind::Union: return "union";
        case SetKind::Raster: return "raster";
    }
    return "?";
}

SetDescriptor SetDescriptor::empty(int dim) {
    SetDescriptor d;
    d.dim_ = dim;
    d.kind_ = SetKind::Empty;
    return d;
}

SetDescriptor SetDescriptor::half_space(const VecN& normal, double offset) {
    SetDescriptor d;
    d.dim_ = normal.dim;
    d.kind_ = SetKind::HalfSpace;
    d.faces_ = {HalfSpacePlane{normal.normalized(), offset / normal.norm()}};
    return d;
}

SetDescriptor SetDescriptor::ball(const VecN& center, double radius) {
    if (radius < 0.0) return empty(center.dim);
    SetDescriptor d;
    d.dim_ = center.dim;
    d.kind_ = SetKind::Ball;
    d.center_ = center;
    d.radius_ = radius;
    return d;
}

SetDescriptor SetDescriptor::polytope(std::vector<HalfSpacePlane> faces, int dim) {
    SetDescriptor d;
    d.dim_ = dim;
    d.kind_ = SetKind::Polytope;
    for (auto& f : faces) {
        double n = f.normal.norm();
        f.offset /= n;
        f.normal = f.normal * (1.0 / n);
    }
    d.faces_ = std::move(faces);
    d.polytope_interior_ = polytope_feasible_point(d.faces_, dim);
    return d;
}

SetDescriptor SetDescriptor::v_shape(double beta, int dim) {
    if (beta < 0.0) throw ConfigError("v-shape requires beta >= 0");
    if (dim < 2) throw ConfigError("v-shape requires dim >= 2");
    SetDescriptor d;
    d.dim_ = dim;
    d.kind_ = SetKind::VShape;
    d.beta_ = beta;
    double n = std::sqrt(1.0 + beta * beta);
    // the two branch half-spaces {x2 <= beta*x1} and {x2 <= -beta*x1}
    VecN n1 = VecN::of_dim(dim), n2 = VecN::of_dim(dim);
    n1[0] = -beta / n;
    n1[1] = 1.0 / n;
    n2[0] = beta / n;
    n2[1] = 1.0 / n;
    d.faces_ = {HalfSpacePlane{n1, 0.0}, HalfSpacePlane{n2, 0.0}};
    return d;
}

SetDescriptor SetDescriptor::subgraph(GammaFn gamma, int dim) {
    if (dim < 2) throw ConfigError("subgraph requires dim >= 2");
    SetDescriptor d;
    d.dim_ = dim;
    d.kind_ = SetKind::Subgraph;
    d.gamma_ = std::move(gamma);
    return d;
}

SetDescriptor SetDescriptor::union_of(std::vector<SetDescriptor> parts) {
    if (parts.empty()) throw ConfigError("union needs at least one part");
    SetDescriptor d;
    d.dim_ = parts.front().dim();
    for (auto& p : parts)
        if (p.dim() != d.dim_) throw ConfigError("union parts must share a dimension");
    d.kind_ = SetKind::Union;
    d.parts_ = std::move(parts);
    return d;
}

SetDescriptor SetDescriptor::raster(GridMask mask) {
    SetDescriptor d;
    d.dim_ = mask.spec.dim;
    d.kind_ = SetKind::Raster;
    auto data = std::make_shared<RasterData>();
    data->edt = exact_edt(mask, false);
    data->edt_comp = exact_edt(mask, true);
    data->mask = std::move(mask);
    d.raster_ = std::move(data);
    return d;
}

bool SetDescriptor::contains(const VecN& x) const {
    switch (kind_) {
        case SetKind::Empty: return false;
        case SetKind::HalfSpace: return faces_[0].normal.dot(x) <= faces_[0].offset;
        case SetKind::Ball: return distance(x, center_) <= radius_;
        case SetKind::Polytope: {
            if (!polytope_interior_) return false;
            for (const auto& f : faces_)
                if (f.normal.dot(x) > f.offset) return false;
            return true;
        }
        case SetKind::VShape: return x[1] <= beta_ * std::abs(x[0]);
        case SetKind::Subgraph: {
            VecN xp(dim_ - 1);
            for (int a = 0; a < dim_ - 1; ++a) xp[a] = x[a];
            return x[dim_ - 1] <= gamma_(xp);
        }
        case SetKind::Union: {
            for (const auto& p : parts_)
                if (p.contains(x)) return true;
            return false;
        }
        case SetKind::Raster: {
            const GridSpec& g = raster_->mask.spec;
            for (int a = 0; a < g.dim; ++a) {
                double s = (x[a] - g.origin[a]) / g.h[a];
                if (s < -0.5 || s > g.dims[a] - 0.5) return false;
            }
            auto i = g.nearest_cell(x);
            return raster_->mask.get(g.index(i));
        }
    }
    return false;
}

bool SetDescriptor::is_empty() const {
    switch (kind_) {
        case SetKind::Empty: return true;
        case SetKind::Polytope: return !polytope_interior_.has_value();
        case SetKind::Union: {
            for (const auto& p : parts_)
                if (!p.is_empty()) return false;
            return true;
        }
        case SetKind::Raster: return raster_->mask.count() == 0;
        default: return false;
    }
}

bool SetDescriptor::is_singleton() const {
    switch (kind_) {
        case SetKind::Ball: return radius_ == 0.0;
        case SetKind::Raster: return raster_->mask.count() == 1;
        default: return false;
    }
}

VecN SetDescriptor::anchor() const {
    switch (kind_) {
        case SetKind::Empty: break;
        case SetKind::HalfSpace: return faces_[0].normal * (faces_[0].offset - 1.0);
        case SetKind::Ball: return center_;
        case SetKind::Polytope:
            if (polytope_interior_) return *polytope_interior_;
            break;
        case SetKind::VShape: {
            VecN a = VecN::of_dim(dim_);
            a[1] = -1.0;
            return a;
        }
        case SetKind::Subgraph: {
            VecN a = VecN::of_dim(dim_);
            VecN zero(dim_ - 1);
            a[dim_ - 1] = gamma_(zero) - 1.0;
            return a;
        }
        case SetKind::Union: {
            for (const auto& p : parts_)
                if (!p.is_empty()) return p.anchor();
            break;
        }
        case SetKind::Raster: {
            const auto& m = raster_->mask;
            for (size_t i = 0; i < m.bits.size(); ++i)
                if (m.get(i)) return m.spec.coord(m.spec.unindex(i));
            break;
        }
    }
    throw std::domain_error("anchor() on an empty set");
}

double dist(const SetDescriptor& U, const VecN& x) {
    switch (U.kind()) {
        case SetKind::Empty: return kInf;
        case SetKind::HalfSpace:
            return std::max(0.0, U.faces()[0].normal.dot(x) - U.faces()[0].offset);
        case SetKind::Ball: return std::max(0.0, distance(x, U.center()) - U.radius());
        case SetKind::Polytope: {
            if (U.is_empty()) return kInf;
            return distance(x, project_polytope(U.faces(), U.dim(), x));
        }
        case SetKind::VShape: {
            double d = kInf;
            for (const auto& f : U.faces())
                d = std::min(d, std::max(0.0, f.normal.dot(x) - f.offset));
            return d;
        }
        case SetKind::Subgraph: {
            if (U.contains(x)) return 0.0;
            return subgraph_nearest(U.gamma(), U.dim(), x, 1e-9).dist;
        }
        case SetKind::Union: {
            double d = kInf;
            for (const auto& p : U.parts()) d = std::min(d, dist(p, x));
            return d;
        }
        case SetKind::Raster: {
            const auto& rd = U.raster_edt();
            const GridSpec& g = U.mask().spec;
            if (U.is_empty()) return kInf;
            auto ic = g.nearest_cell(x);
            double best = kInf;
            // scan features of the 3^N neighborhood of the nearest cell
            std::array<int, kMaxDim> lo{}, hi{};
            for (int a = 0; a < g.dim; ++a) {
                lo[a] = std::max(0, ic[a] - 1);
                hi[a] = std::min(g.dims[a] - 1, ic[a] + 1);
            }
            std::array<int, kMaxDim> it = lo;
            for (;;) {
                int64_t f = rd.feature[g.index(it)];
                if (f >= 0) best = std::min(best, distance(x, g.coord(g.unindex(f))));
                int a = g.dim - 1;
                for (; a >= 0; --a) {
                    if (++it[a] <= hi[a]) break;
                    it[a] = lo[a];
                }
                if (a < 0) break;
            }
            return best;
        }
    }
    return kInf;
}

ProjectionSet projections(const SetDescriptor& U, const VecN& x, double tol) {
    if (U.is_empty()) throw std::domain_error("projections: U is empty");
    if (U.contains(x)) throw std::domain_error("projections: x inside the closure of U");
    ProjectionSet ps;
    ps.tolerance = tol;
    switch (U.kind()) {
        case SetKind::HalfSpace: {
            const auto& f = U.faces()[0];
            ps.points = {x - f.normal * (f.normal.dot(x) - f.offset)};
            break;
        }
        case SetKind::Ball: {
            VecN d = x - U.center();
            ps.points = {U.center() + d * (U.radius() / d.norm())};
            break;
        }
        case SetKind::Polytope: {
            ps.points = {project_polytope(U.faces(), U.dim(), x)};
            break;
        }
        case SetKind::VShape: {
            double dbest = dist(U, x);
            for (const auto& f : U.faces()) {
                double v = std::max(0.0, f.normal.dot(x) - f.offset);
                if (v <= dbest + tol) {
                    VecN p = x - f.normal * (f.normal.dot(x) - f.offset);
                    bool dup = false;
                    for (auto& q : ps.points)
                        if (distance(p, q) < 1e-12) dup = true;
                    if (!dup) ps.points.push_back(p);
                }
            }
            break;
        }
        case SetKind::Subgraph: {
            auto sm = subgraph_nearest(U.gamma(), U.dim(), x, tol);
            ps.points = sm.argmins;
            break;
        }
        case SetKind::Union: {
            double dbest = dist(U, x);
            for (const auto& p : U.parts()) {
                if (p.is_empty()) continue;
                if (dist(p, x) <= dbest + tol) {
                    auto sub = projections(p, x, tol);
                    for (auto& q : sub.points) {
                        if (distance(q, x) > dbest + tol) continue;
                        bool dup = false;
                        for (auto& r : ps.points)
                            if (distance(q, r) < 1e-12) dup = true;
                        if (!dup) ps.points.push_back(q);
                    }
                }
            }
            break;
        }
        case SetKind::Raster: {
            const auto& rd = U.raster_edt();
            const GridSpec& g = U.mask().spec;
            double dbest = dist(U, x);
            auto ic = g.nearest_cell(x);
            std::array<int, kMaxDim> lo{}, hi{};
            for (int a = 0; a < g.dim; ++a) {
                lo[a] = std::max(0, ic[a] - 2);
                hi[a] = std::min(g.dims[a] - 1, ic[a] + 2);
            }
            std::array<int, kMaxDim> it = lo;
            for (;;) {
                int64_t fidx = rd.feature[g.index(it)];
                if (fidx >= 0) {
                    VecN p = g.coord(g.unindex(fidx));
                    if (distance(p, x) <= dbest + tol) {
                        bool dup = false;
                        for (auto& q : ps.points)
                            if (distance(p, q) < 1e-12) dup = true;
                        if (!dup) ps.points.push_back(p);
                    }
                }
                int a = g.dim - 1;
                for (; a >= 0; --a) {
                    if (++it[a] <= hi[a]) break;
                    it[a] = lo[a];
                }
                if (a < 0) break;
            }
            break;
        }
        case SetKind::Empty: break;
    }
    return ps;
}

SetDescriptor erode(const SetDescriptor& U, double delta) {
    if (delta <= 0.0) throw ConfigError("erode requires delta > 0");
    switch (U.kind()) {
        case SetKind::Empty: return SetDescriptor::empty(U.dim());
        case SetKind::HalfSpace:
            return SetDescriptor::half_space(U.faces()[0].normal, U.faces()[0].offset - delta);
        case SetKind::Ball: {
            if (U.radius() < delta) return SetDescriptor::empty(U.dim());
            return SetDescriptor::ball(U.center(), U.radius() - delta);
        }
        case SetKind::Polytope: {
            std::vector<HalfSpacePlane> faces = U.faces();
            for (auto& f : faces) f.offset -= delta;
            SetDescriptor d = SetDescriptor::polytope(std::move(faces), U.dim());
            if (d.is_empty()) return SetDescriptor::empty(U.dim());
            return d;
        }
        case SetKind::Raster: {
            const auto& mask = U.mask();
            const GridSpec& g = mask.spec;
            const double h = g.h[0];
            GridMask out(g);
            const auto& edt_comp = U.raster_edt_comp();
            for (size_t i = 0; i < mask.bits.size(); ++i) {
                if (!mask.get(i)) continue;
                double d = edt_comp.dist_at(i, h);
                // the true boundary sits about half a cell beyond the last
                // marked center
                if (d >= delta + 0.5 * h) out.set(i, true);
            }
            return SetDescriptor::raster(std::move(out));
        }
        default:
            throw ConfigError("erode(" + kind_name(U.kind()) +
                              ") needs the raster-fallback overload with a window");
    }
}

SetDescriptor erode(const SetDescriptor& U, double delta, const RasterWindow& window) {
    switch (U.kind()) {
        case SetKind::VShape:
        case SetKind::Subgraph:
        case SetKind::Union: {
            GridSpec g = GridSpec::from_box(window.box, window.h);
            GridMask mask(g);
            for (size_t i = 0; i < mask.bits.size(); ++i)
                mask.set(i, U.contains(g.coord(g.unindex(i))));
            return erode(SetDescriptor::raster(std::move(mask)), delta);
        }
        default: return erode(U, delta);
    }
}

double hausdorff(const SetDescriptor& A, const SetDescriptor& B, const Box& window,
                 double sample_h) {
    bool ea = A.is_empty(), eb = B.is_empty();
    if (ea && eb) return 0.0;
    if (ea || eb) return kInf;

    GridSpec g = GridSpec::from_box(window, sample_h);
    auto directed = [&](const SetDescriptor& from, const SetDescriptor& to) {
        double sup = 0.0;
        const size_t total = g.size();
        for (size_t i = 0; i < total; ++i) {
            VecN x = g.coord(g.unindex(i));
            if (!from.contains(x)) continue;
            sup = std::max(sup, dist(to, x));
        }
        return sup;
    };
    return std::max(directed(A, B), directed(B, A));
}

double DirectionSetEstimate::max_angular_gap_2d() const {
    if (directions.empty()) return 2.0 * M_PI;
    std::vector<double> ang;
    ang.reserve(directions.size());
    for (const auto& d : directions) ang.push_back(std::atan2(d[1], d[0]));
    std::sort(ang.begin(), ang.end());
    double gap = 2.0 * M_PI - (ang.back() - ang.front());
    for (size_t i = 1; i < ang.size(); ++i) gap = std::max(gap, ang[i] - ang[i - 1]);
    return gap;
}

double DirectionSetEstimate::max_angle_to(const VecN& e) const {
    double m = 0.0;
    for (const auto& d : directions) m = std::max(m, angle_between(d, e));
    return m;
}

DirectionSetEstimate cluster_directions(std::vector<VecN> dirs, std::vector<double> weights,
                                        double eps_radians) {
    DirectionSetEstimate est;
    est.directions = std::move(dirs);
    est.weights = std::move(weights);
    if (est.weights.empty()) est.weights.assign(est.directions.size(), 1.0);
    std::vector<VecN> sums;
    std::vector<double> wsum;
    for (size_t i = 0; i < est.directions.size(); ++i) {
        bool merged = false;
        for (size_t c = 0; c < sums.size(); ++c) {
            VecN rep = sums[c] * (1.0 / std::max(1e-300, sums[c].norm()));
            if (angle_between(rep, est.directions[i]) <= eps_radians) {
                sums[c] += est.directions[i] * est.weights[i];
                wsum[c] += est.weights[i];
                merged = true;
                break;
            }
        }
        if (!merged) {
            sums.push_back(est.directions[i] * est.weights[i]);
            wsum.push_back(est.weights[i]);
        }
    }
    for (auto& s : sums) est.clusters.push_back(s.normalized());
    return est;
}

}  // namespace kpplab

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kpplab/edt.hpp"
#include "kpplab/grid.hpp"
#include "kpplab/rng.hpp"
#include "kpplab/vec.hpp"

namespace kpplab {

// { x : normal . x <= offset }, |normal| = 1.
struct HalfSpacePlane {
    VecN normal;
    double offset = 0.0;
};

// A subgraph boundary function gamma : R^{N-1} -> R, represented as a sum of
// simple terms so it can round-trip through JSON.
struct GammaTerm {
    enum class Type { Const, Linear, Sin, PowAbs };
    Type type = Type::Const;
    double a = 0.0;  // amplitude
    double b = 1.0;  // frequency (Sin) or exponent (PowAbs)
    double c = 0.0;  // phase (Sin)
};

struct GammaFn {
    std::vector<GammaTerm> terms;

    double operator()(const VecN& xp) const {
        double s = 0.0;
        double r = xp.norm();
        for (const auto& t : terms) {
            switch (t.type) {
                case GammaTerm::Type::Const: s += t.a; break;
                case GammaTerm::Type::Linear: s += t.a * xp[0]; break;
                case GammaTerm::Type::Sin: s += t.a * std::sin(t.b * xp[0] + t.c); break;
                case GammaTerm::Type::PowAbs: s += t.a * std::pow(r, t.b); break;
            }
        }
        return s;
    }
    double operator()(double x1) const {
        VecN xp(1);
        xp[0] = x1;
        return (*this)(xp);
    }

    static GammaFn constant(double v) { return {{GammaTerm{GammaTerm::Type::Const, v, 1, 0}}}; }
};

enum class SetKind { Empty, HalfSpace, Ball, Polytope, VShape, Subgraph, Union, Raster };

std::string kind_name(SetKind k);

// Analytic or rasterized description of U in R^N with distance and
// projection queries. Immutable; all queries are pure and thread-safe.
class SetDescriptor {
public:
    static SetDescriptor empty(int dim);
    static SetDescriptor half_space(const VecN& normal, double offset);
    static SetDescriptor ball(const VecN& center, double radius);
    static SetDescriptor polytope(std::vector<HalfSpacePlane> faces, int dim);
    static SetDescriptor v_shape(double beta, int dim = 2);
    static SetDescriptor subgraph(GammaFn gamma, int dim = 2);
    static SetDescriptor union_of(std::vector<SetDescriptor> parts);
    static SetDescriptor raster(GridMask mask);

    int dim() const { return dim_; }
    SetKind kind() const { return kind_; }

    bool contains(const VecN& x) const;  // closure membership
    bool is_empty() const;
    bool is_singleton() const;

    // Some point of the set, used to seed samplers. Throws on empty sets.
    VecN anchor() const;

    // Accessors (valid for the matching kind only).
    const std::vector<HalfSpacePlane>& faces() const { return faces_; }
    const VecN& center() const { return center_; }
    double radius() const { return radius_; }
    double beta() const { return beta_; }
    const GammaFn& gamma() const { return gamma_; }
    const std::vector<SetDescriptor>& parts() const { return parts_; }
    const GridMask& mask() const { return raster_->mask; }
    const EdtResult& raster_edt() const { return raster_->edt; }
    const EdtResult& raster_edt_comp() const { return raster_->edt_comp; }

private:
    SetDescriptor() = default;

    struct RasterData {
        GridMask mask;
        EdtResult edt;       // distance to the set
        EdtResult edt_comp;  // distance to the complement
    };

    int dim_ = 0;
    SetKind kind_ = SetKind::Empty;
    std::vector<HalfSpacePlane> faces_;
    VecN center_;
    double radius_ = 0.0;
    double beta_ = 0.0;
    GammaFn gamma_;
    std::vector<SetDescriptor> parts_;
    std::shared_ptr<const RasterData> raster_;
    std::optional<VecN> polytope_interior_;  // cached feasible point

    friend SetDescriptor erode(const SetDescriptor&, double);
};

// Euclidean distance to U; +infinity if U is empty.
double dist(const SetDescriptor& U, const VecN& x);

struct ProjectionSet {
    std::vector<VecN> points;
    double tolerance = 0.0;
};

// All detected nearest points of the closure of U to x, within tol of
// achieving dist(x,U). Throws std::domain_error if x is inside the closure.
ProjectionSet projections(const SetDescriptor& U, const VecN& x, double tol);

struct RasterWindow {
    Box box;
    double h = 0.1;
};

// U_delta = { x in U : dist(x, boundary of U) >= delta }. Closed forms for
// half-space / ball / polytope / raster; v-shape, subgraph and union need the
// raster-fallback overload with an explicit window.
SetDescriptor erode(const SetDescriptor& U, double delta);
SetDescriptor erode(const SetDescriptor& U, double delta, const RasterWindow& window);

// Windowed Hausdorff distance estimated by dense sampling at resolution
// sample_h. Both sets empty -> 0; exactly one empty -> +infinity.
double hausdorff(const SetDescriptor& A, const SetDescriptor& B, const Box& window,
                 double sample_h);

struct OpeningSampler {
    int directions = 2048;    // angular samples (ring in 2D, Fibonacci in 3D)
    int radial = 48;          // log-spaced membership probes per direction
    double r_min = 1e-3;
    double r_max = 1e5;
    int refine_iters = 20;
    double tol = 1e-2;        // reported sampling tolerance
    uint64_t seed = 42;
};

inline constexpr double kMinusInfinity = -std::numeric_limits<double>::infinity();

// Opening function: sup over projections xi and set points y of the cosine
// between x-xi and y-xi. Returns -infinity for empty or singleton U.
// Throws std::domain_error if x is inside the closure of U.
double opening(const SetDescriptor& U, const VecN& x, const OpeningSampler& s = {});

// For each R in radii, samples points x with dist(x,U)=R and returns the
// largest opening estimate found. radii must be strictly increasing.
std::vector<std::pair<double, double>> opening_profile(const SetDescriptor& U,
                                                       const std::vector<double>& radii,
                                                       int directions,
                                                       const OpeningSampler& s = {});

// Points x with dist(x,U)=R (within 1e-6*R) paired with one projection each.
struct LevelPoint {
    VecN x;
    std::vector<VecN> xi;
};
std::vector<LevelPoint> distance_level_points(const SetDescriptor& U, double R, int count,
                                              uint64_t seed = 42);

struct VgmReport {
    std::vector<std::pair<double, double>> scale_sup;  // (separation, sup ratio)
    double M = 0.0;  // sup |gamma(x')-gamma(y')| / (|x'-y'|+1)
    bool decaying = false;
};

// Estimates sup |gamma(x')-gamma(y')|/|x'-y'| over pairs at the given
// separation scales, plus the bounded-ratio constant M.
VgmReport vgm_check(const GammaFn& gamma, const std::vector<double>& scales,
                    double window = 512.0, int samples_per_scale = 4096,
                    uint64_t seed = 42);

struct DirectionSetEstimate {
    std::vector<VecN> directions;
    std::vector<double> weights;
    std::vector<VecN> clusters;  // representatives after angular merging

    bool empty() const { return directions.empty(); }
    // Largest angular gap between consecutive directions on the circle (2D).
    double max_angular_gap_2d() const;
    double max_angle_to(const VecN& e) const;
};

// Finite-R approximation of the direction set E: unit vectors (x-xi)/|x-xi|
// collected over points x with dist(x,U) ~= R.
DirectionSetEstimate predict_E(const SetDescriptor& U, double R, int samples,
                               uint64_t seed = 42);

DirectionSetEstimate cluster_directions(std::vector<VecN> dirs, std::vector<double> weights,
                                        double eps_radians);

}  // namespace kpplab

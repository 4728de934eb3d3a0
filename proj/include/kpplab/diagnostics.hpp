#pragma once

#include <map>
#include <vector>

#include "kpplab/fronts.hpp"
#include "kpplab/geometry.hpp"
#include "kpplab/grid.hpp"
#include "kpplab/solver.hpp"

namespace kpplab {

struct EmptyLevelError : std::runtime_error {
    explicit EmptyLevelError(const std::string& m) : std::runtime_error(m) {}
};

// sigma_k from the coefficients of the characteristic polynomial:
// sigma_1 = tr, sigma_2 = (tr^2 - tr(A^2))/2, sigma_3 = det.
double sigma_from_matrix(const double A[3][3], int dim, int k);

struct SigmaResult {
    double sup_abs = 0.0;
    VecN argmax;
};

// Hessian by centered second differences; returns sup |sigma_k| over the
// window and its location. Requires 2 <= k <= N, field.time >= 1, and the
// window at least two cells interior to the grid.
SigmaResult hessian_sigma(const GridField& field, int k, const Box& window);

// Best-fit one-dimensional model in a ball: e* is the principal direction of
// the local structure tensor, the defect is the RMS residual of u against
// its 1D reprojection along e*, normalized by the local oscillation.
// Returns 0 where the oscillation is below 1e-3 ("flat"). radius <= 0 picks
// the default max(10h, 3).
double planarity_defect(const GridField& field, const VecN& x, double radius = -1.0);

// Principal structure-tensor direction in the same ball (sign-normalized to
// point against the gradient mean, i.e. toward decreasing u).
VecN planarity_direction(const GridField& field, const VecN& x, double radius = -1.0);

// u sampled along x + s e, s in [-half_length, half_length], step = grid h.
std::vector<std::pair<double, double>> extract_profile(const GridField& field, const VecN& x,
                                                       const VecN& e, double half_length);

// sup-norm distance between an extracted profile and phi after the optimal
// shift (coarse scan + golden refinement).
double profile_sup_distance(const std::vector<std::pair<double, double>>& samples,
                            const FrontProfile& phi);

// max over cells with u >= level of dist(cell, anchor): the reach of the
// invasion. Throws EmptyLevelError when no cell is at the level.
double level_set_radius(const GridField& field, double level, const SetDescriptor& anchor);

// Direction cloud of -grad u / |grad u| over cells with |grad u| above the
// threshold and local planarity defect <= 0.1, weighted by |grad u|,
// merged across snapshots taken at t >= 1 (needs at least 3).
DirectionSetEstimate estimate_E_from_run(const std::vector<GridField>& snapshots,
                                         double gradient_threshold,
                                         size_t max_cells_per_snapshot = 4096);

struct TruncationReport {
    double sup_c0 = 0.0;        // sup |u - u^{3 sigma tau}| over the half-cylinder
    double sup_grad_diff = 0.0; // companion max-gradient gap over the same region
    double tau = 0.0;
    double sigma = 0.0;
    double trunc_radius = 0.0;  // 3 sigma tau
};

// Lemma-style truncation experiment: runs u from 1_U and u' from the initial
// datum truncated to |x'| <= 3 sigma tau, both on `grid` with `cfg`, and
// compares them at time tau over the half-cylinder |x'| <= sigma tau,
// x_N in [0, top of grid]. The geometric precondition
//   U outside B'_L x R lies under x_N <= sigma/(2 c*) |x'|
// is checked by sampling grid cells; violations raise ScenarioError.
TruncationReport truncation_error(const SetDescriptor& U, double sigma, double tau,
                                  const GridSpec& grid, const ReactionFn& f, SolverConfig cfg,
                                  double L = 8.0, double delta = 1.0);

struct SigmaSample {
    double t = 0.0;
    double sup_abs = 0.0;
    VecN argmax;
};

struct DefectSample {
    double t = 0.0;
    VecN point;
    double defect = 0.0;
};

// Structured results a scenario plan fills in: speed fits, sigma_k time
// series, planarity defects, direction clouds, plus named scalar extras.
struct DiagnosticsReport {
    FrontFit speed_fit;
    bool has_speed_fit = false;
    std::map<int, std::vector<SigmaSample>> sigma_stats;
    std::vector<DefectSample> planarity_defects;
    DirectionSetEstimate direction_cloud;
    std::map<std::string, double> extras;

    void add_sigma(int k, int dim, SigmaSample s);
    void add_defect(DefectSample d);
    void check_finite() const;  // throws on non-finite entries
};

}  // namespace kpplab

#pragma once

#include <string>
#include <vector>

#include "kpplab/reaction.hpp"
#include "kpplab/vec.hpp"

namespace kpplab {

// Tabulated traveling-front profile phi with speed c, normalized phi(0)=1/2.
// phi is strictly decreasing, 0 < phi < 1 on the table; evaluation uses
// linear interpolation with a clamped left tail (1) and an exponential right
// tail.
class FrontProfile {
public:
    FrontProfile(double c, double zmin, double dz, std::vector<double> phi,
                 std::vector<double> dphi, double mu_plus)
        : c_(c), zmin_(zmin), dz_(dz), phi_(std::move(phi)), dphi_(std::move(dphi)),
          mu_plus_(mu_plus) {}

    double speed() const { return c_; }
    double zmin() const { return zmin_; }
    double zmax() const { return zmin_ + dz_ * (phi_.size() - 1); }
    double dz() const { return dz_; }
    size_t size() const { return phi_.size(); }
    const std::vector<double>& table_phi() const { return phi_; }
    const std::vector<double>& table_dphi() const { return dphi_; }
    double mu_plus() const { return mu_plus_; }

    double eval(double z) const {
        if (z <= zmin_) return 1.0;
        double zm = zmax();
        if (z >= zm) return phi_.back() * std::exp(mu_plus_ * (z - zm));
        double s = (z - zmin_) / dz_;
        size_t i = static_cast<size_t>(s);
        if (i >= phi_.size() - 1) i = phi_.size() - 2;
        double f = s - i;
        return phi_[i] * (1.0 - f) + phi_[i + 1] * f;
    }

    double deriv(double z) const {
        if (z <= zmin_) return 0.0;
        double zm = zmax();
        if (z >= zm) return mu_plus_ * phi_.back() * std::exp(mu_plus_ * (z - zm));
        double s = (z - zmin_) / dz_;
        size_t i = static_cast<size_t>(s);
        if (i >= dphi_.size() - 1) i = dphi_.size() - 2;
        double f = s - i;
        return dphi_[i] * (1.0 - f) + dphi_[i + 1] * f;
    }

    // z with phi(z) = level, by monotone bisection over the table range.
    double inverse(double level) const;

    // Max over interior nodes of |p' + c p + f(phi)| with p' from a
    // fourth-order central difference of the tabulated derivative.
    double ode_residual(const ReactionFn& f) const;

    // Max over interior nodes of |(phi_{i+1}-2phi_i+phi_{i-1})/dz^2
    //                              + c dphi_i + f(phi_i)|.
    double fd_crosscheck(const ReactionFn& f) const;

    bool strictly_decreasing() const {
        for (size_t i = 1; i < phi_.size(); ++i)
            if (!(phi_[i] < phi_[i - 1])) return false;
        return true;
    }

    void write_csv(const std::string& path) const;

private:
    double c_;
    double zmin_;
    double dz_;
    std::vector<double> phi_;
    std::vector<double> dphi_;
    double mu_plus_;
};

// Integrates phi'' + c phi' + f(phi) = 0 from the unstable manifold at
// phi=1 until phi <= 1e-8, shifts so phi(0)=1/2 and resamples onto a z-grid
// aligned with 0. Throws if c < minimal_speed(f) or the shoot stalls.
FrontProfile shoot_profile(const ReactionFn& f, double c, double zstep);

// Retracting supersolution of Lemma-style form
//   v^T(t,x) = 2 sum_{e' in S} phi(x.e' - c*(t-T) + R/2),
// with S an eps-net of the unit sphere and R chosen so phi(R/2) < lambda/(2n).
class Supersolution {
public:
    Supersolution(FrontProfile profile, ReactionFn f, std::vector<VecN> dirs, double R,
                  double T, double lambda, double eps)
        : profile_(std::move(profile)), f_(std::move(f)), dirs_(std::move(dirs)), R_(R), T_(T),
          lambda_(lambda), eps_(eps) {}

    double eval(double t, const VecN& x) const {
        double s = 0.0;
        for (const auto& e : dirs_)
            s += profile_.eval(x.dot(e) - profile_.speed() * (t - T_) + 0.5 * R_);
        return 2.0 * s;
    }

    const std::vector<VecN>& directions() const { return dirs_; }
    double shift_R() const { return R_; }
    double horizon() const { return T_; }
    double eps() const { return eps_; }
    double lambda() const { return lambda_; }
    const FrontProfile& profile() const { return profile_; }
    const ReactionFn& reaction() const { return f_; }

private:
    FrontProfile profile_;
    ReactionFn f_;
    std::vector<VecN> dirs_;
    double R_;
    double T_;
    double lambda_;
    double eps_;
};

// Builds the eps-net (uniform angles in 2D, cover-certified Fibonacci sphere
// in 3D) and picks R. Requires profile at speed c* = minimal_speed(f),
// c > c*, eps in (0,1/2) with (1-eps)c > c*.
Supersolution build_supersolution(const FrontProfile& profile, const ReactionFn& f,
                                  double lambda, double c, double T, double eps, int dim);

// min over sample points of
//   sum_i 2 f(phi_i) - f(sum_i 2 phi_i),
// the PDE residual of v after the per-front identity cancels; must be
// >= -1e-10 for a KPP reaction.
double supersolution_residual(const Supersolution& v,
                              const std::vector<std::pair<double, VecN>>& sample_points);

struct FrontFit {
    double c_fit = 0.0;      // coefficient of t
    double shift_fit = 0.0;  // constant
    double log_coef = 0.0;   // coefficient of ln t
};

// Least squares of position ~ a*t + b*ln t + d. Needs >= 20 samples whose
// times span at least a factor 3. c_ref detrends the data before fitting
// (a is recovered as c_ref plus the residual slope), which conditions the
// normal equations when c_ref is near the true speed; the result is the
// same fit. Throws FitError on a degenerate design matrix.
FrontFit fit_front_position(const std::vector<std::pair<double, double>>& level_curve,
                            double c_ref = 0.0);

}  // namespace kpplab

#include "kpplab/fronts.hpp"

#include <cmath>
#include <fstream>

#include "kpplab/rng.hpp"

namespace kpplab {

namespace {

struct PhasePoint {
    double phi, p;
};

PhasePoint rhs(const ReactionFn& f, PhasePoint s, double c) {
    return {s.p, -c * s.p - f(s.phi)};
}

PhasePoint rk4_step(const ReactionFn& f, PhasePoint s, double c, double h) {
    PhasePoint k1 = rhs(f, s, c);
    PhasePoint k2 = rhs(f, {s.phi + 0.5 * h * k1.phi, s.p + 0.5 * h * k1.p}, c);
    PhasePoint k3 = rhs(f, {s.phi + 0.5 * h * k2.phi, s.p + 0.5 * h * k2.p}, c);
    PhasePoint k4 = rhs(f, {s.phi + h * k3.phi, s.p + h * k3.p}, c);
    return {s.phi + h / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi),
            s.p + h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p)};
}

// Cubic Hermite evaluation on an interval of width h, local coordinate s.
double hermite(double f0, double d0, double f1, double d1, double h, double s) {
    double s2 = s * s, s3 = s2 * s;
    return f0 * (2 * s3 - 3 * s2 + 1) + h * d0 * (s3 - 2 * s2 + s) + f1 * (-2 * s3 + 3 * s2) +
           h * d1 * (s3 - s2);
}

double hermite_deriv(double f0, double d0, double f1, double d1, double h, double s) {
    double s2 = s * s;
    return (f0 * (6 * s2 - 6 * s) + h * d0 * (3 * s2 - 4 * s + 1) + f1 * (-6 * s2 + 6 * s) +
            h * d1 * (3 * s2 - 2 * s)) /
           h;
}

}  // namespace

double FrontProfile::inverse(double level) const {
    if (level >= phi_.front()) return zmin_;
    if (level <= phi_.back()) {
        // continue on the exponential tail
        return zmax() + std::log(level / phi_.back()) / mu_plus_;
    }
    double lo = zmin_, hi = zmax();
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (eval(mid) > level ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double FrontProfile::ode_residual(const ReactionFn& f) const {
    double worst = 0.0;
    for (size_t i = 2; i + 2 < phi_.size(); ++i) {
        double dp = (-dphi_[i + 2] + 8.0 * dphi_[i + 1] - 8.0 * dphi_[i - 1] + dphi_[i - 2]) /
                    (12.0 * dz_);
        worst = std::max(worst, std::abs(dp + c_ * dphi_[i] + f(phi_[i])));
    }
    return worst;
}

double FrontProfile::fd_crosscheck(const ReactionFn& f) const {
    double worst = 0.0;
    for (size_t i = 1; i + 1 < phi_.size(); ++i) {
        double d2 = (phi_[i + 1] - 2.0 * phi_[i] + phi_[i - 1]) / (dz_ * dz_);
        worst = std::max(worst, std::abs(d2 + c_ * dphi_[i] + f(phi_[i])));
    }
    return worst;
}

void FrontProfile::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "z,phi,dphi\n";
    out.precision(17);
    for (size_t i = 0; i < phi_.size(); ++i)
        out << zmin_ + i * dz_ << "," << phi_[i] << "," << dphi_[i] << "\n";
}

FrontProfile shoot_profile(const ReactionFn& f, double c, double zstep) {
    if (zstep <= 0.0 || zstep > 0.01) throw ConfigError("shoot_profile: zstep must be in (0, 0.01]");
    double cstar = minimal_speed(f);
    if (c < cstar - 1e-12)
        throw ConfigError("shoot_profile: c below the minimal speed (profile would oscillate)");

    // one-sided derivative at 1 (f(1)=0); the extended f is kinked there
    const double e1 = 1e-6;
    double fp1 = -f(1.0 - e1) / e1;
    double disc = c * c - 4.0 * fp1;
    double mu = 0.5 * (-c + std::sqrt(disc));
    if (!(mu > 1e-8))
        throw IntegrationFailure(
            "shoot_profile: trajectory leaves phi=1 algebraically; need f'(1) < 0");

    const double start_gap = 1e-8;
    PhasePoint s{1.0 - start_gap, -mu * start_gap};
    std::vector<double> phis{s.phi}, ps{s.p};
    const double h = zstep;
    const size_t max_steps = static_cast<size_t>(2e5 / h);
    while (s.phi > 1e-8) {
        s = rk4_step(f, s, c, h);
        if (!std::isfinite(s.phi) || !std::isfinite(s.p))
            throw IntegrationFailure("shoot_profile: non-finite state");
        if (s.phi > 1.0 + 1e-9 || s.phi < -1e-9)
            throw IntegrationFailure("shoot_profile: trajectory left [0,1]");
        phis.push_back(s.phi);
        ps.push_back(s.p);
        if (phis.size() > max_steps)
            throw IntegrationFailure("shoot_profile: no convergence to 0");
    }

    // locate phi = 1/2 by Newton on the bracketing Hermite cubic
    size_t ih = 0;
    while (ih + 1 < phis.size() && phis[ih + 1] > 0.5) ++ih;
    double sloc = 0.5;
    for (int it = 0; it < 60; ++it) {
        double val = hermite(phis[ih], ps[ih], phis[ih + 1], ps[ih + 1], h, sloc) - 0.5;
        double der = hermite_deriv(phis[ih], ps[ih], phis[ih + 1], ps[ih + 1], h, sloc) * h;
        double step = val / der;
        sloc -= step;
        sloc = std::min(1.0, std::max(0.0, sloc));
        if (std::abs(step) < 1e-15) break;
    }
    double z_half = (ih + sloc) * h;

    // resample onto a grid aligned with z=0 at the half level
    double z_end = (phis.size() - 1) * h;
    long kmin = static_cast<long>(std::ceil((0.0 - z_half) / h));
    long kmax = static_cast<long>(std::floor((z_end - z_half) / h));
    std::vector<double> rphi, rdphi;
    rphi.reserve(kmax - kmin + 1);
    rdphi.reserve(kmax - kmin + 1);
    for (long k = kmin; k <= kmax; ++k) {
        double z = k * h + z_half;
        size_t i = std::min(phis.size() - 2, static_cast<size_t>(std::max(0.0, z / h)));
        double sl = z / h - i;
        rphi.push_back(hermite(phis[i], ps[i], phis[i + 1], ps[i + 1], h, sl));
        rdphi.push_back(hermite_deriv(phis[i], ps[i], phis[i + 1], ps[i + 1], h, sl));
    }
    size_t zero_node = static_cast<size_t>(-kmin);
    rphi[zero_node] = 0.5;  // exact normalization

    double disc0 = c * c - 4.0 * f.deriv_at_0();
    double mu_plus = 0.5 * (-c + std::sqrt(std::max(disc0, 0.0)));

    return FrontProfile(c, kmin * h, h, std::move(rphi), std::move(rdphi), mu_plus);
}

Supersolution build_supersolution(const FrontProfile& profile, const ReactionFn& f,
                                  double lambda, double c, double T, double eps, int dim) {
    if (!(eps > 0.0 && eps < 0.5)) throw ConfigError("build_supersolution: eps must be in (0,1/2)");
    if (!(lambda > 0.0)) throw ConfigError("build_supersolution: lambda must be positive");
    if (!(T > 0.0)) throw ConfigError("build_supersolution: T must be positive");
    double cstar = minimal_speed(f);
    if (std::abs(profile.speed() - cstar) > 1e-9)
        throw ConfigError("build_supersolution: profile must travel at the minimal speed");
    if (!(c > cstar)) throw ConfigError("build_supersolution: need c > c*");
    if (!((1.0 - eps) * c > cstar))
        throw ConfigError("build_supersolution: eps too large, (1-eps)c must exceed c*");

    std::vector<VecN> dirs;
    if (dim == 1) {
        dirs = {VecN::axis(1, 0, 1.0), VecN::axis(1, 0, -1.0)};
    } else if (dim == 2) {
        int n = std::max<int>(3, static_cast<int>(std::ceil(M_PI / std::asin(0.5 * eps))));
        for (int k = 0; k < n; ++k) {
            double th = 2.0 * M_PI * k / n;
            dirs.push_back(VecN(std::cos(th), std::sin(th)));
        }
    } else if (dim == 3) {
        // Fibonacci sphere, densified until the cover is certified on a
        // seeded sample of random unit vectors.
        int n = std::max<int>(8, static_cast<int>(std::ceil(16.0 / (eps * eps))));
        for (int attempt = 0; attempt < 16; ++attempt) {
            dirs.clear();
            const double ga = M_PI * (3.0 - std::sqrt(5.0));
            for (int k = 0; k < n; ++k) {
                double z = 1.0 - 2.0 * (k + 0.5) / n;
                double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
                dirs.push_back(VecN(rho * std::cos(ga * k), rho * std::sin(ga * k), z));
            }
            Rng rng(1234);
            double worst = 0.0;
            for (int trial = 0; trial < 4096; ++trial) {
                VecN u = rng.unit_vector(3);
                double best = 2.0;
                for (const auto& d : dirs) best = std::min(best, distance(u, d));
                worst = std::max(worst, best);
            }
            if (worst <= eps) break;
            n = static_cast<int>(std::ceil(n * 1.3));
        }
    } else {
        throw ConfigError("build_supersolution: dim must be 1, 2 or 3");
    }

    const double n = static_cast<double>(dirs.size());
    double target = std::min(0.9 * lambda / (2.0 * n), 0.49);
    double R = 2.0 * profile.inverse(target);
    R = std::max(R, 1e-6);

    return Supersolution(profile, f, std::move(dirs), R, T, lambda, eps);
}

double supersolution_residual(const Supersolution& v,
                              const std::vector<std::pair<double, VecN>>& sample_points) {
    const auto& f = v.reaction();
    const auto& profile = v.profile();
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [t, x] : sample_points) {
        double sum = 0.0, sum_f = 0.0;
        for (const auto& e : v.directions()) {
            double phi = profile.eval(x.dot(e) - profile.speed() * (t - v.horizon()) +
                                      0.5 * v.shift_R());
            sum += 2.0 * phi;
            sum_f += 2.0 * f(phi);
        }
        worst = std::min(worst, sum_f - f(sum));
    }
    return worst;
}

FrontFit fit_front_position(const std::vector<std::pair<double, double>>& level_curve,
                            double c_ref) {
    if (level_curve.size() < 20) throw ConfigError("fit_front_position: need >= 20 samples");
    double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0;
    for (auto& [t, x] : level_curve) {
        (void)x;
        if (t <= 0.0) throw ConfigError("fit_front_position: times must be positive");
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    if (tmax < 3.0 * tmin - 1e-9)
        throw ConfigError("fit_front_position: times must span at least a factor 3");

    // normal equations for y - c_ref*t ~ a'*t + b*ln t + d
    long double A[3][3] = {{0}}, rhs[3] = {0};
    for (auto& [t, y] : level_curve) {
        long double row[3] = {static_cast<long double>(t), std::log(static_cast<long double>(t)),
                              1.0L};
        long double yy = y - c_ref * t;
        for (int i = 0; i < 3; ++i) {
            rhs[i] += row[i] * yy;
            for (int j = 0; j < 3; ++j) A[i][j] += row[i] * row[j];
        }
    }
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(static_cast<double>(A[perm[r]][col])) >
                std::abs(static_cast<double>(A[perm[piv]][col])))
                piv = r;
        std::swap(perm[col], perm[piv]);
        if (std::abs(static_cast<double>(A[perm[col]][col])) < 1e-30)
            throw FitError("fit_front_position: degenerate design matrix");
        for (int r = col + 1; r < 3; ++r) {
            long double m = A[perm[r]][col] / A[perm[col]][col];
            for (int cc = col; cc < 3; ++cc) A[perm[r]][cc] -= m * A[perm[col]][cc];
            rhs[perm[r]] -= m * rhs[perm[col]];
        }
    }
    long double sol[3];
    for (int row = 2; row >= 0; --row) {
        long double s = rhs[perm[row]];
        for (int cc = row + 1; cc < 3; ++cc) s -= A[perm[row]][cc] * sol[cc];
        sol[row] = s / A[perm[row]][row];
    }
    FrontFit fit;
    fit.c_fit = static_cast<double>(sol[0]) + c_ref;
    fit.log_coef = static_cast<double>(sol[1]);
    fit.shift_fit = static_cast<double>(sol[2]);
    return fit;
}

}  // namespace kpplab

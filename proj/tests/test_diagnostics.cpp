#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kpplab/diagnostics.hpp"
#include "kpplab/rng.hpp"

using namespace kpplab;

namespace {

GridSpec grid2d(double lo, double hi, double h) {
    return GridSpec::from_box(Box{VecN(lo, lo), VecN(hi, hi)}, h);
}

GridField sample_2d(const GridSpec& g, const std::function<double(double, double)>& fn,
                    double t = 2.0) {
    GridField u(g, t);
    for (size_t i = 0; i < u.values.size(); ++i) {
        VecN x = g.coord(g.unindex(i));
        u.values[i] = fn(x[0], x[1]);
    }
    return u;
}

// Jacobi eigenvalue oracle for symmetric matrices (independent of the
// characteristic-coefficient path under test).
void jacobi_eigenvalues(double A[3][3], int n, double eig[3]) {
    double a[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = A[i][j];
    for (int sweep = 0; sweep < 128; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                double theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    for (int i = 0; i < n; ++i) eig[i] = a[i][i];
}

double sigma_from_eigs(const double eig[3], int n, int k) {
    if (k == 1) return eig[0] + eig[1] + (n > 2 ? eig[2] : 0.0);
    if (k == 2) {
        if (n == 2) return eig[0] * eig[1];
        return eig[0] * eig[1] + eig[0] * eig[2] + eig[1] * eig[2];
    }
    return eig[0] * eig[1] * eig[2];
}

}  // namespace

TEST_CASE("sigma_k via coefficients matches the eigenvalue oracle (1000 trials)") {
    Rng rng(2718);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = trial % 2 == 0 ? 2 : 3;
        double A[3][3] = {{0}};
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) A[i][j] = A[j][i] = rng.uniform(-2.0, 2.0);
        double eig[3] = {0, 0, 0};
        jacobi_eigenvalues(A, n, eig);
        for (int k = 1; k <= n; ++k) {
            double got = sigma_from_matrix(A, n, k);
            double want = sigma_from_eigs(eig, n, k);
            CHECK(std::abs(got - want) <= 1e-10);
        }
    }
}

TEST_CASE("sigma_2 vanishes identically for x1^2 + x2 (not one-dimensional)") {
    auto g = grid2d(-2.0, 2.0, 0.1);
    auto u = sample_2d(g, [](double x, double y) { return 0.01 * (x * x + y); });
    Box w{VecN(-1.5, -1.5), VecN(1.5, 1.5)};
    auto r = hessian_sigma(u, 2, w);
    CHECK(r.sup_abs <= 1e-10);  // exact on quadratics
}

TEST_CASE("sigma_2 of x1^2 + x2^2 is the constant 4 (scaled)") {
    auto g = grid2d(-2.0, 2.0, 0.1);
    auto u = sample_2d(g, [](double x, double y) { return 0.01 * (x * x + y * y); });
    Box w{VecN(-1.0, -1.0), VecN(1.0, 1.0)};
    auto r = hessian_sigma(u, 2, w);
    CHECK(r.sup_abs == doctest::Approx(4.0 * 0.01 * 0.01).epsilon(1e-8));
}

TEST_CASE("hessian_sigma guards") {
    auto g = grid2d(-2.0, 2.0, 0.1);
    auto u = sample_2d(g, [](double x, double y) { return x + y; });
    Box ok{VecN(-1.0, -1.0), VecN(1.0, 1.0)};
    CHECK_THROWS_AS(hessian_sigma(u, 1, ok), ConfigError);
    CHECK_THROWS_AS(hessian_sigma(u, 3, ok), ConfigError);
    Box tooclose{VecN(-2.0, -2.0), VecN(1.0, 1.0)};
    CHECK_THROWS_AS(hessian_sigma(u, 2, tooclose), ConfigError);
    auto early = sample_2d(g, [](double x, double y) { return x + y; }, 0.5);
    CHECK_THROWS_AS(hessian_sigma(early, 2, ok), ConfigError);
}

TEST_CASE("planarity defect: synthetic planar front is planar") {
    auto f = ReactionFn::logistic();
    auto phi = shoot_profile(f, 2.0, 0.005);
    auto g = grid2d(-8.0, 8.0, 0.1);
    VecN e(0.6, 0.8);
    auto u = sample_2d(g, [&](double x, double y) { return phi.eval(0.6 * x + 0.8 * y); });
    CHECK(planarity_defect(u, VecN(0.0, 0.0)) <= 1e-3);
    // the fitted direction points where u decreases, i.e. along the normal
    VecN dir = planarity_direction(u, VecN(0.0, 0.0));
    CHECK(angle_between(dir, e) <= 2.0 * M_PI / 180.0);
}

TEST_CASE("planarity defect: crossing fronts are not planar") {
    auto f = ReactionFn::logistic();
    auto phi = shoot_profile(f, 2.0, 0.005);
    auto g = grid2d(-16.0, 16.0, 0.1);
    double s = std::sqrt(0.5);
    auto u = sample_2d(g, [&](double x, double y) {
        return std::min(1.0, phi.eval(s * (y - x)) + phi.eval(s * (y + x)));
    });
    double planar_ref = 1e-3;
    for (double r : {8.0, 12.0}) CHECK(planarity_defect(u, VecN(0.0, 0.0), r) > 30.0 * planar_ref);
    CHECK(planarity_defect(u, VecN(0.0, 0.0), 12.0) > 0.08);
}

TEST_CASE("planarity defect invariances: rotation by 90 degrees and value scaling") {
    auto f = ReactionFn::logistic();
    auto phi = shoot_profile(f, 2.0, 0.005);
    auto g = grid2d(-6.0, 6.0, 0.1);
    auto base = [&](double x, double y) { return phi.eval(0.6 * x + 0.8 * y - 0.7); };
    auto u = sample_2d(g, base);
    // rotate the field by 90 degrees on the lattice: u'(x,y) = u(y,-x)
    auto v = sample_2d(g, [&](double x, double y) { return base(y, -x); });
    double du = planarity_defect(u, VecN(0.0, 0.0));
    double dv = planarity_defect(v, VecN(0.0, 0.0));
    CHECK(std::abs(du - dv) <= 1e-6);

    for (double a : {0.5, 2.0}) {
        auto w = u;
        for (auto& val : w.values) val *= a;
        CHECK(planarity_defect(w, VecN(0.0, 0.0)) == doctest::Approx(du).epsilon(1e-12));
    }
}

TEST_CASE("planarity defect: flat regions report 0") {
    auto g = grid2d(-6.0, 6.0, 0.1);
    auto u = sample_2d(g, [](double, double) { return 0.7; });
    CHECK(planarity_defect(u, VecN(0.0, 0.0)) == 0.0);
}

TEST_CASE("extract_profile on a synthetic planar front matches phi") {
    auto f = ReactionFn::logistic();
    auto phi = shoot_profile(f, 2.0, 0.005);
    auto g = grid2d(-12.0, 12.0, 0.1);
    auto u = sample_2d(g, [&](double x, double y) {
        (void)x;
        return phi.eval(y - 1.3);
    });
    auto prof = extract_profile(u, VecN(0.0, 1.3), VecN(0.0, 1.0), 8.0);
    CHECK(profile_sup_distance(prof, phi) <= 1e-4);

    auto ones = sample_2d(g, [](double, double) { return 1.0; });
    auto flat = extract_profile(ones, VecN(0.0, 0.0), VecN(0.0, 1.0), 8.0);
    CHECK(profile_sup_distance(flat, phi) >= 0.4);  // non-front

    CHECK_THROWS_AS(extract_profile(u, VecN(0.0, 11.0), VecN(0.0, 1.0), 8.0), ConfigError);
}

TEST_CASE("level_set_radius: indicator reach is ~0 at t=0 and grows") {
    auto g = grid2d(-5.0, 5.0, 0.1);
    auto ball = SetDescriptor::ball(VecN(0.0, 0.0), 2.0);
    auto u0 = rasterize(ball, g);
    CHECK(level_set_radius(u0, 0.5, ball) <= 0.1 * std::sqrt(2.0));

    auto f = ReactionFn::logistic();
    SolverConfig cfg;
    cfg.dt = 2e-3;
    cfg.horizon = 1.0;
    cfg.snapshot_every = 1.0;
    auto u1 = run(u0, f, cfg);
    CHECK(level_set_radius(u1, 0.5, ball) > 0.0);

    auto zero = sample_2d(g, [](double, double) { return 0.0; });
    CHECK_THROWS_AS(level_set_radius(zero, 0.5, ball), EmptyLevelError);
    CHECK_THROWS_AS(level_set_radius(u0, 1.5, ball), ConfigError);
}

TEST_CASE("estimate_E_from_run: half-space cloud sits on e_N") {
    auto f = ReactionFn::logistic();
    GridSpec g = GridSpec::from_box(Box{VecN(0.0, -6.0), VecN(3.0, 18.0)}, 0.1);
    auto hs = SetDescriptor::half_space(VecN(0.0, 1.0), 0.0);
    SolverConfig cfg;
    cfg.dt = 2e-3;
    cfg.horizon = 5.0;
    cfg.snapshot_every = 1.0;
    std::vector<GridField> snaps;
    run(rasterize(hs, g), f, cfg, [&](const GridField& s) { snaps.push_back(s); });
    auto est = estimate_E_from_run(snaps, 0.05);
    REQUIRE(!est.empty());
    CHECK(est.max_angle_to(VecN(0.0, 1.0)) <= 5.0 * M_PI / 180.0);
}

TEST_CASE("estimate_E_from_run: ball cloud covers the circle") {
    auto f = ReactionFn::logistic();
    auto g = grid2d(-9.0, 9.0, 0.1);
    SolverConfig cfg;
    cfg.scheme = Scheme::Imex;
    cfg.dt = 0.05;
    cfg.horizon = 4.0;
    cfg.snapshot_every = 1.0;
    std::vector<GridField> snaps;
    run(rasterize(SetDescriptor::ball(VecN(0.0, 0.0), 1.0), g), f, cfg,
        [&](const GridField& s) { snaps.push_back(s); });
    auto est = estimate_E_from_run(snaps, 0.05);
    REQUIRE(!est.empty());
    CHECK(est.max_angular_gap_2d() <= 20.0 * M_PI / 180.0);
}

TEST_CASE("estimate_E_from_run: constant field gives an empty cloud") {
    auto g = grid2d(-3.0, 3.0, 0.1);
    std::vector<GridField> snaps;
    for (double t : {1.0, 2.0, 3.0})
        snaps.push_back(sample_2d(g, [](double, double) { return 1.0; }, t));
    auto est = estimate_E_from_run(snaps, 0.05);
    CHECK(est.empty());
}

TEST_CASE("estimate_E_from_run: mirrored runs give mirrored clouds") {
    auto f = ReactionFn::logistic();
    auto g = grid2d(-8.0, 8.0, 0.1);
    // the explicit scheme is exactly mirror-symmetric, so the clouds match
    // cell for cell
    SolverConfig cfg;
    cfg.dt = 2e-3;
    cfg.horizon = 3.0;
    cfg.snapshot_every = 1.0;
    auto U = SetDescriptor::ball(VecN(1.5, 0.5), 1.0);
    auto M = SetDescriptor::ball(VecN(-1.5, 0.5), 1.0);
    std::vector<GridField> sa, sb;
    run(rasterize(U, g), f, cfg, [&](const GridField& s) { sa.push_back(s); });
    run(rasterize(M, g), f, cfg, [&](const GridField& s) { sb.push_back(s); });
    auto ea = estimate_E_from_run(sa, 0.05);
    auto eb = estimate_E_from_run(sb, 0.05);
    REQUIRE(!ea.empty());
    REQUIRE(ea.directions.size() == eb.directions.size());
    // directions are collected in scan order, which the mirror permutes:
    // match each direction angularly against the mirrored cloud
    double worst = 0.0;
    for (const auto& da : ea.directions) {
        double best = M_PI;
        for (const auto& db : eb.directions) {
            VecN mirrored(-db[0], db[1]);
            best = std::min(best, angle_between(da, mirrored));
        }
        worst = std::max(worst, best);
    }
    CHECK(worst <= 1.0 * M_PI / 180.0);
}

TEST_CASE("truncation_error: huge truncation radius reproduces the run exactly") {
    auto f = ReactionFn::logistic();
    GridSpec g = GridSpec::from_box(Box{VecN(-6.0, -4.0), VecN(6.0, 8.0)}, 0.1);
    auto hs = SetDescriptor::half_space(VecN(0.0, 1.0), 0.0);
    SolverConfig cfg;
    cfg.scheme = Scheme::Imex;
    cfg.dt = 0.05;
    // 3*sigma*tau = 3*0.45*5 = 6.75 > grid half-width: nothing is cut
    auto rep = truncation_error(hs, 0.45, 5.0, g, f, cfg, 3.0, 1.0);
    CHECK(rep.sup_c0 == 0.0);
    CHECK(rep.sup_grad_diff == 0.0);
}

TEST_CASE("truncation_error guards") {
    auto f = ReactionFn::logistic();
    GridSpec g = GridSpec::from_box(Box{VecN(-6.0, -4.0), VecN(6.0, 8.0)}, 0.1);
    auto hs = SetDescriptor::half_space(VecN(0.0, 1.0), 0.0);
    SolverConfig cfg;
    cfg.scheme = Scheme::Imex;
    cfg.dt = 0.05;
    CHECK_THROWS_AS(truncation_error(hs, 0.45, 0.5, g, f, cfg), ConfigError);  // tau < 1
    // a v-shape violates the cone condition of the lemma
    CHECK_THROWS_AS(truncation_error(SetDescriptor::v_shape(1.0), 0.45, 5.0, g, f, cfg, 3.0, 0.5),
                    ScenarioError);
}

TEST_CASE("diagnostics report guards") {
    DiagnosticsReport rep;
    rep.add_sigma(2, 2, SigmaSample{2.0, 0.5, VecN(0.0, 0.0)});
    CHECK_THROWS_AS(rep.add_sigma(1, 2, SigmaSample{}), ConfigError);
    CHECK_THROWS_AS(rep.add_sigma(3, 2, SigmaSample{}), ConfigError);
    rep.extras["x"] = 1.0;
    rep.check_finite();
    rep.extras["bad"] = std::nan("");
    CHECK_THROWS_AS(rep.check_finite(), ConfigError);
}

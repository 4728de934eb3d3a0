#include "kpplab/reaction.hpp"

#include <cmath>
#include <limits>

#include "kpplab/rng.hpp"

namespace kpplab {

ReactionFn ReactionFn::logistic() {
    return ReactionFn("logistic", [](double s) { return s * (1.0 - s); }, 1.0);
}

ReactionFn ReactionFn::logistic_m(double m) {
    if (m < 1.0) throw ConfigError("logistic-m requires m >= 1");
    return ReactionFn("logistic-m:" + std::to_string(m),
                      [m](double s) { return s * std::pow(1.0 - s, m); }, 1.0);
}

ReactionFn ReactionFn::scaled_logistic(double r) {
    if (r <= 0.0) throw ConfigError("scaled-logistic requires r > 0");
    return ReactionFn("scaled-logistic:" + std::to_string(r),
                      [r](double s) { return r * s * (1.0 - s); }, r);
}

ReactionFn ReactionFn::by_name(const std::string& spec) {
    auto colon = spec.find(':');
    std::string base = spec.substr(0, colon);
    if (base == "logistic") return logistic();
    double param = colon == std::string::npos ? 0.0 : std::stod(spec.substr(colon + 1));
    if (base == "logistic-m") return logistic_m(colon == std::string::npos ? 1.0 : param);
    if (base == "scaled-logistic") {
        if (colon == std::string::npos) throw ConfigError("scaled-logistic needs a parameter");
        return scaled_logistic(param);
    }
    throw ConfigError("unknown reaction: " + spec);
}

namespace {
double eval_checked(const ReactionFn& f, double s) {
    double v = f(s);
    if (!std::isfinite(v))
        throw InvalidFunctionError("reaction '" + f.name() + "' is non-finite at s=" +
                                   std::to_string(s));
    return v;
}
}  // namespace

KppValidationReport validate_kpp(const ReactionFn& f, int samples) {
    if (samples < 16) throw ConfigError("validate_kpp requires samples >= 16");
    const double tol = 1e-12;
    KppValidationReport rep;

    rep.endpoints_ok = std::abs(eval_checked(f, 0.0)) <= tol && std::abs(eval_checked(f, 1.0)) <= tol;

    rep.positive_ok = true;
    rep.ratio_monotone_ok = true;
    double prev_ratio = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= samples; ++i) {
        double s = static_cast<double>(i) / samples;  // uniform grid of (0,1]
        double v = eval_checked(f, s);
        if (s < 1.0 && v <= 0.0) rep.positive_ok = false;
        double ratio = v / s;
        if (ratio > prev_ratio + tol) {
            rep.ratio_monotone_ok = false;
            rep.worst_ratio_violation = std::max(rep.worst_ratio_violation, ratio - prev_ratio);
        }
        prev_ratio = ratio;
    }

    rep.zero_extension_ok = true;
    for (double s : {-2.0, -0.5, -1e-9, 1.0 + 1e-9, 1.5, 3.0})
        if (eval_checked(f, s) != 0.0) rep.zero_extension_ok = false;

    rep.deriv_positive_ok = f.deriv_at_0() > 0.0;

    // f'(0) is supplied, not differenced; cross-check it against a centered
    // difference of the un-extended function, step 1e-6.
    const double h = 1e-6;
    rep.deriv_fd_estimate = (f.raw(h) - f.raw(-h)) / (2.0 * h);
    if (!std::isfinite(rep.deriv_fd_estimate))
        throw InvalidFunctionError("reaction '" + f.name() + "' is non-finite near 0");
    rep.deriv_crosscheck_ok = std::abs(rep.deriv_fd_estimate - f.deriv_at_0()) <= 1e-4;

    return rep;
}

double minimal_speed(const ReactionFn& f) {
    if (!(f.deriv_at_0() > 0.0))
        throw InvalidFunctionError("minimal_speed: f'(0) must be positive");
    return 2.0 * std::sqrt(f.deriv_at_0());
}

bool subadditivity_check(const ReactionFn& f, int trials, uint64_t seed) {
    Rng rng(seed);
    for (int i = 0; i < trials; ++i) {
        double a = rng.uniform(0.0, 2.0);
        double b = rng.uniform(0.0, 2.0);
        if (f(a + b) > f(a) + f(b) + 1e-12) return false;
    }
    return true;
}

}  // namespace kpplab

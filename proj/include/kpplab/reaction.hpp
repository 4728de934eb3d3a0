#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "kpplab/errors.hpp"

namespace kpplab {

// A KPP nonlinearity f together with its exact derivative at 0. The zero
// extension outside [0,1] is applied by operator(). Immutable after
// construction; safe for concurrent shared reads.
class ReactionFn {
public:
    ReactionFn(std::string name, std::function<double(double)> f, double deriv_at_0)
        : name_(std::move(name)), f_(std::move(f)), deriv_at_0_(deriv_at_0) {}

    double operator()(double s) const {
        if (s < 0.0 || s > 1.0) return 0.0;
        return f_(s);
    }

    double deriv_at_0() const { return deriv_at_0_; }
    const std::string& name() const { return name_; }

    // Un-extended evaluation; validation uses it for the centered difference
    // at 0, which must straddle the origin.
    double raw(double s) const { return f_(s); }

    static ReactionFn logistic();                 // s(1-s)
    static ReactionFn logistic_m(double m);       // s(1-s)^m, m >= 1
    static ReactionFn scaled_logistic(double r);  // r*s(1-s)

    // Parses "logistic", "logistic-m:<m>", "scaled-logistic:<r>".
    static ReactionFn by_name(const std::string& spec);

private:
    std::string name_;
    std::function<double(double)> f_;
    double deriv_at_0_;
};

struct KppValidationReport {
    bool endpoints_ok = false;       // f(0)=f(1)=0 within 1e-12
    bool positive_ok = false;        // f>0 on sampled (0,1)
    bool ratio_monotone_ok = false;  // f(s)/s nonincreasing up to 1e-12 slack
    bool zero_extension_ok = false;  // f=0 outside [0,1] on sampled points
    bool deriv_positive_ok = false;  // f'(0) > 0
    bool deriv_crosscheck_ok = false;  // centered difference agrees within 1e-4
    double worst_ratio_violation = 0.0;
    double deriv_fd_estimate = 0.0;

    bool pass() const {
        return endpoints_ok && positive_ok && ratio_monotone_ok && zero_extension_ok &&
               deriv_positive_ok && deriv_crosscheck_ok;
    }
};

// Checks the KPP conditions on a uniform sample grid of (0,1].
// Throws InvalidFunctionError if f evaluates non-finite anywhere sampled.
KppValidationReport validate_kpp(const ReactionFn& f, int samples);

// c* = 2*sqrt(f'(0)). Throws InvalidFunctionError if f'(0) <= 0.
double minimal_speed(const ReactionFn& f);

// Draws `trials` pairs (a,b) uniformly from [0,2]^2 and tests
// f(a+b) <= f(a)+f(b)+1e-12 for all of them.
bool subadditivity_check(const ReactionFn& f, int trials, uint64_t seed);

}  // namespace kpplab

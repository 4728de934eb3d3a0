#pragma once

#include <cstdint>
#include <random>

#include "kpplab/vec.hpp"

namespace kpplab {

// Deterministic RNG wrapper. Scaling is done by hand so that streams are
// reproducible across standard library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    uint64_t raw() { return gen_(); }

    int index(int n) { return static_cast<int>(uniform() * n) % n; }

    double normal() {
        // Marsaglia polar method, deterministic for a fixed seed.
        for (;;) {
            double u = uniform(-1.0, 1.0), v = uniform(-1.0, 1.0);
            double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    VecN unit_vector(int dim) {
        if (dim == 1) return VecN::axis(1, 0, uniform() < 0.5 ? -1.0 : 1.0);
        for (;;) {
            VecN v(dim);
            for (int i = 0; i < dim; ++i) v[i] = normal();
            double n = v.norm();
            if (n > 1e-12) return v * (1.0 / n);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace kpplab

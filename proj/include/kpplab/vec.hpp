#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace kpplab {

inline constexpr int kMaxDim = 3;

// Small fixed-capacity vector carrying its own dimension (N = 1, 2 or 3).
struct VecN {
    int dim = 0;
    std::array<double, kMaxDim> c{0.0, 0.0, 0.0};

    VecN() = default;
    explicit VecN(int n) : dim(n) {}
    VecN(double x, double y) : dim(2), c{x, y, 0.0} {}
    VecN(double x, double y, double z) : dim(3), c{x, y, z} {}

    static VecN of_dim(int n, double fill = 0.0) {
        VecN v(n);
        for (int i = 0; i < n; ++i) v.c[i] = fill;
        return v;
    }
    static VecN axis(int n, int k, double scale = 1.0) {
        VecN v(n);
        v.c[k] = scale;
        return v;
    }

    double& operator[](int i) { return c[i]; }
    double operator[](int i) const { return c[i]; }

    VecN operator+(const VecN& o) const {
        VecN r(dim);
        for (int i = 0; i < dim; ++i) r.c[i] = c[i] + o.c[i];
        return r;
    }
    VecN operator-(const VecN& o) const {
        VecN r(dim);
        for (int i = 0; i < dim; ++i) r.c[i] = c[i] - o.c[i];
        return r;
    }
    VecN operator*(double s) const {
        VecN r(dim);
        for (int i = 0; i < dim; ++i) r.c[i] = c[i] * s;
        return r;
    }
    VecN& operator+=(const VecN& o) {
        for (int i = 0; i < dim; ++i) c[i] += o.c[i];
        return *this;
    }

    double dot(const VecN& o) const {
        double s = 0;
        for (int i = 0; i < dim; ++i) s += c[i] * o.c[i];
        return s;
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }

    VecN normalized() const {
        double n = norm();
        if (n == 0.0) throw std::domain_error("cannot normalize zero vector");
        return *this * (1.0 / n);
    }
};

inline VecN operator*(double s, const VecN& v) { return v * s; }

inline double distance(const VecN& a, const VecN& b) { return (a - b).norm(); }

// Angle between two directions, in radians; arguments need not be unit.
inline double angle_between(const VecN& a, const VecN& b) {
    double d = a.dot(b) / (a.norm() * b.norm());
    d = std::max(-1.0, std::min(1.0, d));
    return std::acos(d);
}

struct Box {
    VecN lo, hi;
    int dim() const { return lo.dim; }
    bool contains(const VecN& x) const {
        for (int i = 0; i < lo.dim; ++i)
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        return true;
    }
};

}  // namespace kpplab

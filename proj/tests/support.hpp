#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "refcoef/canonical.hpp"
#include "refcoef/halfplane.hpp"
#include "refcoef/jacobi.hpp"

namespace testing {

using refcoef::cplx;

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int k = 0; k < n; ++k) {
        xs[k] = lo + (hi - lo) * k / (n - 1);
    }
    return xs;
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(unsigned long long seed) : gen(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen); }

    // z with Im z in [ymin, ymax], Re z in [-xmax, xmax]
    cplx upper(double xmax = 3.0, double ymin = 0.05, double ymax = 3.0) {
        return {uniform(-xmax, xmax), uniform(ymin, ymax)};
    }

    cplx complex(double r = 2.0) { return {uniform(-r, r), uniform(-r, r)}; }

    refcoef::JacobiOperator jacobi(int max_len = 6) {
        const long len = integer(1, max_len);
        std::vector<double> a(len), b(len);
        for (long i = 0; i < len; ++i) {
            a[i] = uniform(0.5, 2.0);
            b[i] = uniform(-2.0, 2.0);
        }
        return {integer(-4, 4), a, b};
    }

    refcoef::Segment segment() {
        // H = R(theta) diag(lambda, 1 - lambda) R(theta)^T, trace 1, PSD
        const double lambda = uniform(0.0, 1.0);
        const double th = uniform(0.0, 3.14159);
        const double c = std::cos(th), s = std::sin(th);
        refcoef::Segment seg;
        seg.length = uniform(0.1, 1.5);
        seg.h11 = lambda * c * c + (1 - lambda) * s * s;
        seg.h22 = 1.0 - seg.h11;
        seg.h12 = (lambda - (1 - lambda)) * c * s;
        return seg;
    }

    refcoef::CanonicalSystem system(int max_len = 5) {
        std::vector<refcoef::Segment> segs(integer(1, max_len));
        for (auto& s : segs) {
            s = segment();
        }
        return refcoef::CanonicalSystem(segs);
    }

    refcoef::UnimodularMatrix real_unimodular() {
        while (true) {
            const double a = uniform(-2, 2), b = uniform(-2, 2), c = uniform(-2, 2), d = uniform(-2, 2);
            const double det = a * d - b * c;
            if (std::abs(det) > 0.2) {
                // a negative determinant would need an imaginary root; swap columns instead
                return det > 0 ? refcoef::UnimodularMatrix(a, b, c, d)
                               : refcoef::UnimodularMatrix(b, a, d, c);
            }
        }
    }
};

}  // namespace testing

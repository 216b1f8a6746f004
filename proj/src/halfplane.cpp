#include "refcoef/halfplane.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "refcoef/error.hpp"

namespace refcoef {

namespace {

constexpr double kPoleThreshold = 1e-300;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

ExtendedComplex::ExtendedComplex(cplx value) : value_(value) {
    if (!finite(value)) {
        throw DomainError("ExtendedComplex: finite value expected");
    }
}

cplx ExtendedComplex::value() const {
    if (!value_) {
        throw DomainError("ExtendedComplex: value() on the point at infinity");
    }
    return *value_;
}

double max_abs_diff(const Mat2& x, const Mat2& y) {
    return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c),
                     std::abs(x.d - y.d)});
}

UnimodularMatrix::UnimodularMatrix(cplx a, cplx b, cplx c, cplx d) {
    if (!finite(a) || !finite(b) || !finite(c) || !finite(d)) {
        throw DomainError("UnimodularMatrix: non-finite entry");
    }
    const cplx det = a * d - b * c;
    if (std::abs(det) == 0.0 || !finite(det)) {
        throw DomainError("UnimodularMatrix: singular matrix");
    }
    const cplx s = std::sqrt(det);
    m_ = {a / s, b / s, c / s, d / s};
}

UnimodularMatrix UnimodularMatrix::symplectic() { return {0.0, -1.0, 1.0, 0.0}; }

UnimodularMatrix UnimodularMatrix::negation() { return {1.0, 0.0, 0.0, -1.0}; }

UnimodularMatrix UnimodularMatrix::inverse() const {
    return UnimodularMatrix(Mat2{m_.d, -m_.b, -m_.c, m_.a}, Trusted{});
}

bool UnimodularMatrix::is_real(double tol) const {
    return std::abs(m_.a.imag()) <= tol && std::abs(m_.b.imag()) <= tol &&
           std::abs(m_.c.imag()) <= tol && std::abs(m_.d.imag()) <= tol;
}

UnimodularMatrix operator*(const UnimodularMatrix& x, const UnimodularMatrix& y) {
    const Mat2 p = x.m_ * y.m_;
    if (!finite(p.a) || !finite(p.b) || !finite(p.c) || !finite(p.d)) {
        throw NumericalError("UnimodularMatrix: product overflow");
    }
    return UnimodularMatrix(p, UnimodularMatrix::Trusted{});
}

double unimodularity_defect(const Mat2& m) {
    const double scale = std::max(1.0, std::abs(m.a * m.d) + std::abs(m.b * m.c));
    return std::abs(m.det() - 1.0) / scale;
}

ExtendedComplex mobius_apply(const UnimodularMatrix& m, const ExtendedComplex& w) {
    if (w.is_infinite()) {
        if (std::abs(m.c()) < kPoleThreshold) {
            return ExtendedComplex::infinity();
        }
        return m.a() / m.c();
    }
    const cplx z = w.value();
    const cplx den = m.c() * z + m.d();
    if (std::abs(den) < kPoleThreshold) {
        return ExtendedComplex::infinity();
    }
    const cplx out = (m.a() * z + m.b()) / den;
    if (!finite(out)) {
        return ExtendedComplex::infinity();
    }
    return out;
}

double hyperbolic_distance(cplx w1, cplx w2) {
    if (!(w1.imag() > 0.0) || !(w2.imag() > 0.0)) {
        throw DomainError("hyperbolic_distance: points must lie in the upper half plane");
    }
    // arccosh(1 + |dw|^2 / (2 y1 y2)) == 2 asinh(|dw| / (2 sqrt(y1 y2))), the
    // latter without cancellation for nearby points.
    return 2.0 * std::asinh(std::abs(w1 - w2) / (2.0 * std::sqrt(w1.imag() * w2.imag())));
}

cplx branch_log(cplx w) {
    if (w == cplx(0.0, 0.0)) {
        throw DomainError("branch_log: logarithm of zero");
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double arg = std::atan2(w.imag(), w.real());
    if (arg < 0.0) {
        arg += two_pi;
        // arguments just below 2*pi can round up onto the excluded endpoint
        if (arg >= two_pi) {
            arg = std::nextafter(two_pi, 0.0);
        }
    }
    if (arg == 0.0) {
        arg = 0.0;  // drop a negative zero
    }
    return {std::log(std::abs(w)), arg};
}

}  // namespace refcoef

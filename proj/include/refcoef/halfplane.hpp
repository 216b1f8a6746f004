#pragma once

// Geometry of the upper half plane C+: extended complex numbers, linear
// fractional actions of 2x2 matrices, the hyperbolic metric and the single
// logarithm branch 0 <= Im log w < 2*pi used throughout the library.

#include <complex>
#include <optional>

namespace refcoef {

using cplx = std::complex<double>;

/// A point of the Riemann sphere: a finite complex number or infinity.
class ExtendedComplex {
public:
    ExtendedComplex(cplx value);  // NOLINT(google-explicit-constructor)
    ExtendedComplex(double value) : ExtendedComplex(cplx(value, 0.0)) {}  // NOLINT

    static ExtendedComplex infinity() { return ExtendedComplex(); }

    bool is_infinite() const noexcept { return !value_.has_value(); }
    bool is_finite() const noexcept { return value_.has_value(); }

    /// Throws DomainError for the point at infinity.
    cplx value() const;

private:
    ExtendedComplex() = default;
    std::optional<cplx> value_;
};

/// Plain 2x2 complex matrix, row major.
struct Mat2 {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    cplx det() const { return a * d - b * c; }
    cplx trace() const { return a + d; }
    Mat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend Mat2 operator-(const Mat2& x, const Mat2& y) {
        return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
    }
    friend Mat2 operator*(cplx s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
};

/// Max-modulus distance between two matrices.
double max_abs_diff(const Mat2& x, const Mat2& y);

/// 2x2 complex matrix with determinant one.
///
/// Construction divides by the principal square root of the determinant, so
/// every instance is in SL(2,C) up to rounding. The sign of that root is
/// irrelevant for the linear fractional action. Products of unimodular
/// matrices are formed without renormalizing.
class UnimodularMatrix {
public:
    UnimodularMatrix() = default;
    UnimodularMatrix(cplx a, cplx b, cplx c, cplx d);
    explicit UnimodularMatrix(const Mat2& m) : UnimodularMatrix(m.a, m.b, m.c, m.d) {}

    static UnimodularMatrix identity() { return {}; }
    /// J = [[0,-1],[1,0]].
    static UnimodularMatrix symplectic();
    /// diag(1,-1), normalized to diag(-i, i); acts as w -> -w.
    static UnimodularMatrix negation();

    const Mat2& entries() const noexcept { return m_; }
    cplx a() const noexcept { return m_.a; }
    cplx b() const noexcept { return m_.b; }
    cplx c() const noexcept { return m_.c; }
    cplx d() const noexcept { return m_.d; }
    cplx det() const { return m_.det(); }

    UnimodularMatrix inverse() const;

    /// Entries real up to `tol` in modulus.
    bool is_real(double tol) const;

    friend UnimodularMatrix operator*(const UnimodularMatrix& x, const UnimodularMatrix& y);

private:
    struct Trusted {};
    UnimodularMatrix(const Mat2& m, Trusted) : m_(m) {}

    Mat2 m_{};
};

/// |det - 1| scaled by the size of the products that form the determinant,
/// so that long products with large entries are judged fairly.
double unimodularity_defect(const Mat2& m);

/// w -> (a w + b)/(c w + d) on the Riemann sphere.
/// Denominators with modulus below 1e-300 map to infinity.
ExtendedComplex mobius_apply(const UnimodularMatrix& m, const ExtendedComplex& w);

/// Hyperbolic distance in C+; throws DomainError unless both points have
/// positive imaginary part.
double hyperbolic_distance(cplx w1, cplx w2);

/// log|w| + i arg w with arg w in [0, 2*pi). Throws DomainError at w = 0.
cplx branch_log(cplx w);

}  // namespace refcoef

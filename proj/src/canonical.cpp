#include "refcoef/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "refcoef/error.hpp"

namespace refcoef {

namespace {

constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = 1e-12;
constexpr double kSeriesThreshold = 1e-4;

double min_eigenvalue(const Segment& s) {
    const double half_trace = 0.5 * (s.h11 + s.h22);
    const double half_gap = 0.5 * (s.h11 - s.h22);
    return half_trace - std::hypot(half_gap, s.h12);
}

// sin(t)/t, with a short series near 0.
cplx sinc(cplx t) {
    if (std::abs(t) < kSeriesThreshold) {
        const cplx t2 = t * t;
        return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    }
    return std::sin(t) / t;
}

}  // namespace

CanonicalSystem::CanonicalSystem(std::vector<Segment> segments) : segments_(std::move(segments)) {
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        const std::string where = "segment " + std::to_string(i) + ": ";
        if (!std::isfinite(s.length) || !std::isfinite(s.h11) || !std::isfinite(s.h12) ||
            !std::isfinite(s.h22)) {
            throw DomainError(where + "non-finite value");
        }
        if (!(s.length > 0.0)) {
            throw DomainError(where + "length must be positive");
        }
        if (std::abs(s.h11 + s.h22 - 1.0) > kTraceTol) {
            throw DomainError(where + "trace of H must be 1");
        }
        if (min_eigenvalue(s) < -kPsdTol) {
            throw DomainError(where + "H is not positive semidefinite");
        }
    }
}

double CanonicalSystem::total_length() const {
    double total = 0.0;
    for (const Segment& s : segments_) {
        total += s.length;
    }
    return total;
}

CanonicalSystem CanonicalSystem::concatenated(const CanonicalSystem& later) const {
    std::vector<Segment> all = segments_;
    all.insert(all.end(), later.segments_.begin(), later.segments_.end());
    return CanonicalSystem(std::move(all));
}

UnimodularMatrix segment_transfer(const Segment& segment, cplx z) {
    // (J H)^2 = -d I with d = det H in [0, 1/4], hence
    // exp(-z l J H) = cos(theta) I - z l sinc(theta) J H, theta = sqrt(d) z l.
    const double d = std::max(segment.det(), 0.0);
    const cplx zl = z * segment.length;
    const cplx theta = std::sqrt(d) * zl;
    const cplx cs = std::cos(theta);
    const cplx k = zl * sinc(theta);
    // J H = [[-h12, -h22], [h11, h12]]
    return {cs + k * segment.h12, k * segment.h22, -k * segment.h11, cs - k * segment.h12};
}

UnimodularMatrix transfer(const CanonicalSystem& system, cplx z) {
    UnimodularMatrix t = UnimodularMatrix::identity();
    for (const Segment& s : system.segments()) {
        t = segment_transfer(s, z) * t;
    }
    return t;
}

JInnerDefect j_inner_defect(const UnimodularMatrix& t, cplx z) {
    if (!(z.imag() > 0.0)) {
        throw DomainError("j_inner_defect: z must lie in the upper half plane");
    }
    const Mat2 j = UnimodularMatrix::symplectic().entries();
    const Mat2& m = t.entries();
    const Mat2 raw = cplx(0.0, -1.0) * (m.adjoint() * j * m - j);
    // (X + X*)/2
    const Mat2 sym{cplx(raw.a.real(), 0.0), 0.5 * (raw.b + std::conj(raw.c)),
                   0.5 * (raw.c + std::conj(raw.b)), cplx(raw.d.real(), 0.0)};
    const double p = sym.a.real();
    const double r = sym.d.real();
    const double min_eig = 0.5 * (p + r) - std::hypot(0.5 * (p - r), std::abs(sym.b));
    return {min_eig, sym};
}

HerglotzFamilyResult herglotz_family_check(const MatrixRule& rule, std::span<const cplx> zs,
                                           std::span<const cplx> ws) {
    HerglotzFamilyResult result;
    result.worst_im = std::numeric_limits<double>::infinity();
    for (cplx z : zs) {
        const UnimodularMatrix t = rule(z);
        for (cplx w : ws) {
            const ExtendedComplex image = mobius_apply(t, w);
            const double im = image.is_infinite() ? -std::numeric_limits<double>::infinity()
                                                  : image.value().imag();
            if (im < result.worst_im) {
                result.worst_im = im;
                result.worst_z = z;
                result.worst_w = w;
            }
        }
    }
    result.passed = result.worst_im > -1e-12;
    return result;
}

SFactorization s_factorize(const MatrixRule& rule) {
    const UnimodularMatrix a = rule(0.0);
    if (!a.is_real(1e-10)) {
        throw DomainError("s_factorize: T(0) is not real");
    }
    const UnimodularMatrix a_real(a.a().real(), a.b().real(), a.c().real(), a.d().real());
    const UnimodularMatrix a_inv = a_real.inverse();
    return {a_real, [rule, a_inv](cplx z) { return a_inv * rule(z); }};
}

}  // namespace refcoef

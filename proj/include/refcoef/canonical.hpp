#pragma once

// Trace-normed canonical systems J u' = z H(x) u with piecewise-constant H,
// their transfer matrices, and the J-inner / Herglotz-family predicates that
// characterize such matrices.

#include <functional>
#include <span>
#include <vector>

#include "refcoef/halfplane.hpp"

namespace refcoef {

/// One constant piece of H(x): H = [[h11, h12], [h12, h22]] on an interval
/// of the given length.
struct Segment {
    double length = 1.0;
    double h11 = 1.0;
    double h12 = 0.0;
    double h22 = 0.0;

    double det() const { return h11 * h22 - h12 * h12; }
};

class CanonicalSystem {
public:
    CanonicalSystem() = default;
    /// Throws DomainError naming the offending segment index unless every
    /// segment has length > 0, trace 1 (to 1e-12) and is positive
    /// semidefinite (smallest eigenvalue >= -1e-12).
    explicit CanonicalSystem(std::vector<Segment> segments);

    std::span<const Segment> segments() const noexcept { return segments_; }
    double total_length() const;

    /// This system followed by `later`.
    CanonicalSystem concatenated(const CanonicalSystem& later) const;

private:
    std::vector<Segment> segments_;
};

/// exp(-z l J H) for one segment, in closed form via (J H)^2 = -det(H) I.
UnimodularMatrix segment_transfer(const Segment& segment, cplx z);

/// T(L, z) for J T' = z H T, T(0, z) = 1: the product of the segment factors
/// with later segments on the left.
UnimodularMatrix transfer(const CanonicalSystem& system, cplx z);

struct JInnerDefect {
    double min_eig = 0.0;
    /// -i (T* J T - J), symmetrized to be exactly Hermitian.
    Mat2 form;
};

/// Smallest eigenvalue of -i (T* J T - J); non-negative certifies the
/// J-inner property at z. Throws DomainError unless Im z > 0.
JInnerDefect j_inner_defect(const UnimodularMatrix& t, cplx z);

using MatrixRule = std::function<UnimodularMatrix(cplx)>;

struct HerglotzFamilyResult {
    bool passed = true;
    double worst_im = 0.0;  ///< smallest Im T(z) w seen (-inf for a pole)
    cplx worst_z;
    cplx worst_w;
};

/// Passes iff Im T(z) w > -1e-12 for every sampled pair (z, w) in C+ x C+.
HerglotzFamilyResult herglotz_family_check(const MatrixRule& rule, std::span<const cplx> zs,
                                           std::span<const cplx> ws);

struct SFactorization {
    UnimodularMatrix a;     ///< T(0), real
    MatrixRule normalized;  ///< T0(z) = A^{-1} T(z), T0(0) = 1
};

/// Splits T = A T0 with A = T(0). Throws DomainError if T(0) is not real to
/// 1e-10.
SFactorization s_factorize(const MatrixRule& rule);

}  // namespace refcoef

#pragma once

// Weyl disks: images of C+ under products P_n(z) = T_n(z) ... T_1(z) and
// their hyperbolic diameters R_n(z).

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "refcoef/canonical.hpp"
#include "refcoef/halfplane.hpp"

namespace refcoef {

struct DiskDescriptor {
    enum class Kind { proper, half_plane, touching };

    Kind kind = Kind::half_plane;
    cplx center;        ///< proper and touching only
    double radius = 0;  ///< proper and touching only
    /// Im center - radius: distance from the disk to the real axis. Computed
    /// without cancellation, so it stays meaningful for tiny disks.
    double gap = 0;
    /// Half-plane only: the image is {w : Im(normal * w) + offset > 0}.
    cplx normal;
    double offset = 0;
};

const char* to_string(DiskDescriptor::Kind kind);

/// Image of C+ under w -> M w. Throws DomainError if |det M - 1| exceeds
/// 1e-10 or if the image is not contained in the closed upper half plane
/// (M is then not a Herglotz map). A disk whose gap is below touch_tol is
/// classified as touching; touch_tol < 0 selects 1e-9 (1 + |center|).
DiskDescriptor image_disk(const UnimodularMatrix& m, double touch_tol = -1.0);

/// ln((Im c + r)/(Im c - r)) for proper disks, infinity otherwise.
double hyperbolic_diameter(const DiskDescriptor& disk);

/// R_n(z) for n = 1..rules.size() with P_n = T_n P_{n-1}. Throws
/// NumericalError if a product loses unimodularity (relative 1e-10).
std::vector<double> prefix_diameters(std::span<const MatrixRule> rules, cplx z);

enum class DichotomyVerdict { shrinks, bounded_below, inconclusive };

const char* to_string(DichotomyVerdict verdict);

struct PointVerdict {
    cplx z;
    double diameter = 0.0;  ///< R_N(z)
    bool shrinks = false;
};

struct DichotomyReport {
    std::size_t n = 0;
    std::vector<PointVerdict> points;
    /// All points shrink, none shrink, or a mix (finite-N truncation only).
    DichotomyVerdict verdict = DichotomyVerdict::inconclusive;
};

/// Uses the first n rules; a point shrinks iff R_n(z) < shrink_tol.
/// Throws DomainError unless 2 <= n <= rules.size().
DichotomyReport classify_dichotomy(std::span<const MatrixRule> rules, std::span<const cplx> zs,
                                   std::size_t n, double shrink_tol);

/// T_j = transfer of segment j, as rules.
std::vector<MatrixRule> segment_rules(const CanonicalSystem& system);

struct WeylRow {
    std::size_t n = 0;
    cplx z;
    double diameter = 0.0;
};

/// n,re_z,im_z,R_n with infinity written as "inf".
void write_weyl_csv(std::ostream& out, std::span<const WeylRow> rows);

}  // namespace refcoef

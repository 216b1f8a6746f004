#pragma once

// Generalized reflection coefficients
//   R+ = (conj(m+) + m-)/(m+ + m-),  R- = (m+ + conj(m-))/(m+ + m-)
// built from a pair of Herglotz functions, and the spectral sets they detect.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "refcoef/herglotz.hpp"
#include "refcoef/jacobi.hpp"

namespace refcoef {

struct ReflectionPair {
    cplx plus;
    cplx minus;
};

/// Throws NumericalError when |m+ + m-| < 1e-14.
ReflectionPair reflection_at(cplx m_plus, cplx m_minus);
ReflectionPair reflection_at(const MPair& mp, cplx z);

/// Reflection coefficients at a real energy, from ladder limits of m+-.
struct ReflectionSample {
    double x = 0.0;
    cplx r_plus;
    cplx r_minus;
    double abs_r = 1.0;
    bool converged = false;
    cplx m_plus;   ///< boundary value used
    cplx m_minus;  ///< boundary value used
};

/// m+- are laddered separately and then combined. A degenerate denominator
/// is reported as non-converged with R = 1.
ReflectionSample boundary_reflection(const MPair& mp, double x, const BoundaryLadder& ladder = {});

std::vector<ReflectionSample> reflection_profile(const JacobiOperator& op,
                                                 std::span<const double> xs,
                                                 const BoundaryLadder& ladder = {});

struct GridMask {
    std::vector<bool> mask;
    std::vector<bool> converged;
    std::vector<double> abs_r;

    std::size_t count() const;
    std::size_t non_converged() const;
};

/// mask[k] iff |R(x_k)| < 1 - eps (and the ladder converged).
GridMask sigma_ac_mask(const JacobiOperator& op, std::span<const double> xs,
                       const BoundaryLadder& ladder, double eps);

/// mask[k] iff |R(x_k)| < tol and |m+(x_k) + conj(m-(x_k))| < tol (1 + |m+|).
GridMask reflectionless_mask(const JacobiOperator& op, std::span<const double> xs,
                             const BoundaryLadder& ladder, double tol);

/// |m+ + conj(m-)|, the defect in m+ = -conj(m-).
double reflectionless_defect(cplx m_plus, cplx m_minus);

/// (c m - d)/(c conj(m) - d): the factor by which R+ changes when m-+ are
/// updated by a real transfer matrix with lower row (c, d). Has modulus 1.
cplx tm_update_factor(cplx m, double c, double d);

/// A transformation of Jacobi operators of transfer-matrix type.
struct OperatorTransform {
    enum class Kind { shift, toda };
    Kind kind = Kind::shift;
    long k = 0;
    double t = 0.0;
    TodaOptions toda{};

    static OperatorTransform shift_by(long k) { return {Kind::shift, k, 0.0, {}}; }
    static OperatorTransform toda_time(double t, TodaOptions options = {}) {
        return {Kind::toda, 0, t, options};
    }

    JacobiOperator apply(const JacobiOperator& op) const;
};

struct InvarianceReport {
    double max_discrepancy = 0.0;
    std::size_t non_converged = 0;
    std::vector<double> abs_r_before;
    std::vector<double> abs_r_after;
};

/// max_k | |R(x_k; T(op))| - |R(x_k; op)| | over converged points.
InvarianceReport invariance_report(const JacobiOperator& op, const OperatorTransform& transform,
                                   std::span<const double> xs, const BoundaryLadder& ladder = {});

/// Header plus one row per sample:
/// x,re_R_plus,im_R_plus,re_R_minus,im_R_minus,abs_R,converged
void write_reflection_csv(std::ostream& out, std::span<const ReflectionSample> rows);

}  // namespace refcoef

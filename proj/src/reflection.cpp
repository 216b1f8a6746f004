#include "refcoef/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "refcoef/error.hpp"
#include "refcoef/io.hpp"

namespace refcoef {

ReflectionPair reflection_at(cplx m_plus, cplx m_minus) {
    const cplx den = m_plus + m_minus;
    if (std::abs(den) < 1e-14) {
        throw NumericalError("reflection_at: degenerate denominator m+ + m-");
    }
    return {(std::conj(m_plus) + m_minus) / den, (m_plus + std::conj(m_minus)) / den};
}

ReflectionPair reflection_at(const MPair& mp, cplx z) {
    return reflection_at(mp.m_plus(z), mp.m_minus(z));
}

ReflectionSample boundary_reflection(const MPair& mp, double x, const BoundaryLadder& ladder) {
    const BoundaryValue plus = boundary_value(mp.m_plus, x, ladder);
    const BoundaryValue minus = boundary_value(mp.m_minus, x, ladder);
    ReflectionSample s;
    s.x = x;
    s.m_plus = plus.value;
    s.m_minus = minus.value;
    try {
        const ReflectionPair r = reflection_at(plus.value, minus.value);
        s.r_plus = r.plus;
        s.r_minus = r.minus;
        s.abs_r = std::abs(r.plus);
        s.converged = plus.converged && minus.converged;
    } catch (const NumericalError&) {
        s.r_plus = 1.0;
        s.r_minus = 1.0;
        s.abs_r = 1.0;
        s.converged = false;
    }
    return s;
}

std::vector<ReflectionSample> reflection_profile(const JacobiOperator& op,
                                                 std::span<const double> xs,
                                                 const BoundaryLadder& ladder) {
    const MPair mp = m_pair(op);
    std::vector<ReflectionSample> out;
    out.reserve(xs.size());
    for (double x : xs) {
        out.push_back(boundary_reflection(mp, x, ladder));
    }
    return out;
}

std::size_t GridMask::count() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

std::size_t GridMask::non_converged() const {
    return static_cast<std::size_t>(std::count(converged.begin(), converged.end(), false));
}

GridMask sigma_ac_mask(const JacobiOperator& op, std::span<const double> xs,
                       const BoundaryLadder& ladder, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw DomainError("sigma_ac_mask: eps must lie in (0, 1)");
    }
    GridMask out;
    for (const ReflectionSample& s : reflection_profile(op, xs, ladder)) {
        out.mask.push_back(s.converged && s.abs_r < 1.0 - eps);
        out.converged.push_back(s.converged);
        out.abs_r.push_back(s.abs_r);
    }
    return out;
}

double reflectionless_defect(cplx m_plus, cplx m_minus) {
    return std::abs(m_plus + std::conj(m_minus));
}

GridMask reflectionless_mask(const JacobiOperator& op, std::span<const double> xs,
                             const BoundaryLadder& ladder, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("reflectionless_mask: tol must be positive");
    }
    GridMask out;
    for (const ReflectionSample& s : reflection_profile(op, xs, ladder)) {
        const bool small_r = s.abs_r < tol;
        const bool matched =
            reflectionless_defect(s.m_plus, s.m_minus) < tol * (1.0 + std::abs(s.m_plus));
        out.mask.push_back(s.converged && small_r && matched);
        out.converged.push_back(s.converged);
        out.abs_r.push_back(s.abs_r);
    }
    return out;
}

cplx tm_update_factor(cplx m, double c, double d) {
    if (c == 0.0 && d == 0.0) {
        throw DomainError("tm_update_factor: (c, d) must not vanish");
    }
    const cplx den = c * std::conj(m) - d;
    if (std::abs(den) == 0.0) {
        throw DomainError("tm_update_factor: degenerate denominator (Im m = 0)");
    }
    return (c * m - d) / den;
}

JacobiOperator OperatorTransform::apply(const JacobiOperator& op) const {
    switch (kind) {
        case Kind::shift:
            return shift(op, k);
        case Kind::toda:
            return toda_flow(op, t, toda);
    }
    return op;
}

InvarianceReport invariance_report(const JacobiOperator& op, const OperatorTransform& transform,
                                   std::span<const double> xs, const BoundaryLadder& ladder) {
    const auto before = reflection_profile(op, xs, ladder);
    const auto after = reflection_profile(transform.apply(op), xs, ladder);
    InvarianceReport report;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        report.abs_r_before.push_back(before[i].abs_r);
        report.abs_r_after.push_back(after[i].abs_r);
        if (!before[i].converged || !after[i].converged) {
            ++report.non_converged;
            continue;
        }
        report.max_discrepancy =
            std::max(report.max_discrepancy, std::abs(after[i].abs_r - before[i].abs_r));
    }
    return report;
}

void write_reflection_csv(std::ostream& out, std::span<const ReflectionSample> rows) {
    out << "x,re_R_plus,im_R_plus,re_R_minus,im_R_minus,abs_R,converged\n";
    for (const ReflectionSample& s : rows) {
        out << format_double(s.x) << ',' << format_double(s.r_plus.real()) << ','
            << format_double(s.r_plus.imag()) << ',' << format_double(s.r_minus.real()) << ','
            << format_double(s.r_minus.imag()) << ',' << format_double(s.abs_r) << ','
            << (s.converged ? "true" : "false") << '\n';
    }
}

}  // namespace refcoef

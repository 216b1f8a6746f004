#pragma once

// Geometry of the log-disk {ln(z - 1) : |z| <= C} and a harness that checks
// upper semicontinuity of |R| along sequences of Jacobi operators.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "refcoef/herglotz.hpp"
#include "refcoef/jacobi.hpp"
#include "refcoef/reflection.hpp"

namespace refcoef {

struct RhoPair {
    double rho0 = 0.0;
    double rho1 = 0.0;
};

/// Where the ray t e^{i phi}, t >= 0, meets the circle |z + 1| = C:
/// rho = -cos(phi) -+ sqrt(C^2 - sin^2(phi)), rho0 <= rho1.
/// Needs phi in (pi/2, 3pi/2), C in (0, 1) and |sin phi| <= C.
RhoPair rho_intersections(double phi, double c);

/// |exp(w) + 1| <= C + slack.
bool log_disk_membership(cplx w, double c, double slack = 1e-12);

struct ConvexityProbe {
    std::size_t trials = 0;
    std::size_t failures = 0;
    double worst_defect = 0.0;  ///< max(0, |exp(midpoint) + 1| - C)
};

/// Random pairs from the log-disk (z uniform in |z| <= C, w = ln(z - 1));
/// a failure is a midpoint outside the set by more than 1e-12.
ConvexityProbe convexity_probe(double c, std::size_t trials, std::uint64_t seed);

struct ExperimentSpec {
    JacobiOperator base;
    /// H_1 = schedule[0](base), H_n = schedule[n-1](H_{n-1}).
    std::vector<OperatorTransform> schedule;
    JacobiOperator limit;
    std::vector<double> xs;
    BoundaryLadder ladder;
    /// First position (0-based, into H_1, H_2, ...) of the tail.
    std::size_t tail_start = 0;
    /// Violation tolerance; 100 * ladder.tol when unset.
    std::optional<double> tolerance;
    /// Margin for the Sigma_ac inclusion check.
    double eps = 0.05;
    /// Points for the weak-convergence sanity check of H_n -> H.
    std::vector<cplx> convergence_grid{{-1.5, 0.5}, {-0.5, 0.5}, {0.5, 0.5},
                                       {1.5, 0.5},  {0.0, 1.0},  {0.0, 2.0}};

    /// Throws DomainError for an empty grid or schedule or a tail_start
    /// beyond the schedule.
    void validate() const;
    double effective_tolerance() const { return tolerance.value_or(100.0 * ladder.tol); }
};

struct SemicontRow {
    double x = 0.0;
    double tail_sup = 0.0;     ///< max over the tail of |R(x; H_n)|
    double limit_abs_r = 0.0;  ///< |R(x; H)|
    bool violation = false;    ///< |R(x; H)| > tail_sup + tolerance
    bool converged = false;    ///< every ladder along the tail and for H converged
};

struct SemicontReport {
    std::vector<SemicontRow> rows;
    /// abs_r[n][k] = |R(x_k; H_{n+1})|.
    std::vector<std::vector<double>> abs_r;
    double tolerance = 0.0;
    std::size_t violations = 0;
    std::size_t non_converged = 0;
    /// Points with tail_sup < 1 - eps but |R(x; H)| >= 1 - eps + tolerance.
    std::size_t inclusion_failures = 0;
    /// weak_convergence_check gap of the last H_n against H.
    double final_weak_gap = 0.0;
    bool weak_convergence_warning = false;  ///< final_weak_gap > 10 * tolerance
};

/// Throws NumericalError when more than 10% of the grid points fail to
/// converge.
SemicontReport run_semicontinuity(const ExperimentSpec& spec);

/// x,tail_sup_absR,limit_absR,violation,converged
void write_semicont_csv(std::ostream& out, const SemicontReport& report);
std::string semicont_to_json(const SemicontReport& report);

}  // namespace refcoef

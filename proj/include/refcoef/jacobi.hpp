#pragma once

// Jacobi operators (Ju)_n = a_n u_{n+1} + a_{n-1} u_{n-1} + b_n u_n on l^2(Z)
// that agree with the free operator (a = 1, b = 0) outside a finite window.

#include <span>
#include <vector>

#include "refcoef/halfplane.hpp"
#include "refcoef/herglotz.hpp"

namespace refcoef {

class JacobiOperator {
public:
    /// The free operator, stored as a one-site window at 0.
    JacobiOperator();
    /// Coefficients a_n, b_n for n = window_lo, ..., window_lo + size - 1.
    /// Throws DomainError for empty or mismatched lists or a_n <= 0.
    JacobiOperator(long window_lo, std::vector<double> a, std::vector<double> b);

    static JacobiOperator free() { return {}; }

    long window_lo() const noexcept { return lo_; }
    long window_hi() const noexcept { return lo_ + static_cast<long>(a_.size()) - 1; }

    /// Coefficients at any site; free values outside the window.
    double a(long n) const;
    double b(long n) const;

    std::span<const double> a_values() const noexcept { return a_; }
    std::span<const double> b_values() const noexcept { return b_; }

    /// Same operator on l^2(Z): trailing/leading free sites are ignored.
    bool same_operator(const JacobiOperator& other) const;

    friend bool operator==(const JacobiOperator&, const JacobiOperator&) = default;

private:
    long lo_ = 0;
    std::vector<double> a_{1.0};
    std::vector<double> b_{0.0};
};

/// Half-line Weyl m-functions, m+(z) = -u+(1)/(a_0 u+(0)) and
/// m-(z) = u-(1)/(a_0 u-(0)) with u+- square summable at +-infinity.
/// Throws NumericalError at a pole (u+-(0, z) = 0).
cplx m_plus(const JacobiOperator& op, cplx z);
cplx m_minus(const JacobiOperator& op, cplx z);

struct MPair {
    HerglotzFunction m_plus;
    HerglotzFunction m_minus;
};

MPair m_pair(const JacobiOperator& op);

/// (a_n, b_n) -> (a_{n-k}, b_{n-k}).
JacobiOperator shift(const JacobiOperator& op, long k);

/// Propagates Y_n = (u(n+1), a_n u(n)) across site n: Y_n = S Y_{n-1} with
/// S = [[(z - b_n)/a_n, -1/a_n], [a_n, 0]]. Unimodular and entire in z, real
/// for real z.
UnimodularMatrix one_step_transfer(const JacobiOperator& op, long n, cplx z);

/// The matrix T(z) realizing shift(op, 1) as a transfer-matrix map,
/// m-_new = T m-_old and m+_new = I T I m+_old: the inverse of the step
/// across site 0.
UnimodularMatrix shift_transfer(const JacobiOperator& op, cplx z);

/// Max deviation over the grid between the m-functions of shift(op, 1)
/// computed directly and via shift_transfer. Throws NumericalError above
/// 1e-8.
double verify_tm_shift(const JacobiOperator& op, std::span<const cplx> z_grid);

struct TodaOptions {
    double dt = 1e-3;
    /// Extra sites on each side of the window per unit time. At 4 per unit
    /// time a t = 0.5 flow of a unit bump leaves a ~4e-3 truncation error in
    /// |R|; 8 brings it to ~1e-6.
    double widening = 8.0;
    /// Sites added on each side regardless of t.
    long margin = 0;
};

/// Sites added on each side of the window by toda_flow.
long toda_widening_sites(double t, const TodaOptions& options);

/// Time-t map of the Toda flow da_n/dt = a_n (b_{n+1} - b_n),
/// db_n/dt = 2 (a_n^2 - a_{n-1}^2), integrated with classical RK4 on a
/// widened window with the coefficients outside held free.
/// Throws NumericalError if some a_n <= 0 appears.
JacobiOperator toda_flow(const JacobiOperator& op, double t, const TodaOptions& options = {});

/// Finite (Dirichlet) Jacobi matrix: diagonal b (size n), couplings a (size n-1).
struct FiniteJacobi {
    std::vector<double> a;
    std::vector<double> b;
};

/// The same Toda equations on a finite matrix (a_{-1} = a_{n-1} = 0).
FiniteJacobi toda_flow_finite(FiniteJacobi m, double t, double dt);

/// Dirichlet truncation to the sites lo..hi.
FiniteJacobi truncate(const JacobiOperator& op, long lo, long hi);

/// For each J_n: max over the grid of |m+-(z; J_n) - m+-(z; J)|.
std::vector<double> weak_convergence_check(std::span<const JacobiOperator> sequence,
                                           const JacobiOperator& limit,
                                           std::span<const cplx> z_grid);

}  // namespace refcoef

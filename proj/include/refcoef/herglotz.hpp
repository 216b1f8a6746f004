#pragma once

// Herglotz functions (holomorphic self-maps of C+), their boundary values on
// the real line, Krein functions, the truncated principal-value Hilbert
// transform and a weak-L2 convergence probe for boundary logarithms.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "refcoef/halfplane.hpp"

namespace refcoef {

/// An evaluable Herglotz function z -> F(z), Im z > 0.
///
/// Cheap to copy (the evaluation rule is shared). The factories below build
/// the closed-form variants; other modules (jacobi) supply their own rules.
class HerglotzFunction {
public:
    using Rule = std::function<cplx(cplx)>;

    HerglotzFunction(std::string name, Rule rule);

    /// Throws DomainError unless Im z > 0.
    cplx operator()(cplx z) const;

    const std::string& name() const noexcept { return name_; }

    static HerglotzFunction identity();
    /// F(z) = scale * z + shift with scale >= 0, Im shift >= 0.
    static HerglotzFunction affine(double scale, cplx shift);
    /// F(z) = c with Im c >= 0.
    static HerglotzFunction constant(cplx c);
    /// F(z) = -1/z.
    static HerglotzFunction negative_reciprocal();
    /// m+ of the free Jacobi operator (a = 1, b = 0): the root of
    /// m^2 + z m + 1 = 0 that lies in C+.
    static HerglotzFunction free_jacobi_m_plus();
    /// m- of the free Jacobi operator, equal to -1/m+.
    static HerglotzFunction free_jacobi_m_minus();
    /// F(z) = offset + sum_k weights[k] / (nodes[k] - z), weights > 0.
    static HerglotzFunction rational(double offset, std::vector<double> nodes,
                                     std::vector<double> weights);
    /// F(z) = M F(z) for a real unimodular M (an automorphism of C+).
    static HerglotzFunction compose(const UnimodularMatrix& m, HerglotzFunction f);
    static HerglotzFunction sum(HerglotzFunction f, HerglotzFunction g);
    /// -1/F(z).
    static HerglotzFunction negative_reciprocal_of(HerglotzFunction f);

private:
    std::string name_;
    std::shared_ptr<const Rule> rule_;
};

/// Free-solution ratio w(z) = (z - s(z))/2 with s(z)^2 = z^2 - 4 and
/// s(z) ~ z at infinity; |w| < 1 on C+.
cplx free_jacobi_decay(cplx z);

inline cplx evaluate(const HerglotzFunction& f, cplx z) { return f(z); }

/// Geometric ladder y_k = y0 * ratio^k used to approach the real axis.
struct BoundaryLadder {
    double y0 = 1e-2;
    double ratio = 0.5;
    int max_steps = 24;
    double tol = 1e-8;

    /// Throws DomainError for invalid parameters.
    void validate() const;
};

struct BoundaryValue {
    cplx value;
    bool converged = false;
    int steps = 0;       ///< ladder values evaluated
    double height = 0;   ///< Im of the last evaluation point
};

/// F(x + i y_k) at the first k where two successive ladder values differ by
/// less than ladder.tol; otherwise the final ladder value, flagged.
/// Imaginary parts are clamped to be >= 0.
BoundaryValue boundary_value(const HerglotzFunction& f, double x, const BoundaryLadder& ladder = {});

struct KreinSample {
    double xi = 0.0;
    bool converged = false;
    bool vanished = false;  ///< F(x + iy) -> 0 along the ladder; xi meaningless
};

/// xi(x) = arg F(x + i0) / pi with the argument taken in [0, pi].
KreinSample krein_xi(const HerglotzFunction& f, double x, const BoundaryLadder& ladder = {});

struct KreinRepresentation {
    std::vector<double> grid;
    std::vector<double> xi;
    std::vector<double> zeta;  ///< xi(t) / (t^2 + 1)
    double constant_c = 0.0;   ///< ln |F(i)|
};

KreinRepresentation krein_representation(const HerglotzFunction& f, std::vector<double> grid,
                                         const BoundaryLadder& ladder = {});

/// Function values at the cell midpoints of a uniform grid on [lo, hi].
struct MidpointSamples {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> values;

    std::size_t cells() const noexcept { return values.size(); }
    double step() const { return (hi - lo) / static_cast<double>(values.size()); }
    double node(std::size_t j) const { return lo + (static_cast<double>(j) + 0.5) * step(); }
    double edge(std::size_t k) const { return lo + static_cast<double>(k) * step(); }
};

MidpointSamples sample_midpoints(const std::function<double(double)>& f, double lo, double hi,
                                 std::size_t cells);

/// Principal value of int_lo^hi f(t) / (t - x) dt from midpoint samples.
/// Intended for x on a cell edge or outside [lo, hi]; throws DomainError if x
/// coincides with a sample node.
double hilbert_transform(const MidpointSamples& samples, double x);

/// |<g, H f> + <H g, f>| on [lo, hi] with `cells` cells. Transforms are
/// evaluated at the cell edges from midpoint samples and paired there with
/// trapezoid weights. The continuous Hilbert transform is skew-adjoint, so
/// this is a pure discretization error.
double hilbert_antisymmetry_defect(const std::function<double(double)>& f,
                                   const std::function<double(double)>& g, double lo,
                                   double hi, std::size_t cells);

using TestFunction = std::function<double(double)>;

struct WeakL2Report {
    /// gaps[i][n] = |<g_i, ln F_n> - <g_i, ln F>| on (-R, R).
    std::vector<std::vector<double>> gaps;
    /// Largest number of quadrature cells excluded for any n.
    std::size_t max_excluded_cells = 0;
    std::size_t cells = 0;
};

/// Pairs boundary logarithms (branch 0 <= Im ln < 2 pi) against real test
/// functions by midpoint quadrature on (-R, R). Cells where a boundary value
/// fails to converge or vanishes are dropped for that n; more than 5% dropped
/// cells is a NumericalError.
WeakL2Report weak_l2_report(std::span<const HerglotzFunction> sequence,
                            const HerglotzFunction& limit, double radius,
                            std::span<const TestFunction> test_functions,
                            const BoundaryLadder& ladder = {}, std::size_t cells = 4096);

}  // namespace refcoef

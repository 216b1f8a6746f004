#include "refcoef/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "refcoef/error.hpp"

namespace refcoef {

JacobiOperator::JacobiOperator() = default;

JacobiOperator::JacobiOperator(long window_lo, std::vector<double> a, std::vector<double> b)
    : lo_(window_lo), a_(std::move(a)), b_(std::move(b)) {
    if (a_.empty() || a_.size() != b_.size()) {
        throw DomainError("JacobiOperator: a and b must be non-empty and of equal length");
    }
    for (std::size_t i = 0; i < a_.size(); ++i) {
        if (!(a_[i] > 0.0) || !std::isfinite(a_[i]) || !std::isfinite(b_[i])) {
            throw DomainError("JacobiOperator: invalid coefficient at site " +
                              std::to_string(lo_ + static_cast<long>(i)));
        }
    }
}

double JacobiOperator::a(long n) const {
    if (n < lo_ || n > window_hi()) {
        return 1.0;
    }
    return a_[static_cast<std::size_t>(n - lo_)];
}

double JacobiOperator::b(long n) const {
    if (n < lo_ || n > window_hi()) {
        return 0.0;
    }
    return b_[static_cast<std::size_t>(n - lo_)];
}

bool JacobiOperator::same_operator(const JacobiOperator& other) const {
    const long lo = std::min(lo_, other.lo_);
    const long hi = std::max(window_hi(), other.window_hi());
    for (long n = lo; n <= hi; ++n) {
        if (a(n) != other.a(n) || b(n) != other.b(n)) {
            return false;
        }
    }
    return true;
}

namespace {

void rescale(cplx& y0, cplx& y1) {
    const double s = std::max(std::abs(y0), std::abs(y1));
    if (s > 1e100 || (s < 1e-100 && s > 0.0)) {
        y0 /= s;
        y1 /= s;
    }
}

}  // namespace

cplx m_plus(const JacobiOperator& op, cplx z) {
    const cplx w = free_jacobi_decay(z);
    // Y_K = (u(K+1), a_K u(K)) ~ (w, 1) once everything from K on is free.
    const long start = std::max(op.window_hi() + 1, 0L);
    cplx y0 = w;
    cplx y1 = 1.0;
    for (long n = start; n >= 1; --n) {
        // Y_{n-1} = S_n^{-1} Y_n, S_n^{-1} = [[0, 1/a_n], [-a_n, (z - b_n)/a_n]]
        const double an = op.a(n);
        const cplx next0 = y1 / an;
        const cplx next1 = -an * y0 + (z - op.b(n)) / an * y1;
        y0 = next0;
        y1 = next1;
        rescale(y0, y1);
    }
    if (std::abs(y1) == 0.0 || !std::isfinite(std::abs(y0 / y1))) {
        throw NumericalError("m_plus: pole at z = (" + std::to_string(z.real()) + ", " +
                             std::to_string(z.imag()) + ")");
    }
    return -y0 / y1;
}

cplx m_minus(const JacobiOperator& op, cplx z) {
    const cplx w = free_jacobi_decay(z);
    // Y_K ~ (1, w) for u(n) = w^{-n} left of the window.
    const long start = std::min(op.window_lo() - 1, 0L);
    cplx y0 = 1.0;
    cplx y1 = w;
    for (long n = start + 1; n <= 0; ++n) {
        const double an = op.a(n);
        const cplx next0 = (z - op.b(n)) / an * y0 - y1 / an;
        const cplx next1 = an * y0;
        y0 = next0;
        y1 = next1;
        rescale(y0, y1);
    }
    if (std::abs(y1) == 0.0 || !std::isfinite(std::abs(y0 / y1))) {
        throw NumericalError("m_minus: pole at z = (" + std::to_string(z.real()) + ", " +
                             std::to_string(z.imag()) + ")");
    }
    return y0 / y1;
}

MPair m_pair(const JacobiOperator& op) {
    auto shared = std::make_shared<const JacobiOperator>(op);
    return {HerglotzFunction("jacobi_m_plus", [shared](cplx z) { return m_plus(*shared, z); }),
            HerglotzFunction("jacobi_m_minus", [shared](cplx z) { return m_minus(*shared, z); })};
}

JacobiOperator shift(const JacobiOperator& op, long k) {
    return {op.window_lo() + k, std::vector<double>(op.a_values().begin(), op.a_values().end()),
            std::vector<double>(op.b_values().begin(), op.b_values().end())};
}

UnimodularMatrix one_step_transfer(const JacobiOperator& op, long n, cplx z) {
    const double an = op.a(n);
    return {(z - op.b(n)) / an, -1.0 / an, an, 0.0};
}

UnimodularMatrix shift_transfer(const JacobiOperator& op, cplx z) {
    return one_step_transfer(op, 0, z).inverse();
}

double verify_tm_shift(const JacobiOperator& op, std::span<const cplx> z_grid) {
    const JacobiOperator shifted = shift(op, 1);
    const UnimodularMatrix negation = UnimodularMatrix::negation();
    double worst = 0.0;
    for (cplx z : z_grid) {
        const UnimodularMatrix t = shift_transfer(op, z);
        const ExtendedComplex minus_via_t = mobius_apply(t, m_minus(op, z));
        const ExtendedComplex plus_via_t =
            mobius_apply(negation * t * negation, m_plus(op, z));
        if (minus_via_t.is_infinite() || plus_via_t.is_infinite()) {
            throw NumericalError("verify_tm_shift: transfer matrix maps an m-function to infinity");
        }
        worst = std::max(worst, std::abs(minus_via_t.value() - m_minus(shifted, z)));
        worst = std::max(worst, std::abs(plus_via_t.value() - m_plus(shifted, z)));
    }
    if (worst > 1e-8) {
        throw NumericalError("verify_tm_shift: deviation " + std::to_string(worst) +
                             " exceeds 1e-8 (transfer-matrix convention mismatch)");
    }
    return worst;
}

namespace {

// Coefficient arrays with one ghost entry each: A = (a_{lo-1}, ..., a_hi),
// B = (b_lo, ..., b_{hi+1}). A[0] and B.back() are boundary data and stay
// fixed; a Dirichlet end is A = 0 there, which the equations keep at 0.
struct TodaState {
    std::vector<double> a;
    std::vector<double> b;
};

void toda_rhs(const TodaState& s, TodaState& out) {
    const std::size_t n = s.b.size() - 1;
    out.a.assign(n + 1, 0.0);
    out.b.assign(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        out.a[k] = s.a[k] * (s.b[k] - s.b[k - 1]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        out.b[j] = 2.0 * (s.a[j + 1] * s.a[j + 1] - s.a[j] * s.a[j]);
    }
}

void axpy(const TodaState& base, double h, const TodaState& dir, TodaState& out) {
    out.a.resize(base.a.size());
    out.b.resize(base.b.size());
    for (std::size_t i = 0; i < base.a.size(); ++i) {
        out.a[i] = base.a[i] + h * dir.a[i];
        out.b[i] = base.b[i] + h * dir.b[i];
    }
}

void integrate_toda(TodaState& s, double t, double dt, bool require_positive) {
    if (!(dt > 0.0) || !(t >= 0.0)) {
        throw DomainError("toda_flow: need t >= 0 and dt > 0");
    }
    if (t == 0.0) {
        return;
    }
    const auto steps = static_cast<long>(std::ceil(t / dt - 1e-9));
    const double h = t / static_cast<double>(steps);
    TodaState k1, k2, k3, k4, tmp;
    const std::size_t n = s.b.size() - 1;
    for (long step = 0; step < steps; ++step) {
        toda_rhs(s, k1);
        axpy(s, 0.5 * h, k1, tmp);
        toda_rhs(tmp, k2);
        axpy(s, 0.5 * h, k2, tmp);
        toda_rhs(tmp, k3);
        axpy(s, h, k3, tmp);
        toda_rhs(tmp, k4);
        for (std::size_t i = 0; i <= n; ++i) {
            s.a[i] += h / 6.0 * (k1.a[i] + 2.0 * k2.a[i] + 2.0 * k3.a[i] + k4.a[i]);
            s.b[i] += h / 6.0 * (k1.b[i] + 2.0 * k2.b[i] + 2.0 * k3.b[i] + k4.b[i]);
        }
        if (require_positive) {
            for (std::size_t k = 1; k <= n; ++k) {
                if (!(s.a[k] > 0.0)) {
                    throw NumericalError("toda_flow: a_n <= 0 during integration (step too large)");
                }
            }
        }
    }
}

}  // namespace

long toda_widening_sites(double t, const TodaOptions& options) {
    return static_cast<long>(std::ceil(options.widening * t)) + options.margin;
}

JacobiOperator toda_flow(const JacobiOperator& op, double t, const TodaOptions& options) {
    if (!(options.dt > 0.0) || !(t >= 0.0) || options.widening < 0.0 || options.margin < 0) {
        throw DomainError("toda_flow: need t >= 0, dt > 0 and non-negative widening");
    }
    if (t == 0.0) {
        return op;
    }
    const long extra = toda_widening_sites(t, options);
    const long lo = op.window_lo() - extra;
    const long hi = op.window_hi() + extra;
    const auto n = static_cast<std::size_t>(hi - lo + 1);

    TodaState s;
    s.a.resize(n + 1);
    s.b.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        s.a[k] = op.a(lo - 1 + static_cast<long>(k));
        s.b[k] = op.b(lo + static_cast<long>(k));
    }
    integrate_toda(s, t, options.dt, true);
    return {lo, std::vector<double>(s.a.begin() + 1, s.a.end()),
            std::vector<double>(s.b.begin(), s.b.end() - 1)};
}

FiniteJacobi toda_flow_finite(FiniteJacobi m, double t, double dt) {
    const std::size_t n = m.b.size();
    if (n == 0 || m.a.size() + 1 != n) {
        throw DomainError("toda_flow_finite: need n diagonal and n-1 off-diagonal entries");
    }
    TodaState s;
    s.a.assign(n + 1, 0.0);
    s.b.assign(n + 1, 0.0);
    std::copy(m.a.begin(), m.a.end(), s.a.begin() + 1);
    std::copy(m.b.begin(), m.b.end(), s.b.begin());
    integrate_toda(s, t, dt, false);
    std::copy(s.a.begin() + 1, s.a.begin() + static_cast<long>(n), m.a.begin());
    std::copy(s.b.begin(), s.b.begin() + static_cast<long>(n), m.b.begin());
    return m;
}

FiniteJacobi truncate(const JacobiOperator& op, long lo, long hi) {
    if (hi < lo) {
        throw DomainError("truncate: empty range");
    }
    FiniteJacobi m;
    for (long n = lo; n <= hi; ++n) {
        m.b.push_back(op.b(n));
        if (n < hi) {
            m.a.push_back(op.a(n));
        }
    }
    return m;
}

std::vector<double> weak_convergence_check(std::span<const JacobiOperator> sequence,
                                           const JacobiOperator& limit,
                                           std::span<const cplx> z_grid) {
    std::vector<cplx> limit_plus, limit_minus;
    for (cplx z : z_grid) {
        limit_plus.push_back(m_plus(limit, z));
        limit_minus.push_back(m_minus(limit, z));
    }
    std::vector<double> gaps;
    gaps.reserve(sequence.size());
    for (const JacobiOperator& op : sequence) {
        double worst = 0.0;
        for (std::size_t i = 0; i < z_grid.size(); ++i) {
            worst = std::max(worst, std::abs(m_plus(op, z_grid[i]) - limit_plus[i]));
            worst = std::max(worst, std::abs(m_minus(op, z_grid[i]) - limit_minus[i]));
        }
        gaps.push_back(worst);
    }
    return gaps;
}

}  // namespace refcoef

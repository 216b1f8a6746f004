#include "refcoef/herglotz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "refcoef/error.hpp"

namespace refcoef {

namespace {

// Herglotz boundary values live in the closed upper half plane; a rounding
// residue below the axis would otherwise jump the branch cut of branch_log.
cplx clamp_upper(cplx w) { return {w.real(), w.imag() > 0.0 ? w.imag() : 0.0}; }

constexpr double kVanishing = 1e-300;

}  // namespace

HerglotzFunction::HerglotzFunction(std::string name, Rule rule)
    : name_(std::move(name)), rule_(std::make_shared<const Rule>(std::move(rule))) {}

cplx HerglotzFunction::operator()(cplx z) const {
    if (!(z.imag() > 0.0)) {
        throw DomainError("Herglotz function '" + name_ + "' evaluated off the upper half plane");
    }
    return (*rule_)(z);
}

HerglotzFunction HerglotzFunction::identity() {
    return {"identity", [](cplx z) { return z; }};
}

HerglotzFunction HerglotzFunction::affine(double scale, cplx shift) {
    if (scale < 0.0 || shift.imag() < 0.0) {
        throw DomainError("affine Herglotz function needs scale >= 0 and Im shift >= 0");
    }
    return {"affine", [scale, shift](cplx z) { return scale * z + shift; }};
}

HerglotzFunction HerglotzFunction::constant(cplx c) {
    if (c.imag() < 0.0) {
        throw DomainError("constant Herglotz function needs Im c >= 0");
    }
    return {"constant", [c](cplx) { return c; }};
}

HerglotzFunction HerglotzFunction::negative_reciprocal() {
    return {"negative_reciprocal", [](cplx z) { return -1.0 / z; }};
}

cplx free_jacobi_decay(cplx z) {
    const cplx s = z * std::sqrt(1.0 - 4.0 / (z * z));
    // (z - s)/2 == 2/(z + s); the second form does not cancel for large |z|.
    return 2.0 / (z + s);
}

HerglotzFunction HerglotzFunction::free_jacobi_m_plus() {
    return {"free_m_plus", [](cplx z) { return -free_jacobi_decay(z); }};
}

HerglotzFunction HerglotzFunction::free_jacobi_m_minus() {
    return {"free_m_minus", [](cplx z) { return 1.0 / free_jacobi_decay(z); }};
}

HerglotzFunction HerglotzFunction::rational(double offset, std::vector<double> nodes,
                                            std::vector<double> weights) {
    if (nodes.size() != weights.size()) {
        throw DomainError("rational Herglotz function: nodes and weights differ in length");
    }
    for (double w : weights) {
        if (!(w > 0.0)) {
            throw DomainError("rational Herglotz function: weights must be positive");
        }
    }
    return {"rational", [offset, nodes = std::move(nodes), weights = std::move(weights)](cplx z) {
                cplx acc = offset;
                for (std::size_t k = 0; k < nodes.size(); ++k) {
                    acc += weights[k] / (nodes[k] - z);
                }
                return acc;
            }};
}

HerglotzFunction HerglotzFunction::compose(const UnimodularMatrix& m, HerglotzFunction f) {
    if (!m.is_real(1e-12)) {
        throw DomainError("compose: matrix must be real to preserve C+");
    }
    const std::string name = "mobius(" + f.name() + ")";
    return {name, [m, f = std::move(f)](cplx z) {
                const ExtendedComplex out = mobius_apply(m, f(z));
                if (out.is_infinite()) {
                    throw NumericalError("compose: pole of the Mobius composite");
                }
                return out.value();
            }};
}

HerglotzFunction HerglotzFunction::sum(HerglotzFunction f, HerglotzFunction g) {
    const std::string name = f.name() + "+" + g.name();
    return {name, [f = std::move(f), g = std::move(g)](cplx z) { return f(z) + g(z); }};
}

HerglotzFunction HerglotzFunction::negative_reciprocal_of(HerglotzFunction f) {
    const std::string name = "-1/(" + f.name() + ")";
    return {name, [f = std::move(f)](cplx z) { return -1.0 / f(z); }};
}

void BoundaryLadder::validate() const {
    if (!(y0 > 0.0) || !(ratio > 0.0 && ratio < 1.0) || max_steps < 2 || !(tol > 0.0)) {
        throw DomainError("BoundaryLadder: need y0 > 0, 0 < ratio < 1, max_steps >= 2, tol > 0");
    }
}

BoundaryValue boundary_value(const HerglotzFunction& f, double x, const BoundaryLadder& ladder) {
    ladder.validate();
    BoundaryValue out;
    double y = ladder.y0;
    cplx previous = f({x, y});
    out.steps = 1;
    out.height = y;
    out.value = previous;
    for (int k = 1; k < ladder.max_steps; ++k) {
        y *= ladder.ratio;
        const cplx current = f({x, y});
        out.steps = k + 1;
        out.height = y;
        out.value = current;
        if (std::abs(current - previous) < ladder.tol) {
            out.converged = true;
            break;
        }
        previous = current;
    }
    out.value = clamp_upper(out.value);
    return out;
}

KreinSample krein_xi(const HerglotzFunction& f, double x, const BoundaryLadder& ladder) {
    const BoundaryValue bv = boundary_value(f, x, ladder);
    KreinSample out;
    out.converged = bv.converged;
    if (std::abs(bv.value) < kVanishing) {
        out.vanished = true;
        out.converged = false;
        return out;
    }
    // bv.value has a non-negative imaginary part, so atan2 lands in [0, pi].
    const double arg = std::atan2(bv.value.imag(), bv.value.real());
    out.xi = std::clamp(arg / std::numbers::pi, 0.0, 1.0);
    return out;
}

KreinRepresentation krein_representation(const HerglotzFunction& f, std::vector<double> grid,
                                         const BoundaryLadder& ladder) {
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw DomainError("krein_representation: grid must be sorted");
    }
    KreinRepresentation rep;
    rep.xi.reserve(grid.size());
    rep.zeta.reserve(grid.size());
    for (double t : grid) {
        const double xi = krein_xi(f, t, ladder).xi;
        rep.xi.push_back(xi);
        rep.zeta.push_back(xi / (t * t + 1.0));
    }
    rep.grid = std::move(grid);
    rep.constant_c = std::log(std::abs(f({0.0, 1.0})));
    return rep;
}

MidpointSamples sample_midpoints(const std::function<double(double)>& f, double lo, double hi,
                                 std::size_t cells) {
    if (!(hi > lo) || cells == 0) {
        throw DomainError("sample_midpoints: need lo < hi and at least one cell");
    }
    MidpointSamples s{lo, hi, std::vector<double>(cells)};
    for (std::size_t j = 0; j < cells; ++j) {
        s.values[j] = f(s.node(j));
    }
    return s;
}

double hilbert_transform(const MidpointSamples& samples, double x) {
    const std::size_t n = samples.cells();
    if (n == 0) {
        throw DomainError("hilbert_transform: no samples");
    }
    const double h = samples.step();
    if (!(h > 0.0)) {
        throw DomainError("hilbert_transform: grid spacing must be positive");
    }
    const double pos = (x - samples.lo) / h - 0.5;
    const double nearest = std::round(pos);
    if (nearest >= 0.0 && nearest < static_cast<double>(n) && std::abs(pos - nearest) < 1e-9) {
        throw DomainError("hilbert_transform: evaluation point coincides with a sample node");
    }
    // Pairs of nodes placed symmetrically about an edge cancel their
    // singular parts, which is what makes the plain sum a principal value.
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        acc += samples.values[j] / (samples.node(j) - x);
    }
    return acc * h;
}

double hilbert_antisymmetry_defect(const std::function<double(double)>& f,
                                   const std::function<double(double)>& g, double lo,
                                   double hi, std::size_t cells) {
    const MidpointSamples fs = sample_midpoints(f, lo, hi, cells);
    const MidpointSamples gs = sample_midpoints(g, lo, hi, cells);
    const double h = fs.step();
    double g_hf = 0.0;
    double hg_f = 0.0;
    for (std::size_t k = 0; k <= cells; ++k) {
        const double x = fs.edge(k);
        const double w = (k == 0 || k == cells) ? 0.5 * h : h;
        g_hf += w * g(x) * hilbert_transform(fs, x);
        hg_f += w * hilbert_transform(gs, x) * f(x);
    }
    return std::abs(g_hf + hg_f);
}

WeakL2Report weak_l2_report(std::span<const HerglotzFunction> sequence,
                            const HerglotzFunction& limit, double radius,
                            std::span<const TestFunction> test_functions,
                            const BoundaryLadder& ladder, std::size_t cells) {
    if (sequence.empty()) {
        throw DomainError("weak_l2_report: empty sequence");
    }
    if (!(radius > 0.0) || cells == 0) {
        throw DomainError("weak_l2_report: need R > 0 and at least one cell");
    }
    ladder.validate();

    const double h = 2.0 * radius / static_cast<double>(cells);
    std::vector<double> nodes(cells);
    for (std::size_t j = 0; j < cells; ++j) {
        nodes[j] = -radius + (static_cast<double>(j) + 0.5) * h;
    }

    // Boundary logarithm per cell, or nothing where it is not available.
    auto boundary_logs = [&](const HerglotzFunction& f) {
        std::vector<std::optional<cplx>> logs(cells);
        for (std::size_t j = 0; j < cells; ++j) {
            const BoundaryValue bv = boundary_value(f, nodes[j], ladder);
            if (bv.converged && std::abs(bv.value) >= kVanishing) {
                logs[j] = branch_log(bv.value);
            }
        }
        return logs;
    };

    std::vector<std::vector<double>> tf_values(test_functions.size(), std::vector<double>(cells));
    for (std::size_t i = 0; i < test_functions.size(); ++i) {
        for (std::size_t j = 0; j < cells; ++j) {
            tf_values[i][j] = test_functions[i](nodes[j]);
        }
    }

    const auto limit_logs = boundary_logs(limit);
    const std::size_t allowed = cells / 20;

    WeakL2Report report;
    report.cells = cells;
    report.gaps.assign(test_functions.size(), {});
    for (const HerglotzFunction& fn : sequence) {
        const auto logs = boundary_logs(fn);
        std::size_t excluded = 0;
        std::vector<cplx> diff(cells, 0.0);
        for (std::size_t j = 0; j < cells; ++j) {
            if (logs[j] && limit_logs[j]) {
                diff[j] = *logs[j] - *limit_logs[j];
            } else {
                ++excluded;
            }
        }
        if (excluded > allowed) {
            throw NumericalError("weak_l2_report: " + std::to_string(excluded) + " of " +
                                 std::to_string(cells) +
                                 " cells without a converged boundary value");
        }
        report.max_excluded_cells = std::max(report.max_excluded_cells, excluded);
        for (std::size_t i = 0; i < test_functions.size(); ++i) {
            cplx acc = 0.0;
            for (std::size_t j = 0; j < cells; ++j) {
                acc += tf_values[i][j] * diff[j];
            }
            report.gaps[i].push_back(std::abs(acc * h));
        }
    }
    return report;
}

}  // namespace refcoef

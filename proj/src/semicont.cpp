#include "refcoef/semicont.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include <json.hpp>

#include "refcoef/error.hpp"
#include "refcoef/io.hpp"

namespace refcoef {

RhoPair rho_intersections(double phi, double c) {
    if (!(phi > std::numbers::pi / 2 && phi < 3 * std::numbers::pi / 2)) {
        throw DomainError("rho_intersections: phi must lie in (pi/2, 3pi/2)");
    }
    if (!(c > 0.0 && c < 1.0)) {
        throw DomainError("rho_intersections: C must lie in (0, 1)");
    }
    const double s = std::sin(phi);
    const double disc = c * c - s * s;
    if (disc < 0.0) {
        throw DomainError("rho_intersections: |sin phi| > C, the ray misses the circle");
    }
    const double rho1 = -std::cos(phi) + std::sqrt(disc);
    // rho0 rho1 = 1 - C^2; avoids cancellation when C is close to 1.
    return {(1.0 - c) * (1.0 + c) / rho1, rho1};
}

bool log_disk_membership(cplx w, double c, double slack) {
    return std::abs(std::exp(w) + 1.0) <= c + slack;
}

ConvexityProbe convexity_probe(double c, std::size_t trials, std::uint64_t seed) {
    if (!(c > 0.0 && c < 1.0)) {
        throw DomainError("convexity_probe: C must lie in (0, 1)");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-c, c);
    auto draw = [&] {
        while (true) {
            const cplx z(coord(rng), coord(rng));
            if (std::abs(z) <= c) {
                return branch_log(z - 1.0);
            }
        }
    };
    ConvexityProbe probe;
    probe.trials = trials;
    for (std::size_t k = 0; k < trials; ++k) {
        const cplx mid = 0.5 * (draw() + draw());
        const double defect = std::abs(std::exp(mid) + 1.0) - c;
        if (defect > 1e-12) {
            ++probe.failures;
        }
        probe.worst_defect = std::max(probe.worst_defect, defect);
    }
    return probe;
}

void ExperimentSpec::validate() const {
    if (schedule.empty()) {
        throw DomainError("experiment: schedule must not be empty");
    }
    if (tail_start >= schedule.size()) {
        throw DomainError("experiment: tail_start must be less than the schedule length");
    }
    if (xs.empty()) {
        throw DomainError("experiment: empty x grid");
    }
    if (!(eps > 0.0 && eps < 1.0)) {
        throw DomainError("experiment: eps must lie in (0, 1)");
    }
    if (!(effective_tolerance() >= 0.0)) {
        throw DomainError("experiment: tolerance must be non-negative");
    }
    ladder.validate();
}

SemicontReport run_semicontinuity(const ExperimentSpec& spec) {
    spec.validate();
    const std::size_t m = spec.xs.size();

    SemicontReport report;
    report.tolerance = spec.effective_tolerance();

    std::vector<double> tail_sup(m, 0.0);
    std::vector<bool> converged(m, true);
    JacobiOperator current = spec.base;
    for (std::size_t n = 0; n < spec.schedule.size(); ++n) {
        current = spec.schedule[n].apply(current);
        const auto profile = reflection_profile(current, spec.xs, spec.ladder);
        std::vector<double> row(m);
        for (std::size_t k = 0; k < m; ++k) {
            row[k] = profile[k].abs_r;
            if (n >= spec.tail_start) {
                tail_sup[k] = std::max(tail_sup[k], profile[k].abs_r);
                if (!profile[k].converged) {
                    converged[k] = false;
                }
            }
        }
        report.abs_r.push_back(std::move(row));
    }

    const auto limit_profile = reflection_profile(spec.limit, spec.xs, spec.ladder);
    for (std::size_t k = 0; k < m; ++k) {
        SemicontRow r;
        r.x = spec.xs[k];
        r.tail_sup = tail_sup[k];
        r.limit_abs_r = limit_profile[k].abs_r;
        r.converged = converged[k] && limit_profile[k].converged;
        if (r.converged) {
            r.violation = r.limit_abs_r > r.tail_sup + report.tolerance;
            if (r.tail_sup < 1.0 - spec.eps &&
                !(r.limit_abs_r < 1.0 - spec.eps + report.tolerance)) {
                ++report.inclusion_failures;
            }
        } else {
            ++report.non_converged;
        }
        report.violations += r.violation ? 1 : 0;
        report.rows.push_back(r);
    }
    if (10 * report.non_converged > m) {
        throw NumericalError("semicontinuity: " + std::to_string(report.non_converged) + " of " +
                             std::to_string(m) + " grid points failed to converge");
    }

    const std::vector<JacobiOperator> last{current};
    report.final_weak_gap = weak_convergence_check(last, spec.limit, spec.convergence_grid).front();
    report.weak_convergence_warning = report.final_weak_gap > 10.0 * report.tolerance;
    return report;
}

void write_semicont_csv(std::ostream& out, const SemicontReport& report) {
    out << "x,tail_sup_absR,limit_absR,violation,converged\n";
    for (const SemicontRow& r : report.rows) {
        out << format_double(r.x) << ',' << format_double(r.tail_sup) << ','
            << format_double(r.limit_abs_r) << ',' << (r.violation ? "true" : "false") << ','
            << (r.converged ? "true" : "false") << '\n';
    }
}

std::string semicont_to_json(const SemicontReport& report) {
    nlohmann::ordered_json doc;
    auto rows = nlohmann::ordered_json::array();
    for (const SemicontRow& r : report.rows) {
        rows.push_back({{"x", r.x},
                        {"tail_sup_absR", r.tail_sup},
                        {"limit_absR", r.limit_abs_r},
                        {"violation", r.violation},
                        {"converged", r.converged}});
    }
    doc["rows"] = std::move(rows);
    doc["tolerance"] = report.tolerance;
    doc["violations"] = report.violations;
    doc["non_converged"] = report.non_converged;
    doc["inclusion_failures"] = report.inclusion_failures;
    doc["final_weak_gap"] = report.final_weak_gap;
    doc["weak_convergence_warning"] = report.weak_convergence_warning;
    return doc.dump(2);
}

}  // namespace refcoef

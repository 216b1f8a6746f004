#include "refcoef/weyl.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "refcoef/error.hpp"
#include "refcoef/io.hpp"

namespace refcoef {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDetTol = 1e-10;
// |Im(c conj d)| below this fraction of |c|^2 + |d|^2 counts as a line.
constexpr double kLineTol = 1e-14;

}  // namespace

const char* to_string(DiskDescriptor::Kind kind) {
    switch (kind) {
        case DiskDescriptor::Kind::proper:
            return "proper";
        case DiskDescriptor::Kind::half_plane:
            return "half-plane";
        case DiskDescriptor::Kind::touching:
            return "touching";
    }
    return "?";
}

const char* to_string(DichotomyVerdict verdict) {
    switch (verdict) {
        case DichotomyVerdict::shrinks:
            return "shrinks";
        case DichotomyVerdict::bounded_below:
            return "bounded-below";
        case DichotomyVerdict::inconclusive:
            return "inconclusive";
    }
    return "?";
}

DiskDescriptor image_disk(const UnimodularMatrix& m, double touch_tol) {
    if (unimodularity_defect(m.entries()) > kDetTol) {
        throw DomainError("image_disk: matrix is not unimodular");
    }
    const cplx a = m.a(), b = m.b(), c = m.c(), d = m.d();
    // w = M x lies in M(C+) iff Im M^{-1} w > 0, i.e.
    //   alpha |w|^2 + Im(gamma w) + delta > 0
    // with alpha = Im(c conj d), gamma = conj(a) d - conj(b) c, delta = Im(a conj b).
    const double alpha = (c * std::conj(d)).imag();
    // Im a Im d - Im b Im c: the scaled distance of the image to the real axis.
    const double q = a.imag() * d.imag() - b.imag() * c.imag();
    DiskDescriptor out;
    if (std::abs(alpha) <= kLineTol * (std::norm(c) + std::norm(d))) {
        out.kind = DiskDescriptor::Kind::half_plane;
        out.normal = std::conj(a) * d - std::conj(b) * c;
        out.offset = (a * std::conj(b)).imag();
        // Contained in C+ iff the line is horizontal with the region above it.
        if (std::abs(out.normal.imag()) > 1e-10 * std::abs(out.normal) || out.normal.real() <= 0.0 ||
            out.offset > 1e-10 * (1.0 + std::abs(out.offset))) {
            throw DomainError("image_disk: image of C+ leaves the upper half plane");
        }
        out.gap = -out.offset / out.normal.real();
        return out;
    }
    if (alpha > 0.0) {
        throw DomainError("image_disk: image of C+ is the exterior of a disk");
    }
    out.radius = 1.0 / (2.0 * -alpha);
    out.center = (a * std::conj(d) - b * std::conj(c)) / cplx(0.0, 2.0 * alpha);
    out.gap = q / -alpha;
    const double tol = touch_tol < 0.0 ? 1e-9 * (1.0 + std::abs(out.center)) : touch_tol;
    if (out.gap < -tol) {
        throw DomainError("image_disk: image disk crosses the real axis");
    }
    out.kind = out.gap < tol ? DiskDescriptor::Kind::touching : DiskDescriptor::Kind::proper;
    return out;
}

double hyperbolic_diameter(const DiskDescriptor& disk) {
    if (disk.kind != DiskDescriptor::Kind::proper) {
        return kInf;
    }
    // ln((gap + 2r)/gap)
    return std::log1p(2.0 * disk.radius / disk.gap);
}

std::vector<double> prefix_diameters(std::span<const MatrixRule> rules, cplx z) {
    std::vector<double> out;
    out.reserve(rules.size());
    UnimodularMatrix p = UnimodularMatrix::identity();
    for (std::size_t n = 0; n < rules.size(); ++n) {
        p = rules[n](z) * p;
        if (unimodularity_defect(p.entries()) > kDetTol) {
            throw NumericalError("prefix_diameters: product " + std::to_string(n + 1) +
                                 " lost unimodularity");
        }
        out.push_back(hyperbolic_diameter(image_disk(p)));
    }
    return out;
}

DichotomyReport classify_dichotomy(std::span<const MatrixRule> rules, std::span<const cplx> zs,
                                   std::size_t n, double shrink_tol) {
    if (n < 2 || n > rules.size()) {
        throw DomainError("classify_dichotomy: need 2 <= N <= number of factors");
    }
    DichotomyReport report;
    report.n = n;
    std::size_t shrinking = 0;
    for (cplx z : zs) {
        const double r = prefix_diameters(rules.first(n), z).back();
        const bool shrinks = r < shrink_tol;
        shrinking += shrinks ? 1 : 0;
        report.points.push_back({z, r, shrinks});
    }
    if (shrinking == zs.size()) {
        report.verdict = DichotomyVerdict::shrinks;
    } else if (shrinking == 0) {
        report.verdict = DichotomyVerdict::bounded_below;
    }
    return report;
}

std::vector<MatrixRule> segment_rules(const CanonicalSystem& system) {
    std::vector<MatrixRule> out;
    for (const Segment& s : system.segments()) {
        out.emplace_back([s](cplx z) { return segment_transfer(s, z); });
    }
    return out;
}

void write_weyl_csv(std::ostream& out, std::span<const WeylRow> rows) {
    out << "n,re_z,im_z,R_n\n";
    for (const WeylRow& r : rows) {
        out << r.n << ',' << format_double(r.z.real()) << ',' << format_double(r.z.imag()) << ','
            << format_double(r.diameter) << '\n';
    }
}

}  // namespace refcoef

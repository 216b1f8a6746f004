#pragma once

// Text formats shared by the library and the command-line front end.

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "refcoef/canonical.hpp"
#include "refcoef/jacobi.hpp"
#include "refcoef/semicont.hpp"

namespace refcoef {

/// 17 significant digits (round-trips every double); infinities as "inf"
/// and "-inf".
std::string format_double(double v);

/// Inverse of format_double. Throws InputError (E002) on malformed text.
double parse_double(std::string_view text);

/// Accepts "1.5", "2i", "-1-2i", "0+1i", "3.5e-2+4i".
std::complex<double> parse_complex(std::string_view text);

/// Splits one CSV line on commas (no quoting; the formats here never need it).
std::vector<std::string> split_csv_line(std::string_view line);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::string_view text);

/// {"window_lo": int, "a": [...], "b": [...]}. Errors: E001 missing file,
/// E002 malformed field, E003 invariant violation (index reported).
JacobiOperator parse_operator_text(std::string_view text);
JacobiOperator parse_operator(const std::string& path);
std::string operator_to_json(const JacobiOperator& op);

/// {"segments": [{"length", "h11", "h12", "h22"}, ...]} or a bare list.
CanonicalSystem parse_canonical_text(std::string_view text);
CanonicalSystem parse_canonical(const std::string& path);

struct GridSpec {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t count = 2;

    /// count points from lo to hi inclusive.
    std::vector<double> points() const;
};

/// "lo:hi:count" with lo < hi and count >= 2; E002 if malformed, E003 if
/// the constraints fail.
GridSpec parse_grid(std::string_view text);

/// {
///   "base": operator, "limit": operator or "free",
///   "schedule": [{"shift": k, "repeat": r} | {"toda": t, "repeat": r,
///                 "dt": .., "widening": .., "margin": ..}, ...],
///   "grid": "lo:hi:count" or "x": [...],
///   "ladder": {"y0", "ratio", "max_steps", "tol"},   (optional)
///   "tail_start": n, "tolerance": tol, "eps": eps     (optional)
/// }
ExperimentSpec parse_experiment_text(std::string_view text);
ExperimentSpec parse_experiment(const std::string& path);

/// Whole file; InputError E001 if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace refcoef

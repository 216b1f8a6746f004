#include "refcoef/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "refcoef/canonical.hpp"
#include "refcoef/error.hpp"
#include "refcoef/herglotz.hpp"
#include "refcoef/io.hpp"
#include "refcoef/jacobi.hpp"
#include "refcoef/reflection.hpp"
#include "refcoef/semicont.hpp"
#include "refcoef/weyl.hpp"

namespace refcoef {

namespace {

using ojson = nlohmann::ordered_json;

// Raised after the output is written when too many ladder points failed.
struct ConvergenceFailure {
    std::size_t failed;
    std::size_t total;
};

ojson num(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

std::string csv_bool(bool b) { return b ? "true" : "false"; }

// Rows of named fields, serialized either as CSV or as a JSON array of
// objects with the same keys.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<ojson>> rows;

    void add(std::vector<ojson> row) { rows.push_back(std::move(row)); }

    static std::string cell(const ojson& v) {
        if (v.is_boolean()) {
            return csv_bool(v.get<bool>());
        }
        if (v.is_number_float()) {
            return format_double(v.get<double>());
        }
        if (v.is_number()) {
            return v.dump();
        }
        return v.get<std::string>();
    }

    std::string csv() const {
        std::string s;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            s += (i ? "," : "") + columns[i];
        }
        s += '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                s += (i ? "," : "") + cell(row[i]);
            }
            s += '\n';
        }
        return s;
    }

    ojson json() const {
        ojson arr = ojson::array();
        for (const auto& row : rows) {
            ojson obj;
            for (std::size_t i = 0; i < row.size(); ++i) {
                obj[columns[i]] = row[i];
            }
            arr.push_back(std::move(obj));
        }
        return arr;
    }
};

struct Common {
    std::string out_path;
    std::string format;  // empty: the subcommand's default
    std::uint64_t seed = 0;
    std::optional<double> ladder_y0, ladder_ratio, ladder_tol;
    std::optional<int> ladder_steps;

    BoundaryLadder ladder() const {
        BoundaryLadder l;
        if (ladder_y0) l.y0 = *ladder_y0;
        if (ladder_ratio) l.ratio = *ladder_ratio;
        if (ladder_tol) l.tol = *ladder_tol;
        if (ladder_steps) l.max_steps = *ladder_steps;
        try {
            l.validate();
        } catch (const DomainError& e) {
            throw InputError("E003", e.what());
        }
        return l;
    }
};

void add_common(CLI::App* sub, Common& c, bool ladder, const std::string& default_format = "csv") {
    sub->add_option("--out", c.out_path, "Output file (default: standard output)");
    sub->add_option("--format", c.format, "Output format (default " + default_format + ")")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", c.seed,
                    "Seed for randomized steps; no current subcommand draws random numbers");
    if (ladder) {
        sub->add_option("--ladder-y0", c.ladder_y0, "First ladder height (default 1e-2)");
        sub->add_option("--ladder-ratio", c.ladder_ratio, "Ladder ratio (default 0.5)");
        sub->add_option("--ladder-steps", c.ladder_steps, "Ladder steps (default 24)");
        sub->add_option("--ladder-tol", c.ladder_tol, "Ladder stopping tolerance (default 1e-8)");
    }
}

std::vector<cplx> parse_points(const std::vector<std::string>& texts, bool upper) {
    std::vector<cplx> zs;
    for (const std::string& t : texts) {
        const cplx z = parse_complex(t);
        if (upper && !(z.imag() > 0.0)) {
            throw InputError("E003", "point " + t + " is not in the upper half plane");
        }
        zs.push_back(z);
    }
    return zs;
}

void check_convergence(std::size_t failed, std::size_t total) {
    if (10 * failed > total) {
        throw ConvergenceFailure{failed, total};
    }
}

std::string render(const Table& t, const std::string& format) {
    return format == "json" ? t.json().dump(2) + "\n" : t.csv();
}

std::function<double(double)> parse_indicator(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw InputError("E002", "indicator must be a:b, got '" + text + "'");
    }
    const double a = parse_double(text.substr(0, colon));
    const double b = parse_double(text.substr(colon + 1));
    if (!(a < b)) {
        throw InputError("E003", "indicator needs a < b");
    }
    return [a, b](double x) { return (x > a && x < b) ? 1.0 : 0.0; };
}

std::pair<double, double> parse_interval(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw InputError("E002", "interval must be lo:hi, got '" + text + "'");
    }
    const double lo = parse_double(text.substr(0, colon));
    const double hi = parse_double(text.substr(colon + 1));
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw InputError("E003", "interval needs finite lo < hi");
    }
    return {lo, hi};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reflection coefficients, Weyl disks and related spectral computations",
                 "refcoef"};
    app.require_subcommand(1);

    Common common;
    std::string op_path, system_path, experiment_path, grid_text;
    std::vector<std::string> z_texts;
    double eps = 0.05, tol = 1e-3, t = 0.0, dt = 1e-3, shrink_tol = -1.0, radius = 1.0;
    double widening = TodaOptions{}.widening;
    long k = 1, margin = 0;
    std::size_t repeat = 1, n_max = 0, cells = 0, l2_n = 64, l2_cells = 4096;
    std::string family = "imag-shift", interval_text, indicator_text, samples_path;
    std::vector<std::string> test_texts;
    std::vector<double> at;

    auto* m_fn = app.add_subcommand("m-function", "Half-line m-functions m+ and m-");
    m_fn->add_option("--op", op_path, "Operator file")->required();
    m_fn->add_option("--grid", grid_text, "Boundary grid lo:hi:count");
    m_fn->add_option("--z", z_texts, "Points in C+ (e.g. 0+1i)");
    add_common(m_fn, common, true);

    auto* refl = app.add_subcommand("reflection", "Boundary reflection coefficients");
    refl->add_option("--op", op_path)->required();
    refl->add_option("--grid", grid_text)->required();
    add_common(refl, common, true);

    auto* sac = app.add_subcommand("sigma-ac", "Grid approximation of the a.c. spectrum");
    sac->add_option("--op", op_path)->required();
    sac->add_option("--grid", grid_text)->required();
    sac->add_option("--eps", eps, "Margin: |R| < 1 - eps")->capture_default_str();
    add_common(sac, common, true);

    auto* rl = app.add_subcommand("reflectionless", "Points where the operator is reflectionless");
    rl->add_option("--op", op_path)->required();
    rl->add_option("--grid", grid_text)->required();
    rl->add_option("--tol", tol)->capture_default_str();
    add_common(rl, common, true);

    auto* si = app.add_subcommand("shift-invariance", "|R| before and after a shift");
    si->add_option("--op", op_path)->required();
    si->add_option("--grid", grid_text)->required();
    si->add_option("--k", k, "Shift")->capture_default_str();
    add_common(si, common, true);

    auto* toda = app.add_subcommand("toda", "Time-t Toda flow of an operator");
    toda->add_option("--op", op_path)->required();
    toda->add_option("--t", t, "Time")->required();
    toda->add_option("--dt", dt)->capture_default_str();
    toda->add_option("--widening", widening, "Extra sites per unit time")->capture_default_str();
    toda->add_option("--margin", margin, "Extra sites regardless of t")->capture_default_str();
    add_common(toda, common, false, "json");

    auto* ct = app.add_subcommand("canonical-transfer", "Transfer matrix of a canonical system");
    ct->add_option("--system", system_path)->required();
    ct->add_option("--z", z_texts)->required();
    add_common(ct, common, false);

    auto* ji = app.add_subcommand("j-inner", "Smallest eigenvalue of -i(T*JT - J)");
    ji->add_option("--system", system_path)->required();
    ji->add_option("--z", z_texts)->required();
    add_common(ji, common, false, "json");

    auto* wd = app.add_subcommand("weyl-disks", "Hyperbolic diameters of Weyl disks");
    wd->add_option("--system", system_path, "Each segment is one factor")->required();
    wd->add_option("--z", z_texts)->required();
    wd->add_option("--repeat", repeat, "Repeat the segment list")->capture_default_str();
    wd->add_option("--n", n_max, "Use the first N factors (default: all)");
    wd->add_option("--shrink-tol", shrink_tol, "Classify: shrinks iff R_N < tol");
    add_common(wd, common, false);

    auto* sc = app.add_subcommand("semicont", "Semicontinuity experiment");
    sc->add_option("--experiment", experiment_path)->required();
    add_common(sc, common, false);

    auto* hb = app.add_subcommand("hilbert", "Principal-value Hilbert transform on an interval");
    hb->add_option("--interval", interval_text, "lo:hi")->required();
    hb->add_option("--cells", cells)->required();
    hb->add_option("--indicator", indicator_text, "f = indicator of (a, b)");
    hb->add_option("--samples", samples_path, "File with one midpoint value per line");
    hb->add_option("--at", at, "Evaluation points (default: all cell edges)");
    add_common(hb, common, false);

    auto* wl = app.add_subcommand("weak-l2", "Weak-L2 pairing gaps of boundary logarithms");
    wl->add_option("--family", family, "imag-shift: F_n = z + i/n, F = z; "
                                       "jacobi-shift: F_n = m+ of op shifted by n, F = free m+")
        ->check(CLI::IsMember({"imag-shift", "jacobi-shift"}))
        ->capture_default_str();
    wl->add_option("--op", op_path, "Operator for jacobi-shift");
    wl->add_option("--n-max", l2_n)->capture_default_str();
    wl->add_option("--radius", radius)->capture_default_str();
    wl->add_option("--cells", l2_cells)->capture_default_str();
    wl->add_option("--test", test_texts, "Test function indicator a:b (default: -R:R)");
    add_common(wl, common, true);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "E004 " << msg << '\n';
        return 1;
    }

    auto error_line = [&](const std::string& code, std::string msg) {
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << code << ' ' << msg << '\n';
    };

    std::string text;
    std::optional<ConvergenceFailure> convergence_failure;
    try {
        const std::string fmt =
            !common.format.empty() ? common.format
                                   : ((toda->parsed() || ji->parsed()) ? "json" : "csv");
        if (m_fn->parsed()) {
            const JacobiOperator op = parse_operator(op_path);
            if (grid_text.empty() == z_texts.empty()) {
                throw InputError("E004", "m-function needs exactly one of --grid and --z");
            }
            const MPair mp = m_pair(op);
            if (!z_texts.empty()) {
                Table tb{{"re_z", "im_z", "re_m_plus", "im_m_plus", "re_m_minus", "im_m_minus"}, {}};
                for (cplx z : parse_points(z_texts, true)) {
                    const cplx p = mp.m_plus(z), m = mp.m_minus(z);
                    tb.add({z.real(), z.imag(), p.real(), p.imag(), m.real(), m.imag()});
                }
                text = render(tb, fmt);
            } else {
                const BoundaryLadder ladder = common.ladder();
                Table tb{{"x", "re_m_plus", "im_m_plus", "re_m_minus", "im_m_minus", "converged"},
                         {}};
                std::size_t failed = 0;
                const auto xs = parse_grid(grid_text).points();
                for (double x : xs) {
                    const BoundaryValue p = boundary_value(mp.m_plus, x, ladder);
                    const BoundaryValue m = boundary_value(mp.m_minus, x, ladder);
                    const bool ok = p.converged && m.converged;
                    failed += ok ? 0 : 1;
                    tb.add({x, p.value.real(), p.value.imag(), m.value.real(), m.value.imag(), ok});
                }
                text = render(tb, fmt);
                check_convergence(failed, xs.size());
            }
        } else if (refl->parsed() || sac->parsed() || rl->parsed()) {
            const JacobiOperator op = parse_operator(op_path);
            const auto xs = parse_grid(grid_text).points();
            const auto profile = reflection_profile(op, xs, common.ladder());
            std::size_t failed = 0;
            for (const auto& s : profile) {
                failed += s.converged ? 0 : 1;
            }
            if (refl->parsed()) {
                if (fmt == "csv") {
                    std::ostringstream ss;
                    write_reflection_csv(ss, profile);
                    text = ss.str();
                } else {
                    Table tb{{"x", "re_R_plus", "im_R_plus", "re_R_minus", "im_R_minus", "abs_R",
                              "converged"},
                             {}};
                    for (const auto& s : profile) {
                        tb.add({s.x, s.r_plus.real(), s.r_plus.imag(), s.r_minus.real(),
                                s.r_minus.imag(), s.abs_r, s.converged});
                    }
                    text = render(tb, fmt);
                }
            } else if (sac->parsed()) {
                if (!(eps > 0.0 && eps < 1.0)) {
                    throw InputError("E003", "--eps must lie in (0, 1)");
                }
                Table tb{{"x", "abs_R", "in_sigma_ac", "converged"}, {}};
                for (const auto& s : profile) {
                    tb.add({s.x, s.abs_r, s.converged && s.abs_r < 1.0 - eps, s.converged});
                }
                text = render(tb, fmt);
            } else {
                if (!(tol > 0.0)) {
                    throw InputError("E003", "--tol must be positive");
                }
                Table tb{{"x", "abs_R", "defect", "reflectionless", "converged"}, {}};
                for (const auto& s : profile) {
                    const double defect = reflectionless_defect(s.m_plus, s.m_minus);
                    const bool yes = s.converged && s.abs_r < tol &&
                                     defect < tol * (1.0 + std::abs(s.m_plus));
                    tb.add({s.x, s.abs_r, defect, yes, s.converged});
                }
                text = render(tb, fmt);
            }
            check_convergence(failed, xs.size());
        } else if (si->parsed()) {
            const JacobiOperator op = parse_operator(op_path);
            const auto xs = parse_grid(grid_text).points();
            const InvarianceReport r =
                invariance_report(op, OperatorTransform::shift_by(k), xs, common.ladder());
            std::vector<cplx> zs;
            for (int j = 0; j < 20; ++j) {
                zs.emplace_back(-2.5 + 0.25 * j, 0.1 + 0.1 * (j % 5));
            }
            const double tm_dev = verify_tm_shift(op, zs);
            Table tb{{"x", "abs_R_before", "abs_R_after"}, {}};
            for (std::size_t i = 0; i < xs.size(); ++i) {
                tb.add({xs[i], r.abs_r_before[i], r.abs_r_after[i]});
            }
            if (fmt == "json") {
                ojson doc;
                doc["k"] = k;
                doc["max_discrepancy"] = r.max_discrepancy;
                doc["non_converged"] = r.non_converged;
                doc["tm_shift_deviation"] = tm_dev;
                doc["rows"] = tb.json();
                text = doc.dump(2) + "\n";
            } else {
                text = tb.csv();
            }
            check_convergence(r.non_converged, xs.size());
        } else if (toda->parsed()) {
            const JacobiOperator op = parse_operator(op_path);
            if (!(t >= 0.0) || !(dt > 0.0) || !(widening >= 0.0) || margin < 0) {
                throw InputError("E003", "toda needs t >= 0, dt > 0, widening >= 0, margin >= 0");
            }
            const JacobiOperator evolved = toda_flow(op, t, {dt, widening, margin});
            if (fmt == "json") {
                text = operator_to_json(evolved) + "\n";
            } else {
                Table tb{{"n", "a", "b"}, {}};
                for (long n = evolved.window_lo(); n <= evolved.window_hi(); ++n) {
                    tb.add({n, evolved.a(n), evolved.b(n)});
                }
                text = tb.csv();
            }
        } else if (ct->parsed()) {
            const CanonicalSystem cs = parse_canonical(system_path);
            Table tb{{"re_z", "im_z", "re_a", "im_a", "re_b", "im_b", "re_c", "im_c", "re_d",
                      "im_d"},
                     {}};
            for (cplx z : parse_points(z_texts, false)) {
                const UnimodularMatrix m = transfer(cs, z);
                tb.add({z.real(), z.imag(), m.a().real(), m.a().imag(), m.b().real(),
                        m.b().imag(), m.c().real(), m.c().imag(), m.d().real(), m.d().imag()});
            }
            text = render(tb, fmt);
        } else if (ji->parsed()) {
            const CanonicalSystem cs = parse_canonical(system_path);
            Table tb{{"re_z", "im_z", "min_eig", "form_11", "re_form_12", "im_form_12", "form_22"},
                     {}};
            for (cplx z : parse_points(z_texts, true)) {
                const JInnerDefect d = j_inner_defect(transfer(cs, z), z);
                tb.add({z.real(), z.imag(), d.min_eig, d.form.a.real(), d.form.b.real(),
                        d.form.b.imag(), d.form.d.real()});
            }
            if (fmt == "json" && tb.rows.size() == 1) {
                text = tb.json().front().dump(2) + "\n";
            } else {
                text = render(tb, fmt);
            }
        } else if (wd->parsed()) {
            const CanonicalSystem cs = parse_canonical(system_path);
            const std::vector<MatrixRule> base = segment_rules(cs);
            std::vector<MatrixRule> rules;
            for (std::size_t r = 0; r < repeat; ++r) {
                rules.insert(rules.end(), base.begin(), base.end());
            }
            const std::size_t n = n_max == 0 ? rules.size() : n_max;
            if (n == 0 || n > rules.size()) {
                throw InputError("E003", "--n must lie between 1 and the number of factors");
            }
            const std::span<const MatrixRule> used(rules.data(), n);
            const auto zs = parse_points(z_texts, true);
            if (shrink_tol >= 0.0) {
                const DichotomyReport rep = classify_dichotomy(used, zs, n, shrink_tol);
                Table tb{{"re_z", "im_z", "R_N", "shrinks"}, {}};
                for (const auto& p : rep.points) {
                    tb.add({p.z.real(), p.z.imag(), num(p.diameter), p.shrinks});
                }
                if (fmt == "json") {
                    ojson doc;
                    doc["N"] = rep.n;
                    doc["verdict"] = to_string(rep.verdict);
                    doc["points"] = tb.json();
                    text = doc.dump(2) + "\n";
                } else {
                    text = tb.csv();
                }
            } else {
                std::vector<WeylRow> rows;
                for (cplx z : zs) {
                    const auto ds = prefix_diameters(used, z);
                    for (std::size_t j = 0; j < ds.size(); ++j) {
                        rows.push_back({j + 1, z, ds[j]});
                    }
                }
                if (fmt == "csv") {
                    std::ostringstream ss;
                    write_weyl_csv(ss, rows);
                    text = ss.str();
                } else {
                    Table tb{{"n", "re_z", "im_z", "R_n"}, {}};
                    for (const auto& r : rows) {
                        tb.add({r.n, r.z.real(), r.z.imag(), num(r.diameter)});
                    }
                    text = render(tb, fmt);
                }
            }
        } else if (sc->parsed()) {
            const ExperimentSpec spec = parse_experiment(experiment_path);
            const SemicontReport rep = run_semicontinuity(spec);
            if (fmt == "json") {
                text = semicont_to_json(rep) + "\n";
            } else {
                std::ostringstream ss;
                write_semicont_csv(ss, rep);
                text = ss.str();
            }
            if (rep.weak_convergence_warning) {
                error_line("W001", "sequence does not appear to converge to the limit (final gap " +
                                       format_double(rep.final_weak_gap) + ")");
            }
        } else if (hb->parsed()) {
            const auto [lo, hi] = parse_interval(interval_text);
            if (cells == 0) {
                throw InputError("E003", "--cells must be positive");
            }
            if (indicator_text.empty() == samples_path.empty()) {
                throw InputError("E004", "hilbert needs exactly one of --indicator and --samples");
            }
            MidpointSamples samples;
            if (!indicator_text.empty()) {
                samples = sample_midpoints(parse_indicator(indicator_text), lo, hi, cells);
            } else {
                samples = MidpointSamples{lo, hi, {}};
                std::istringstream in(read_file(samples_path));
                std::string line;
                while (std::getline(in, line)) {
                    if (!line.empty() && line.back() == '\r') {
                        line.pop_back();
                    }
                    if (line.empty() || line == "value") {
                        continue;
                    }
                    samples.values.push_back(parse_double(line));
                }
                if (samples.values.size() != cells) {
                    throw InputError("E003", "expected " + std::to_string(cells) +
                                                 " samples, found " +
                                                 std::to_string(samples.values.size()));
                }
            }
            std::vector<double> points = at;
            if (points.empty()) {
                for (std::size_t e = 0; e <= cells; ++e) {
                    points.push_back(samples.edge(e));
                }
            }
            Table tb{{"x", "hilbert"}, {}};
            for (double x : points) {
                tb.add({x, hilbert_transform(samples, x)});
            }
            text = render(tb, fmt);
        } else if (wl->parsed()) {
            if (l2_n == 0 || !(radius > 0.0) || l2_cells == 0) {
                throw InputError("E003", "weak-l2 needs --n-max >= 1, --radius > 0, --cells >= 1");
            }
            std::vector<HerglotzFunction> seq;
            std::optional<HerglotzFunction> limit;
            if (family == "imag-shift") {
                for (std::size_t n = 1; n <= l2_n; ++n) {
                    seq.push_back(HerglotzFunction::affine(1.0, {0.0, 1.0 / static_cast<double>(n)}));
                }
                limit = HerglotzFunction::identity();
            } else {
                if (op_path.empty()) {
                    throw InputError("E004", "jacobi-shift needs --op");
                }
                const JacobiOperator op = parse_operator(op_path);
                for (std::size_t n = 1; n <= l2_n; ++n) {
                    seq.push_back(m_pair(shift(op, static_cast<long>(n))).m_plus);
                }
                limit = HerglotzFunction::free_jacobi_m_plus();
            }
            std::vector<TestFunction> tests;
            for (const std::string& s : test_texts) {
                tests.push_back(parse_indicator(s));
            }
            if (tests.empty()) {
                tests.push_back([radius](double x) { return std::abs(x) < radius ? 1.0 : 0.0; });
            }
            const WeakL2Report rep =
                weak_l2_report(seq, *limit, radius, tests, common.ladder(), l2_cells);
            Table tb{{"n", "test", "gap"}, {}};
            for (std::size_t n = 0; n < seq.size(); ++n) {
                for (std::size_t i = 0; i < tests.size(); ++i) {
                    tb.add({n + 1, i, rep.gaps[i][n]});
                }
            }
            text = render(tb, fmt);
        }
    } catch (const ConvergenceFailure& f) {
        convergence_failure = f;
    } catch (const InputError& e) {
        error_line(e.code(), e.what());
        return 1;
    } catch (const DomainError& e) {
        error_line("E004", e.what());
        return 1;
    } catch (const NumericalError& e) {
        error_line("E005", e.what());
        return 2;
    } catch (const std::exception& e) {
        error_line("E006", e.what());
        return 2;
    }

    if (common.out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(common.out_path, std::ios::binary);
        if (!file || !(file << text)) {
            error_line("E001", "cannot write '" + common.out_path + "'");
            return 1;
        }
    }
    if (convergence_failure) {
        error_line("E005", std::to_string(convergence_failure->failed) + " of " +
                               std::to_string(convergence_failure->total) +
                               " grid points without a converged boundary value");
        return 2;
    }
    return 0;
}

}  // namespace refcoef

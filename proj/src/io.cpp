#include "refcoef/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "refcoef/error.hpp"

namespace refcoef {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

double parse_double(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    if (text == "inf" || text == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (text == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw InputError("E002", "not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::complex<double> parse_complex(std::string_view text) {
    const std::string original(text);
    if (text.empty()) {
        throw InputError("E002", "empty complex literal");
    }
    if (text.back() != 'i') {
        return {parse_double(text), 0.0};
    }
    text.remove_suffix(1);
    // Split at the last sign that is not the leading one or part of an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = text.size(); k-- > 1;) {
        if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    try {
        auto imag_of = [](std::string_view s) {
            if (s.empty() || s == "+") {
                return 1.0;
            }
            if (s == "-") {
                return -1.0;
            }
            return parse_double(s);
        };
        if (split == std::string_view::npos) {
            return {0.0, imag_of(text)};
        }
        return {parse_double(text.substr(0, split)), imag_of(text.substr(split))};
    } catch (const InputError&) {
        throw InputError("E002", "not a complex number: '" + original + "'");
    }
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    bool first = true;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        start = end + 1;
        if (line.empty()) {
            continue;
        }
        if (first) {
            table.header = split_csv_line(line);
            first = false;
        } else {
            table.rows.push_back(split_csv_line(line));
        }
    }
    return table;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("E001", "cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError("E002", std::string("malformed JSON: ") + e.what());
    }
}

double number_field(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_number()) {
        throw InputError("E002", where + "field '" + key + "' missing or not a number");
    }
    return obj.at(key).get<double>();
}

std::vector<double> number_list(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_array()) {
        throw InputError("E002", std::string("field '") + key + "' missing or not a list");
    }
    std::vector<double> out;
    const json& arr = obj.at(key);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) {
            throw InputError("E002", std::string("field '") + key + "' entry " +
                                         std::to_string(i) + " is not a number");
        }
        out.push_back(arr[i].get<double>());
    }
    return out;
}

JacobiOperator operator_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw InputError("E002", "operator must be a JSON object");
    }
    if (!doc.contains("window_lo") || !doc.at("window_lo").is_number_integer()) {
        throw InputError("E002", "field 'window_lo' missing or not an integer");
    }
    const long lo = doc.at("window_lo").get<long>();
    std::vector<double> a = number_list(doc, "a");
    std::vector<double> b = number_list(doc, "b");
    if (a.empty() || a.size() != b.size()) {
        throw InputError("E002", "lists 'a' and 'b' must be non-empty and of equal length");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0.0) || !std::isfinite(a[i])) {
            throw InputError("E003", "a[" + std::to_string(i) + "] must be positive");
        }
        if (!std::isfinite(b[i])) {
            throw InputError("E003", "b[" + std::to_string(i) + "] must be finite");
        }
    }
    return {lo, std::move(a), std::move(b)};
}

}  // namespace

JacobiOperator parse_operator_text(std::string_view text) {
    return operator_from_json(parse_json(text));
}

JacobiOperator parse_operator(const std::string& path) { return parse_operator_text(read_file(path)); }

std::string operator_to_json(const JacobiOperator& op) {
    json doc;
    doc["window_lo"] = op.window_lo();
    doc["a"] = std::vector<double>(op.a_values().begin(), op.a_values().end());
    doc["b"] = std::vector<double>(op.b_values().begin(), op.b_values().end());
    return doc.dump();
}

CanonicalSystem parse_canonical_text(std::string_view text) {
    const json doc = parse_json(text);
    const json* list = &doc;
    if (doc.is_object()) {
        if (!doc.contains("segments")) {
            throw InputError("E002", "field 'segments' missing");
        }
        list = &doc.at("segments");
    }
    if (!list->is_array() || list->empty()) {
        throw InputError("E002", "segments must be a non-empty list");
    }
    std::vector<Segment> segments;
    for (std::size_t i = 0; i < list->size(); ++i) {
        const json& rec = (*list)[i];
        const std::string where = "segment " + std::to_string(i) + ": ";
        if (!rec.is_object()) {
            throw InputError("E002", where + "not an object");
        }
        segments.push_back({number_field(rec, "length", where), number_field(rec, "h11", where),
                            number_field(rec, "h12", where), number_field(rec, "h22", where)});
    }
    try {
        return CanonicalSystem(std::move(segments));
    } catch (const DomainError& e) {
        throw InputError("E003", e.what());
    }
}

CanonicalSystem parse_canonical(const std::string& path) {
    return parse_canonical_text(read_file(path));
}

std::vector<double> GridSpec::points() const {
    std::vector<double> xs(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) {
        xs[k] = lo + static_cast<double>(k) * step;
    }
    xs.back() = hi;
    return xs;
}

GridSpec parse_grid(std::string_view text) {
    const auto parts = [&] {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (true) {
            const std::size_t colon = text.find(':', start);
            out.emplace_back(text.substr(start, colon - start));
            if (colon == std::string_view::npos) {
                return out;
            }
            start = colon + 1;
        }
    }();
    if (parts.size() != 3) {
        throw InputError("E002", "grid must be lo:hi:count, got '" + std::string(text) + "'");
    }
    GridSpec g;
    g.lo = parse_double(parts[0]);
    g.hi = parse_double(parts[1]);
    std::size_t count = 0;
    const auto res = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
    if (res.ec != std::errc() || res.ptr != parts[2].data() + parts[2].size()) {
        throw InputError("E002", "grid count '" + parts[2] + "' is not a non-negative integer");
    }
    g.count = count;
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || !(g.lo < g.hi) || g.count < 2) {
        throw InputError("E003", "grid needs finite lo < hi and count >= 2");
    }
    return g;
}

namespace {

BoundaryLadder ladder_from_json(const json& obj) {
    BoundaryLadder ladder;
    if (!obj.is_object()) {
        throw InputError("E002", "ladder must be an object");
    }
    if (obj.contains("y0")) ladder.y0 = number_field(obj, "y0", "ladder: ");
    if (obj.contains("ratio")) ladder.ratio = number_field(obj, "ratio", "ladder: ");
    if (obj.contains("tol")) ladder.tol = number_field(obj, "tol", "ladder: ");
    if (obj.contains("max_steps")) {
        if (!obj.at("max_steps").is_number_integer()) {
            throw InputError("E002", "ladder: field 'max_steps' must be an integer");
        }
        ladder.max_steps = obj.at("max_steps").get<int>();
    }
    try {
        ladder.validate();
    } catch (const DomainError& e) {
        throw InputError("E003", e.what());
    }
    return ladder;
}

std::size_t count_field(const json& obj, const char* key, std::size_t fallback,
                        const std::string& where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw InputError("E002", where + "field '" + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

}  // namespace

ExperimentSpec parse_experiment_text(std::string_view text) {
    const json doc = parse_json(text);
    if (!doc.is_object()) {
        throw InputError("E002", "experiment must be a JSON object");
    }
    ExperimentSpec spec;
    if (!doc.contains("base")) {
        throw InputError("E002", "field 'base' missing");
    }
    spec.base = operator_from_json(doc.at("base"));
    if (!doc.contains("limit")) {
        throw InputError("E002", "field 'limit' missing");
    }
    const json& limit = doc.at("limit");
    spec.limit = limit.is_string() && limit.get<std::string>() == "free" ? JacobiOperator::free()
                                                                         : operator_from_json(limit);

    if (!doc.contains("schedule") || !doc.at("schedule").is_array()) {
        throw InputError("E002", "field 'schedule' missing or not a list");
    }
    const json& schedule = doc.at("schedule");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const json& step = schedule[i];
        const std::string where = "schedule[" + std::to_string(i) + "]: ";
        if (!step.is_object()) {
            throw InputError("E002", where + "not an object");
        }
        const std::size_t repeat = count_field(step, "repeat", 1, where);
        OperatorTransform transform;
        if (step.contains("shift")) {
            if (!step.at("shift").is_number_integer()) {
                throw InputError("E002", where + "field 'shift' must be an integer");
            }
            transform = OperatorTransform::shift_by(step.at("shift").get<long>());
        } else if (step.contains("toda")) {
            TodaOptions options;
            if (step.contains("dt")) options.dt = number_field(step, "dt", where);
            if (step.contains("widening")) options.widening = number_field(step, "widening", where);
            options.margin = static_cast<long>(count_field(step, "margin", 0, where));
            const double t = number_field(step, "toda", where);
            if (!(t >= 0.0) || !(options.dt > 0.0) || !(options.widening >= 0.0)) {
                throw InputError("E003", where + "need toda >= 0, dt > 0, widening >= 0");
            }
            transform = OperatorTransform::toda_time(t, options);
        } else {
            throw InputError("E002", where + "expected a 'shift' or 'toda' step");
        }
        spec.schedule.insert(spec.schedule.end(), repeat, transform);
    }

    if (doc.contains("grid")) {
        if (!doc.at("grid").is_string()) {
            throw InputError("E002", "field 'grid' must be a string lo:hi:count");
        }
        spec.xs = parse_grid(doc.at("grid").get<std::string>()).points();
    } else {
        spec.xs = number_list(doc, "x");
    }
    if (doc.contains("ladder")) {
        spec.ladder = ladder_from_json(doc.at("ladder"));
    }
    spec.tail_start = count_field(doc, "tail_start", 0, "");
    if (doc.contains("tolerance")) {
        spec.tolerance = number_field(doc, "tolerance", "");
    }
    if (doc.contains("eps")) {
        spec.eps = number_field(doc, "eps", "");
    }
    try {
        spec.validate();
    } catch (const DomainError& e) {
        throw InputError("E003", e.what());
    }
    return spec;
}

ExperimentSpec parse_experiment(const std::string& path) {
    return parse_experiment_text(read_file(path));
}

}  // namespace refcoef

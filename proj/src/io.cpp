#include "wsg/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "wsg/errors.hpp"

namespace wsg::io {

std::string format_real(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, end);
}

std::string format_fixed(double x, int decimals) {
    if (!std::isfinite(x)) return format_real(x);
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, decimals);
    return std::string(buf, end);
}

std::optional<double> parse_real(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

namespace {

void append_array(std::string& out, const VectorXd& v) {
    out += '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_real(v[i]);
    }
    out += ']';
}

void append_field(std::string& out, std::string_view key, const std::string& value, bool last = false) {
    out += "  \"";
    out += key;
    out += "\": ";
    out += value;
    out += last ? "\n" : ",\n";
}

} // namespace

std::string coefficient_document(const FilterCoefficients<double>& c, const MetricsReport<double>& metrics) {
    const FilterSpec<double>& spec = c.spec;
    std::string out = "{\n";
    append_field(out, "q", std::to_string(spec.window()));
    append_field(out, "degree", std::to_string(spec.degree()));
    append_field(out, "j", std::to_string(spec.eval_index()));
    append_field(out, "weight_kind", "\"" + std::string(to_string(spec.weights().kind())) + "\"");
    std::string weights;
    append_array(weights, spec.weights().values());
    append_field(out, "weights", weights);
    std::string taps;
    append_array(taps, c.taps);
    append_field(out, "coefficients", taps);
    append_field(out, "r", format_real(metrics.r));
    append_field(out, "s", format_real(metrics.s));

    std::string m = "{\"n\": " + std::to_string(metrics.n) + ", \"m\": " + std::to_string(metrics.m);
    if (metrics.closed) {
        m += ", \"r0\": " + format_real(metrics.closed->r0) + ", \"s0\": " + format_real(metrics.closed->s0) +
             ", \"r2\": " + format_real(metrics.closed->r2) + ", \"s2\": " + format_real(metrics.closed->s2);
    }
    if (metrics.degree_zero) {
        m += ", \"approx_r0_over_r2_q\": " + format_real(metrics.degree_zero->r0_over_r2) +
             ", \"approx_s0_over_s2_q\": " + format_real(metrics.degree_zero->s0_over_s2);
    }
    if (metrics.approx) {
        m += ", \"approx_r0_over_r2\": " + format_real(metrics.approx->r0_over_r2) +
             ", \"approx_s0_over_s2\": " + format_real(metrics.approx->s0_over_s2) +
             ", \"approx_s0_over_s1\": " + format_real(metrics.approx->s0_over_s1);
    }
    m += "}";
    append_field(out, "metrics", m, true);
    out += "}\n";
    return out;
}

FilterCoefficients<double> parse_coefficient_document(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("coefficient file is not valid JSON: ") + e.what());
    }
    try {
        const int q = doc.at("q").get<int>();
        const int degree = doc.at("degree").get<int>();
        const int j = doc.contains("j") ? doc.at("j").get<int>() : (1 + q) / 2;
        const WeightKind kind = parse_weight_kind(doc.at("weight_kind").get<std::string>());
        const auto weights = doc.at("weights").get<std::vector<double>>();
        const auto taps = doc.at("coefficients").get<std::vector<double>>();
        if (static_cast<int>(taps.size()) != q)
            throw InvalidArgument("coefficient count does not match q");
        VectorXd w = Eigen::Map<const VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
        VectorXd c = Eigen::Map<const VectorXd>(taps.data(), static_cast<Eigen::Index>(taps.size()));
        for (Eigen::Index i = 0; i < c.size(); ++i)
            if (!std::isfinite(c[i])) throw InvalidArgument("coefficient " + std::to_string(i + 1) + " is not finite");
        FilterSpec<double> spec(q, degree, WeightVector<double>(std::move(w), kind), j);
        return {std::move(c), std::move(spec)};
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed coefficient document: ") + e.what());
    }
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    return std::nullopt;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += ch;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

} // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first) {
            // UTF-8 byte order mark
            if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
            table.header = split_csv_line(line);
            first = false;
            continue;
        }
        if (line.empty()) continue;
        table.rows.push_back(split_csv_line(line));
    }
    if (first) throw InvalidArgument("CSV input is empty");
    return table;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(fields[i]);
    }
    out << '\n';
}

} // namespace wsg::io

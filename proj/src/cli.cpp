#include "wsg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "wsg/design.hpp"
#include "wsg/errors.hpp"
#include "wsg/filter.hpp"
#include "wsg/io.hpp"
#include "wsg/metrics.hpp"
#include "wsg/verify.hpp"
#include "wsg/weights.hpp"

namespace wsg::cli {

namespace {

/// Bad content inside an otherwise well-formed input file.
class DataError : public Error {
public:
    using Error::Error;
};

struct RunConfig {
    int window = 0;
    int degree = 2;
    std::string weight = "quadratic";
    std::string weight_file;
    std::string format;
    std::string output;

    std::string input;
    std::string column;
    std::string edge = "polyfit";
    std::string coeff_file;

    int points = 512;
    std::string weights_list;

    std::string windows_grid;
    std::string degrees_list = "2";

    int max_window = 11;
    int max_degree = 4;
    std::uint64_t seed = 1;
};

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char ch : text) {
        if (ch == sep) {
            parts.push_back(current);
            current.clear();
        } else if (ch != ' ') {
            current += ch;
        }
    }
    parts.push_back(current);
    return parts;
}

int parse_int(std::string_view text, std::string_view what) {
    const auto value = io::parse_real(text);
    if (!value || *value != std::floor(*value) || std::abs(*value) > 1e9)
        throw InvalidArgument(std::string(what) + ": '" + std::string(text) + "' is not an integer");
    return static_cast<int>(*value);
}

/// `start:stop:step` (inclusive), `start:stop`, or a comma list of either.
std::vector<int> parse_int_grid(std::string_view text, std::string_view what) {
    std::vector<int> values;
    for (const std::string& item : split(text, ',')) {
        if (item.empty()) continue;
        const std::vector<std::string> range = split(item, ':');
        if (range.size() == 1) {
            values.push_back(parse_int(range[0], what));
        } else if (range.size() == 2 || range.size() == 3) {
            const int start = parse_int(range[0], what);
            const int stop = parse_int(range[1], what);
            const int step = range.size() == 3 ? parse_int(range[2], what) : 1;
            if (step <= 0) throw InvalidArgument(std::string(what) + ": step must be positive");
            for (int v = start; v <= stop; v += step) values.push_back(v);
        } else {
            throw InvalidArgument(std::string(what) + ": cannot parse '" + item + "'");
        }
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

void require_odd_window(int q, std::string_view flag) {
    if (q < 1 || q % 2 == 0)
        throw InvalidArgument(std::string(flag) + " must be a positive odd integer, got " + std::to_string(q));
}

VectorXd load_weight_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open weight file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    std::replace_if(text.begin(), text.end(), [](char ch) { return ch == '[' || ch == ']' || ch == ','; }, ' ');
    std::istringstream tokens(text);
    std::vector<double> values;
    std::string token;
    while (tokens >> token) {
        const auto value = io::parse_real(token);
        if (!value) throw InvalidArgument("weight file: '" + token + "' is not a number");
        values.push_back(*value);
    }
    if (values.empty()) throw InvalidArgument("weight file '" + path + "' holds no weights");
    return Eigen::Map<VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

/// Window from --window, or from the weight file when --window is absent.
int resolve_window(const RunConfig& cfg, const std::optional<VectorXd>& file_weights) {
    int q = cfg.window;
    if (q == 0) {
        if (!file_weights) throw InvalidArgument("--window is required");
        q = static_cast<int>(file_weights->size());
    }
    require_odd_window(q, "--window");
    if (file_weights && file_weights->size() != q)
        throw InvalidArgument("weight file has " + std::to_string(file_weights->size()) +
                              " entries but --window is " + std::to_string(q));
    return q;
}

WeightVector<double> weights_for(const std::string& kind, int q, const std::optional<VectorXd>& file_weights) {
    const WeightKind parsed = parse_weight_kind(kind);
    if (parsed == WeightKind::custom) {
        if (!file_weights) throw InvalidArgument("custom weights need --weight-file");
        return custom_weights(*file_weights);
    }
    return weights_of_kind(parsed, q);
}

std::optional<VectorXd> file_weights_of(const RunConfig& cfg) {
    if (cfg.weight_file.empty()) return std::nullopt;
    VectorXd w = load_weight_file(cfg.weight_file);
    custom_weights(w); // validates positivity
    return w;
}

FilterSpec<double> spec_from_flags(const RunConfig& cfg) {
    const auto file_weights = file_weights_of(cfg);
    const int q = resolve_window(cfg, file_weights);
    if (cfg.degree < 0) throw InvalidArgument("--degree must be >= 0");
    const std::string kind = file_weights ? "custom" : cfg.weight;
    return FilterSpec<double>(q, cfg.degree, weights_for(kind, q, file_weights));
}

std::string format_or(const RunConfig& cfg, const std::string& fallback, std::initializer_list<std::string_view> allowed) {
    const std::string f = cfg.format.empty() ? fallback : cfg.format;
    if (std::find(allowed.begin(), allowed.end(), f) == allowed.end())
        throw InvalidArgument("--format '" + f + "' is not supported by this command");
    return f;
}

class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& out) const {
        std::vector<std::size_t> widths(header_.size());
        for (std::size_t i = 0; i < header_.size(); ++i) widths[i] = header_[i].size();
        for (const auto& row : rows_)
            for (std::size_t i = 0; i < row.size() && i < widths.size(); ++i)
                widths[i] = std::max(widths[i], visible_length(row[i]));
        print_row(out, header_, widths);
        std::size_t total = 0;
        for (std::size_t w : widths) total += w + 2;
        out << std::string(total > 2 ? total - 2 : 0, '-') << '\n';
        for (const auto& row : rows_) print_row(out, row, widths);
    }

private:
    static std::size_t visible_length(const std::string& s) {
        std::size_t n = 0;
        bool escape = false;
        for (char ch : s) {
            if (ch == '\x1b') escape = true;
            else if (escape && ch == 'm') escape = false;
            else if (!escape) ++n;
        }
        return n;
    }

    static void print_row(std::ostream& out, const std::vector<std::string>& row, const std::vector<std::size_t>& widths) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << row[i];
            if (i + 1 < row.size()) out << std::string(widths[i] - visible_length(row[i]) + 2, ' ');
        }
        out << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string status(bool ok, bool color) {
    if (!color) return ok ? "PASS" : "FAIL";
    return ok ? "\x1b[32mPASS\x1b[0m" : "\x1b[31mFAIL\x1b[0m";
}

std::string json_array(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += io::format_real(v[i]);
    }
    return out + "]";
}

/// Destination stream: --output file or the caller's stdout.
class Sink {
public:
    Sink(const RunConfig& cfg, Streams& streams) : color_(streams.color) {
        if (cfg.output.empty()) {
            stream_ = &streams.out;
        } else {
            file_ = std::make_unique<std::ofstream>(cfg.output);
            if (!*file_) throw InvalidArgument("cannot write '" + cfg.output + "'");
            stream_ = file_.get();
            color_ = false;
        }
    }
    std::ostream& out() { return *stream_; }
    bool color() const { return color_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
    bool color_ = false;
};

// ---------------------------------------------------------------- design

int cmd_design(const RunConfig& cfg, Streams& streams) {
    const std::string format = format_or(cfg, "json", {"json", "csv", "table"});
    const FilterSpec<double> spec = spec_from_flags(cfg);
    const FilterCoefficients<double> c = design_coefficients(spec);
    const MetricsReport<double> report = metrics_report(c);

    Sink sink(cfg, streams);
    std::ostream& out = sink.out();
    if (format == "json") {
        out << io::coefficient_document(c, report);
    } else if (format == "csv") {
        io::write_csv_row(out, {"index", "weight", "coefficient", "r", "s"});
        for (int i = 0; i < spec.window(); ++i)
            io::write_csv_row(out, {std::to_string(i + 1), io::format_real(spec.weights()[i]), io::format_real(c[i]),
                                    io::format_real(report.r), io::format_real(report.s)});
    } else {
        out << "q=" << spec.window() << " degree=" << spec.degree() << " n=" << report.n << " m=" << report.m
            << " weight=" << to_string(spec.weights().kind()) << '\n';
        Table table({"index", "weight", "coefficient"});
        for (int i = 0; i < spec.window(); ++i)
            table.add({std::to_string(i + 1), io::format_fixed(spec.weights()[i]), io::format_fixed(c[i])});
        table.print(out);
        out << "r = " << io::format_fixed(report.r) << "\ns = " << io::format_fixed(report.s) << '\n';
    }
    return success;
}

// ---------------------------------------------------------------- sweep

struct SweepRow {
    int q, degree, n, m;
    WeightKind kind;
    double r, s;
    double r_ratio, s_ratio;
    std::optional<double> approx_r, approx_s;
};

std::optional<double> relative_error(std::optional<double> approx, double exact) {
    if (!approx) return std::nullopt;
    return std::abs(*approx - exact) / std::abs(exact);
}

std::string optional_real(std::optional<double> v) { return v ? io::format_real(*v) : ""; }
std::string optional_fixed(std::optional<double> v) { return v ? io::format_fixed(*v) : "-"; }

int cmd_sweep(const RunConfig& cfg, Streams& streams) {
    const std::string format = format_or(cfg, "csv", {"json", "csv", "table"});
    if (cfg.windows_grid.empty()) throw InvalidArgument("--windows is required");
    const std::vector<int> windows = parse_int_grid(cfg.windows_grid, "--windows");
    const std::vector<int> degrees = parse_int_grid(cfg.degrees_list, "--degrees");
    std::vector<WeightKind> kinds;
    const std::string list = cfg.weights_list.empty() ? "all" : cfg.weights_list;
    if (list == "all") {
        kinds = {WeightKind::constant, WeightKind::triangular, WeightKind::quadratic};
    } else {
        for (const std::string& name : split(list, ','))
            if (!name.empty()) {
                const WeightKind kind = parse_weight_kind(name);
                if (kind == WeightKind::custom) throw InvalidArgument("sweep does not take custom weights");
                kinds.push_back(kind);
            }
        std::sort(kinds.begin(), kinds.end());
        kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
    }
    if (windows.empty() || degrees.empty() || kinds.empty()) throw InvalidArgument("sweep grid is empty");
    for (int q : windows) require_odd_window(q, "--windows");
    for (int d : degrees)
        if (d < 0) throw InvalidArgument("--degrees must be >= 0");

    std::vector<SweepRow> rows;
    for (int q : windows)
        for (int d : degrees) {
            const FilterSpec<double> base(q, d, constant_weights(q));
            if (base.basis_size() > base.center()) {
                streams.err << "skipping q=" << q << " degree=" << d << ": over-parameterized\n";
                continue;
            }
            const auto reference = design_coefficients(base);
            const double r0 = error_reduction_ratio(reference);
            const double s0 = smoothing_parameter(reference);
            const int n = base.basis_size();
            const int m = base.center();
            const auto approx = ratio_approximations(m, n);
            const auto zero = degree_zero_approximations(q);
            for (WeightKind kind : kinds) {
                const auto c = design_coefficients(base.with_weights(weights_of_kind(kind, q)));
                SweepRow row{q, d, n, m, kind, error_reduction_ratio(c), smoothing_parameter(c), 0, 0, {}, {}};
                row.r_ratio = r0 / row.r;
                row.s_ratio = s0 / row.s;
                const bool degree_zero = base.canonical_degree() == 0;
                switch (kind) {
                case WeightKind::constant:
                    row.approx_r = 1.0;
                    row.approx_s = 1.0;
                    break;
                case WeightKind::quadratic:
                    row.approx_r = degree_zero ? zero.r0_over_r2 : approx.r0_over_r2;
                    row.approx_s = degree_zero ? zero.s0_over_s2 : approx.s0_over_s2;
                    break;
                case WeightKind::triangular:
                    row.approx_s = approx.s0_over_s1;
                    break;
                case WeightKind::custom: break;
                }
                rows.push_back(row);
            }
        }

    Sink sink(cfg, streams);
    std::ostream& out = sink.out();
    const std::vector<std::string> header = {"q", "degree", "n", "m", "weight", "r", "s", "r0_over_r", "s0_over_s",
                                             "approx_r0_over_r", "approx_s0_over_s", "rel_err_r0_over_r",
                                             "rel_err_s0_over_s"};
    if (format == "csv") {
        io::write_csv_row(out, header);
        for (const SweepRow& row : rows)
            io::write_csv_row(out, {std::to_string(row.q), std::to_string(row.degree), std::to_string(row.n),
                                    std::to_string(row.m), std::string(to_string(row.kind)), io::format_real(row.r),
                                    io::format_real(row.s), io::format_real(row.r_ratio), io::format_real(row.s_ratio),
                                    optional_real(row.approx_r), optional_real(row.approx_s),
                                    optional_real(relative_error(row.approx_r, row.r_ratio)),
                                    optional_real(relative_error(row.approx_s, row.s_ratio))});
    } else if (format == "json") {
        out << "[\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const SweepRow& row = rows[i];
            auto opt = [](std::optional<double> v) { return v ? io::format_real(*v) : std::string("null"); };
            out << "  {\"q\": " << row.q << ", \"degree\": " << row.degree << ", \"n\": " << row.n
                << ", \"m\": " << row.m << ", \"weight\": \"" << to_string(row.kind) << "\", \"r\": "
                << io::format_real(row.r) << ", \"s\": " << io::format_real(row.s)
                << ", \"r0_over_r\": " << io::format_real(row.r_ratio) << ", \"s0_over_s\": "
                << io::format_real(row.s_ratio) << ", \"approx_r0_over_r\": " << opt(row.approx_r)
                << ", \"approx_s0_over_s\": " << opt(row.approx_s)
                << ", \"rel_err_r0_over_r\": " << opt(relative_error(row.approx_r, row.r_ratio))
                << ", \"rel_err_s0_over_s\": " << opt(relative_error(row.approx_s, row.s_ratio)) << "}"
                << (i + 1 < rows.size() ? ",\n" : "\n");
        }
        out << "]\n";
    } else {
        Table table(header);
        for (const SweepRow& row : rows)
            table.add({std::to_string(row.q), std::to_string(row.degree), std::to_string(row.n), std::to_string(row.m),
                       std::string(to_string(row.kind)), io::format_fixed(row.r), io::format_fixed(row.s),
                       io::format_fixed(row.r_ratio, 4), io::format_fixed(row.s_ratio, 4),
                       optional_fixed(row.approx_r), optional_fixed(row.approx_s),
                       optional_fixed(relative_error(row.approx_r, row.r_ratio)),
                       optional_fixed(relative_error(row.approx_s, row.s_ratio))});
        table.print(out);
    }
    return rows.empty() ? failure : success;
}

// ---------------------------------------------------------------- verify

struct CustomWeightCheck {
    int n;
    double s_custom;
    double s_optimal;
    double max_abs_gradient;
    bool ok;
};

int cmd_verify(const RunConfig& cfg, Streams& streams) {
    const std::string format = format_or(cfg, "table", {"json", "table"});
    require_odd_window(cfg.max_window, "--max-window");
    if (cfg.max_degree < 0) throw InvalidArgument("--max-degree must be >= 0");
    const auto file_weights = file_weights_of(cfg);
    std::vector<CustomWeightCheck> custom;
    if (file_weights) {
        const int q = static_cast<int>(file_weights->size());
        require_odd_window(q, "weight file length");
        const int m = (q + 1) / 2;
        for (int n = 1; n <= std::min(cfg.max_degree / 2 + 1, m - 1); ++n) {
            const FilterSpec<double> spec = centered_spec(q, n, custom_weights(*file_weights));
            const double s_custom = smoothing_parameter_of(spec);
            const double s_optimal = smoothing_parameter_of(spec.with_weights(quadratic_weights(q)));
            custom.push_back({n, s_custom, s_optimal, smoothness_gradient(spec).cwiseAbs().maxCoeff(),
                              s_custom >= s_optimal - tolerance::perturbation});
        }
    }

    const GridReport grid = verify_grid(cfg.max_window, cfg.max_degree, cfg.seed);

    double max_dev = 0.0, max_grad = 0.0, min_hessian = std::numeric_limits<double>::infinity();
    double worst_decrease = -std::numeric_limits<double>::infinity();
    for (const auto& e : grid.eigen) max_dev = std::max(max_dev, e.max_relative_deviation);
    for (const auto& p : grid.pairs) {
        max_grad = std::max(max_grad, p.max_abs_gradient);
        min_hessian = std::min(min_hessian, p.hessian_min_eigenvalue);
        worst_decrease = std::max(worst_decrease, p.perturbation.worst_decrease);
    }
    const bool custom_ok = std::all_of(custom.begin(), custom.end(), [](const auto& c) { return c.ok; });
    const bool all_ok = grid.passed() && custom_ok;

    Sink sink(cfg, streams);
    std::ostream& out = sink.out();
    if (format == "json") {
        out << "{\n  \"passed\": " << (all_ok ? "true" : "false") << ",\n  \"eigen\": [\n";
        for (std::size_t i = 0; i < grid.eigen.size(); ++i) {
            const auto& e = grid.eigen[i];
            out << "    {\"q\": " << e.q << ", \"eigenvalues\": " << json_array(e.eigenvalues)
                << ", \"max_relative_deviation\": " << io::format_real(e.max_relative_deviation)
                << ", \"orthonormality_error\": " << io::format_real(e.orthonormality_error)
                << ", \"eigen_relation_error\": " << io::format_real(e.eigen_relation_error)
                << ", \"passed\": " << (e.passed ? "true" : "false") << "}"
                << (i + 1 < grid.eigen.size() ? ",\n" : "\n");
        }
        out << "  ],\n  \"lambda_min\": [\n";
        for (std::size_t i = 0; i < grid.lambda.size(); ++i) {
            const auto& l = grid.lambda[i];
            out << "    {\"q\": " << l.q << ", \"lambda_min\": " << json_array(l.lambda_min)
                << ", \"single_column_error\": " << io::format_real(l.single_column_error)
                << ", \"full_rank_error\": " << io::format_real(l.full_rank_error)
                << ", \"monotone\": " << (l.monotone ? "true" : "false")
                << ", \"bounded\": " << (l.bounded ? "true" : "false")
                << ", \"passed\": " << (l.passed ? "true" : "false") << "}"
                << (i + 1 < grid.lambda.size() ? ",\n" : "\n");
        }
        out << "  ],\n  \"pairs\": [\n";
        for (std::size_t i = 0; i < grid.pairs.size(); ++i) {
            const auto& p = grid.pairs[i];
            out << "    {\"q\": " << p.q << ", \"n\": " << p.n
                << ", \"max_abs_gradient\": " << io::format_real(p.max_abs_gradient)
                << ", \"hessian_min_eigenvalue\": " << io::format_real(p.hessian_min_eigenvalue)
                << ", \"lambda_min\": " << io::format_real(p.lambda_min_observed)
                << ", \"perturbation_worst_decrease\": " << io::format_real(p.perturbation.worst_decrease)
                << ", \"passed\": " << (p.passed() ? "true" : "false") << "}"
                << (i + 1 < grid.pairs.size() ? ",\n" : "\n");
        }
        out << "  ],\n  \"custom_weights\": [\n";
        for (std::size_t i = 0; i < custom.size(); ++i) {
            const auto& c = custom[i];
            out << "    {\"n\": " << c.n << ", \"s_custom\": " << io::format_real(c.s_custom)
                << ", \"s_optimal\": " << io::format_real(c.s_optimal)
                << ", \"max_abs_gradient\": " << io::format_real(c.max_abs_gradient)
                << ", \"passed\": " << (c.ok ? "true" : "false") << "}" << (i + 1 < custom.size() ? ",\n" : "\n");
        }
        out << "  ]\n}\n";
    } else {
        const bool color = sink.color();
        out << "TW eigensystem (quadratic weights)\n";
        Table eigen({"q", "eigenvalues", "max rel dev", "A^T W A - I", "TWA - A Lambda", "status"});
        for (const auto& e : grid.eigen) {
            std::string values;
            for (std::size_t i = 0; i < e.eigenvalues.size(); ++i) {
                if (i) values += ' ';
                values += io::format_fixed(e.eigenvalues[i], 4);
                if (i == 5 && e.eigenvalues.size() > 7) {
                    values += " ...";
                    break;
                }
            }
            eigen.add({std::to_string(e.q), values, io::format_real(e.max_relative_deviation),
                       io::format_real(e.orthonormality_error), io::format_real(e.eigen_relation_error),
                       status(e.passed, color)});
        }
        eigen.print(out);
        out << "\nSmallest nonzero eigenvalue of T - A Lambda A^T\n";
        Table lambda({"q", "lambda_min(q,1)", "lambda_min(q,q-1)", "n=1 err", "n=q-1 err", "monotone", "status"});
        for (const auto& l : grid.lambda)
            lambda.add({std::to_string(l.q), io::format_fixed(l.lambda_min.front(), 8),
                        io::format_fixed(l.lambda_min.back(), 8), io::format_real(l.single_column_error),
                        io::format_real(l.full_rank_error), l.monotone ? "yes" : "no", status(l.passed, color)});
        lambda.print(out);
        out << "\nOptimality at quadratic weights\n";
        Table pairs({"q", "n", "max |ds/dW|", "min eig(H)", "lambda_min", "worst s decrease", "status"});
        for (const auto& p : grid.pairs)
            pairs.add({std::to_string(p.q), std::to_string(p.n), io::format_real(p.max_abs_gradient),
                       io::format_real(p.hessian_min_eigenvalue), io::format_fixed(p.lambda_min_observed, 8),
                       io::format_real(p.perturbation.worst_decrease), status(p.passed(), color)});
        pairs.print(out);
        if (!custom.empty()) {
            out << "\nCustom weights vs optimum\n";
            Table table({"n", "s(custom)", "s(quadratic)", "max |ds/dW|", "status"});
            for (const auto& c : custom)
                table.add({std::to_string(c.n), io::format_fixed(c.s_custom, 8), io::format_fixed(c.s_optimal, 8),
                           io::format_real(c.max_abs_gradient), status(c.ok, color)});
            table.print(out);
        }
        out << "\nmax eigenvalue deviation  " << io::format_real(max_dev) << "\nmax |gradient|            "
            << io::format_real(max_grad) << "\nmin Hessian eigenvalue    "
            << (grid.pairs.empty() ? std::string("-") : io::format_real(min_hessian))
            << "\nworst s decrease          "
            << (grid.pairs.empty() ? std::string("-") : io::format_real(worst_decrease)) << "\noverall                   "
            << status(all_ok, color) << '\n';
    }

    if (!all_ok) {
        for (const auto& e : grid.eigen)
            if (!e.passed) streams.err << "eigensystem check failed at q=" << e.q << '\n';
        for (const auto& l : grid.lambda)
            if (!l.passed) streams.err << "lambda_min check failed at q=" << l.q << '\n';
        for (const auto& p : grid.pairs)
            if (!p.passed()) streams.err << "optimality check failed at q=" << p.q << " n=" << p.n << '\n';
        for (const auto& c : custom)
            if (!c.ok) streams.err << "custom weights beat the optimum at n=" << c.n << '\n';
        return failure;
    }
    return success;
}

// ---------------------------------------------------------------- smooth

int cmd_smooth(const RunConfig& cfg, Streams& streams) {
    format_or(cfg, "csv", {"csv"});
    if (cfg.input.empty()) throw InvalidArgument("--input is required");
    if (cfg.column.empty()) throw InvalidArgument("--column is required");
    const EdgePolicy edge = parse_edge_policy(cfg.edge);

    FilterCoefficients<double> c = [&] {
        if (!cfg.coeff_file.empty()) {
            std::ifstream in(cfg.coeff_file);
            if (!in) throw InvalidArgument("cannot open coefficient file '" + cfg.coeff_file + "'");
            std::stringstream buffer;
            buffer << in.rdbuf();
            return io::parse_coefficient_document(buffer.str());
        }
        return design_coefficients(spec_from_flags(cfg));
    }();

    std::ifstream in(cfg.input);
    if (!in) throw InvalidArgument("cannot open input '" + cfg.input + "'");
    const io::CsvTable table = io::read_csv(in);
    const auto column = table.column(cfg.column);
    if (!column) throw InvalidArgument("input has no column named '" + cfg.column + "'");

    std::vector<double> values;
    values.reserve(table.rows.size());
    for (std::size_t row = 0; row < table.rows.size(); ++row) {
        const auto& fields = table.rows[row];
        const auto value = *column < fields.size() ? io::parse_real(fields[*column]) : std::nullopt;
        if (!value || !std::isfinite(*value))
            throw DataError("row " + std::to_string(row + 1) + ": column '" + cfg.column + "' is not a finite number");
        values.push_back(*value);
    }

    const SignalSeries<double> smoothed = smooth(SignalSeries<double>(values), c, edge);
    const std::size_t offset = edge == EdgePolicy::valid ? static_cast<std::size_t>(c.spec.eval_index() - 1) : 0;

    Sink sink(cfg, streams);
    std::ostream& out = sink.out();
    std::vector<std::string> header = table.header;
    header.push_back(cfg.column + "_smoothed");
    io::write_csv_row(out, header);
    for (std::size_t row = 0; row < table.rows.size(); ++row) {
        std::vector<std::string> fields = table.rows[row];
        fields.resize(table.header.size());
        if (row >= offset && row - offset < smoothed.size())
            fields.push_back(io::format_real(smoothed[row - offset]));
        else
            fields.emplace_back();
        io::write_csv_row(out, fields);
    }
    return success;
}

// ---------------------------------------------------------------- freqresp

int cmd_freqresp(const RunConfig& cfg, Streams& streams) {
    const std::string format = format_or(cfg, "csv", {"json", "csv", "table"});
    if (cfg.points < 2) throw InvalidArgument("--points must be >= 2");
    const auto file_weights = file_weights_of(cfg);
    const int q = resolve_window(cfg, file_weights);
    if (cfg.degree < 0) throw InvalidArgument("--degree must be >= 0");

    std::vector<std::string> names;
    if (!cfg.weights_list.empty()) {
        for (const std::string& name : split(cfg.weights_list, ','))
            if (!name.empty()) names.push_back(name);
    } else if (file_weights) {
        names = {"custom"};
    } else {
        names = {cfg.weight};
    }
    if (names.empty()) throw InvalidArgument("--weights is empty");

    std::vector<std::vector<FrequencyPoint<double>>> responses;
    for (const std::string& name : names) {
        const FilterSpec<double> spec(q, cfg.degree, weights_for(name, q, file_weights));
        responses.push_back(frequency_response(design_coefficients(spec), cfg.points));
    }

    Sink sink(cfg, streams);
    std::ostream& out = sink.out();
    std::vector<std::string> header = {"omega"};
    header.insert(header.end(), names.begin(), names.end());
    if (format == "csv") {
        io::write_csv_row(out, header);
        for (int p = 0; p < cfg.points; ++p) {
            std::vector<std::string> row = {io::format_real(responses[0][p].omega)};
            for (const auto& r : responses) row.push_back(io::format_real(r[p].magnitude));
            io::write_csv_row(out, row);
        }
    } else if (format == "json") {
        out << "{\"omega\": [";
        for (int p = 0; p < cfg.points; ++p) out << (p ? ", " : "") << io::format_real(responses[0][p].omega);
        out << "]";
        for (std::size_t k = 0; k < names.size(); ++k) {
            out << ", \"" << names[k] << "\": [";
            for (int p = 0; p < cfg.points; ++p) out << (p ? ", " : "") << io::format_real(responses[k][p].magnitude);
            out << "]";
        }
        out << "}\n";
    } else {
        Table table(header);
        for (int p = 0; p < cfg.points; ++p) {
            std::vector<std::string> row = {io::format_fixed(responses[0][p].omega)};
            for (const auto& r : responses) row.push_back(io::format_fixed(r[p].magnitude));
            table.add(std::move(row));
        }
        table.print(out);
    }
    return success;
}

void add_design_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--window", cfg.window, "Window length q (positive odd integer)");
    cmd->add_option("--degree", cfg.degree, "Fitting polynomial degree (>= 0)")->capture_default_str();
    cmd->add_option("--weight", cfg.weight, "Residual weights: constant|triangular|quadratic")
        ->capture_default_str();
    cmd->add_option("--weight-file", cfg.weight_file, "File of custom positive weights");
}

void add_output_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--format", cfg.format, "Output format: json|csv|table");
    cmd->add_option("--output", cfg.output, "Output path (default stdout)");
}

} // namespace

int run(const std::vector<std::string>& args, Streams streams) {
    CLI::App app{"Weighted Savitzky-Golay filter design, metrics and verification", "wsg"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* design = app.add_subcommand("design", "Design a filter and report its taps, r and s");
    add_design_flags(design, cfg);
    add_output_flags(design, cfg);

    CLI::App* sweep = app.add_subcommand("sweep", "Tabulate r, s and ratio approximations over a grid");
    sweep->add_option("--windows", cfg.windows_grid, "Window grid start:stop:step (inclusive) or list");
    sweep->add_option("--degrees", cfg.degrees_list, "Degree list")->capture_default_str();
    sweep->add_option("--weights", cfg.weights_list, "Weight kinds, comma list or 'all'");
    add_output_flags(sweep, cfg);

    CLI::App* verify = app.add_subcommand("verify", "Certify optimality of the quadratic weights");
    verify->add_option("--max-window", cfg.max_window, "Largest window (odd)")->capture_default_str();
    verify->add_option("--max-degree", cfg.max_degree, "Largest polynomial degree")->capture_default_str();
    verify->add_option("--seed", cfg.seed, "Seed for the perturbation probe")->capture_default_str();
    verify->add_option("--weight-file", cfg.weight_file, "Custom weights to compare against the optimum");
    add_output_flags(verify, cfg);

    CLI::App* smooth_cmd = app.add_subcommand("smooth", "Smooth one CSV column");
    add_design_flags(smooth_cmd, cfg);
    add_output_flags(smooth_cmd, cfg);
    smooth_cmd->add_option("--input", cfg.input, "Input CSV");
    smooth_cmd->add_option("--column", cfg.column, "Column to smooth");
    smooth_cmd->add_option("--edge", cfg.edge, "Edge policy: valid|mirror|polyfit")->capture_default_str();
    smooth_cmd->add_option("--coeff-file", cfg.coeff_file, "Coefficient JSON written by 'design'");

    CLI::App* freq = app.add_subcommand("freqresp", "Magnitude response on [0, pi]");
    add_design_flags(freq, cfg);
    add_output_flags(freq, cfg);
    freq->add_option("--points", cfg.points, "Number of frequencies")->capture_default_str();
    freq->add_option("--weights", cfg.weights_list, "Weight kinds, comma list");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        streams.out << app.help();
        return success;
    } catch (const CLI::CallForAllHelp&) {
        streams.out << app.help("", CLI::AppFormatMode::All);
        return success;
    } catch (const CLI::ParseError& e) {
        streams.err << "error: " << e.what() << '\n';
        return usage;
    }

    try {
        if (design->parsed()) return cmd_design(cfg, streams);
        if (sweep->parsed()) return cmd_sweep(cfg, streams);
        if (verify->parsed()) return cmd_verify(cfg, streams);
        if (smooth_cmd->parsed()) return cmd_smooth(cfg, streams);
        if (freq->parsed()) return cmd_freqresp(cfg, streams);
    } catch (const InvalidArgument& e) {
        streams.err << "error: " << e.what() << '\n';
        return usage;
    } catch (const Error& e) {
        streams.err << "error: " << e.what() << '\n';
        return failure;
    }
    return usage;
}

} // namespace wsg::cli

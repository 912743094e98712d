#include "mosum/io.hpp"

#include "mosum/error.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace mosum {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

double parse_number(const std::string& text, std::size_t line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v)) {
        throw DataError("line " + std::to_string(line_no) + ": '" + text + "' is not a finite number");
    }
    return v;
}

} // namespace

CsvSeries read_series_csv(std::istream& in, std::optional<double> delta_t) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw DataError("input is empty (a header line is required)");
    }
    ++line_no;
    const auto header = split_fields(line);
    std::optional<std::size_t> t_col;
    std::optional<std::size_t> x_col;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "t") {
            t_col = c;
        } else if (header[c] == "x") {
            x_col = c;
        }
    }
    if (!x_col) {
        if (header.size() != 1) {
            throw DataError("header must name an 'x' column");
        }
        x_col = 0;
    }

    std::vector<double> t;
    std::vector<double> x;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
        }
        x.push_back(parse_number(fields[*x_col], line_no));
        if (t_col) {
            t.push_back(parse_number(fields[*t_col], line_no));
        }
    }
    if (x.empty()) {
        throw DataError("input has no data rows");
    }

    double dt = delta_t.value_or(1.0);
    double offset = 0.0;
    if (t_col && x.size() >= 2) {
        const double step = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
        if (!(step > 0.0)) {
            throw DataError("t column must be strictly increasing");
        }
        for (std::size_t i = 1; i < t.size(); ++i) {
            if (std::abs((t[i] - t[i - 1]) - step) > 1e-9 * step + 1e-12 * std::abs(t[i])) {
                throw DataError("t column is not uniformly spaced near row " + std::to_string(i + 1));
            }
        }
        if (!delta_t) {
            dt = step;
        }
        offset = t.front() - dt;
    }
    if (!(dt > 0.0)) {
        throw DataError("delta_t must be positive");
    }
    const std::size_t n = x.size();
    return CsvSeries{Series(std::move(x), TimeGrid(n, dt)), offset};
}

void write_series_csv(std::ostream& out, const Series& series, const std::vector<double>* truth, double t_offset) {
    out << (truth ? "t,x,f\n" : "t,x\n");
    const TimeGrid& grid = series.grid();
    for (std::size_t i = 1; i <= series.size(); ++i) {
        out << format_double(t_offset + grid.time(i)) << ',' << format_double(series[i]);
        if (truth) {
            out << ',' << format_double((*truth)[i - 1]);
        }
        out << '\n';
    }
}

nlohmann::json to_json(const DetectionResult& result) {
    nlohmann::json changes = nlohmann::json::array();
    for (const auto& c : result.change_points) {
        changes.push_back({{"k", c.k}, {"t", c.t}, {"G", c.source_bandwidth}, {"stat", c.peak_w}});
    }
    const auto& p = result.params;
    return {{"changes", changes},
            {"params",
             {{"alpha", p.alpha}, {"eta", p.eta}, {"theta", p.theta}, {"log_h", p.log_h}, {"bandwidths", p.bandwidths}}}};
}

nlohmann::json signal_to_json(const PiecewiseLinearSignal& signal) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : signal.segments()) {
        segs.push_back({{"a0", s.a0}, {"a1", s.a1}});
    }
    return {{"n", signal.grid().n()},
            {"delta_t", signal.grid().delta_t()},
            {"changes", signal.change_indices()},
            {"segments", segs}};
}

PiecewiseLinearSignal signal_from_json(const nlohmann::json& spec) {
    try {
        const TimeGrid grid(spec.at("n").get<std::size_t>(), spec.at("delta_t").get<double>());
        auto changes = spec.value("changes", std::vector<std::size_t>{});
        std::vector<Segment> segs;
        for (const auto& s : spec.at("segments")) {
            segs.push_back({s.at("a0").get<double>(), s.at("a1").get<double>()});
        }
        return PiecewiseLinearSignal(grid, std::move(changes), std::move(segs));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed signal specification: ") + e.what());
    }
}

} // namespace mosum

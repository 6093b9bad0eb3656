#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "mcsym/bench.hpp"

namespace mcsym {

ReportFormat parse_report_format(const std::string& s) {
    if (s == "text") return ReportFormat::text;
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw std::invalid_argument("unknown format '" + s + "'");
}

namespace {

struct Row {
    std::string topology;
    int n = 0;
    std::string mode;
    std::size_t instances = 0;
    std::size_t measured = 0;
    double before = 0, after = 0, compression = 0, group = 0, generators = 0, seconds = 0;
};

double round4(double x) { return std::round(x * 1e4) / 1e4; }

std::vector<Row> aggregate(const std::vector<RunReport>& reports) {
    std::map<std::tuple<std::string, int, std::string>, Row> cells;
    for (const auto& r : reports) {
        auto key = std::make_tuple(r.topology, r.n, break_mode_name(r.mode));
        Row& row = cells[key];
        row.topology = r.topology;
        row.n = r.n;
        row.mode = break_mode_name(r.mode);
        ++row.instances;
        row.group += static_cast<double>(r.group_size);
        row.generators += static_cast<double>(r.generator_count);
        row.seconds += (r.detect_ms + r.break_ms + r.solve_before_ms + r.solve_after_ms) / 1000.0;
        if (r.solutions_before && r.solutions_after) {
            ++row.measured;
            row.before += static_cast<double>(*r.solutions_before);
            row.after += static_cast<double>(*r.solutions_after);
            row.compression += r.compression;
        }
    }
    std::vector<Row> out;
    for (auto& [key, row] : cells) {
        double k = static_cast<double>(row.instances);
        row.group = round4(row.group / k);
        row.generators = round4(row.generators / k);
        row.seconds = round4(row.seconds / k);
        double mk = row.measured ? static_cast<double>(row.measured) : 1.0;
        row.before = round4(row.before / mk);
        row.after = round4(row.after / mk);
        row.compression = round4(row.compression / mk);
        out.push_back(row);
    }
    return out;
}

std::string num(double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << x;
    return os.str();
}

}  // namespace

std::string report_table(const std::vector<RunReport>& reports, ReportFormat format) {
    auto rows = aggregate(reports);
    std::ostringstream out;
    switch (format) {
    case ReportFormat::csv:
        out << "topology,n,mode,instances,measured,solutions_before,solutions_after,compression,group_size,generators,seconds\n";
        for (const auto& r : rows)
            out << r.topology << ',' << r.n << ',' << r.mode << ',' << r.instances << ',' << r.measured << ','
                << num(r.before) << ',' << num(r.after) << ',' << num(r.compression) << ',' << num(r.group) << ','
                << num(r.generators) << ',' << num(r.seconds) << '\n';
        break;
    case ReportFormat::json: {
        nlohmann::json rows_json = nlohmann::json::array();
        for (const auto& r : rows)
            rows_json.push_back({{"topology", r.topology},
                                 {"n", r.n},
                                 {"mode", r.mode},
                                 {"instances", r.instances},
                                 {"measured", r.measured},
                                 {"solutions_before", r.before},
                                 {"solutions_after", r.after},
                                 {"compression", r.compression},
                                 {"group_size", r.group},
                                 {"generators", r.generators},
                                 {"seconds", r.seconds}});
        out << nlohmann::json{{"rows", rows_json}}.dump(2) << '\n';
        break;
    }
    case ReportFormat::text:
        out << std::left << std::setw(9) << "topology" << std::right << std::setw(4) << "n" << ' ' << std::left
            << std::setw(11) << "mode" << std::right << std::setw(6) << "inst" << std::setw(12) << "before"
            << std::setw(12) << "after" << std::setw(12) << "compress" << std::setw(10) << "|group|" << std::setw(8)
            << "|G|" << std::setw(10) << "sec" << '\n';
        for (const auto& r : rows)
            out << std::left << std::setw(9) << r.topology << std::right << std::setw(4) << r.n << ' ' << std::left
                << std::setw(11) << r.mode << std::right << std::setw(6) << r.instances << std::setw(12)
                << num(r.before) << std::setw(12) << num(r.after) << std::setw(12) << num(r.compression)
                << std::setw(10) << num(r.group) << std::setw(8) << num(r.generators) << std::setw(10)
                << num(r.seconds) << '\n';
        break;
    }
    return out.str();
}

}  // namespace mcsym

#include "llsgm/record.hpp"

#include "llsgm/error.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace llsgm {

std::string_view to_string(RunStatus status) noexcept {
    switch (status) {
        case RunStatus::completed: return "completed";
        case RunStatus::blow_up_detected: return "blow-up-detected";
        case RunStatus::solver_failure: return "solver-failure";
    }
    return "unknown";
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_series_csv(std::ostream& out, const RunRecord& record) {
    out << "t,N,mass,R,negative_rate\n";
    for (const Sample& s : record.samples) {
        out << format_real(s.t) << ',' << format_real(s.rate) << ',' << format_real(s.mass) << ','
            << format_real(s.refractory) << ',' << (s.negative_rate ? 1 : 0) << '\n';
    }
}

namespace {

double parse_real(const std::string& field, std::size_t line) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double x = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        fail(ErrorCategory::io, "series csv: bad number '" + field + "' on line " + std::to_string(line));
    }
    return x;
}

}  // namespace

RunRecord read_series_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "t,N,mass,R,negative_rate") {
        fail(ErrorCategory::io, "series csv: missing or unexpected header");
    }
    RunRecord record;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 5) fail(ErrorCategory::io, "series csv: expected 5 fields on line " + std::to_string(number));
        Sample s;
        s.t = parse_real(fields[0], number);
        s.rate = parse_real(fields[1], number);
        s.mass = parse_real(fields[2], number);
        s.refractory = parse_real(fields[3], number);
        s.negative_rate = fields[4] == "1";
        record.samples.push_back(s);
    }
    return record;
}

void write_snapshots_csv(std::ostream& out, const RunRecord& record) {
    out << "t,v,p\n";
    for (const Snapshot& snap : record.snapshots) {
        for (std::size_t i = 0; i < snap.v.size(); ++i) {
            out << format_real(snap.t) << ',' << format_real(snap.v[i]) << ',' << format_real(snap.p[i]) << '\n';
        }
    }
}

}  // namespace llsgm

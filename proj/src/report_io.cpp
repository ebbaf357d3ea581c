#include "hsk/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hsk {
namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// RFC-4180: quote fields containing commas, quotes, or newlines.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

}  // namespace

void write_arc_csv(const std::string& path, const HybridArc& arc,
                   const std::vector<std::string>& state_names) {
    if (static_cast<int>(state_names.size()) != arc.dim())
        throw std::invalid_argument("state name count does not match arc dimension");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "t,j";
    for (const auto& n : state_names) out << ',' << csv_field(n);
    out << '\n';
    for (const auto& iv : arc.intervals()) {
        for (std::size_t k = 0; k < iv.t.size(); ++k) {
            out << fmt(iv.t[k]) << ',' << iv.j;
            const auto x = arc.state(iv, k);
            for (double v : x) out << ',' << fmt(v);
            out << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

HybridArc read_arc_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty arc file '" + path + "'");
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "t" || header[1] != "j")
        throw std::runtime_error("malformed arc header in '" + path + "'");
    const int dim = static_cast<int>(header.size()) - 2;
    HybridArc arc(dim);
    Vec x(static_cast<std::size_t>(dim));
    int current_j = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != dim + 2)
            throw std::runtime_error("malformed arc row in '" + path + "'");
        const double t = std::strtod(fields[0].c_str(), nullptr);
        const int j = std::stoi(fields[1]);
        for (int c = 0; c < dim; ++c)
            x[static_cast<std::size_t>(c)] =
                std::strtod(fields[static_cast<std::size_t>(c) + 2].c_str(), nullptr);
        if (j != current_j) {
            arc.start_interval(j, t, x);
            current_j = j;
        } else {
            arc.push_sample(t, x);
        }
    }
    return arc;
}

std::string closeness_report_json(const ClosenessReport& report) {
    nlohmann::json j;
    j["tau"] = report.tau;
    j["eps_grid"] = report.eps_grid;
    j["found"] = report.found;
    j["min_eps"] = report.min_eps;
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& w : report.witnesses) {
        ws.push_back({{"t", w.t}, {"j", w.j}, {"s", w.s}, {"dist", w.dist},
                      {"forward", w.forward}});
    }
    j["witnesses"] = ws;
    return j.dump(2);
}

std::string metadata_json(const std::string& scenario,
                          const std::map<std::string, double>& params,
                          const std::string& termination, int jumps,
                          double flow_time) {
    nlohmann::json j;
    j["scenario"] = scenario;
    j["params"] = params;
    j["termination"] = termination;
    j["jumps"] = jumps;
    j["flow_time"] = flow_time;
    return j.dump(2);
}

}  // namespace hsk

#pragma once

#include <map>
#include <string>
#include <vector>

#include "hsk/closeness.hpp"
#include "hsk/core.hpp"

namespace hsk {

// Arc CSV layout: header "t,j,<name0>,...", one row per sample with doubles
// printed to 17 significant digits; jump instants appear as two consecutive
// rows (t, j, pre-state) and (t, j+1, post-state).
void write_arc_csv(const std::string& path, const HybridArc& arc,
                   const std::vector<std::string>& state_names);

// Inverse of write_arc_csv; round-trips bit-exactly.
HybridArc read_arc_csv(const std::string& path);

std::string closeness_report_json(const ClosenessReport& report);

std::string metadata_json(const std::string& scenario,
                          const std::map<std::string, double>& params,
                          const std::string& termination, int jumps,
                          double flow_time);

}  // namespace hsk

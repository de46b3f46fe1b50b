#pragma once

#include "ahres/discretize.hpp"
#include "ahres/extension.hpp"
#include "ahres/oracle.hpp"
#include "ahres/resolvent.hpp"
#include "ahres/resonance.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace ahres {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::ordered_json;

json metric_to_json(const MetricSpec& m);
// rejects unknown keys and missing fields (ConfigError)
MetricSpec metric_from_json(const json& j);
// "exact-h2" or a path to a JSON metric file
MetricSpec load_metric(const std::string& spec);

json ratfunc_to_json(const RatFunc& f);  // {"num": [[re, im], ...], "den": [...]}, exact rationals as strings
json muop_to_json(const MuOp& op);
json pencil_to_json(const OperatorPencil& p);
json discrete_pencil_to_json(const DiscretePencil& dp);

json resonances_to_json(const std::vector<ResonanceResult>& r);
void write_resonances_csv(std::ostream& os, const std::vector<ResonanceResult>& r);
void write_oracle_csv(std::ostream& os, const std::vector<oracle::OracleResonance>& r);
void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);
void write_scan_gnuplot(std::ostream& os, const std::vector<ScanRow>& rows);
json scan_to_json(const std::vector<ScanRow>& rows);
json resolvent_to_json(const ResolventOutput& o);

// "# ahres <version>" and "# config <compact json>" comment lines
void write_header_comments(std::ostream& os, const json& config);

// fixed-precision number formatting shared by all writers
std::string fmt(double v);

}  // namespace ahres

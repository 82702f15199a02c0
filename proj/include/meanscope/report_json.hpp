#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "meanscope/posdef.hpp"
#include "meanscope/verifier.hpp"

namespace meanscope {

// Every top-level report object carries "schema_version": 1 and a "kind"
// discriminator. Keys are emitted in sorted order and doubles round-trip, so
// identical reports serialize to identical bytes.
inline constexpr int kReportSchemaVersion = 1;

nlohmann::json to_json(const GramReport& report);
nlohmann::json to_json(const ChainReport& report);
nlohmann::json to_json(const BatteryReport& report);
nlohmann::json to_json(const SearchReport& report);
nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const ContinuityReport& report);
nlohmann::json continuity_suite_json(const std::vector<ContinuityReport>& reports);

// Margin tables, one row per (sample, norm, adjacent pair). Fields containing
// commas or quotes are quoted per RFC 4180.
std::string chain_csv(const ChainReport& report);
std::string battery_csv(const BatteryReport& report);

}  // namespace meanscope

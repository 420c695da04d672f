#pragma once

#include <string>

#include "satsim/scenario.hpp"

namespace satsim {

// Writes summary.txt, summary.json and queue.csv (plus acr.csv / cwnd.csv /
// erica.csv when the corresponding traces were collected) into out_dir.
// Throws std::runtime_error if a file cannot be written.
void emit_report(const RunReport& rep, const ScenarioConfig& cfg,
                 const std::string& out_dir);

std::string summary_text(const RunReport& rep, const ScenarioConfig& cfg);
std::string summary_json(const RunReport& rep, const ScenarioConfig& cfg);
std::string queue_csv(const RunReport& rep);

}  // namespace satsim

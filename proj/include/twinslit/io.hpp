#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "twinslit/ensemble.hpp"
#include "twinslit/guidance.hpp"

namespace twinslit {

inline constexpr const char* kSchemaVersion = "1.0";

/// Formats a double with full round-trip precision ("%.17g"), so repeated
/// runs emit byte-identical files.
std::string format_double(double value);

/// CSV: trajectory_id,status,y0_initial,y1_final,y2_final
void write_records_csv(const std::string& path, const std::vector<DetectionRecord>& records);

/// CSV: bin_left,bin_right,count,normalized_density
void write_pattern_csv(const std::string& path, const Pattern& pattern);

/// CSV: trajectory_id,t,y1,y2,v1,v2
void write_trajectories_csv(const std::string& path, const WaveFunctionSpec& spec,
                            const std::vector<Trajectory>& trajectories);

void write_json_file(const std::string& path, const nlohmann::json& j);

nlohmann::json pattern_to_json(const Pattern& pattern);
nlohmann::json divergence_to_json(const DivergenceReport& report);
nlohmann::json regime_to_json(const std::vector<RegimeFinding>& findings);

}  // namespace twinslit

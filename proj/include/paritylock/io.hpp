#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "paritylock/estimation.hpp"
#include "paritylock/fockspace.hpp"
#include "paritylock/noise.hpp"
#include "paritylock/sideband.hpp"

namespace paritylock {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

// State JSON: {n_max, amps: [[re, im], ...]} in flat order i = 2n + s.
// Densities use {n_max, rho: [[[re, im], ...], ...]} row by row.
json to_json(const JointState& psi);
JointState state_from_json(const json& j);
json to_json(const JointDensity& rho);
JointDensity density_from_json(const json& j);

json to_json(const RabiModel& m);
RabiModel rabi_model_from_json(const json& j);
json to_json(const PulseSpec& p);
PulseSpec pulse_from_json(const json& j);
json to_json(const DecoherenceModel& m);
DecoherenceModel model_from_json(const json& j);

// FNV-1a 64 over the compact dump, as 16 hex digits
std::string config_hash(const json& config);

struct OutputHeader {
    std::string command;
    json config;  // fully resolved
    std::uint64_t seed = 0;

    json to_json() const;
};

// CSV with '#'-prefixed header lines; values printed with round-trip precision
void write_csv(const std::filesystem::path& path, const OutputHeader& header, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);
// JSON report with the header under "header"
void write_json(const std::filesystem::path& path, const OutputHeader& header, json body);

// time_ms, pg, shots. '#' lines and blank lines are skipped; the first other line must be the
// column header. Throws parse-error naming the line.
RabiFlopRecord read_flop_csv(const std::filesystem::path& path);
RabiFlopRecord parse_flop_csv(const std::string& text);
void write_flop_csv(const std::filesystem::path& path, const OutputHeader& header, const RabiFlopRecord& rec);

}  // namespace paritylock

#pragma once

// JSON form of GameConfig, one document per experiment:
//
//   {
//     "horizon": 10, "steps": 10, "x0": 0.8,
//     "state_grid": {"x_min": 0, "x_max": 1, "points": 21},
//     "per_step": [{"control": [40, 80], "disturbance": [0.05, 0.25]}],
//     "control_points": 5, "disturbance_points": 5,
//     "dynamics": {"kind": "lewis", "k_ref": 0.2, "beta": 0.03, "t_ref": 50},
//     "energy": {"c0": 0.5, "c1": 1, "t_amb": 20},
//     "terminal": {"lo": 0, "hi": 0.15},
//     "objective": "energy"
//   }
//
// "per_step" holds one entry for every step or a single entry shared by all.
// Affine dynamics use {"kind": "affine", "a": .., "b": .., "c": ..}.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "drygame/model.hpp"

namespace drygame {

/// Structural parse only; semantic checks belong to validate_config.
/// Throws ConfigError on missing, unknown or mistyped fields.
GameConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const GameConfig& cfg);

struct LoadedConfig {
  GameConfig config;
  std::string bytes;  // raw file content, the digest input
};

LoadedConfig load_config(const std::filesystem::path& path);

/// "sha256:<hex>" of the given bytes.
std::string content_digest(const std::string& bytes);

}  // namespace drygame

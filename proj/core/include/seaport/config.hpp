#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "seaport/model.hpp"
#include "seaport/simulator.hpp"

namespace seaport::io {

struct ParseOptions {
  /// Reject fields the schema does not know about.
  bool strict = true;
};

/// Everything a configuration document describes, validated.
struct ConfigBundle {
  SystemTopology topology;
  TrafficSpec traffic;
  RoutingMode routing = RoutingMode::Eq3;
  std::optional<sim::SimSettings> simulation;
  std::string digest;

  /// Simulation config built from the document's simulation block, or from
  /// defaults when the document has none.
  sim::SimConfig sim_config() const;
};

/// Parses a configuration document: JSON with `//` and `/* */` comments.
///
///   {
///     "traffic": {"arrival_rate": 0.5, "erlang_degree": 1},
///     "routing": "eq3",                      // optional: "eq3" | "split"
///     "subsystems": [
///       {"label": "north",                   // optional
///        "ports": [{"label": "a", "berth_rates": [1.0, 1.0]}]}
///     ],
///     "simulation": {                        // optional
///       "ship_count": 100000,                // or "horizon": 5000.0
///       "warmup_fraction": 0.1, "replications": 10, "batch_count": 20,
///       "seed": 42, "confidence_intervals": true
///     }
///   }
///
/// Errors: SyntaxError (path is `line L, column C`), SchemaError (wrong type,
/// missing or unknown field), ValidationError (a model invariant fails; the
/// model-level code is kept in `Error::cause()`).
ConfigBundle parse_config(std::string_view text, const ParseOptions& options = {});

/// Reads and parses a file; IoError when it cannot be read.
ConfigBundle load_config(const std::filesystem::path& path,
                         const ParseOptions& options = {});

/// `fnv1a64:<16 hex digits>` over the raw document bytes.
std::string config_digest(std::string_view text);

}  // namespace seaport::io

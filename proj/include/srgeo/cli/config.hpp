// Run configuration: a JSON document, unknown keys rejected.
//
//   {
//     "metric":  "flat" | "sphere" | "hyperbolic"
//              | {"g11": expr, "g12": expr, "g22": expr,
//                 "domain": {"x1": [lo, hi], "x2": [lo, hi]},
//                 "geodesic_parallel": bool},
//     "initial": [x1, x2, theta, p1, p2, phi],
//     "window":  [t0, t1],
//     "tol":     1e-10,
//     "outputs": ["trajectory-csv", "events-json", "front-svg", "report-text"],
//     "seed":    1,
//     "sweep":   {"count": 1000, "slice": "all" | "straight"},
//     "render":  {"pi_prime": false, "samples": 2000}
//   }

#ifndef SRGEO_CLI_CONFIG_HPP
#define SRGEO_CLI_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "srgeo/extremal.hpp"

namespace srgeo::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MetricSpec {
  std::string name = "flat";  // builtin name, or "custom" for expressions
  std::string g11 = "1", g12 = "0", g22 = "1";
  Domain domain;
  bool geodesic_parallel = false;
};

enum class OutputKind { TrajectoryCsv, EventsJson, FrontSvg, ReportText };

const char* to_string(OutputKind kind);

enum class SweepSlice { All, Straight };

struct SweepSpec {
  std::size_t count = 1000;
  SweepSlice slice = SweepSlice::All;
};

struct RenderSpec {
  bool pi_prime = false;
  std::size_t samples = 2000;
};

struct RunConfig {
  MetricSpec metric;
  std::optional<ExtremalState> initial;
  Window window{0.0, 10.0};
  double tol = 1e-10;
  std::vector<OutputKind> outputs{OutputKind::TrajectoryCsv, OutputKind::ReportText};
  std::uint64_t seed = 1;
  SweepSpec sweep;
  RenderSpec render;

  bool wants(OutputKind kind) const;
};

// Throws ConfigError on malformed input, unknown keys, or violated
// invariants (empty window, tol outside [1e-14, 1e-3]).
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

// Builds the chart; throws ConfigError for unknown names or bad expressions.
Surface make_surface(const MetricSpec& spec);

// The initial state, checked to lie in the chart domain.
ExtremalState require_initial(const RunConfig& config, const Surface& surface);

}  // namespace srgeo::cli

#endif  // SRGEO_CLI_CONFIG_HPP

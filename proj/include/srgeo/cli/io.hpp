// Flat-file outputs: trajectory CSV (with read-back), event JSON, front SVG.

#ifndef SRGEO_CLI_IO_HPP
#define SRGEO_CLI_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "srgeo/cli/config.hpp"
#include "srgeo/singularity.hpp"

namespace srgeo::cli {

inline constexpr const char* kCsvHeader = "t,x1,x2,theta,p1,p2,phi,A,B,H";

// One row per integrator node, 17 significant digits; theta is not wrapped.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

struct CsvRow {
  double t = 0.0;
  ExtremalState state;
  double A = 0.0, B = 0.0, H = 0.0;
};

class TrajectoryTable {
 public:
  explicit TrajectoryTable(std::vector<CsvRow> rows);

  const std::vector<CsvRow>& rows() const { return rows_; }
  // Piecewise-linear resampling; exact at the rows.
  ExtremalState state_at(double t) const;

 private:
  std::vector<CsvRow> rows_;
};

// Throws std::runtime_error on a malformed header or row.
TrajectoryTable read_trajectory_csv(std::istream& in);

// Germ record at t0 followed by one record per event:
// {t, kind, projection, class, pair, delta, delta_formula, kappa_c, kappa_c_formula}.
nlohmann::json events_json(const EventReport& report, double t0);

// pi o Gamma as a polyline with a dot and a short left-normal tick at each
// pi-cusp; optionally a second panel with pi' o Gamma in a leaf chart.
std::string render_svg(const Trajectory& traj, const EventReport& report, const RenderSpec& spec);

// %.17g
std::string format_double(double v);
// %.6g
std::string format_number(double v);

}  // namespace srgeo::cli

#endif  // SRGEO_CLI_IO_HPP

#include "srgeo/cli/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace srgeo::cli {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const Surface& surface = traj.surface();
  out << kCsvHeader << '\n';
  for (double t : traj.node_times()) {
    const ExtremalState s = traj.eval(t);
    const Switching sw = switching_values(surface.frame, s);
    const double H = 0.5 * (sw.A * sw.A + s.phi * s.phi);
    for (double v : {t, s.x1, s.x2, s.theta, s.p1, s.p2, s.phi, sw.A, sw.B}) {
      out << format_double(v) << ',';
    }
    out << format_double(H) << '\n';
  }
}

TrajectoryTable::TrajectoryTable(std::vector<CsvRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::runtime_error("trajectory table is empty");
}

ExtremalState TrajectoryTable::state_at(double t) const {
  const bool forward = rows_.back().t >= rows_.front().t;
  auto before = [forward](const CsvRow& r, double v) { return forward ? r.t < v : r.t > v; };
  auto it = std::lower_bound(rows_.begin(), rows_.end(), t, before);
  if (it == rows_.end()) return rows_.back().state;
  if (it->t == t || it == rows_.begin()) return it->state;
  const CsvRow& a = *(it - 1);
  const CsvRow& b = *it;
  const double w = (t - a.t) / (b.t - a.t);
  const State6 ya = a.state.to_array(), yb = b.state.to_array();
  State6 y{};
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = ya[i] + w * (yb[i] - ya[i]);
  return ExtremalState::from_array(y);
}

TrajectoryTable read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("trajectory CSV: bad header");
  }
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ls, cell, ',')) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size()) {
        throw std::runtime_error("trajectory CSV: bad number '" + cell + "'");
      }
      v.push_back(x);
    }
    if (v.size() != 10) throw std::runtime_error("trajectory CSV: expected 10 columns");
    rows.push_back({v[0], {v[1], v[2], v[3], v[4], v[5], v[6]}, v[7], v[8], v[9]});
  }
  return TrajectoryTable(std::move(rows));
}

namespace {

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json events_json(const EventReport& report, double t0) {
  json out = json::array();
  out.push_back({{"t", t0},
                 {"kind", "germ"},
                 {"projection", nullptr},
                 {"class", nullptr},
                 {"pair", report.initial_pair.label()},
                 {"pi_germ_global", report.pi_germ_global},
                 {"pi_prime_germ_global", report.pi_prime_germ_global}});
  for (const SingularEvent& e : report.events) {
    out.push_back({{"t", e.t},
                   {"kind", "event"},
                   {"projection", to_string(e.projection)},
                   {"class", to_string(e.clazz)},
                   {"pair", e.pair.label()},
                   {"t_tol", e.refined_t_tol},
                   {"delta", optional_number(e.delta)},
                   {"delta_formula", optional_number(e.delta_formula)},
                   {"kappa_c", optional_number(e.kappa_c)},
                   {"kappa_c_formula", optional_number(e.kappa_c_formula)}});
  }
  return out;
}

namespace {

constexpr double kPanel = 480.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

struct Mark {
  Vec2 at{};
  std::optional<Vec2> tick;  // unit direction
};

struct Box {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;

  void add(const Vec2& p) {
    x0 = std::min(x0, p[0]);
    x1 = std::max(x1, p[0]);
    y0 = std::min(y0, p[1]);
    y1 = std::max(y1, p[1]);
  }
};

void panel(std::ostream& svg, double x_offset, const std::string& title,
           const std::vector<Vec2>& points, const std::vector<Mark>& marks) {
  Box box;
  for (const Vec2& p : points) box.add(p);
  for (const Mark& m : marks) box.add(m.at);
  if (points.empty()) box = {0, 1, 0, 1};
  double span = std::max(box.x1 - box.x0, box.y1 - box.y0);
  if (!(span > 1e-12)) span = 1.0;
  const double pad = 0.08 * span;
  const double cx = 0.5 * (box.x0 + box.x1), cy = 0.5 * (box.y0 + box.y1);
  const double half = 0.5 * span + pad;
  // Data y grows upward; the SVG coordinate is -y.
  svg << "  <svg x=\"" << num(x_offset) << "\" y=\"0\" width=\"" << num(kPanel) << "\" height=\""
      << num(kPanel) << "\" viewBox=\"" << num(cx - half) << ' ' << num(-cy - half) << ' '
      << num(2 * half) << ' ' << num(2 * half) << "\">\n";
  svg << "    <title>" << title << "</title>\n";
  svg << "    <rect x=\"" << num(cx - half) << "\" y=\"" << num(-cy - half) << "\" width=\""
      << num(2 * half) << "\" height=\"" << num(2 * half)
      << "\" fill=\"white\" stroke=\"#888\" vector-effect=\"non-scaling-stroke\"/>\n";
  svg << "    <polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.2\" "
         "vector-effect=\"non-scaling-stroke\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    svg << (i ? " " : "") << num(points[i][0]) << ',' << num(-points[i][1]);
  }
  svg << "\"/>\n";
  const double r = 0.012 * span, tick = 0.05 * span;
  for (const Mark& m : marks) {
    svg << "    <circle cx=\"" << num(m.at[0]) << "\" cy=\"" << num(-m.at[1]) << "\" r=\"" << num(r)
        << "\" fill=\"red\"/>\n";
    if (m.tick) {
      const Vec2 end{m.at[0] + tick * (*m.tick)[0], m.at[1] + tick * (*m.tick)[1]};
      svg << "    <line x1=\"" << num(m.at[0]) << "\" y1=\"" << num(-m.at[1]) << "\" x2=\""
          << num(end[0]) << "\" y2=\"" << num(-end[1])
          << "\" stroke=\"blue\" stroke-width=\"1.5\" vector-effect=\"non-scaling-stroke\"/>\n";
    }
  }
  svg << "  </svg>\n";
}

// Left normal J u = -sin(theta) v1 + cos(theta) v2 in chart coordinates.
Vec2 left_normal(const Surface& surface, const ExtremalState& s) {
  const FrameSample f = surface.frame.at(s.x1, s.x2);
  const double c = std::cos(s.theta), sn = std::sin(s.theta);
  Vec2 d{-sn * f.k + c * f.m, -sn * f.l + c * f.n};
  const double len = norm(d);
  return {d[0] / len, d[1] / len};
}

}  // namespace

std::string render_svg(const Trajectory& traj, const EventReport& report, const RenderSpec& spec) {
  const Surface& surface = traj.surface();
  const double t0 = traj.t_begin(), t1 = traj.t_end();
  std::vector<double> times;
  for (std::size_t i = 0; i < spec.samples; ++i) {
    times.push_back(t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(spec.samples - 1));
  }
  for (const SingularEvent& e : report.events) {
    if (e.projection == Projection::Pi) times.push_back(e.t);
  }
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  std::sort(times.begin(), times.end(), [dir](double a, double b) { return dir * a < dir * b; });

  std::vector<Vec2> pi_points;
  for (double t : times) pi_points.push_back(project_pi(traj.eval(t)));
  std::vector<Mark> pi_marks;
  for (const SingularEvent& e : report.events) {
    if (e.projection == Projection::Pi) {
      pi_marks.push_back({project_pi(e.state), left_normal(surface, e.state)});
    }
  }

  std::ostringstream svg;
  const double width = spec.pi_prime ? 2 * kPanel : kPanel;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(kPanel) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(kPanel) << "\">\n";
  panel(svg, 0.0, "pi front", pi_points, pi_marks);

  if (spec.pi_prime) {
    const ExtremalState base = traj.initial();
    const LeafChart leaf =
        surface.chart.is_flat() ? leaf_chart_flat(base) : leaf_chart_numeric(surface, base);
    const PlaneCurve curve = project_pi_prime(traj, leaf, spec.samples);
    std::vector<Mark> marks;
    for (const SingularEvent& e : report.events) {
      if (e.projection != Projection::PiPrime) continue;
      if (curve.truncated_at && dir * e.t >= dir * *curve.truncated_at) continue;
      try {
        marks.push_back({leaf(e.state), std::nullopt});
      } catch (const LeafChartError&) {
      } catch (const DomainError&) {
      }
    }
    panel(svg, kPanel, "pi' front", curve.points, marks);
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace srgeo::cli

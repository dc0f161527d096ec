// Singular parameter values of pi o Gamma and pi' o Gamma, their normal-form
// classes, and curvature diagnostics of the projected fronts.
//
// Classes: I constant curve, II fiber embedding (the projection collapses the
// germ to a point), III immersion, IV cusp.

#ifndef SRGEO_SINGULARITY_HPP
#define SRGEO_SINGULARITY_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "srgeo/extremal.hpp"
#include "srgeo/legendre.hpp"

namespace srgeo {

enum class NormalForm { I, II, III, IV };
enum class Projection { Pi, PiPrime };

const char* to_string(NormalForm c);
const char* to_string(Projection p);

struct ClassificationPair {
  NormalForm pi = NormalForm::I;
  NormalForm pi_prime = NormalForm::I;

  // (I,I), (II,III), (III,II), (III,III), (III,IV), (IV,III).
  bool allowed() const;
  std::string label() const;  // "(III,IV)"
  bool operator==(const ClassificationPair&) const = default;
};

class PairViolationError : public std::runtime_error {
 public:
  PairViolationError(ClassificationPair pair, double t);
  ClassificationPair pair;
  double t;
};

// sqrt(a^2 + b^2 + phi^2): the momentum magnitude thresholds are scaled by.
double momentum_scale(const Surface& surface, const ExtremalState& s);

// Class thresholds are 1e-11 times the momentum scale.
inline constexpr double kClassEpsilon = 1e-11;

// A and theta' both below threshold means H = 0: the constant class I
// (an equilibrium when the momenta are nonzero).
NormalForm classify_pi(const Surface& surface, const ExtremalState& s);
// Uses the pi' switching function Q and its rate (see legendre.hpp).
NormalForm classify_pi_prime(const Surface& surface, const ExtremalState& s);

ClassificationPair classify_pair_unchecked(const Surface& surface, const ExtremalState& s);
// Throws PairViolationError outside the allowed list.
ClassificationPair classify_pair(const Surface& surface, const ExtremalState& s, double t = 0.0);

// det(second, third): nonzero iff the germ is a cusp (first derivative zero).
double cusp_delta(const CurveJet& jet);

// 2 B^2 (k n - l m) theta'^3; equals 2 theta'^3 (p1^2 + p2^2) in the flat chart.
double pi_delta_formula(const Surface& surface, const ExtremalState& s);

// 2 theta''^2 A in the explicit flat leaf chart.
double pi_prime_delta_flat(const ExtremalState& s);

// Jet-based class of a plane-curve germ: tau is the time scale of the curve,
// floor the derivative magnitude below which the germ counts as collapsed.
NormalForm classify_jet(const CurveJet& jet, double tau, double floor);

struct CurvatureValue {
  double formula = 0.0;  // theta' / |A|
  double jet = 0.0;      // det(g', g'') / |g'|^3 from the projected curve
  bool validated = false;  // formula proven only for the flat chart
};

// Throws std::domain_error where A = 0.
CurvatureValue curvature(const Surface& surface, const ExtremalState& s);

// Closed form 2 sign(theta') |theta'|^(1/2) / (p1^2 + p2^2)^(1/4) generalized
// to Delta / |g''|^(5/2) with g'' = B theta' u at a cusp.
double cuspidal_curvature_formula(const Surface& surface, const ExtremalState& s);

// det(g'', g''') / |g''|^(5/2) from the projected curve; throws
// std::domain_error unless classify_pi(s) is IV.
double cuspidal_curvature(const Surface& surface, const ExtremalState& s);

struct SingularEvent {
  double t = 0.0;
  Projection projection = Projection::Pi;
  double refined_t_tol = 0.0;
  NormalForm clazz = NormalForm::III;
  ClassificationPair pair;
  ExtremalState state;
  std::optional<CurveJet> jet;            // projected-curve jet at t
  std::optional<double> delta;            // finite-difference jet determinant
  std::optional<double> delta_formula;    // closed form, where one is known
  std::optional<double> kappa_c;          // jet value, pi-cusps only
  std::optional<double> kappa_c_formula;  // closed form, pi-cusps only
};

struct RootCluster {
  Projection projection = Projection::Pi;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

struct EventReport {
  double scale = 0.0;  // sqrt(2H)
  ClassificationPair initial_pair;
  bool pi_germ_global = false;        // pi-class I or II for the whole curve
  bool pi_prime_germ_global = false;  // pi'-class I or II for the whole curve
  std::vector<SingularEvent> events;  // time ordered
  std::vector<RootCluster> clusters;  // unresolved root pairs
};

struct DetectOptions {
  int samples_per_step = 4;
  double t_tol = 1e-12;
  bool jets = true;  // compute finite-difference diagnostics
};

EventReport detect_events(const Trajectory& traj, DetectOptions opts = {});

struct ZigzagReport {
  std::vector<SingularEvent> events;
  bool applicable = false;  // librating flat trajectory with pi'-events
  bool alternates = false;
  std::size_t cusp_count = 0;
  double max_cusp_angle = 0.0;  // radians, against (p2, -p1)
  bool directions_parallel = false;
};

ZigzagReport zigzag_report(const Trajectory& traj, const EventReport& report);
ZigzagReport zigzag_report(const Trajectory& traj);

}  // namespace srgeo

#endif  // SRGEO_SINGULARITY_HPP

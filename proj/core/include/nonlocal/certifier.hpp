#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nonlocal/coincidence.hpp"
#include "nonlocal/degree.hpp"
#include "nonlocal/measure.hpp"
#include "nonlocal/ode.hpp"

namespace nonlocal {

/// g(0+) != g(0) together with lim var(g,[eps,1]) <= min_j |g^j(0+)-g^j(0)|.
/// `strict` marks the strict inequality (direct solving applies); equality
/// within 1e-9 is the boundary regime handled by regularization.
struct StandingCheck {
  bool ok = false;
  bool strict = false;
  double min_component_jump = 0.0;  // min_j |g^j(0+)-g^j(0)|
  double tail_variation = 0.0;
};

/// Samples of <f(t,x), x> for t in (0,1], |x| = R.
struct InwardCheck {
  std::size_t samples = 0;
  double max_inner_product = 0.0;
  bool strict = false;  // max < -1e-9
  bool pass = false;    // max <= 0
  double witness_t = 0.0;
  std::vector<double> witness_x;  // sample attaining the max
};

/// min |h| over a deterministic sample of the annulus r_minus < |u| <= r_plus.
struct AnnulusCheck {
  std::size_t samples = 0;
  bool vacuous = false;  // empty annulus (r_minus >= r_plus)
  double min_h_norm = 0.0;  // +inf when vacuous
  bool pass = false;     // min > 1e-9, or vacuous
  std::vector<double> witness_u;  // sample attaining the min
};

struct RBounds {
  double r_minus = 0.0;
  double r_plus = 0.0;
};

enum class Regime { Strict, Boundary };
enum class CertStatus { Certified, Failed };

std::string to_string(Regime r);
std::string to_string(CertStatus s);

struct CertifyConfig {
  std::size_t inward_time_samples = 64;
  std::size_t inward_sphere_samples = 64;
  std::size_t annulus_samples = 32;  // radial resolution; directions scale with it
  std::optional<double> chosen_r;    // must lie in (r_minus, r_plus]; default r_plus
  DegreeOptions degree;
};

/// Auditable record of the hypothesis checks. "Certified" means
/// certified-by-sampling: the continuum conditions were checked on the
/// recorded deterministic sample sets, not proven.
struct ExistenceCertificate {
  double R = 0.0;
  RBounds bounds;
  double chosen_r = 0.0;
  StandingCheck standing;
  InwardCheck cond_i;
  AnnulusCheck cond_ii;
  bool degree_defined = false;
  DegreeResult degree;
  std::string degree_error;  // set when !degree_defined
  Regime regime = Regime::Boundary;
  CertStatus status = CertStatus::Failed;
  std::string failure;  // first failing check, empty when certified
  std::string variant = "endpoint0";  // "endpoint1" for the mirrored hypotheses
};

StandingCheck standing_assumptions(const BVFunction& g);

/// r_minus = R (min_j |g^j(0+)-g^j(0)| - lim var(g,[eps,1]))
/// r_plus  = R (|g(0+)-g(0)|_2       + lim var(g,[eps,1]))
RBounds r_bounds(const BVFunction& g, double R);

InwardCheck check_inward(const VectorField& f, double R, std::size_t n_t, std::size_t n_x);

AnnulusCheck check_h_annulus(const BoundaryMap& h, double r_minus, double r_plus,
                             std::size_t n);

/// Runs all hypothesis checks of the existence theorem at radius R and
/// assembles the certificate. Failures are encoded in status, not thrown.
ExistenceCertificate certify(const Problem& p, double R, const CertifyConfig& cfg = {});

/// Endpoint-1 variant: the same hypotheses with the roles of 0 and 1 swapped
/// (jump at 1, var over [0,1-eps], <f,x> >= 0 on [0,1)). Implemented by
/// certifying the time-reversed problem.
ExistenceCertificate certify_endpoint1(const Problem& p, double R,
                                       const CertifyConfig& cfg = {});

}  // namespace nonlocal

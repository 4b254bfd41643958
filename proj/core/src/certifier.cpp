#include "nonlocal/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nonlocal/detail/sampling.hpp"
#include "nonlocal/errors.hpp"
#include "nonlocal/problems.hpp"

namespace nonlocal {
namespace {

constexpr double kStandingSlack = 1e-12;  // tolerance on the <= comparison
constexpr double kStrictness = 1e-9;      // strict-vs-equality threshold
constexpr double kAnnulusFloor = 1e-9;    // min |h| accepted as nonvanishing

}  // namespace

std::string to_string(Regime r) {
  return r == Regime::Strict ? "strict" : "boundary";
}

std::string to_string(CertStatus s) {
  return s == CertStatus::Certified ? "certified-by-sampling" : "failed";
}

StandingCheck standing_assumptions(const BVFunction& g) {
  StandingCheck out;
  const auto jump0 = g.jump_at_zero_vector();
  double min_jump = std::numeric_limits<double>::infinity();
  bool nonzero = false;
  for (double d : jump0) {
    min_jump = std::min(min_jump, std::fabs(d));
    if (d != 0.0) nonzero = true;
  }
  out.min_component_jump = min_jump;
  out.tail_variation = g.tail_variation();
  out.ok = nonzero && out.tail_variation <= min_jump + kStandingSlack;
  out.strict = nonzero && out.tail_variation < min_jump - kStrictness;
  return out;
}

RBounds r_bounds(const BVFunction& g, double R) {
  if (!(R > 0.0)) throw InvalidArgument("r_bounds requires R > 0");
  const auto jump0 = g.jump_at_zero_vector();
  double min_jump = std::numeric_limits<double>::infinity();
  double norm2 = 0.0;
  for (double d : jump0) {
    min_jump = std::min(min_jump, std::fabs(d));
    norm2 += d * d;
  }
  const double tail = g.tail_variation();
  return RBounds{R * (min_jump - tail), R * (std::sqrt(norm2) + tail)};
}

InwardCheck check_inward(const VectorField& f, double R, std::size_t n_t, std::size_t n_x) {
  if (n_t < 1 || n_x < 1) throw InvalidArgument("check_inward needs n_t, n_x >= 1");
  const std::size_t k = f.dim();
  const auto directions = detail::sphere_points(k, n_x);
  const std::size_t dir_count = directions.size() / k;

  InwardCheck out;
  out.max_inner_product = -std::numeric_limits<double>::infinity();
  auto ws = f.make_workspace();
  std::vector<double> x(k), fx(k);
  for (std::size_t it = 1; it <= n_t; ++it) {
    const double t = static_cast<double>(it) / static_cast<double>(n_t);  // (0,1]
    for (std::size_t d = 0; d < dir_count; ++d) {
      for (std::size_t j = 0; j < k; ++j) x[j] = R * directions[d * k + j];
      f.eval(t, x, fx, ws);
      double ip = 0.0;
      for (std::size_t j = 0; j < k; ++j) ip += fx[j] * x[j];
      ++out.samples;
      if (ip > out.max_inner_product) {
        out.max_inner_product = ip;
        out.witness_t = t;
        out.witness_x = x;
      }
    }
  }
  out.pass = out.max_inner_product <= 0.0;
  out.strict = out.max_inner_product < -kStrictness;
  return out;
}

AnnulusCheck check_h_annulus(const BoundaryMap& h, double r_minus, double r_plus,
                             std::size_t n) {
  if (n < 1) throw InvalidArgument("check_h_annulus needs n >= 1");
  AnnulusCheck out;
  if (r_minus >= r_plus) {
    out.vacuous = true;
    out.pass = true;
    out.min_h_norm = std::numeric_limits<double>::infinity();
    return out;
  }
  const std::size_t k = h.dim();
  const auto directions = detail::sphere_points(k, std::max<std::size_t>(2 * n, 2));
  const std::size_t dir_count = directions.size() / k;

  out.min_h_norm = std::numeric_limits<double>::infinity();
  auto ws = h.make_workspace();
  std::vector<double> u(k), v(k);
  for (std::size_t ir = 1; ir <= n; ++ir) {
    // radii in (r_minus, r_plus]
    const double rho =
        r_minus + (r_plus - r_minus) * static_cast<double>(ir) / static_cast<double>(n);
    for (std::size_t d = 0; d < dir_count; ++d) {
      for (std::size_t j = 0; j < k; ++j) u[j] = rho * directions[d * k + j];
      h.eval(u, v, ws);
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += v[j] * v[j];
      const double norm = std::sqrt(s);
      ++out.samples;
      if (norm < out.min_h_norm) {
        out.min_h_norm = norm;
        out.witness_u = u;
      }
    }
  }
  out.pass = out.min_h_norm > kAnnulusFloor;
  return out;
}

ExistenceCertificate certify(const Problem& p, double R, const CertifyConfig& cfg) {
  if (!(R > 0.0)) throw InvalidArgument("certify requires R > 0");
  ExistenceCertificate cert;
  cert.R = R;
  cert.standing = standing_assumptions(p.g);
  cert.bounds = r_bounds(p.g, R);
  cert.cond_i = check_inward(p.f, R, cfg.inward_time_samples, cfg.inward_sphere_samples);
  cert.cond_ii = check_h_annulus(p.h, cert.bounds.r_minus, cert.bounds.r_plus,
                                 cfg.annulus_samples);

  cert.chosen_r = cfg.chosen_r.value_or(cert.bounds.r_plus);
  if (cfg.chosen_r) {
    const bool degenerate = cert.bounds.r_minus >= cert.bounds.r_plus;
    const bool inside = degenerate
                            ? cert.chosen_r == cert.bounds.r_plus
                            : (cert.chosen_r > cert.bounds.r_minus &&
                               cert.chosen_r <= cert.bounds.r_plus);
    if (!inside)
      throw InvalidArgument("chosen_r must lie in (r_minus, r_plus]");
  }

  if (cert.chosen_r > 0.0) {
    try {
      cert.degree = degree(p.h, cert.chosen_r, cfg.degree);
      cert.degree_defined = true;
    } catch (const DegreeError& e) {
      cert.degree_error = e.what();
    }
  } else {
    cert.degree_error = "chosen radius is not positive";
  }

  cert.regime = (cert.standing.strict && cert.cond_i.strict) ? Regime::Strict
                                                             : Regime::Boundary;
  if (!cert.standing.ok) {
    cert.failure = "standing assumptions";
  } else if (!cert.cond_i.pass) {
    cert.failure = "condition (i): inner product positive at witness";
  } else if (!cert.cond_ii.pass) {
    cert.failure = "condition (ii): h vanishes on the annulus near witness";
  } else if (!cert.degree_defined) {
    cert.failure = "degree undefined: " + cert.degree_error;
  } else if (cert.degree.value == 0) {
    cert.failure = "degree vanishes";
  }
  cert.status = cert.failure.empty() ? CertStatus::Certified : CertStatus::Failed;
  return cert;
}

ExistenceCertificate certify_endpoint1(const Problem& p, double R, const CertifyConfig& cfg) {
  ExistenceCertificate cert = certify(time_reverse(p), R, cfg);
  cert.variant = "endpoint1";
  return cert;
}

}  // namespace nonlocal

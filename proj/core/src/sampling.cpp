#include "nonlocal/detail/sampling.hpp"

#include <cmath>
#include <numbers>

#include "nonlocal/errors.hpp"

namespace nonlocal::detail {
namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double halton(std::size_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

// Unit vector from k-1 spherical angles (first k-2 polar in [0,pi], last
// azimuthal in [0,2pi)).
void spherical_to_cartesian(const std::vector<double>& angles, double* out) {
  const std::size_t k = angles.size() + 1;
  double sin_prod = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (j < angles.size())
      out[j] = sin_prod * std::cos(angles[j]);
    else
      out[j] = sin_prod;
    if (j < angles.size()) sin_prod *= std::sin(angles[j]);
  }
}

}  // namespace

std::vector<double> sphere_points(std::size_t k, std::size_t n) {
  if (k == 0) throw InvalidArgument("sphere dimension must be positive");
  std::vector<double> pts;
  if (k == 1) {
    pts = {-1.0, 1.0};
    return pts;
  }
  if (n == 0) n = 1;
  if (k == 2) {
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    pts.resize(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
      const double frac = std::fmod(static_cast<double>(i + 1) * golden, 1.0);
      const double theta = 2.0 * std::numbers::pi * frac;
      pts[2 * i] = std::cos(theta);
      pts[2 * i + 1] = std::sin(theta);
    }
    return pts;
  }
  if (k == 3) {
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    pts.resize(n * 3);
    for (std::size_t i = 0; i < n; ++i) {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden_angle * static_cast<double>(i);
      pts[3 * i] = rho * std::cos(phi);
      pts[3 * i + 1] = rho * std::sin(phi);
      pts[3 * i + 2] = z;
    }
    return pts;
  }
  // k >= 4: product grid over spherical angles.
  const std::size_t angles = k - 1;
  auto per_axis = static_cast<std::size_t>(
      std::ceil(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(angles))));
  per_axis = std::max<std::size_t>(per_axis, 2);
  std::vector<std::size_t> idx(angles, 0);
  std::vector<double> ang(angles);
  for (;;) {
    for (std::size_t a = 0; a < angles; ++a) {
      const double u = (static_cast<double>(idx[a]) + 0.5) / static_cast<double>(per_axis);
      ang[a] = a + 1 < angles ? u * std::numbers::pi : u * 2.0 * std::numbers::pi;
    }
    const std::size_t at = pts.size();
    pts.resize(at + k);
    spherical_to_cartesian(ang, pts.data() + at);
    std::size_t a = 0;
    while (a < angles && ++idx[a] == per_axis) idx[a++] = 0;
    if (a == angles) break;
  }
  return pts;
}

std::vector<double> halton_ball_points(std::size_t k, std::size_t count, double r) {
  if (k == 0 || k > std::size(kPrimes))
    throw InvalidArgument("unsupported dimension for Halton seeds");
  std::vector<double> pts;
  pts.reserve(count * k);
  std::vector<double> u(k);
  std::size_t found = 0;
  for (std::size_t index = 1; found < count && index < 1000000; ++index) {
    double norm2 = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      u[j] = r * (2.0 * halton(index, kPrimes[j]) - 1.0);
      norm2 += u[j] * u[j];
    }
    if (norm2 < r * r) {
      pts.insert(pts.end(), u.begin(), u.end());
      ++found;
    }
  }
  return pts;
}

}  // namespace nonlocal::detail

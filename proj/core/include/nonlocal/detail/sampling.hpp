#pragma once

#include <cstddef>
#include <vector>

namespace nonlocal::detail {

/// Deterministic points on the unit sphere in R^k, stored row-major (n x k).
/// k=1: {-1,+1}; k=2: golden-angle sequence on the circle; k=3: Fibonacci
/// sphere; k>=4: tensorized spherical angles. The count may exceed the
/// request slightly for the tensorized case.
std::vector<double> sphere_points(std::size_t k, std::size_t n);

/// Halton low-discrepancy points inside the ball B(0,r) in R^k, row-major
/// (count x k). Deterministic: the sequence is scanned from index 1 upward
/// and points outside the ball are skipped.
std::vector<double> halton_ball_points(std::size_t k, std::size_t count, double r);

}  // namespace nonlocal::detail

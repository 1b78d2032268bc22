#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace hamzoo::fit {

/// Taylor coefficients at 0 of a smooth f on [0, width], read off a
/// degree-n Chebyshev interpolant (nodes strictly inside the interval).
inline std::vector<double> taylor_coefficients(
    const std::function<double(double)>& f, double width, int n) {
  const int count = n + 1;
  std::vector<double> values(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    const double theta = std::numbers::pi * (j + 0.5) / count;
    values[static_cast<std::size_t>(j)] = f(0.5 * width * (1.0 + std::cos(theta)));
  }
  // Chebyshev coefficients in s = 2 eps / width - 1
  std::vector<double> cheb(static_cast<std::size_t>(count), 0.0);
  for (int k = 0; k < count; ++k) {
    double sum = 0.0;
    for (int j = 0; j < count; ++j) {
      sum += values[static_cast<std::size_t>(j)] *
             std::cos(std::numbers::pi * k * (j + 0.5) / count);
    }
    cheb[static_cast<std::size_t>(k)] = (k == 0 ? 1.0 : 2.0) * sum / count;
  }
  // T_k(s) as monomials in u = eps / width, with s = 2u - 1
  std::vector<std::vector<long double>> t(static_cast<std::size_t>(count));
  t[0] = {1.0};
  if (count > 1) t[1] = {-1.0, 2.0};
  for (std::size_t k = 2; k < t.size(); ++k) {
    std::vector<long double> next(k + 1, 0.0L);
    for (std::size_t i = 0; i < t[k - 1].size(); ++i) {
      next[i] -= 2.0 * t[k - 1][i];
      next[i + 1] += 4.0 * t[k - 1][i];
    }
    for (std::size_t i = 0; i < t[k - 2].size(); ++i) next[i] -= t[k - 2][i];
    t[k] = std::move(next);
  }
  std::vector<long double> acc(static_cast<std::size_t>(count), 0.0L);
  for (std::size_t k = 0; k < t.size(); ++k) {
    for (std::size_t i = 0; i < t[k].size(); ++i) acc[i] += cheb[k] * t[k][i];
  }
  std::vector<double> out(acc.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<double>(acc[i] / std::pow(static_cast<long double>(width), i));
  }
  return out;
}

}  // namespace hamzoo::fit

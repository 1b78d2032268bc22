#include "hamzoo/series.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hamzoo/error.hpp"

namespace hamzoo {

CoeffTable identity_series(int order) {
  if (order < 0) throw InvalidSpec("series order must be >= 0");
  CoeffTable t;
  t.level = 0;
  t.coeffs.assign(static_cast<std::size_t>(order) + 1, 0.0);
  if (order >= 1) t.coeffs[1] = 1.0;
  return t;
}

CoeffTable series_coeffs(int level, double lambda1, double m, int sign,
                         int order) {
  if (level != 1) {
    throw InvalidSpec("closed-form coefficients exist for j = 1 only; got j = " +
                      std::to_string(level));
  }
  if (order < 0) throw InvalidSpec("series order must be >= 0");
  if (!(lambda1 > 0.0) || !(m > 0.0)) {
    throw InvalidSpec("lambda and m must be positive");
  }
  if (sign != 1 && sign != -1) throw InvalidSpec("sign must be +1 or -1");

  const double omega = m * lambda1 * lambda1;
  const double ratio = sign / omega;
  CoeffTable t;
  t.level = 1;
  t.coeffs.resize(static_cast<std::size_t>(order) + 1);
  // k = 0 is sign*omega = ratio^-1; then a_{k+1} = a_k * ratio / (k+1)
  double a = 1.0 / ratio;
  for (int k = 0; k <= order; ++k) {
    t.coeffs[static_cast<std::size_t>(k)] = a;
    a *= ratio / (k + 1);
  }
  return t;
}

CoeffTable compose_series(const CoeffTable& inner, double lambda_next, double m,
                          int sign, int order) {
  if (inner.order() < order) {
    throw InvalidSpec("inner series truncated below requested order");
  }
  const double omega = sign * m * lambda_next * lambda_next;
  const auto n = static_cast<std::size_t>(order) + 1;

  // u = inner / omega; w = exp(u) via w_k = (1/k) sum_{i=1..k} i u_i w_{k-i}
  std::vector<double> u(n);
  for (std::size_t k = 0; k < n; ++k) u[k] = inner.coeffs[k] / omega;
  std::vector<double> w(n, 0.0);
  w[0] = std::exp(u[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
      acc += static_cast<double>(i) * u[i] * w[k - i];
    }
    w[k] = acc / static_cast<double>(k);
  }

  CoeffTable t;
  t.level = inner.level + 1;
  t.coeffs.resize(n);
  for (std::size_t k = 0; k < n; ++k) t.coeffs[k] = omega * w[k];
  return t;
}

CoeffTable cabbatonian_series(const std::vector<double>& lambdas, double m,
                              int sign, int order) {
  CoeffTable t = identity_series(order);
  for (double lambda : lambdas) t = compose_series(t, lambda, m, sign, order);
  return t;
}

SeriesValue eval_series(const CoeffTable& table, double h0) {
  SeriesValue r;
  for (auto k = table.coeffs.size(); k-- > 0;) {
    r.d2 = r.d2 * h0 + 2.0 * r.d1;
    r.d1 = r.d1 * h0 + r.value;
    r.value = r.value * h0 + table.coeffs[k];
  }
  return r;
}

std::vector<std::uint64_t> pascal_row(int k) {
  if (k < 0) throw std::invalid_argument("pascal row index must be >= 0");
  if (k > kMaxExactPascalRow) {
    throw std::overflow_error("pascal row " + std::to_string(k) +
                              " exceeds exact 64-bit range (max 60)");
  }
  std::vector<std::uint64_t> row{1};
  row.reserve(static_cast<std::size_t>(k) + 1);
  for (int n = 1; n <= k; ++n) {
    row.push_back(1);
    for (auto i = row.size() - 2; i > 0; --i) row[i] += row[i - 1];
  }
  return row;
}

std::vector<std::vector<std::uint8_t>> sierpinski_mask(int rows) {
  if (rows < 1) throw std::invalid_argument("mask needs at least one row");
  std::vector<std::vector<std::uint8_t>> mask;
  mask.reserve(static_cast<std::size_t>(rows));
  mask.push_back({1});
  for (int n = 1; n < rows; ++n) {
    const auto& prev = mask.back();
    std::vector<std::uint8_t> row(static_cast<std::size_t>(n) + 1, 1);
    for (std::size_t i = 1; i < row.size() - 1; ++i) {
      row[i] = prev[i - 1] ^ prev[i];
    }
    mask.push_back(std::move(row));
  }
  return mask;
}

}  // namespace hamzoo

#pragma once

#include <cstdint>
#include <vector>

namespace hamzoo {

/// Truncated power series in H0: value = sum_k coeffs[k] * H0^k.
struct CoeffTable {
  int level = 0;  // nesting depth j the coefficients belong to
  std::vector<double> coeffs;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// The series of H0 itself, truncated at `order`.
CoeffTable identity_series(int order);

/// a_1^k = (1/k!) * (sign / (m*lambda^2))^(k-1), k = 0..order.
CoeffTable series_coeffs(int level, double lambda1, double m, int sign,
                         int order);

/// Taylor coefficients of sign*m*l^2*exp(sign*inner/(m*l^2)), truncated at
/// `order`. Composing repeatedly yields a_j^k for any j.
CoeffTable compose_series(const CoeffTable& inner, double lambda_next, double m,
                          int sign, int order);

/// a_j^k for the Cabbatonian with the given lambdas.
CoeffTable cabbatonian_series(const std::vector<double>& lambdas, double m,
                              int sign, int order);

/// Horner evaluation with first and second derivatives.
struct SeriesValue {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};
SeriesValue eval_series(const CoeffTable& table, double h0);

inline constexpr int kMaxExactPascalRow = 60;

/// C(k, i) for i = 0..k. Throws std::overflow_error for k > 60.
std::vector<std::uint64_t> pascal_row(int k);

/// Parity of C(n, k) via Lucas: odd iff (k & (n - k)) == 0.
inline bool binomial_is_odd(std::uint64_t n, std::uint64_t k) {
  return k <= n && (k & (n - k)) == 0;
}

/// Rows 0..rows-1 of the Pascal triangle mod 2 (1 = odd), built with the
/// additive rule on parities so any row count works.
std::vector<std::vector<std::uint8_t>> sierpinski_mask(int rows);

}  // namespace hamzoo

#include "hamzoo/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "hamzoo/error.hpp"

namespace hamzoo {

namespace {

struct Panel {
  double a, fa, m, fm, b, fb, whole;
};

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

class Simpson {
 public:
  Simpson(const std::function<double(double)>& f, int max_depth)
      : f_(f), max_depth_(max_depth) {}

  double eval(double x) {
    ++evaluations;
    return f_(x);
  }

  double refine(const Panel& p, double eps, int depth) {
    const double lm = 0.5 * (p.a + p.m);
    const double rm = 0.5 * (p.m + p.b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = simpson(p.a, p.fa, flm, p.m, p.fm);
    const double right = simpson(p.m, p.fm, frm, p.b, p.fb);
    const double delta = left + right - p.whole;
    if (std::fabs(delta) <= 15.0 * eps) {
      error_estimate += std::fabs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth >= max_depth_) {
      failed = true;
      error_estimate += std::fabs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return refine({p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * eps, depth + 1) +
           refine({p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * eps, depth + 1);
  }

  int evaluations = 0;
  double error_estimate = 0.0;
  bool failed = false;

 private:
  const std::function<double(double)>& f_;
  int max_depth_;
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b,
                                  const QuadratureOptions& options) {
  if (a == b) return {};
  Simpson s(f, options.max_depth);
  const double m = 0.5 * (a + b);
  const double fa = s.eval(a);
  const double fm = s.eval(m);
  const double fb = s.eval(b);
  const double whole = simpson(a, fa, fm, b, fb);
  const double eps =
      std::max(options.abs_tol, options.rel_tol * std::fabs(whole));
  QuadratureResult r;
  r.value = s.refine({a, fa, m, fm, b, fb, whole}, eps, 0);
  r.error_estimate = s.error_estimate;
  r.evaluations = s.evaluations;
  if (s.failed) {
    throw QuadratureFailure(r.error_estimate,
                            "adaptive Simpson hit the bisection depth limit");
  }
  return r;
}

}  // namespace hamzoo

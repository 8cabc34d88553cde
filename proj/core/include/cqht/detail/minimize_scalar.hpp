#pragma once

#include <cmath>
#include <utility>

namespace cqht {

template <class F>
std::pair<double, double> minimize_scalar(F&& f, double lo, double hi, double tol) {
  constexpr int kGrid = 101;
  const double step = (hi - lo) / (kGrid - 1);
  int best_i = 0;
  double best_x = lo;
  double best_f = f(lo);
  for (int i = 1; i < kGrid; ++i) {
    const double x = (i == kGrid - 1) ? hi : lo + step * i;
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
      best_i = i;
    }
  }

  double a = best_i > 0 ? lo + step * (best_i - 1) : lo;
  double b = best_i < kGrid - 1 ? lo + step * (best_i + 1) : hi;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double fx = f(x);
  if (fx < best_f) {
    best_f = fx;
    best_x = x;
  }
  return {best_x, best_f};
}

}  // namespace cqht

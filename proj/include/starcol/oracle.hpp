// Analytical reference solutions for the benchmark problems and the error
// metrics (relative l2, oscillation count) used to judge computed profiles.
#pragma once

#include <vector>

namespace starcol {

// Axial bar under end load: u(x) = F x / (E A).
double bar_axial(double x, double F, double E, double A);

// Euler-Bernoulli cantilever with end force: v(x) = F x^2 (3L - x) / (6 E I).
double cantilever_end_force(double x, double F, double E, double I, double L);

// Tip-loaded shape normalized to v(L) = delta: v(x) = delta x^2 (3L - x) / (2 L^3).
double cantilever_prescribed_tip(double x, double delta, double L);

struct ProfileSample {
  double position = 0.0;
  double computed = 0.0;
  double reference = 0.0;
};

struct ErrorReport {
  double rel_l2 = 0.0;        // ||c - r||2 / ||r||2; 0 when both empty-normed, inf when only r is
  double max_abs = 0.0;
  int oscillation_count = 0;  // strict sign changes of successive differences of (c - r)
  std::vector<ProfileSample> profile;
};

ErrorReport compare(const std::vector<double>& positions, const std::vector<double>& computed,
                    const std::vector<double>& reference);

}  // namespace starcol

#include "starcol/oracle.hpp"

#include <cmath>
#include <limits>

#include "starcol/errors.hpp"

namespace starcol {

double bar_axial(double x, double F, double E, double A) { return F * x / (E * A); }

double cantilever_end_force(double x, double F, double E, double I, double L) {
  return F * x * x * (3.0 * L - x) / (6.0 * E * I);
}

double cantilever_prescribed_tip(double x, double delta, double L) {
  return delta * x * x * (3.0 * L - x) / (2.0 * L * L * L);
}

ErrorReport compare(const std::vector<double>& positions, const std::vector<double>& computed,
                    const std::vector<double>& reference) {
  size_t n = positions.size();
  if (computed.size() != n || reference.size() != n)
    throw SolverError("profile comparison needs equal-length samples");

  ErrorReport rep;
  rep.profile.resize(n);
  double diff2 = 0.0, ref2 = 0.0;
  std::vector<double> d(n);
  for (size_t i = 0; i < n; ++i) {
    rep.profile[i] = {positions[i], computed[i], reference[i]};
    d[i] = computed[i] - reference[i];
    diff2 += d[i] * d[i];
    ref2 += reference[i] * reference[i];
    rep.max_abs = std::max(rep.max_abs, std::abs(d[i]));
  }
  if (ref2 == 0.0)
    rep.rel_l2 = diff2 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  else
    rep.rel_l2 = std::sqrt(diff2) / std::sqrt(ref2);

  // oscillation = strict sign changes in the slope of the error profile
  for (size_t i = 0; i + 2 < n; ++i) {
    double s0 = d[i + 1] - d[i];
    double s1 = d[i + 2] - d[i + 1];
    if (s0 * s1 < 0.0) ++rep.oscillation_count;
  }
  return rep;
}

}  // namespace starcol

#include <doctest.h>

#include <cmath>
#include <vector>

#include "starcol/errors.hpp"
#include "starcol/oracle.hpp"

using namespace starcol;

TEST_CASE("axial bar solution hits the benchmark values") {
  CHECK(bar_axial(99.0, 50.0, 200000.0, 1.0) == doctest::Approx(0.02475).epsilon(1e-12));
  CHECK(bar_axial(50.0, 50.0, 200000.0, 1.0) == doctest::Approx(0.0125).epsilon(1e-12));
  CHECK(bar_axial(0.0, 50.0, 200000.0, 1.0) == 0.0);
}

TEST_CASE("end-force cantilever: tip value, fixed-end behavior, benchmark deflection") {
  // v(L) = F L^3 / (3 E I)
  CHECK(cantilever_end_force(2.0, 1.0, 1.0, 1.0, 2.0) ==
        doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  CHECK(cantilever_end_force(0.0, 1.0, 1.0, 1.0, 2.0) == 0.0);

  // 4 mm x 4 mm cross-section over 99 mm: I = 4^4/12, tip under 50 N
  double I = 4.0 * 4.0 * 4.0 * 4.0 / 12.0;
  CHECK(I == doctest::Approx(21.3333).epsilon(1e-4));
  CHECK(cantilever_end_force(99.0, 50.0, 200000.0, I, 99.0) ==
        doctest::Approx(3.7902).epsilon(1e-4));

  // monotone increase and zero slope at the fixed end
  double L = 99.0, prev = 0.0;
  for (int i = 1; i <= 40; ++i) {
    double v = cantilever_end_force(L * i / 40.0, 50.0, 200000.0, I, L);
    CHECK(v > prev);
    prev = v;
  }
  double eps = 1e-6 * L;
  double slope0 = cantilever_end_force(eps, 50.0, 200000.0, I, L) / eps;
  double tip = cantilever_end_force(L, 50.0, 200000.0, I, L);
  CHECK(std::abs(slope0) <= 1e-5 * tip / L);
}

TEST_CASE("prescribed-tip shape is the normalized end-force shape") {
  CHECK(cantilever_prescribed_tip(1.0, 5.0, 2.0) == doctest::Approx(1.5625).epsilon(1e-12));
  CHECK(cantilever_prescribed_tip(2.0, 5.0, 2.0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(cantilever_prescribed_tip(0.0, 5.0, 2.0) == 0.0);

  // with F = 3 E I delta / L^3 both formulas agree pointwise
  double E = 200000.0, I = 21.0, L = 99.0, delta = 5.0;
  double F = 3.0 * E * I * delta / (L * L * L);
  for (int i = 0; i <= 50; ++i) {
    double x = L * i / 50.0;
    CHECK(cantilever_end_force(x, F, E, I, L) ==
          doctest::Approx(cantilever_prescribed_tip(x, delta, L)).epsilon(1e-12));
  }
}

TEST_CASE("profile comparison: metrics and the oscillation counter") {
  std::vector<double> pos = {0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> ref = {0.0, 1.0, 2.0, 3.0, 4.0};

  ErrorReport same = compare(pos, ref, ref);
  CHECK(same.rel_l2 == 0.0);
  CHECK(same.max_abs == 0.0);
  CHECK(same.oscillation_count == 0);
  REQUIRE(same.profile.size() == 5);
  CHECK(same.profile[3].position == 3.0);
  CHECK(same.profile[3].computed == 3.0);
  CHECK(same.profile[3].reference == 3.0);

  std::vector<double> scaled(5);
  for (int i = 0; i < 5; ++i) scaled[i] = 1.1 * ref[i];
  ErrorReport ten = compare(pos, scaled, ref);
  CHECK(ten.rel_l2 == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(ten.max_abs == doctest::Approx(0.4).epsilon(1e-12));

  // alternating +/- eps error flips the difference signs at every step
  std::vector<double> wiggle(5);
  for (int i = 0; i < 5; ++i) wiggle[i] = ref[i] + (i % 2 == 0 ? 1e-3 : -1e-3);
  ErrorReport osc = compare(pos, wiggle, ref);
  CHECK(osc.oscillation_count == 3);  // N - 2 sign changes

  std::vector<double> zero(5, 0.0);
  ErrorReport both_zero = compare(pos, zero, zero);
  CHECK(both_zero.rel_l2 == 0.0);
  ErrorReport only_ref_zero = compare(pos, wiggle, zero);
  CHECK(std::isinf(only_ref_zero.rel_l2));

  CHECK_THROWS_AS(compare(pos, {1.0, 2.0}, ref), SolverError);
  CHECK_THROWS_AS(compare(pos, ref, {1.0}), SolverError);
}

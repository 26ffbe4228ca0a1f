#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "rmobo/pareto.hpp"
#include "rmobo/rng.hpp"

using namespace rmobo;

namespace {
Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("dominance definition") {
  CHECK(dominates(v2(1, 2), v2(0, 1)));
  CHECK_FALSE(dominates(v2(1, 1), v2(1, 1)));
  CHECK_FALSE(dominates(v2(1, 0), v2(0, 1)));
  CHECK_FALSE(dominates(v2(0, 1), v2(1, 0)));
  CHECK(dominates(v2(1, 1), v2(1, 0)));  // tie in one coordinate is fine
}

TEST_CASE("dominance is irreflexive and transitive") {
  RngStream rng(5);
  for (int k = 0; k < 500; ++k) {
    const Vector a = v2(rng.normal(), rng.normal());
    CHECK_FALSE(dominates(a, a));
    // Constructed chain a >= b >= c plus random triples.
    const Vector b = a - v2(std::abs(rng.normal()), std::abs(rng.normal()));
    const Vector c = b - v2(std::abs(rng.normal()), std::abs(rng.normal()));
    if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
    const Vector r1 = v2(rng.normal(), rng.normal());
    const Vector r2 = v2(rng.normal(), rng.normal());
    if (dominates(a, r1) && dominates(r1, r2)) CHECK(dominates(a, r2));
  }
}

TEST_CASE("non-dominated sort example and brute-force agreement") {
  Matrix Y(4, 2);
  Y << 1, 1, 0, 0, 2, 0, 0, 2;
  const auto rank = non_dominated_sort(Y);
  CHECK(rank == std::vector<int>{0, 1, 0, 0});

  RngStream rng(8);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform() * 30);
    Matrix R(n, 2);
    for (int i = 0; i < n; ++i)
      R.row(i) << std::round(rng.normal() * 3), std::round(rng.normal() * 3);
    CHECK(non_dominated_sort(R) == oracle::rank_by_peeling(R));
  }
}

TEST_CASE("degenerate sorts") {
  Matrix same(3, 2);
  same << 1, 1, 1, 1, 1, 1;
  CHECK(non_dominated_sort(same) == std::vector<int>{0, 0, 0});
  CHECK(extract_front(same).points.rows() == 1);  // duplicates collapsed
  Matrix one(1, 2);
  one << 5, -3;
  CHECK(non_dominated_sort(one) == std::vector<int>{0});
}

TEST_CASE("extract_front is invariant to row permutation") {
  RngStream rng(13);
  Matrix Y(12, 2);
  for (int i = 0; i < 12; ++i) Y.row(i) << rng.normal(), rng.normal();
  Matrix inputs(12, 1);
  for (int i = 0; i < 12; ++i) inputs(i, 0) = i;
  const ParetoFront a = extract_front(Y, inputs);
  Matrix Yp(12, 2), Ip(12, 1);
  for (int i = 0; i < 12; ++i) {
    Yp.row(i) = Y.row((i * 5 + 3) % 12);
    Ip.row(i) = inputs.row((i * 5 + 3) % 12);
  }
  const ParetoFront b = extract_front(Yp, Ip);
  REQUIRE(a.points.rows() == b.points.rows());
  // Compare as sets of (objective, input) rows.
  for (Eigen::Index i = 0; i < a.points.rows(); ++i) {
    bool found = false;
    for (Eigen::Index j = 0; j < b.points.rows(); ++j)
      if ((a.points.row(i) - b.points.row(j)).cwiseAbs().maxCoeff() == 0.0 &&
          a.inputs(i, 0) == b.inputs(j, 0))
        found = true;
    CHECK(found);
  }
}

TEST_CASE("hypervolume examples") {
  Matrix f1(1, 2);
  f1 << 1, 1;
  CHECK(hypervolume_2d(f1, v2(0, 0)) == doctest::Approx(1.0));
  Matrix f3(3, 2);
  f3 << 3, 1, 1, 3, 2, 2;
  CHECK(hypervolume_2d(f3, v2(0, 0)) == doctest::Approx(6.0));
  Matrix below(2, 2);
  below << -1, 5, 5, -2;  // neither dominates the ref
  CHECK(hypervolume_2d(below, v2(0, 0)) == 0.0);
}

TEST_CASE("hypervolume matches rejection MC") {
  RngStream rng(21);
  for (int rep = 0; rep < 4; ++rep) {
    const Matrix front = oracle::random_front(3 + rep * 2, rng);
    const Vector ref = v2(-0.2, -0.3);
    const double exact = hypervolume_2d(front, ref);
    RngStream mc(100 + rep);
    const double est = oracle::hypervolume_mc(front, ref, 200000, mc);
    CHECK(est == doctest::Approx(exact).epsilon(0.02));
  }
}

TEST_CASE("hypervolume is monotone under non-dominated insertion") {
  RngStream rng(33);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix front = oracle::random_front(5, rng);
    const Vector ref = v2(-0.1, -0.1);
    const double base = hypervolume_2d(front, ref);
    Matrix plus(front.rows() + 1, 2);
    plus.topRows(front.rows()) = front;
    plus.row(front.rows()) << rng.uniform(), rng.uniform();
    CHECK(hypervolume_2d(plus, ref) >= base - 1e-15);
  }
}

TEST_CASE("avd examples") {
  Matrix a(1, 2), b(1, 2);
  a << 0, 0;
  b << 1, 1;
  CHECK(avd(a, a) == 0.0);
  CHECK(avd(a, b) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // F subset of F*: GD term vanishes, result is pure IGD.
  Matrix fs(3, 2);
  fs << 0, 3, 1, 2, 2, 0;
  const Matrix sub = fs.topRows(1);
  const double d = avd(sub, fs);
  double igd = 0.0;
  for (int j = 0; j < 3; ++j)
    igd += (fs.row(j) - sub.row(0)).squaredNorm();
  CHECK(d == doctest::Approx(std::sqrt(igd / 3.0)).epsilon(1e-12));
  CHECK_THROWS(avd(Matrix(0, 2), fs));
}

TEST_CASE("avd is symmetric under swapping the two sets") {
  RngStream rng(55);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix F(4, 2), G(6, 2);
    for (int i = 0; i < 4; ++i) F.row(i) << rng.normal(), rng.normal();
    for (int i = 0; i < 6; ++i) G.row(i) << rng.normal(), rng.normal();
    CHECK(avd(F, G) == doctest::Approx(avd(G, F)).epsilon(1e-12));
  }
}

TEST_CASE("objective scaling") {
  Matrix ref(3, 2);
  ref << 0, 10, 5, 30, 10, 20;
  const Matrix scaled = scale_objectives(ref, ref);
  CHECK(scaled.col(0).minCoeff() == doctest::Approx(0.0));
  CHECK(scaled.col(0).maxCoeff() == doctest::Approx(1.0));
  CHECK(scaled.col(1).minCoeff() == doctest::Approx(0.0));
  CHECK(scaled.col(1).maxCoeff() == doctest::Approx(1.0));
  // Applying the map again to the already-scaled reference changes nothing.
  const Matrix twice = scale_objectives(scaled, scaled);
  CHECK((twice - scaled).cwiseAbs().maxCoeff() < 1e-12);
  // Outside points map outside, no clipping.
  Matrix out(1, 2);
  out << -5, 40;
  const Matrix mapped = scale_objectives(out, ref);
  CHECK(mapped(0, 0) < 0.0);
  CHECK(mapped(0, 1) > 1.0);
  // Zero range errors.
  Matrix flat(2, 2);
  flat << 1, 2, 1, 3;
  CHECK_THROWS(scale_objectives(flat, flat));
}

#include <catch2/catch_amalgamated.hpp>

#include "hx/matrix.hpp"
#include "hx/rational.hpp"

using hx::Mat;
using hx::Rational;
using hx::Scalar;

TEST_CASE("rational arithmetic is exact and normalized") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, -2) == Rational(-1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(7, 3).str() == "7/3");
  CHECK(Rational(-7).str() == "-7");
  CHECK_THROWS_AS(Rational(1, 0), hx::Error);
}

TEST_CASE("gaussian rationals conjugate and print canonically") {
  Scalar z(Rational(1, 2), Rational(-3, 4));
  CHECK(z.conj() == Scalar(Rational(1, 2), Rational(3, 4)));
  CHECK((z * z.conj()).is_real());
  CHECK(z.norm2() == Rational(13, 16));
  CHECK(z.str() == "1/2-3/4*i");
  CHECK(Scalar(Rational(1, 2), Rational(3, 4)).str() == "1/2+3/4*i");
  CHECK(Scalar::i() * Scalar::i() == Scalar(-1));
  CHECK((Scalar(1) / Scalar::i()) == Scalar(Rational(0), Rational(-1)));
}

TEST_CASE("matrix elimination, kernel and solve are exact") {
  Mat m(2, 3);
  m(0, 0) = Scalar(1);
  m(0, 1) = Scalar(2);
  m(0, 2) = Scalar(3);
  m(1, 0) = Scalar(2);
  m(1, 1) = Scalar(4);
  m(1, 2) = Scalar(6);
  CHECK(hx::rank(m) == 1);
  auto ker = hx::kernel_basis(m);
  REQUIRE(ker.size() == 2);
  for (const auto& v : ker) {
    Scalar acc(0);
    for (int j = 0; j < 3; ++j) acc += m(0, j) * v[size_t(j)];
    CHECK(acc.is_zero());
  }

  Mat a = Mat::identity(2);
  a(0, 1) = Scalar::i();
  auto sol = hx::solve(a, {Scalar(1), Scalar(2)});
  REQUIRE(sol.has_value());
  CHECK((*sol)[0] == Scalar(1) - Scalar(2) * Scalar::i());
  CHECK((*sol)[1] == Scalar(2));
}

TEST_CASE("exact LDL* certifies positive semidefiniteness") {
  Mat a(2, 2);
  a(0, 0) = Scalar(2);
  a(0, 1) = Scalar::i();
  a(1, 0) = -Scalar::i();
  a(1, 1) = Scalar(1);
  CHECK(hx::ldl_psd(a).has_value());  // eigenvalues (3±sqrt(5))/2 > 0

  Mat b = Mat::identity(2);
  b(1, 1) = Scalar(-1);
  CHECK_FALSE(hx::ldl_psd(b).has_value());

  // rank-deficient PSD: x x* for x = (1, i)^T
  Mat c(2, 2);
  c(0, 0) = Scalar(1);
  c(0, 1) = -Scalar::i();
  c(1, 0) = Scalar::i();
  c(1, 1) = Scalar(1);
  auto diag = hx::ldl_psd(c);
  REQUIRE(diag.has_value());
  CHECK((*diag)[1] == Rational(0));

  // not PSD despite zero handled pivots: zero diagonal with nonzero row
  Mat d(2, 2);
  d(0, 1) = Scalar(1);
  d(1, 0) = Scalar(1);
  CHECK_FALSE(hx::ldl_psd(d).has_value());
}

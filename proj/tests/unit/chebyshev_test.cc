#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "dnflearn/audit_suite.hpp"
#include "dnflearn/chebyshev.hpp"
#include "dnflearn/errors.hpp"

using namespace dnflearn;
using Rational = boost::multiprecision::cpp_rational;

namespace {

Rational cheb_value(int d, const Rational& t) {
  if (d == 0) return 1;
  Rational a = 1, b = t;
  for (int i = 2; i <= d; ++i) {
    Rational c = 2 * t * b - a;
    a = b;
    b = c;
  }
  return b;
}

// Normalized approximator value at S, evaluated on Boost rationals.
Rational reference_q(int k, int s) {
  const int two_k = 2 * k;
  const int d = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(two_k)) - 1e-12));
  int e = 0;
  while ((1 << e) < two_k) ++e;
  const Rational ratio = cheb_value(d, Rational(s * (two_k + 1), two_k * two_k)) /
                         cheb_value(d, Rational(two_k + 1, two_k));
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= ratio;
  return r;
}

std::string text(const Rational& r) {
  std::ostringstream s;
  s << numerator(r) << '/' << denominator(r);
  return s.str();
}

std::string text(const mpq_class& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

}  // namespace

TEST(Chebyshev, LowDegrees) {
  EXPECT_EQ(chebyshev(0).to_string(), "1");
  EXPECT_EQ(chebyshev(2).to_string(), "2x^2 - 1");
  const IntPoly c3 = chebyshev(3);
  EXPECT_EQ(c3.to_string(), "4x^3 - 3x");
  EXPECT_EQ(c3.abs_coeff_sum(), 7);
  EXPECT_THROW(chebyshev(-1), InputError);
}

TEST(Chebyshev, CoefficientBoundAndValueAtOne) {
  mpz_class three_d = 1;
  for (int d = 0; d <= 40; ++d, three_d *= 3) {
    const IntPoly c = chebyshev(d);
    EXPECT_EQ(c.degree(), d);
    EXPECT_LE(c.abs_coeff_sum(), three_d);
    EXPECT_EQ(c.eval(mpq_class(1)), 1);
  }
}

TEST(Chebyshev, AgreesWithValueRecurrence) {
  for (int d = 0; d <= 12; ++d) {
    for (const auto& [num, den] : {std::pair{1, 3}, std::pair{-5, 7}, std::pair{9, 8}}) {
      EXPECT_EQ(text(chebyshev(d).eval(mpq_class(num, den))), text(cheb_value(d, Rational(num, den))));
    }
  }
}

TEST(Approximator, FrozenValues) {
  EXPECT_EQ(text(ConjunctionApprox(2, 2).value(3)), "9409/73984");
  EXPECT_EQ(text(ConjunctionApprox(4, 2).value(0)), "64/289");
  EXPECT_EQ(text(reference_q(2, 3)), "9409/73984");
  EXPECT_EQ(text(reference_q(2, 0)), "64/289");
}

TEST(Approximator, MatchesReferenceAndBounds) {
  for (int k = 2; k <= 8; ++k) {
    for (int m = 1; m <= 2 * k; ++m) {
      const ConjunctionApprox q(m, k);
      for (int s = 0; s <= 2 * k; ++s) {
        const Rational ref = reference_q(k, s);
        EXPECT_EQ(text(q.value(s)), text(ref)) << "k=" << k << " m=" << m << " S=" << s;
        if (s == 2 * k) {
          EXPECT_EQ(ref, 1);
        } else {
          EXPECT_LE(abs(ref), Rational(1, 2 * k));
        }
      }
    }
  }
}

TEST(Approximator, ByNumberOfSatisfiedLiterals) {
  const ConjunctionApprox q(3, 2);
  EXPECT_EQ(q.value_by_satisfied(3), 1);
  EXPECT_EQ(q.value_by_satisfied(0), q.value(1));
  EXPECT_EQ(ConjunctionApprox(0, 3).value_by_satisfied(0), 1);
}

TEST(Approximator, MultilinearFormReproducesValues) {
  // The multilinear form evaluated at x (sum of the coefficients of the monomials over
  // subsets of x's ones) equals q at x's number of satisfied literals. The first
  // num_pos literal variables are positive.
  const int k = 2, m = 3, num_pos = 2;
  const ConjunctionApprox q(m, k);
  for (int mask = 0; mask < (1 << m); ++mask) {
    mpq_class total = 0;
    for (int sub = mask;; sub = (sub - 1) & mask) {
      int a = 0, b = 0;
      for (int i = 0; i < m; ++i)
        if ((sub >> i) & 1) (i < num_pos ? a : b) += 1;
      total += q.monomial_coefficient(a, b, num_pos);
      if (sub == 0) break;
    }
    int satisfied = 0;
    for (int i = 0; i < m; ++i) {
      const bool xi = (mask >> i) & 1;
      satisfied += (i < num_pos) == xi ? 1 : 0;
    }
    EXPECT_EQ(total, q.value_by_satisfied(satisfied)) << "mask=" << mask;
  }
}

TEST(Approximator, Degree) {
  for (int k = 1; k <= 8; ++k) {
    const ConjunctionApprox q(1, k);
    const int two_k = 2 * k;
    int e = 0;
    while ((1 << e) < two_k) ++e;
    EXPECT_EQ(q.composed_degree(), static_cast<int>(std::ceil(std::sqrt(two_k) - 1e-12)) * e);
  }
}

TEST(AuditSuite, ChebyshevMutationIsCaught) {
  AuditConfig cfg;
  EXPECT_TRUE(suite_chebyshev(cfg).pass());
  // Sign flip in the recurrence: C_d = 2t C_{d-1} + C_{d-2}, so C_d(1) != 1 for d >= 2.
  cfg.chebyshev_gen = [](int d) {
    std::vector<mpz_class> a{1}, b{0, 1};
    if (d == 0) return IntPoly{a};
    for (int i = 2; i <= d; ++i) {
      std::vector<mpz_class> c(static_cast<std::size_t>(i + 1), 0);
      for (std::size_t j = 0; j < b.size(); ++j) c[j + 1] += 2 * b[j];
      for (std::size_t j = 0; j < a.size(); ++j) c[j] += a[j];
      a = b;
      b = c;
    }
    return IntPoly{b};
  };
  const SuiteResult r = suite_chebyshev(cfg);
  EXPECT_FALSE(r.pass());
  ASSERT_FALSE(r.failures.empty());
  EXPECT_NE(r.failures.front().find("d="), std::string::npos);
}

TEST(AuditSuite, ApproximatorSuitePasses) {
  const SuiteResult r = suite_conjunction_approx(AuditConfig{});
  EXPECT_TRUE(r.pass()) << r.to_json();
  EXPECT_GT(r.checked, 800U);
}

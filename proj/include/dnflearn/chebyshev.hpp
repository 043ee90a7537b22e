#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

namespace dnflearn {

// Polynomial with exact integer coefficients; coeffs[i] multiplies t^i.
struct IntPoly {
  std::vector<mpz_class> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  mpz_class abs_coeff_sum() const;
  mpq_class eval(const mpq_class& t) const;
  std::string to_string() const;  // "2x^2 - 1"
};

// First-kind Chebyshev polynomial via C_0 = 1, C_1 = t, C_d = 2t C_{d-1} - C_{d-2}.
IntPoly chebyshev(int d);

// Exact values of the normalized approximator for a conjunction of length m inside a
// k-term formula:
//   q(S) = C_d(S (2k+1) / (2k)^2)^e / C_d(1 + 1/(2k))^e,
// d = ceil(sqrt(2k)), e = ceil(log2(2k)), S = 2k - m + (number of satisfied literals).
class ConjunctionApprox {
 public:
  // 0 <= m <= 2k (m = 0 gives the constant 1).
  ConjunctionApprox(int m, int k);

  int m() const { return m_; }
  int k() const { return k_; }
  int cheb_degree() const { return d_; }
  int exponent() const { return e_; }
  // Degree of the composed polynomial in the underlying variables.
  int composed_degree() const { return cheb_poly_degree_ * e_; }

  // q at S in [0, 2k].
  const mpq_class& value(int s) const { return values_.at(static_cast<std::size_t>(s)); }
  // q as a function of the number of satisfied literals j in [0, m].
  const mpq_class& value_by_satisfied(int j) const { return value(2 * k_ - m_ + j); }

  // Coefficient of prod_{i in V} x_i in the multilinear form of q over the m literal
  // variables, where V takes a of B's positive-literal variables and b of its
  // negative ones. The coefficient depends only on (a, b).
  mpq_class monomial_coefficient(int a, int b, int num_pos) const;

 private:
  int m_, k_, d_, e_;
  int cheb_poly_degree_ = 0;
  std::vector<mpq_class> values_;  // index S = 0..2k
  std::vector<mpq_class> beta_;    // Moebius coefficients of the symmetric form, index 0..m
};

mpz_class binomial(int n, int r);

}  // namespace dnflearn

#include "dnflearn/chebyshev.hpp"

#include "dnflearn/errors.hpp"

namespace dnflearn {

mpz_class IntPoly::abs_coeff_sum() const {
  mpz_class s = 0;
  for (const mpz_class& c : coeffs) s += abs(c);
  return s;
}

mpq_class IntPoly::eval(const mpq_class& t) const {
  mpq_class acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * t + mpq_class(*it);
  }
  acc.canonicalize();
  return acc;
}

std::string IntPoly::to_string() const {
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& c = coeffs[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    mpz_class mag = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (mag != 1 || i == 0) out += mag.get_str();
    if (i >= 1) out += "x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

IntPoly chebyshev(int d) {
  if (d < 0) throw InputError("Chebyshev degree must be nonnegative");
  std::vector<mpz_class> prev{1};      // C_0
  if (d == 0) return {prev};
  std::vector<mpz_class> cur{0, 1};    // C_1
  for (int step = 2; step <= d; ++step) {
    std::vector<mpz_class> next(static_cast<std::size_t>(step + 1), 0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {cur};
}

mpz_class binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r));
  return out;
}

namespace {

int ceil_log2(int x) {
  int e = 0;
  while ((1LL << e) < x) ++e;
  return e;
}

int ceil_sqrt(int x) {
  int r = 0;
  while (r * r < x) ++r;
  return r;
}

mpq_class power(const mpq_class& base, int e) {
  mpq_class out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

ConjunctionApprox::ConjunctionApprox(int m, int k) : m_(m), k_(k) {
  if (k < 1) throw InputError("conjunction approximator needs k >= 1");
  if (m < 0 || m > 2 * k) throw InputError("conjunction length must lie in [0, 2k]");
  const int two_k = 2 * k;
  d_ = ceil_sqrt(two_k);
  e_ = ceil_log2(two_k);
  const IntPoly c = chebyshev(d_);
  cheb_poly_degree_ = c.degree();
  const mpq_class scale(two_k + 1, two_k * two_k);
  const mpq_class denom = power(c.eval(mpq_class(two_k + 1, two_k)), e_);

  values_.reserve(static_cast<std::size_t>(two_k + 1));
  for (int s = 0; s <= two_k; ++s) {
    mpq_class v = power(c.eval(scale * s), e_) / denom;
    v.canonicalize();
    values_.push_back(v);
  }

  // Symmetric multilinear form over the m literal indicators l_1..l_m:
  //   q = sum_J beta_|J| prod_{j in J} l_j,  beta_j = sum_i (-1)^(j-i) C(j,i) g(i),
  // with g(i) = q at i satisfied literals.
  beta_.resize(static_cast<std::size_t>(m + 1));
  for (int j = 0; j <= m; ++j) {
    mpq_class b = 0;
    for (int i = 0; i <= j; ++i) {
      mpq_class term = mpq_class(binomial(j, i)) * value_by_satisfied(i);
      if ((j - i) % 2 == 0) {
        b += term;
      } else {
        b -= term;
      }
    }
    b.canonicalize();
    beta_[static_cast<std::size_t>(j)] = b;
  }
}

mpq_class ConjunctionApprox::monomial_coefficient(int a, int b, int num_pos) const {
  const int num_neg = m_ - num_pos;
  if (a < 0 || b < 0 || a > num_pos || b > num_neg) throw InputError("monomial outside the conjunction");
  // A negative literal's indicator is (1 - x): monomial x_V collects every index set
  // J = V_pos + J_neg with J_neg containing V_neg, each with sign (-1)^|V_neg|.
  mpq_class c = 0;
  const int spare = num_neg - b;
  for (int t = 0; t <= spare; ++t) c += mpq_class(binomial(spare, t)) * beta_[static_cast<std::size_t>(a + b + t)];
  if (b % 2 == 1) c = -c;
  c.canonicalize();
  return c;
}

}  // namespace dnflearn

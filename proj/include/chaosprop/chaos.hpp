#pragma once

// Finite Wiener chaos expansions over the Cameron-Martin basis
// xi_alpha = prod_k H_{alpha_k}(xi_k)/sqrt(alpha_k!), and the three
// operators the propagator theory is built from: Wick product (creation
// algebra), Malliavin derivative (annihilation) and the Skorokhod
// operator (its adjoint).

#include <chaosprop/multiindex.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace chaosprop {

// Probabilists' Hermite polynomial H_n by the three-term recurrence
// H_{n+1}(x) = x H_n(x) - n H_{n-1}(x); stable, agrees with the Rodrigues
// form analytically (checked in tests for n <= 10).
inline double hermite(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite: order must be >= 0");
  if (n == 0) return 1.0;
  double hm = 1.0, h = x;
  for (int m = 1; m < n; ++m) {
    const double hp = x * h - static_cast<double>(m) * hm;
    hm = h;
    h = hp;
  }
  return h;
}

// One draw of independent standard Gaussians xi_1..xi_K.
struct GaussianSample {
  std::vector<double> xi;
  int modes() const { return static_cast<int>(xi.size()); }
};

// Deterministic standard-normal stream: mt19937_64 + explicit Box-Muller,
// so fixed seeds reproduce across standard libraries.
class NormalSampler {
public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = unif_(rng_);
    } while (u1 <= 0.0);
    const double u2 = unif_(rng_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  GaussianSample sample(int K) {
    GaussianSample s;
    s.xi.resize(static_cast<std::size_t>(K));
    for (auto& v : s.xi) v = next();
    return s;
  }

private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// xi_alpha evaluated at a sample.
inline double xi_alpha(const MultiIndex& a, const GaussianSample& s) {
  if (a.max_position() > s.modes())
    throw std::out_of_range("xi_alpha: index support exceeds sample length");
  double r = 1.0;
  for (const auto& [k, v] : a.entries())
    r *= hermite(v, s.xi[static_cast<std::size_t>(k - 1)]) / std::sqrt(static_cast<double>(factorial_u64(v)));
  return r;
}

// Finite chaos expansion sum_alpha c_alpha xi_alpha with coefficients in C
// (scalar, spatial vector, or per-noise-mode family).  Keys are kept inside
// enumerate(N, K); N and K are metadata that operations grow explicitly
// (wick: N_a + N_b, skorokhod: N + 1) -- nothing is silently dropped.
template <class C>
struct ChaosExpansion {
  int N = 0;
  int K = 1;
  std::map<MultiIndex, C, IndexLess> coeff;

  ChaosExpansion() = default;
  ChaosExpansion(int N_, int K_) : N(N_), K(K_) {
    if (N < 0 || K < 1) throw std::invalid_argument("ChaosExpansion: need N >= 0, K >= 1");
  }

  void check_key(const MultiIndex& a) const {
    if (a.order() > N || a.max_position() > K)
      throw std::out_of_range("ChaosExpansion: index " + to_string(a) + " outside truncation (N=" +
                              std::to_string(N) + ", K=" + std::to_string(K) + ")");
  }

  void set(const MultiIndex& a, C c) {
    check_key(a);
    coeff.insert_or_assign(a, std::move(c));
  }

  void add_at(const MultiIndex& a, const C& c) {
    check_key(a);
    auto it = coeff.find(a);
    if (it == coeff.end())
      coeff.emplace(a, c);
    else
      it->second += c;
  }

  const C* find(const MultiIndex& a) const {
    auto it = coeff.find(a);
    return it == coeff.end() ? nullptr : &it->second;
  }

  void scale(double s) {
    for (auto& [a, c] : coeff) c *= s;
  }
};

// Per-noise-mode family, sparse over modes k = 1..K.
template <class C>
using ModeFamily = std::map<int, C>;

// Scalar expansion with a single unit coefficient at alpha (i.e. xi_alpha).
inline ChaosExpansion<double> unit_expansion(const MultiIndex& a, int N = -1, int K = -1) {
  ChaosExpansion<double> e(N < 0 ? a.order() : N, K < 0 ? std::max(1, a.max_position()) : K);
  e.set(a, 1.0);
  return e;
}

// sqrt((alpha+beta)! / (alpha! beta!)) -- the Wick structure constant.
// Exact integer product of per-position binomials up to order 20, log-domain
// beyond.
inline double wick_factor(const MultiIndex& a, const MultiIndex& b) {
  const MultiIndex g = add(a, b);
  if (g.order() <= 20) {
    std::uint64_t prod = 1;
    for (const auto& [k, gv] : g.entries()) prod *= binomial_u64(gv, a.at(k));
    return std::sqrt(static_cast<double>(prod));
  }
  return std::exp(0.5 * (log_factorial(g) - log_factorial(a) - log_factorial(b)));
}

namespace detail {
inline double coeff_prod(double a, double b) { return a * b; }
template <class V>
V coeff_prod(double a, const V& b) {
  V r = b;
  r *= a;
  return r;
}
template <class V>
V coeff_prod(const V& a, double b) {
  V r = a;
  r *= b;
  return r;
}
}  // namespace detail

// Wick product: (a <> b)_gamma = sum_{alpha+beta=gamma} wick_factor * a_alpha b_beta.
// At least one side must be scalar-valued.
template <class A, class B>
auto wick_product(const ChaosExpansion<A>& a, const ChaosExpansion<B>& b) {
  static_assert(std::is_same_v<A, double> || std::is_same_v<B, double>,
                "wick_product: one factor must be scalar-valued");
  using R = std::conditional_t<std::is_same_v<A, double>, B, A>;
  ChaosExpansion<R> out(a.N + b.N, std::max(a.K, b.K));
  for (const auto& [al, ca] : a.coeff)
    for (const auto& [be, cb] : b.coeff) {
      R term = detail::coeff_prod(ca, cb);
      term *= wick_factor(al, be);
      out.add_at(add(al, be), term);
    }
  return out;
}

// Malliavin derivative: (D a)_{alpha,k} = sqrt(alpha_k + 1) a_{alpha+eps_k};
// equivalently D xi_alpha = sum_k sqrt(alpha_k) xi_{alpha-eps_k} in mode k,
// with sqrt(alpha_k) xi_{alpha-eps_k} = 0 when alpha_k = 0 (guarded skip).
template <class C>
ChaosExpansion<ModeFamily<C>> malliavin_derivative(const ChaosExpansion<C>& a) {
  ChaosExpansion<ModeFamily<C>> out(std::max(0, a.N - 1), a.K);
  for (const auto& [al, c] : a.coeff) {
    for (const auto& [k, ak] : al.entries()) {
      const MultiIndex be = sub_eps(al, k);
      C term = c;
      term *= std::sqrt(static_cast<double>(ak));
      auto it = out.coeff.find(be);
      if (it == out.coeff.end()) {
        out.check_key(be);
        it = out.coeff.emplace(be, ModeFamily<C>{}).first;
      }
      auto jt = it->second.find(k);
      if (jt == it->second.end())
        it->second.emplace(k, std::move(term));
      else
        jt->second += term;
    }
  }
  return out;
}

// Skorokhod operator: (delta f)_gamma = sum_k sqrt(gamma_k) f_{k, gamma-eps_k}.
template <class C>
ChaosExpansion<C> skorokhod(const ChaosExpansion<ModeFamily<C>>& f) {
  ChaosExpansion<C> out(f.N + 1, f.K);
  for (const auto& [al, fam] : f.coeff) {
    for (const auto& [k, c] : fam) {
      const MultiIndex g = add(al, MultiIndex::unit(k));
      C term = c;
      term *= std::sqrt(static_cast<double>(g.at(k)));
      out.add_at(g, term);
    }
  }
  return out;
}

// xi_alpha as repeated Wick products over the characteristic set:
// xi_alpha = xi_{k_1} <> ... <> xi_{k_n} / sqrt(alpha!).  Must reproduce the
// unit expansion at alpha.
inline ChaosExpansion<double> xi_from_characteristic_set(const MultiIndex& a) {
  if (a.is_zero()) throw std::domain_error("xi_from_characteristic_set: |alpha| = 0");
  const std::vector<int> ks = characteristic_set(a);
  ChaosExpansion<double> e = unit_expansion(MultiIndex::unit(ks[0]), 1, a.max_position());
  for (std::size_t i = 1; i < ks.size(); ++i)
    e = wick_product(e, unit_expansion(MultiIndex::unit(ks[i]), 1, a.max_position()));
  const double inv_sqrt_fact =
      a.order() <= 20 ? 1.0 / std::sqrt(static_cast<double>(factorial(a))) : std::exp(-0.5 * log_factorial(a));
  e.scale(inv_sqrt_fact);
  return e;
}

}  // namespace chaosprop

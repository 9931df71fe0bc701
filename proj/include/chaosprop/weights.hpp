#pragma once

// Weight systems r_alpha for weighted chaos norms ||u||^2 = sum r_alpha^2
// ||u_alpha||^2, the constructive q_k choice that makes level sums geometric,
// and the Kondratiev-space constant C(l) used by the elliptic bound.

#include <chaosprop/chaos.hpp>
#include <chaosprop/multiindex.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaosprop {

struct WeightSystem {
  enum class Variant { Product, Kondratiev, Propagator, Dirichlet };

  Variant variant = Variant::Kondratiev;
  std::vector<double> q;  // product / propagator, mode k at q[k-1]
  double rho = 0.0;       // kondratiev exponent on alpha!
  double ell = 0.0;       // kondratiev exponent on (2N)^alpha; dirichlet decay exponent
  std::vector<double> c;  // dirichlet operator bounds c_k
  std::string name;

  // r_alpha = q^alpha
  static WeightSystem product(std::vector<double> q, std::string name = "product") {
    for (double v : q)
      if (!(v > 0.0)) throw std::invalid_argument("WeightSystem::product: q_k must be > 0");
    WeightSystem w;
    w.variant = Variant::Product;
    w.q = std::move(q);
    w.name = std::move(name);
    return w;
  }

  // r_alpha^2 = (alpha!)^rho (2N)^{l alpha}, rho <= 0, l <= 0
  static WeightSystem kondratiev(double rho, double ell, std::string name = "kondratiev") {
    if (rho > 0.0 || ell > 0.0) throw std::invalid_argument("WeightSystem::kondratiev: need rho <= 0 and l <= 0");
    WeightSystem w;
    w.variant = Variant::Kondratiev;
    w.rho = rho;
    w.ell = ell;
    w.name = std::move(name);
    return w;
  }

  // r_alpha = q^alpha / sqrt(|alpha|!)
  static WeightSystem propagator(std::vector<double> q, std::string name = "propagator") {
    for (double v : q)
      if (!(v > 0.0)) throw std::invalid_argument("WeightSystem::propagator: q_k must be > 0");
    WeightSystem w;
    w.variant = Variant::Propagator;
    w.q = std::move(q);
    w.name = std::move(name);
    return w;
  }

  // r_alpha^2 = c^{-2 alpha} (|alpha|!)^{-1} (2N)^{-2 l alpha}, l > 1
  static WeightSystem dirichlet(std::vector<double> c, double ell, std::string name = "dirichlet") {
    for (double v : c)
      if (!(v > 0.0)) throw std::invalid_argument("WeightSystem::dirichlet: c_k must be > 0");
    if (!(ell > 1.0)) throw std::invalid_argument("WeightSystem::dirichlet: need l > 1");
    WeightSystem w;
    w.variant = Variant::Dirichlet;
    w.c = std::move(c);
    w.ell = ell;
    w.name = std::move(name);
    return w;
  }
};

namespace detail {
inline double mode_param(const std::vector<double>& v, int k, const char* what) {
  if (k < 1 || static_cast<std::size_t>(k) > v.size())
    throw std::out_of_range(std::string(what) + ": no parameter for mode " + std::to_string(k));
  return v[static_cast<std::size_t>(k - 1)];
}
}  // namespace detail

inline double log_weight(const WeightSystem& ws, const MultiIndex& a) {
  const int n = a.order();
  switch (ws.variant) {
    case WeightSystem::Variant::Product: {
      double s = 0.0;
      for (const auto& [k, v] : a.entries()) s += v * std::log(detail::mode_param(ws.q, k, "product weight"));
      return s;
    }
    case WeightSystem::Variant::Kondratiev:
      return 0.5 * (ws.rho * log_factorial(a) + ws.ell * log_power_2N(a, 1.0));
    case WeightSystem::Variant::Propagator: {
      double s = -0.5 * std::lgamma(static_cast<double>(n) + 1.0);
      for (const auto& [k, v] : a.entries()) s += v * std::log(detail::mode_param(ws.q, k, "propagator weight"));
      return s;
    }
    case WeightSystem::Variant::Dirichlet: {
      double s = -0.5 * std::lgamma(static_cast<double>(n) + 1.0) - ws.ell * log_power_2N(a, 1.0);
      for (const auto& [k, v] : a.entries()) s -= v * std::log(detail::mode_param(ws.c, k, "dirichlet weight"));
      return s;
    }
  }
  throw std::logic_error("log_weight: unknown variant");
}

// r_alpha; direct arithmetic while factorials are exact, log-domain beyond.
inline double weight(const WeightSystem& ws, const MultiIndex& a) {
  const int n = a.order();
  if (n > 20) return std::exp(log_weight(ws, a));
  switch (ws.variant) {
    case WeightSystem::Variant::Product: {
      double r = 1.0;
      for (const auto& [k, v] : a.entries()) r *= std::pow(detail::mode_param(ws.q, k, "product weight"), v);
      return r;
    }
    case WeightSystem::Variant::Kondratiev:
      return std::sqrt(std::pow(static_cast<double>(factorial(a)), ws.rho) * power_2N(a, ws.ell));
    case WeightSystem::Variant::Propagator: {
      double r = 1.0 / std::sqrt(static_cast<double>(factorial_u64(n)));
      for (const auto& [k, v] : a.entries()) r *= std::pow(detail::mode_param(ws.q, k, "propagator weight"), v);
      return r;
    }
    case WeightSystem::Variant::Dirichlet: {
      double r = power_2N(a, -ws.ell) / std::sqrt(static_cast<double>(factorial_u64(n)));
      for (const auto& [k, v] : a.entries()) r /= std::pow(detail::mode_param(ws.c, k, "dirichlet weight"), v);
      return r;
    }
  }
  throw std::logic_error("weight: unknown variant");
}

// Weighted chaos norm sqrt(sum_alpha r_alpha^2 ||u_alpha||^2); accumulation
// follows the canonical (level, lex) map order for reproducibility.
template <class C, class NormFn>
double weighted_norm(const ChaosExpansion<C>& u, const WeightSystem& ws, NormFn&& coeff_norm) {
  double s = 0.0;
  for (const auto& [a, c] : u.coeff) {
    const double r = weight(ws, a);
    const double nc = coeff_norm(c);
    s += r * r * nc * nc;
  }
  return std::sqrt(s);
}

// q_k = sqrt(theta 6/pi^2) / (k C_k), so that sum_k q_k^2 C_k^2
// = theta (6/pi^2) sum_{k<=K} k^{-2} < theta < 1.
inline std::vector<double> choose_q(const std::vector<double>& C, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("choose_q: need theta in (0,1)");
  constexpr double pi = 3.14159265358979323846;
  std::vector<double> q(C.size());
  for (std::size_t i = 0; i < C.size(); ++i) {
    if (!(C[i] > 0.0)) throw std::invalid_argument("choose_q: C_k must be > 0");
    const double k = static_cast<double>(i + 1);
    q[i] = std::sqrt(theta * 6.0 / (pi * pi)) / (k * C[i]);
  }
  return q;
}

// C(l) = sqrt(sum_alpha (|alpha|!/alpha!)^2 (2N)^{(-l-4) alpha}) truncated to
// enumerate(N, K); finite for l > 1 (the (2N)^{2 alpha} from the factorial
// inequality leaves exponent -l-2 < -1, summable).
inline double kondratiev_constant(double ell, int N, int K) {
  if (!(ell > 1.0)) throw std::invalid_argument("kondratiev_constant: need l > 1");
  double s = 0.0;
  for (const auto& a : enumerate(N, K)) {
    const int n = a.order();
    double term;
    if (n <= 20) {
      const double ratio = static_cast<double>(factorial_u64(n)) / static_cast<double>(factorial(a));
      term = ratio * ratio * power_2N(a, -ell - 4.0);
    } else {
      term = std::exp(2.0 * (std::lgamma(static_cast<double>(n) + 1.0) - log_factorial(a)) +
                      log_power_2N(a, -ell - 4.0));
    }
    s += term;
  }
  return std::sqrt(s);
}

}  // namespace chaosprop

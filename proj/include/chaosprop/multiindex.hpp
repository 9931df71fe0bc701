#pragma once

// Multi-index arithmetic for Wiener chaos expansions: sparse multi-indices,
// graded enumeration, characteristic sets, factorials and the combinatorial
// inequality |alpha|! <= alpha! * (2N)^{2 alpha} that the weight theory uses.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chaosprop {

// alpha = (alpha_1, alpha_2, ...) with finitely many nonzero entries, stored
// sparsely as (position k >= 1, value alpha_k >= 1) with positions strictly
// increasing.  The zero multi-index "(0)" has an empty entry list.
class MultiIndex {
public:
  using Entry = std::pair<int, int>;  // (position, value)

  MultiIndex() = default;

  // epsilon_k: single 1 at position k.
  static MultiIndex unit(int k) {
    if (k < 1) throw std::invalid_argument("MultiIndex::unit: position must be >= 1");
    MultiIndex a;
    a.entries_.emplace_back(k, 1);
    return a;
  }

  // From a dense prefix (alpha_1, ..., alpha_K); zeros are dropped.
  static MultiIndex from_dense(const std::vector<int>& dense) {
    MultiIndex a;
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (dense[i] < 0) throw std::invalid_argument("MultiIndex: negative entry");
      if (dense[i] > 0) a.entries_.emplace_back(static_cast<int>(i) + 1, dense[i]);
    }
    return a;
  }

  // From sparse entries; validated and normalized to canonical form.
  static MultiIndex from_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end());
    MultiIndex a;
    for (const auto& [k, v] : entries) {
      if (k < 1) throw std::invalid_argument("MultiIndex: position must be >= 1");
      if (v < 0) throw std::invalid_argument("MultiIndex: negative value");
      if (v == 0) continue;
      if (!a.entries_.empty() && a.entries_.back().first == k)
        throw std::invalid_argument("MultiIndex: duplicate position");
      a.entries_.emplace_back(k, v);
    }
    return a;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  // |alpha| = sum of entries.
  int order() const {
    int n = 0;
    for (const auto& e : entries_) n += e.second;
    return n;
  }

  // alpha_k (0 when k is not stored).
  int at(int k) const {
    for (const auto& e : entries_) {
      if (e.first == k) return e.second;
      if (e.first > k) break;
    }
    return 0;
  }

  // Largest position with alpha_k > 0; 0 for the zero index.
  int max_position() const { return entries_.empty() ? 0 : entries_.back().first; }

  bool operator==(const MultiIndex& o) const { return entries_ == o.entries_; }
  bool operator!=(const MultiIndex& o) const { return !(*this == o); }

private:
  std::vector<Entry> entries_;
};

// Canonical ordering: by level |alpha| first, then lexicographically on the
// dense tuple with larger leading entries first.  This matches the
// enumeration order (0), e1, e2, 2e1, e1+e2, 2e2, ... and makes level-order
// induction a plain forward sweep.
inline bool index_less(const MultiIndex& a, const MultiIndex& b) {
  const int na = a.order(), nb = b.order();
  if (na != nb) return na < nb;
  auto ia = a.entries().begin(), ea = a.entries().end();
  auto ib = b.entries().begin(), eb = b.entries().end();
  while (ia != ea && ib != eb) {
    if (ia->first != ib->first) {
      // The one whose next stored position comes first has the larger value
      // at that position (the other has 0 there), so it sorts first.
      return ia->first < ib->first;
    }
    if (ia->second != ib->second) {
      // Same position, different values: larger value first; if a's value is
      // larger, a sorts first unless a "runs out" earlier -- but with equal
      // levels the larger-here index precedes.
      return ia->second > ib->second;
    }
    ++ia;
    ++ib;
  }
  // Equal prefixes and equal levels imply both exhausted.
  return false;
}

struct IndexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const { return index_less(a, b); }
};

inline MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
  std::vector<MultiIndex::Entry> out;
  auto ia = a.entries().begin(), ea = a.entries().end();
  auto ib = b.entries().begin(), eb = b.entries().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == ea || ib->first < ia->first) {
      out.push_back(*ib++);
    } else {
      out.emplace_back(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return MultiIndex::from_entries(std::move(out));
}

// alpha - epsilon_k; error when alpha_k = 0 (callers implement the paper's
// "sqrt(alpha_k) * xi_{alpha - eps_k} = 0" convention as a guarded skip).
inline MultiIndex sub_eps(const MultiIndex& a, int k) {
  if (a.at(k) == 0) throw std::domain_error("sub_eps: alpha_k is zero at position " + std::to_string(k));
  std::vector<MultiIndex::Entry> out = a.entries();
  for (auto& e : out) {
    if (e.first == k) {
      e.second -= 1;
      break;
    }
  }
  return MultiIndex::from_entries(std::move(out));
}

// n! exactly; valid for n <= 20 (20! < 2^63).
inline std::uint64_t factorial_u64(int n) {
  if (n < 0 || n > 20) throw std::domain_error("factorial_u64: need 0 <= n <= 20");
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

// Binomial coefficient, exact; safe for n <= 40 or so within uint64.
inline std::uint64_t binomial_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // multiply first, the running value is always an exact binomial
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

// alpha! = prod_k alpha_k!, exact; requires |alpha| <= 20 (use log_factorial
// beyond -- weights switch to the log domain there).
inline std::uint64_t factorial(const MultiIndex& a) {
  if (a.order() > 20) throw std::domain_error("factorial: |alpha| > 20, use log_factorial");
  std::uint64_t r = 1;
  for (const auto& [k, v] : a.entries()) {
    (void)k;
    r *= factorial_u64(v);
  }
  return r;
}

inline double log_factorial(const MultiIndex& a) {
  double s = 0.0;
  for (const auto& [k, v] : a.entries()) {
    (void)k;
    s += std::lgamma(static_cast<double>(v) + 1.0);
  }
  return s;
}

inline int order(const MultiIndex& a) { return a.order(); }

// (2N)^{q alpha} = prod_k (2k)^{q alpha_k}.
inline double power_2N(const MultiIndex& a, double q) {
  double r = 1.0;
  for (const auto& [k, v] : a.entries()) r *= std::pow(2.0 * k, q * v);
  return r;
}

inline double log_power_2N(const MultiIndex& a, double q) {
  double s = 0.0;
  for (const auto& [k, v] : a.entries()) s += q * v * std::log(2.0 * k);
  return s;
}

// Every alpha with |alpha| <= N and support in {1..K}, ordered canonically;
// count is binomial(N+K, K).
inline std::vector<MultiIndex> enumerate(int N, int K) {
  if (N < 0) throw std::invalid_argument("enumerate: N must be >= 0");
  if (K < 1) throw std::invalid_argument("enumerate: K must be >= 1");
  std::vector<MultiIndex> out;
  std::vector<int> dense(static_cast<std::size_t>(K), 0);
  // Descending-first composition of each level n matches index_less.
  auto fill = [&](auto&& self, int pos, int rem) -> void {
    if (pos == K) {
      if (rem == 0) out.push_back(MultiIndex::from_dense(dense));
      return;
    }
    for (int v = rem; v >= 0; --v) {
      dense[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, rem - v);
    }
    dense[static_cast<std::size_t>(pos)] = 0;
  };
  for (int n = 0; n <= N; ++n) fill(fill, 0, n);
  return out;
}

// Characteristic set K_alpha: the non-decreasing |alpha|-tuple listing each
// position k exactly alpha_k times, e.g. (1,0,2,0,0,1,0,3) -> {1,3,3,6,8,8,8}.
inline std::vector<int> characteristic_set(const MultiIndex& a) {
  if (a.is_zero()) throw std::domain_error("characteristic_set: |alpha| = 0");
  std::vector<int> ks;
  ks.reserve(static_cast<std::size_t>(a.order()));
  for (const auto& [k, v] : a.entries())
    for (int i = 0; i < v; ++i) ks.push_back(k);
  return ks;
}

inline MultiIndex from_characteristic_set(const std::vector<int>& ks) {
  std::vector<MultiIndex::Entry> entries;
  for (int k : ks) {
    if (!entries.empty() && entries.back().first == k)
      entries.back().second += 1;
    else
      entries.emplace_back(k, 1);
  }
  // from_entries validates ordering (input must be non-decreasing).
  return MultiIndex::from_entries(std::move(entries));
}

// |alpha|! <= alpha! * (2N)^{2 alpha}.  Exact integer arithmetic (with
// 128-bit accumulation and overflow saturation) for |alpha| <= 20; the log
// domain with a small slack beyond that.
inline bool check_factorial_inequality(const MultiIndex& a) {
  const int n = a.order();
  if (n <= 20) {
    const std::uint64_t lhs = factorial_u64(n);
    // rhs starts at alpha! <= |alpha|! and only grows (each factor 2k >= 2),
    // so we can stop as soon as it passes lhs; values stay far below 2^128.
    unsigned __int128 rhs = factorial(a);
    for (const auto& [k, v] : a.entries()) {
      for (int i = 0; i < 2 * v; ++i) {
        rhs *= static_cast<unsigned>(2 * k);
        if (rhs > static_cast<unsigned __int128>(lhs)) return true;
      }
    }
    return static_cast<unsigned __int128>(lhs) <= rhs;
  }
  const double lhs = std::lgamma(static_cast<double>(n) + 1.0);
  const double rhs = log_factorial(a) + log_power_2N(a, 2.0);
  return lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs));
}

// Textual form used in CSV/JSON: "k1^a1 k2^a2 ..." or "(0)" for zero.
inline std::string to_string(const MultiIndex& a) {
  if (a.is_zero()) return "(0)";
  std::string s;
  for (const auto& [k, v] : a.entries()) {
    if (!s.empty()) s += ' ';
    s += std::to_string(k) + "^" + std::to_string(v);
  }
  return s;
}

inline MultiIndex parse_multiindex(const std::string& text) {
  if (text == "(0)") return MultiIndex();
  std::vector<MultiIndex::Entry> entries;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size()) break;
    std::size_t caret = text.find('^', pos);
    if (caret == std::string::npos) throw std::invalid_argument("parse_multiindex: missing '^' in \"" + text + "\"");
    std::size_t end = text.find(' ', caret);
    if (end == std::string::npos) end = text.size();
    const int k = std::stoi(text.substr(pos, caret - pos));
    const int v = std::stoi(text.substr(caret + 1, end - caret - 1));
    entries.emplace_back(k, v);
    pos = end;
  }
  if (entries.empty()) throw std::invalid_argument("parse_multiindex: empty text");
  return MultiIndex::from_entries(std::move(entries));
}

}  // namespace chaosprop

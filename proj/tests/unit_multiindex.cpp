#include <doctest.h>

#include <chaosprop/multiindex.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

using namespace chaosprop;

TEST_SUITE_BEGIN("multiindex");

TEST_CASE("canonical form and basic queries") {
  MultiIndex zero;
  CHECK(zero.is_zero());
  CHECK(zero.order() == 0);
  CHECK(zero.max_position() == 0);

  // (1,0,2,0,0,1,0,3): |alpha| = 7
  MultiIndex a = MultiIndex::from_dense({1, 0, 2, 0, 0, 1, 0, 3});
  CHECK(a.order() == 7);
  CHECK(a.at(3) == 2);
  CHECK(a.at(4) == 0);
  CHECK(a.max_position() == 8);
  CHECK(a == MultiIndex::from_entries({{8, 3}, {1, 1}, {6, 1}, {3, 2}}));

  CHECK_THROWS(MultiIndex::from_dense({1, -1}));
  CHECK_THROWS(MultiIndex::from_entries({{0, 1}}));
  CHECK_THROWS(MultiIndex::from_entries({{2, 1}, {2, 1}}));
}

TEST_CASE("enumerate order and counts") {
  // N=0: only the zero index.
  auto e0 = enumerate(0, 5);
  REQUIRE(e0.size() == 1);
  CHECK(e0[0].is_zero());

  // N=2, K=2: (0), e1, e2, 2e1, e1+e2, 2e2 in that order.
  auto e22 = enumerate(2, 2);
  REQUIRE(e22.size() == 6);
  CHECK(e22[0].is_zero());
  CHECK(e22[1] == MultiIndex::unit(1));
  CHECK(e22[2] == MultiIndex::unit(2));
  CHECK(e22[3] == MultiIndex::from_dense({2, 0}));
  CHECK(e22[4] == MultiIndex::from_dense({1, 1}));
  CHECK(e22[5] == MultiIndex::from_dense({0, 2}));

  CHECK(enumerate(3, 3).size() == 20);  // binomial(6,3)
  CHECK(enumerate(8, 8).size() == 12870);  // binomial(16,8)

  // Output is strictly increasing in the canonical order (level, then lex
  // with larger leading entries first).
  auto e = enumerate(4, 3);
  for (std::size_t i = 1; i < e.size(); ++i) {
    CHECK(index_less(e[i - 1], e[i]));
    CHECK(!index_less(e[i], e[i - 1]));
  }

  CHECK_THROWS(enumerate(-1, 2));
  CHECK_THROWS(enumerate(2, 0));
}

TEST_CASE("characteristic set and round trip") {
  MultiIndex a = MultiIndex::from_dense({1, 0, 2, 0, 0, 1, 0, 3});
  std::vector<int> expected{1, 3, 3, 6, 8, 8, 8};
  CHECK(characteristic_set(a) == expected);
  CHECK(characteristic_set(MultiIndex::unit(5)) == std::vector<int>{5});
  CHECK(characteristic_set(MultiIndex::from_dense({0, 2})) == std::vector<int>{2, 2});
  CHECK_THROWS(characteristic_set(MultiIndex()));

  for (const auto& idx : enumerate(5, 4)) {
    if (idx.is_zero()) continue;
    CHECK(from_characteristic_set(characteristic_set(idx)) == idx);
  }
}

TEST_CASE("factorial, order, add, sub_eps, power_2N") {
  CHECK(factorial(MultiIndex::from_dense({1, 3, 2})) == 12);
  CHECK(factorial(MultiIndex()) == 1);
  CHECK(order(MultiIndex::from_dense({1, 0, 2, 0, 0, 1, 0, 3})) == 7);
  CHECK(power_2N(MultiIndex::unit(2), 2.0) == doctest::Approx(16.0));
  CHECK(power_2N(MultiIndex(), -3.0) == doctest::Approx(1.0));

  MultiIndex s = add(MultiIndex::from_dense({1, 2}), MultiIndex::from_dense({0, 1, 4}));
  CHECK(s == MultiIndex::from_dense({1, 3, 4}));

  CHECK(sub_eps(s, 2) == MultiIndex::from_dense({1, 2, 4}));
  CHECK(sub_eps(MultiIndex::unit(3), 3).is_zero());
  CHECK_THROWS(sub_eps(s, 5));

  // log variants agree with the exact ones on small indices
  MultiIndex a = MultiIndex::from_dense({2, 0, 3, 1});
  CHECK(log_factorial(a) == doctest::Approx(std::log(static_cast<double>(factorial(a)))).epsilon(1e-13));
  CHECK(log_power_2N(a, -2.5) == doctest::Approx(std::log(power_2N(a, -2.5))).epsilon(1e-13));
}

TEST_CASE("factorial inequality |alpha|! <= alpha! (2N)^{2 alpha}") {
  // Hand-checked examples)
  CHECK(check_factorial_inequality(MultiIndex::from_dense({1, 1})));  // 2 <= 64
  CHECK(check_factorial_inequality(MultiIndex()));                    // 1 <= 1 (equality)
  CHECK(check_factorial_inequality(MultiIndex::from_dense({3})));     // 6 <= 384

  // Exhaustive over enumerate(8,8), 12870 indices.
  for (const auto& a : enumerate(8, 8)) CHECK(check_factorial_inequality(a));

  // A large-order index exercises the log-domain path.
  std::vector<int> dense(6, 4);  // |alpha| = 24
  CHECK(check_factorial_inequality(MultiIndex::from_dense(dense)));
}

TEST_CASE("multinomial identity") {
  // (x1+...+xK)^n = sum_{|alpha|=n} n!/alpha! * x^alpha, n <= 8
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(0.1, 1.5);
  const int K = 4;
  std::vector<double> x(K);
  for (auto& v : x) v = unif(rng);
  double sx = 0.0;
  for (double v : x) sx += v;
  for (int n = 1; n <= 8; ++n) {
    double lhs = std::pow(sx, n);
    double rhs = 0.0;
    for (const auto& a : enumerate(n, K)) {
      if (a.order() != n) continue;
      double term = static_cast<double>(factorial_u64(n)) / static_cast<double>(factorial(a));
      for (const auto& [k, v] : a.entries()) term *= std::pow(x[static_cast<std::size_t>(k - 1)], v);
      rhs += term;
    }
    CHECK(rhs == doctest::Approx(lhs).epsilon(1e-12));
  }
}

TEST_CASE("partial sums of sum (2N)^{q alpha}: monotone, bounded for q=-1.1") {
  const double q = -1.1;
  // closed-form bound for the full series restricted to modes <= K:
  // prod_{k<=K} 1/(1-(2k)^q)
  auto series = [&](int N, int K) {
    double s = 0.0;
    for (const auto& a : enumerate(N, K)) s += power_2N(a, q);
    return s;
  };
  double prev = 0.0;
  for (int N = 1; N <= 8; ++N) {
    double cur = series(N, 6);
    CHECK(cur > prev);
    prev = cur;
  }
  for (int K = 1; K <= 6; ++K) {
    double bound = 1.0;
    for (int k = 1; k <= K; ++k) bound /= (1.0 - std::pow(2.0 * k, q));
    CHECK(series(8, K) < bound);
    CHECK(series(8, K) > series(7, K));
  }
}

TEST_CASE("textual form round trip") {
  CHECK(to_string(MultiIndex()) == "(0)");
  MultiIndex a = MultiIndex::from_dense({1, 0, 2, 0, 0, 1, 0, 3});
  CHECK(to_string(a) == "1^1 3^2 6^1 8^3");
  CHECK(parse_multiindex("1^1 3^2 6^1 8^3") == a);
  CHECK(parse_multiindex("(0)").is_zero());
  for (const auto& idx : enumerate(4, 5)) CHECK(parse_multiindex(to_string(idx)) == idx);
  CHECK_THROWS(parse_multiindex("1:2"));
  CHECK_THROWS(parse_multiindex(""));
}

TEST_SUITE_END();

#include <catch2/catch_amalgamated.hpp>

#include "npd/support.hpp"
#include "oracles.hpp"

using namespace npd;

TEST_CASE("index sets") {
  CHECK(index_set(5) == std::vector<int>{7, 8, 9, 10});
  CHECK(index_set(1) == std::vector<int>{1});
  CHECK(index_set(6) == std::vector<int>{11, 12});
}

TEST_CASE("period_set fills closure and support") {
  const PeriodSet t1 = period_set({3, 5});
  CHECK(t1.divisor_closure == std::vector<int>{1, 3, 5});
  CHECK(t1.support == std::vector<int>{1, 3, 4, 7, 8, 9, 10});

  const PeriodSet t2 = period_set({3, 4});
  CHECK(t2.divisor_closure == std::vector<int>{1, 2, 3, 4});
  CHECK(t2.support == std::vector<int>{1, 2, 3, 4, 5, 6});

  CHECK_THROWS_AS(period_set({2, 4}), DivisibilityViolation);
  CHECK_THROWS_AS(period_set({}), DivisibilityViolation);
}

TEST_CASE("support cardinality identity") {
  std::size_t total = 0;
  for (int q : period_set({3, 5}).divisor_closure) total += index_set(q).size();
  CHECK(period_set({3, 5}).support.size() == total);
}

TEST_CASE("single period supports") {
  CHECK(single_period_support(4) == std::vector<int>{1, 2, 5, 6});
  CHECK(single_period_support(1) == std::vector<int>{1});
  CHECK(single_period_support(6) == std::vector<int>{1, 2, 3, 4, 11, 12});
  // |S_p| = p, forced by the totient-divisor identity
  for (int p = 1; p <= 100; ++p) {
    CHECK(single_period_support(p).size() == static_cast<std::size_t>(p));
  }
}

TEST_CASE("index sets tile 1..N") {
  const int p_max = 24;
  std::vector<int> seen;
  for (int p = 1; p <= p_max; ++p) {
    for (int i : index_set(p)) seen.push_back(i);
  }
  std::int64_t n = 0;
  for (int p = 1; p <= p_max; ++p) n += totient(p);
  REQUIRE(static_cast<std::int64_t>(seen.size()) == n);
  std::sort(seen.begin(), seen.end());
  for (std::int64_t i = 0; i < n; ++i) CHECK(seen[static_cast<std::size_t>(i)] == i + 1);
}

TEST_CASE("coprime pairs share only the divisor 1") {
  for (int a = 2; a <= 30; ++a) {
    for (int b = a + 1; b <= 30; ++b) {
      if (gcd(a, b) != 1) continue;
      const PeriodSet t = period_set({a, b});
      const auto sa = single_period_support(a);
      const auto sb = single_period_support(b);
      CHECK(t.support.size() == sa.size() + sb.size() - 1);
    }
  }
}

TEST_CASE("enumerate_Qkm matches the exhaustive oracle") {
  const auto got = enumerate_Qkm(5, 2, 100);
  const auto ref = oracle::qkm(5, 2, 100);
  REQUIRE(got.size() == 5);
  REQUIRE(got.size() == ref.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].periods == ref[i]);

  const auto capped = enumerate_Qkm(5, 2, 5);
  REQUIRE(capped.size() == 1);
  CHECK(capped[0].periods == std::vector<int>{2, 3});
  CHECK(capped[0].support.size() == 4);

  for (int k : {6, 10, 14}) {
    const auto a = enumerate_Qkm(12, 2, k);
    const auto b = oracle::qkm(12, 2, k);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].periods == b[i]);
  }
}

TEST_CASE("Qkm singletons") {
  const auto sets = enumerate_Qkm(100, 1, 10);
  REQUIRE(sets.size() == 10);
  for (int p = 1; p <= 10; ++p) CHECK(sets[static_cast<std::size_t>(p - 1)].periods == std::vector<int>{p});
  // exactly min(p, k) singletons qualify
  CHECK(enumerate_Qkm(7, 1, 100).size() == 7);
  CHECK(enumerate_Qkm(100, 1, 7).size() == 7);
}

TEST_CASE("printable form") {
  CHECK(period_set({3, 5}).to_string() == "{3,5}|D={1,3,5}|S={1,3,4,7,8,9,10}");
}

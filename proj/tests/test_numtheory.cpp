#include <catch2/catch_amalgamated.hpp>

#include "npd/numtheory.hpp"
#include "oracles.hpp"

using namespace npd;

TEST_CASE("gcd basics") {
  CHECK(gcd(12, 8) == 4);
  CHECK(gcd(7, 1) == 1);
  CHECK(gcd(5, 5) == 5);
}

TEST_CASE("totient values") {
  CHECK(totient(5) == 4);
  CHECK(totient(1) == 1);
  CHECK(totient(12) == 4);  // coprimes 1, 5, 7, 11
  for (long p = 1; p <= 120; ++p) CHECK(totient(p) == oracle::totient(p));
}

TEST_CASE("divisors") {
  CHECK(divisors(12) == std::vector<std::int64_t>{1, 2, 3, 4, 6, 12});
  CHECK(divisors(1) == std::vector<std::int64_t>{1});
  CHECK(divisors(20) == std::vector<std::int64_t>{1, 2, 4, 5, 10, 20});
  for (long p = 1; p <= 60; ++p) {
    const auto d = divisors(p);
    const auto ref = oracle::divisors(p);
    REQUIRE(d.size() == ref.size());
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == ref[i]);
  }
}

TEST_CASE("ramanujan sum cycles match the known sequences") {
  const std::vector<std::vector<std::int64_t>> cycles = {
      {1}, {1, -1}, {2, -1, -1}, {2, 0, -2, 0}, {4, -1, -1, -1, -1}};
  for (std::size_t q = 1; q <= cycles.size(); ++q) {
    for (std::size_t n = 0; n < q; ++n) {
      CHECK(ramanujan_sum(static_cast<std::int64_t>(q), static_cast<std::int64_t>(n)) ==
            cycles[q - 1][n]);
    }
  }
  for (int n = 0; n < 9; ++n) CHECK(ramanujan_sum(1, n) == 1);
}

TEST_CASE("ramanujan sum is q-periodic in n") {
  for (int q = 1; q <= 50; ++q) {
    for (int n = 0; n <= 500; n += 7) {
      CHECK(ramanujan_sum(q, n) == ramanujan_sum(q, n % q));
    }
  }
}

TEST_CASE("ramanujan sum at n=0 equals the totient") {
  for (int q = 1; q <= 50; ++q) CHECK(ramanujan_sum(q, 0) == totient(q));
}

TEST_CASE("trigonometric sum rounds cleanly") {
  for (int q = 1; q <= 200; ++q) {
    for (int n = 0; n < q; ++n) {
      CHECK(ramanujan_sum_rounding_error(q, n) < 1e-6);
    }
  }
}

TEST_CASE("totients of divisors sum to p") {
  for (std::int64_t p = 1; p <= 200; ++p) {
    std::int64_t sum = 0;
    for (std::int64_t q : divisors(p)) sum += totient(q);
    CHECK(sum == p);
  }
}

TEST_CASE("lcm of sets") {
  CHECK(lcm_of_set(std::vector<std::int64_t>{3, 4}) == 12);
  CHECK(lcm_of_set(std::vector<std::int64_t>{5}) == 5);
  CHECK(lcm_of_set(std::vector<std::int64_t>{3, 5}) == 15);
}

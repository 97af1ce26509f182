#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "npd/errors.hpp"
#include "npd/numtheory.hpp"

namespace npd {

/// Atom indices are 1-based throughout, matching the usual dictionary
/// indexing convention (column 1 is the all-ones atom).

/// I_p: the phi(p) consecutive column indices of the period-p block.
inline std::vector<int> index_set(int p) {
  std::int64_t start = 0;
  for (int j = 1; j < p; ++j) start += totient(j);
  std::vector<int> out;
  const std::int64_t phi = totient(p);
  out.reserve(static_cast<std::size_t>(phi));
  for (std::int64_t i = 1; i <= phi; ++i) out.push_back(static_cast<int>(start + i));
  return out;
}

/// S_p: union of I_q over all divisors q of p. |S_p| = sum_{q|p} phi(q) = p.
inline std::vector<int> single_period_support(int p) {
  std::set<int> s;
  for (std::int64_t q : divisors(p)) {
    for (int i : index_set(static_cast<int>(q))) s.insert(i);
  }
  return {s.begin(), s.end()};
}

/// A set T of hidden periods together with its divisor closure D_T and the
/// dictionary support S_T it induces.
struct PeriodSet {
  std::vector<int> periods;          // sorted, pairwise non-divisible
  std::vector<int> divisor_closure;  // sorted union of divisors
  std::vector<int> support;          // sorted union of I_q, q in closure (1-based)

  std::string to_string() const {
    auto join = [](const std::vector<int>& v) {
      std::ostringstream os;
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
      return os.str();
    };
    return "{" + join(periods) + "}|D={" + join(divisor_closure) + "}|S={" + join(support) + "}";
  }
};

inline PeriodSet period_set(std::vector<int> periods) {
  if (periods.empty()) throw DivisibilityViolation("period_set: empty period set");
  std::sort(periods.begin(), periods.end());
  for (std::size_t i = 0; i < periods.size(); ++i) {
    for (std::size_t j = i + 1; j < periods.size(); ++j) {
      if (periods[i] == periods[j] || periods[j] % periods[i] == 0) {
        throw DivisibilityViolation("period_set: " + std::to_string(periods[i]) +
                                    " divides " + std::to_string(periods[j]));
      }
    }
  }
  std::set<int> closure;
  for (int p : periods) {
    for (std::int64_t q : divisors(p)) closure.insert(static_cast<int>(q));
  }
  std::set<int> support;
  for (int q : closure) {
    for (int i : index_set(q)) support.insert(i);
  }
  PeriodSet out;
  out.periods = std::move(periods);
  out.divisor_closure.assign(closure.begin(), closure.end());
  out.support.assign(support.begin(), support.end());
  return out;
}

/// Q_k(m): all size-m subsets of {1..p_max} that are pairwise non-divisible
/// and whose support has at most k atoms, in lexicographic order.
inline std::vector<PeriodSet> enumerate_Qkm(int p_max, int m, int k) {
  std::vector<PeriodSet> out;
  std::vector<int> chosen;
  // Adding a period only grows the divisor closure, so a partial set whose
  // support already exceeds k cannot be completed.
  auto support_size = [](const std::vector<int>& ps) {
    std::set<int> closure;
    for (int p : ps) {
      for (std::int64_t q : divisors(p)) closure.insert(static_cast<int>(q));
    }
    std::int64_t n = 0;
    for (int q : closure) n += totient(q);
    return n;
  };
  auto rec = [&](auto&& self, int next) -> void {
    if (static_cast<int>(chosen.size()) == m) {
      out.push_back(period_set(chosen));
      return;
    }
    for (int p = next; p <= p_max; ++p) {
      bool ok = true;
      for (int q : chosen) {
        if (p % q == 0 || q % p == 0) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen.push_back(p);
      if (support_size(chosen) <= k) self(self, p + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

}  // namespace npd

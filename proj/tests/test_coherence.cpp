#include <catch2/catch_amalgamated.hpp>

#include "npd/coherence.hpp"
#include "npd/dictionary.hpp"
#include "oracles.hpp"

using namespace npd;
using Catch::Matchers::WithinAbs;

namespace {

NpdDictionary orthonormal_test_dictionary(int n) {
  // identity-like: p_max=1 would give one column, so fabricate labels directly
  NpdDictionary d;
  d.family = DictionaryFamily::Rpt;
  d.L = n;
  d.p_max = 1;
  d.normalized = true;
  d.entries = Eigen::MatrixXcd::Identity(n, n);
  d.atom_period.assign(static_cast<std::size_t>(n), 1);
  return d;
}

}  // namespace

TEST_CASE("analyzer requires normalization") {
  const auto d = build_npd(DictionaryFamily::Rpt, 6, 8, false);
  CHECK_THROWS_AS(CoherenceAnalyzer(d), NotNormalized);
}

TEST_CASE("mutual coherence") {
  CHECK(CoherenceAnalyzer(orthonormal_test_dictionary(6)).mutual_coherence() == 0.0);

  // columns [1,1,1,1]/2 and [1,-1,1,-1]/2 are orthogonal
  const auto d2 = build_npd(DictionaryFamily::Rpt, 2, 4, true);
  CHECK_THAT(CoherenceAnalyzer(d2).mutual_coherence(), WithinAbs(0.0, 1e-14));

  const auto d = build_npd(DictionaryFamily::Rpt, 6, 8, true);
  const CoherenceAnalyzer an(d);
  CHECK_THAT(an.mutual_coherence(), WithinAbs(oracle::mutual_coherence(oracle::gram_magnitudes(d.entries)), 1e-12));
}

TEST_CASE("gram magnitudes equal the entrywise oracle") {
  for (auto family : {DictionaryFamily::Rpt, DictionaryFamily::Farey}) {
    const auto d = build_npd(family, 6, 8, true);
    const CoherenceAnalyzer an(d);
    CHECK((an.magnitudes() - oracle::gram_magnitudes(d.entries)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("cumulative coherence") {
  const auto d = build_npd(DictionaryFamily::Rpt, 6, 8, true);
  const CoherenceAnalyzer an(d);
  const auto g = oracle::gram_magnitudes(d.entries);

  CHECK_THAT(an.cumulative_coherence(1), WithinAbs(an.mutual_coherence(), 1e-14));
  CHECK(an.cumulative_coherence(0) == 0.0);
  for (int k = 1; k <= 3; ++k) {
    CHECK_THAT(an.cumulative_coherence(k), WithinAbs(oracle::mu1_exhaustive(g, k), 1e-12));
  }
  // nondecreasing in k
  for (int k = 1; k < 11; ++k) {
    CHECK(an.cumulative_coherence(k) <= an.cumulative_coherence(k + 1) + 1e-15);
  }
  CHECK_THROWS_AS(an.cumulative_coherence(12), KTooLarge);

  const CoherenceAnalyzer ortho(orthonormal_test_dictionary(6));
  for (int k = 1; k <= 5; ++k) CHECK(ortho.cumulative_coherence(k) == 0.0);
}

TEST_CASE("npi and npa match exhaustive enumeration") {
  for (auto family : {DictionaryFamily::Rpt, DictionaryFamily::Farey}) {
    const auto d = build_npd(family, 6, 8, true);
    const CoherenceAnalyzer an(d);
    const auto g = oracle::gram_magnitudes(d.entries);
    for (int m : {1, 2}) {
      for (int k : {4, 5, 6}) {
        const auto sets = oracle::qkm(6, m, k);
        if (sets.empty()) continue;
        double zeta = 0.0, nu = 0.0;
        for (const auto& t : sets) {
          const auto s = oracle::support_of(t);
          zeta = std::max(zeta, oracle::inter_sum(g, s));
          nu = std::max(nu, oracle::intra_sum(g, s));
        }
        CHECK_THAT(an.npi(k, m), WithinAbs(zeta, 1e-10));
        CHECK_THAT(an.npa(k, m), WithinAbs(nu, 1e-10));
      }
    }
  }
}

TEST_CASE("npi/npa edge cases") {
  const auto d = build_npd(DictionaryFamily::Rpt, 6, 8, true);
  const CoherenceAnalyzer an(d);
  // k=1, m=1: only T={1}; intra sum over a single atom is empty
  CHECK(an.npa(1, 1) == 0.0);
  double zeta = 0.0;
  for (int i = 2; i <= d.atoms(); ++i) zeta = std::max(zeta, an.magnitudes()(i - 1, 0));
  CHECK_THAT(an.npi(1, 1), WithinAbs(zeta, 1e-14));
  CHECK_THROWS_AS(an.npi(3, 2), EmptyQkm);  // no pair has support <= 3
}

TEST_CASE("restricted coherence") {
  const auto d = build_npd(DictionaryFamily::Rpt, 6, 8, true);
  const CoherenceAnalyzer an(d);
  const auto g = oracle::gram_magnitudes(d.entries);

  CHECK(an.restricted_intra(1) == 0.0);
  for (int p = 1; p <= 6; ++p) {
    CHECK_THAT(an.restricted_inter(p), WithinAbs(oracle::inter_sum(g, oracle::support_of({p})), 1e-12));
    CHECK_THAT(an.restricted_intra(p), WithinAbs(oracle::intra_sum(g, oracle::support_of({p})), 1e-12));
  }
}

TEST_CASE("restricted and nested coincide for m=1") {
  const auto d = build_npd(DictionaryFamily::Rpt, 20, 100, true);
  const CoherenceAnalyzer an(d);
  for (int k : {3, 7, 12}) {
    double zmax = 0.0, vmax = 0.0;
    for (int p = 1; p <= k; ++p) {
      zmax = std::max(zmax, an.restricted_inter(p));
      vmax = std::max(vmax, an.restricted_intra(p));
    }
    CHECK_THAT(an.npi(k, 1), WithinAbs(zmax, 1e-12));
    CHECK_THAT(an.npa(k, 1), WithinAbs(vmax, 1e-12));
  }
}

TEST_CASE("cnpi/cnpa against exhaustive subset search") {
  for (auto family : {DictionaryFamily::Rpt, DictionaryFamily::Farey}) {
    const auto d = build_npd(family, 6, 8, true);
    const CoherenceAnalyzer an(d);
    const auto g = oracle::gram_magnitudes(d.entries);
    const int k = 6, m = 2;
    const auto sets = oracle::qkm(6, m, k);
    REQUIRE_FALSE(sets.empty());
    for (int s = 1; s <= 4; ++s) {
      double zeta = 0.0, nu = 0.0;
      for (const auto& t : sets) {
        const auto sup = oracle::support_of(t);
        for (int i = 1; i <= d.atoms(); ++i) {
          const bool inside = std::find(sup.begin(), sup.end(), i) != sup.end();
          std::vector<int> candidates;
          for (int j : sup) {
            if (j != i) candidates.push_back(j);
          }
          const double v = oracle::top_subset_sum(g, i, candidates, s);
          if (inside) {
            nu = std::max(nu, v);
          } else {
            zeta = std::max(zeta, v);
          }
        }
      }
      CHECK_THAT(an.cnpi(k, m, s), WithinAbs(zeta, 1e-10));
      CHECK_THAT(an.cnpa(k, m, s), WithinAbs(nu, 1e-10));
    }
  }
}

TEST_CASE("cnpi/cnpa properties") {
  const auto d = build_npd(DictionaryFamily::Rpt, 6, 8, true);
  const CoherenceAnalyzer an(d);
  const int m = 1;
  for (int k : {3, 5}) {
    // s = k recovers the plain measures
    CHECK_THAT(an.cnpi(k, m, k), WithinAbs(an.npi(k, m), 1e-14));
    CHECK_THAT(an.cnpa(k, m, k), WithinAbs(an.npa(k, m), 1e-14));
    // single largest term is bounded by mu
    CHECK(an.cnpi(k, m, 1) <= an.mutual_coherence() + 1e-14);
    // monotone in s
    for (int s = 1; s < k; ++s) {
      CHECK(an.cnpi(k, m, s) <= an.cnpi(k, m, s + 1) + 1e-15);
      CHECK(an.cnpa(k, m, s) <= an.cnpa(k, m, s + 1) + 1e-15);
    }
  }
  CHECK(an.cnpa(3, 1, 0) == 0.0);
  CHECK_THROWS_AS(an.cnpi(3, 1, 4), SOutOfRange);
  CHECK_THROWS_AS(an.cnpi(3, 1, 0), SOutOfRange);
}

TEST_CASE("refined grid agrees with pointwise evaluation") {
  const auto d = build_npd(DictionaryFamily::Farey, 8, 20, true);
  const CoherenceAnalyzer an(d);
  const auto grid = an.refined_grid(2, 8);
  for (int k = 1; k <= 8; ++k) {
    bool empty = true;
    try {
      an.qkm(k, 2);
      empty = false;
    } catch (const EmptyQkm&) {
    }
    for (int s = 1; s <= k; ++s) {
      if (empty) {
        CHECK(std::isnan(grid.cnpi(k, s)));
      } else {
        CHECK_THAT(grid.cnpi(k, s), WithinAbs(an.cnpi(k, 2, s), 1e-12));
        CHECK_THAT(grid.cnpa(k, s), WithinAbs(an.cnpa(k, 2, s), 1e-12));
      }
    }
  }
}

TEST_CASE("erc value") {
  const auto d = build_npd(DictionaryFamily::Rpt, 6, 8, true);
  const CoherenceAnalyzer an(d);
  for (const auto& periods : std::vector<std::vector<int>>{{4}, {3}, {3, 4}}) {
    const auto s = oracle::support_of(periods);
    CHECK_THAT(an.erc_value(s), WithinAbs(oracle::erc_value(d.entries, s), 1e-9));
  }
  // orthonormal columns: any support projects the rest to zero
  const CoherenceAnalyzer ortho(orthonormal_test_dictionary(5));
  CHECK_THAT(ortho.erc_value({1, 3}), WithinAbs(0.0, 1e-14));
}

TEST_CASE("erc baseline maximizes over the family") {
  const auto d = build_npd(DictionaryFamily::Rpt, 6, 8, true);
  const CoherenceAnalyzer an(d);
  const auto b = an.erc_baseline(5, 2);
  double ref = 0.0;
  for (const auto& t : oracle::qkm(6, 2, 5)) {
    ref = std::max(ref, oracle::erc_value(d.entries, oracle::support_of(t)));
  }
  CHECK_THAT(b.value, WithinAbs(ref, 1e-9));
  // k=1, m=1 reduces to the first singleton
  CHECK_THAT(an.erc_baseline(1, 1).value, WithinAbs(an.erc_value({1}), 1e-12));
}

TEST_CASE("singular gram detection") {
  NpdDictionary d = orthonormal_test_dictionary(4);
  d.entries.col(2) = d.entries.col(1);  // duplicate column
  const CoherenceAnalyzer an(d);
  CHECK_THROWS_AS(an.erc_value({2, 3}), SingularGram);
  CHECK_THAT(an.min_eig_gram({2, 3}), WithinAbs(0.0, 1e-12));
}

TEST_CASE("min eigenvalue of the gram") {
  const CoherenceAnalyzer ortho(orthonormal_test_dictionary(5));
  CHECK_THAT(ortho.min_eig_gram({1, 2, 4}), WithinAbs(1.0, 1e-12));

  const auto d = build_npd(DictionaryFamily::Rpt, 20, 100, true);
  const CoherenceAnalyzer an(d);
  const auto s4 = single_period_support(4);
  // dense eigensolve oracle
  Eigen::MatrixXcd ks(d.rows(), s4.size());
  for (std::size_t i = 0; i < s4.size(); ++i) ks.col(i) = d.atom(s4[i]);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ks.adjoint() * ks);
  CHECK_THAT(an.min_eig_gram(s4), WithinAbs(es.eigenvalues().minCoeff(), 1e-9));
  // the appendix lemma at (k, m) = (4, 1)
  const double nu = an.npa(4, 1);
  REQUIRE(nu < 1.0);
  CHECK(an.min_eig_gram(s4) >= 1.0 - nu - 1e-9);
}

TEST_CASE("sandwich bound on a small grid") {
  for (auto family : {DictionaryFamily::Rpt, DictionaryFamily::Farey}) {
    const auto d = build_npd(family, 10, 30, true);
    const CoherenceAnalyzer an(d);
    for (int m : {1, 2}) {
      for (int k = 1; k <= 10; ++k) {
        std::vector<PeriodSet> sets;
        try {
          sets = an.qkm(k, m);
        } catch (const EmptyQkm&) {
          continue;
        }
        const double nu = an.npa(k, m);
        if (nu >= 1.0) continue;
        const double zeta = an.npi(k, m);
        CHECK(an.erc_baseline(k, m).value <= zeta / (1.0 - nu) + 1e-9);
      }
    }
  }
}

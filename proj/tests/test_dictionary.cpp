#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <fstream>

#include "npd/dictionary.hpp"
#include "npd/harness.hpp"
#include "npd/rng.hpp"
#include "npd/support.hpp"

using namespace npd;
using Catch::Matchers::WithinAbs;

namespace {

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("build_Cq basics") {
  const auto ones = build_Cq(DictionaryFamily::Rpt, 1, 4);
  REQUIRE(ones.cols() == 1);
  for (int r = 0; r < 4; ++r) CHECK(ones(r, 0) == std::complex<double>(1, 0));

  const auto c4 = build_Cq(DictionaryFamily::Rpt, 4, 4);
  REQUIRE(c4.cols() == 2);
  Eigen::MatrixXcd want(4, 2);
  want << 2, 0, 0, 2, -2, 0, 0, -2;
  CHECK(max_abs_diff(c4, want) == 0.0);

  const auto f2 = build_Cq(DictionaryFamily::Farey, 2, 4);
  REQUIRE(f2.cols() == 1);
  Eigen::VectorXcd alt(4);
  alt << 1, -1, 1, -1;
  CHECK(max_abs_diff(f2, alt) < 1e-15);
}

TEST_CASE("the 4x4 RPT matrix") {
  const auto a4 = build_npm(DictionaryFamily::Rpt, 4);
  Eigen::MatrixXcd want(4, 4);
  want << 1, 1, 2, 0,  //
      1, -1, 0, 2,     //
      1, 1, -2, 0,     //
      1, -1, 0, -2;
  CHECK(max_abs_diff(a4, want) == 0.0);
  CHECK(max_abs_diff(build_npm(DictionaryFamily::Rpt, 1), Eigen::MatrixXcd::Ones(1, 1)) == 0.0);

  const auto f2 = build_npm(DictionaryFamily::Farey, 2);
  Eigen::MatrixXcd wf(2, 2);
  wf << 1, 1, 1, -1;
  CHECK(max_abs_diff(f2, wf) < 1e-15);
}

TEST_CASE("npd assembly and labels") {
  const auto d = build_npd(DictionaryFamily::Rpt, 6, 8, false);
  REQUIRE(d.rows() == 8);
  REQUIRE(d.atoms() == 12);
  CHECK(d.entries.imag().cwiseAbs().maxCoeff() == 0.0);
  // integer-valued before normalization
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 12; ++c) {
      CHECK(d.entries(r, c).real() == std::round(d.entries(r, c).real()));
    }
  }
  // columns 7..10 form the period-5 block
  const auto c5 = build_Cq(DictionaryFamily::Rpt, 5, 8);
  CHECK(max_abs_diff(d.entries.middleCols(6, 4), c5) == 0.0);
  for (int j : index_set(5)) CHECK(d.atom_period[static_cast<std::size_t>(j - 1)] == 5);

  const auto tiny = build_npd(DictionaryFamily::Rpt, 1, 5, true);
  REQUIRE(tiny.atoms() == 1);
  for (int r = 0; r < 5; ++r) {
    CHECK_THAT(tiny.entries(r, 0).real(), WithinAbs(1.0 / std::sqrt(5.0), 1e-15));
  }

  const auto farey = build_npd(DictionaryFamily::Farey, 20, 100, true);
  CHECK(farey.rows() == 100);
  CHECK(farey.atoms() == 128);
}

TEST_CASE("normalized columns have unit norm and keep periodicity") {
  for (auto family : {DictionaryFamily::Rpt, DictionaryFamily::Farey}) {
    const auto d = build_npd(family, 10, 37, true);
    for (int j = 1; j <= d.atoms(); ++j) {
      CHECK_THAT(d.atom(j).norm(), WithinAbs(1.0, 1e-10));
      const int q = d.atom_period[static_cast<std::size_t>(j - 1)];
      for (int r = 0; r + q < d.rows(); ++r) {
        CHECK(std::abs(d.entries(r + q, j - 1) - d.entries(r, j - 1)) < 1e-12);
      }
    }
  }
}

TEST_CASE("npm blocks are mutually orthogonal and full rank") {
  for (auto family : {DictionaryFamily::Rpt, DictionaryFamily::Farey}) {
    for (int p = 1; p <= 30; ++p) {
      const auto npm = build_npm(family, p);
      REQUIRE(Eigen::ColPivHouseholderQR<Eigen::MatrixXcd>(npm).rank() == p);
      const auto divs = divisors(p);
      int off_a = 0;
      for (std::size_t a = 0; a < divs.size(); ++a) {
        const int wa = static_cast<int>(totient(divs[a]));
        int off_b = off_a + wa;
        for (std::size_t b = a + 1; b < divs.size(); ++b) {
          const int wb = static_cast<int>(totient(divs[b]));
          const double cross = (npm.middleCols(off_a, wa).adjoint() * npm.middleCols(off_b, wb))
                                   .cwiseAbs()
                                   .maxCoeff();
          CHECK(cross <= 1e-8);
          off_b += wb;
        }
        off_a += wa;
      }
    }
  }
}

TEST_CASE("lcm property of random block combinations") {
  SplitMix64 rng(0xfeedu);
  for (auto family : {DictionaryFamily::Rpt, DictionaryFamily::Farey}) {
    for (auto [p1, p2] : std::vector<std::pair<int, int>>{{3, 4}, {2, 5}, {4, 6}}) {
      const int l = static_cast<int>(lcm(p1, p2));
      const auto npm = build_npm(family, l);
      // locate the C_{p1} and C_{p2} blocks inside A_lcm
      auto block_of = [&](int q) {
        int off = 0;
        for (std::int64_t d : divisors(l)) {
          if (d == q) break;
          off += static_cast<int>(totient(d));
        }
        return npm.middleCols(off, totient(q));
      };
      Eigen::VectorXcd combo = Eigen::VectorXcd::Zero(l);
      for (const auto& blk : {block_of(p1), block_of(p2)}) {
        for (int c = 0; c < blk.cols(); ++c) {
          combo += std::complex<double>(rng.normal(), 0.0) * blk.col(c);
        }
      }
      // observe several full cycles so the window determines the period
      Eigen::VectorXcd extended(4 * l);
      for (int r = 0; r < extended.size(); ++r) extended[r] = combo[r % l];
      CHECK(minimal_period(extended) == l);
    }
  }
}

TEST_CASE("npd restricted to divisors of p matches the npm up to column order") {
  for (auto family : {DictionaryFamily::Rpt, DictionaryFamily::Farey}) {
    for (int p : {4, 6, 12}) {
      const auto d = build_npd(family, p, p, false);
      const auto npm = build_npm(family, p);
      // npm stacks C_q by ascending divisor; gather the same columns from d
      Eigen::MatrixXcd gathered(p, p);
      int col = 0;
      for (std::int64_t q : divisors(p)) {
        for (int i : index_set(static_cast<int>(q))) {
          gathered.col(col++) = d.atom(i);
        }
      }
      REQUIRE(col == p);
      CHECK(max_abs_diff(gathered, npm) < 1e-12);
    }
  }
}

TEST_CASE("export/import round trip") {
  const std::string path = "roundtrip_test.npd";
  for (auto family : {DictionaryFamily::Rpt, DictionaryFamily::Farey}) {
    const auto d = build_npd(family, 6, 8, family == DictionaryFamily::Farey);
    export_dictionary(d, path);
    const auto back = import_dictionary(path);
    CHECK(back.family == d.family);
    CHECK(back.L == d.L);
    CHECK(back.p_max == d.p_max);
    CHECK(back.normalized == d.normalized);
    CHECK(back.atom_period == d.atom_period);
    CHECK(max_abs_diff(back.entries, d.entries) == 0.0);  // 17 digits round-trip doubles
  }
  std::remove(path.c_str());
}

TEST_CASE("farey entries are written as a+bi text") {
  const std::string path = "farey_format_test.npd";
  export_dictionary(build_npd(DictionaryFamily::Farey, 3, 3, false), path);
  std::ifstream in(path);
  std::string header, row0, row1;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  CHECK(header == "npd v1 family=farey L=3 pmax=3 normalized=0");
  CHECK(row1.find('i') != std::string::npos);
  CHECK((row1.find('+') != std::string::npos || row1.find('-') != std::string::npos));
  std::remove(path.c_str());
}

TEST_CASE("malformed files are rejected with a line number") {
  const std::string path = "malformed_test.npd";
  {
    std::ofstream out(path);
    out << "npd v1 family=rpt L=8 pmax=6 normalized=0\n1,1,2\n";
  }
  try {
    import_dictionary(path);
    FAIL("expected MalformedFile");
  } catch (const MalformedFile& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  {
    std::ofstream out(path);
    const auto d = build_npd(DictionaryFamily::Rpt, 6, 8, false);
    out << "npd v1 family=rpt L=8 pmax=6 normalized=0\n";
    // only three of eight rows
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < d.atoms(); ++c) out << (c ? "," : "") << d.entries(r, c).real();
      out << "\n";
    }
  }
  try {
    import_dictionary(path);
    FAIL("expected MalformedFile");
  } catch (const MalformedFile& e) {
    CHECK(std::string(e.what()).find("truncated") != std::string::npos);
  }
  {
    std::ofstream out(path);
    out << "npd v2 whatever\n";
  }
  CHECK_THROWS_AS(import_dictionary(path), MalformedFile);
  CHECK_THROWS_AS(import_dictionary("does_not_exist.npd"), IoError);
  std::remove(path.c_str());
}

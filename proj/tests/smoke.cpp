#include <catch2/catch_amalgamated.hpp>
#include "npd/npd.hpp"

TEST_CASE("smoke: build a dictionary and measure it") {
  const auto dict = npd::build_npd(npd::DictionaryFamily::Rpt, 6, 8, true);
  REQUIRE(dict.atoms() == 12);
  npd::CoherenceAnalyzer an(dict);
  REQUIRE(an.mutual_coherence() > 0.0);
}

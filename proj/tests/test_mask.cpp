#include <catch_amalgamated.hpp>

#include <filesystem>

#include "tfcs/mask.hpp"

TEST_CASE("uniform masks", "[mask]") {
  const auto full = tfcs::make_mask({8, 5}, tfcs::UniformScheme{1.0}, 3);
  REQUIRE(full.observed.all());

  const auto quarter = tfcs::make_mask({4, 4}, tfcs::UniformScheme{0.25}, 9);
  REQUIRE(quarter.observed_count() == 4);

  const auto none = tfcs::make_mask({4, 4}, tfcs::UniformScheme{0.0}, 9);
  REQUIRE(none.observed_count() == 0);

  REQUIRE_THROWS_AS(tfcs::make_mask({4, 4}, tfcs::UniformScheme{1.5}, 1), tfcs::ParameterError);
  REQUIRE_THROWS_AS(tfcs::make_mask({0, 4}, tfcs::UniformScheme{0.5}, 1), tfcs::ParameterError);
}

TEST_CASE("banded masks respect both bands", "[mask]") {
  const tfcs::BandedScheme scheme{0.45, 0.01, 0.125};
  const auto mask = tfcs::make_mask({256, 256}, scheme, 42);
  const auto band = tfcs::low_band_rows(256, 0.125);
  REQUIRE(band.first == 112);
  REQUIRE(band.count == 32);

  std::size_t low = 0, high = 0;
  for (Eigen::Index r = 0; r < 256; ++r) {
    const std::size_t row_count = static_cast<std::size_t>(mask.observed.row(r).count());
    (r >= band.first && r < band.first + band.count ? low : high) += row_count;
  }
  REQUIRE(high == 29491);  // round(0.45 * 65536)
  REQUIRE(low == 655);     // round(0.01 * 65536)
  REQUIRE(mask.observed_count() == tfcs::expected_observed_count({256, 256}, scheme));

  SECTION("a band too small for its share is rejected") {
    REQUIRE_THROWS_AS(tfcs::make_mask({16, 16}, tfcs::BandedScheme{0.1, 0.2, 0.125}, 1), tfcs::ParameterError);
    REQUIRE_THROWS_AS(tfcs::make_mask({16, 16}, tfcs::BandedScheme{0.9, 0.0, 0.125}, 1), tfcs::ParameterError);
  }
}

TEST_CASE("masks are deterministic per seed and exact in count", "[mask][property]") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const tfcs::MaskDims dims{static_cast<Eigen::Index>(5 + seed % 7), static_cast<Eigen::Index>(3 + seed % 11)};
    const double frac = static_cast<double>(seed % 10) / 10.0;
    const auto a = tfcs::make_mask(dims, tfcs::UniformScheme{frac}, seed);
    const auto b = tfcs::make_mask(dims, tfcs::UniformScheme{frac}, seed);
    REQUIRE((a.observed == b.observed).all());
    REQUIRE(a.observed_count() == tfcs::expected_observed_count(dims, a.scheme));

    const tfcs::BandedScheme banded{0.3, 0.05, 0.25};
    const auto c = tfcs::make_mask({64, 40}, banded, seed);
    const auto d = tfcs::make_mask({64, 40}, banded, seed);
    REQUIRE((c.observed == d.observed).all());
    REQUIRE(c.observed_count() == tfcs::expected_observed_count({64, 40}, banded));
  }
  const auto x = tfcs::make_mask({32, 32}, tfcs::UniformScheme{0.5}, 1);
  const auto y = tfcs::make_mask({32, 32}, tfcs::UniformScheme{0.5}, 2);
  REQUIRE_FALSE((x.observed == y.observed).all());
}

TEST_CASE("mask exchange files", "[mask][io]") {
  const auto dir = std::filesystem::temp_directory_path() / "tfcs_test_mask";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  const auto mask = tfcs::make_mask({20, 30}, tfcs::BandedScheme{0.4, 0.02, 0.25}, 77);
  tfcs::write_mask(mask, dir / "mask.pgm");
  const auto back = tfcs::read_mask(dir / "mask.pgm");
  REQUIRE((back.observed == mask.observed).all());
  REQUIRE(back.seed == 77);
  const auto& scheme = std::get<tfcs::BandedScheme>(back.scheme);
  REQUIRE(scheme.p_high == 0.4);
  REQUIRE(scheme.p_low == 0.02);
  REQUIRE(scheme.low_band_fraction == 0.25);

  std::filesystem::remove(dir / "mask.json");
  REQUIRE_THROWS_AS(tfcs::read_mask(dir / "mask.pgm"), tfcs::FormatError);
}

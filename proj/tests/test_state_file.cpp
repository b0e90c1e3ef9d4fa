#include <gtest/gtest.h>

#include <filesystem>

#include <entgeom/state_file.hpp>

using namespace entgeom;

TEST(StateFile, PureRoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PureState xi = random_state(SpaceShape({2, 3, 2}), seed);
    const auto back = std::get<PureState>(parse_state_file(to_state_file(xi)));
    EXPECT_EQ(back.shape(), xi.shape());
    EXPECT_TRUE(back.amplitudes() == xi.amplitudes());
  }
}

TEST(StateFile, DensityRoundTripIsBitExact) {
  const DensityOperator rho = random_density(SpaceShape({2, 2}), 7);
  const std::string text = to_state_file(rho);
  EXPECT_NE(text.find("\"kind\": \"density\""), std::string::npos);
  const auto back = std::get<DensityOperator>(parse_state_file(text));
  EXPECT_TRUE(back.matrix() == rho.matrix());
}

TEST(StateFile, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "entgeom_state_file_test.json";
  const PureState xi = random_state(SpaceShape({3, 3}), 1);
  write_state_file(path, xi);
  EXPECT_TRUE(read_pure_state(path).amplitudes() == xi.amplitudes());
  EXPECT_NEAR(read_density_operator(path).matrix().trace().real(), 1.0, 1e-15);
  std::filesystem::remove(path);
  EXPECT_THROW(read_state_file(path), PreconditionError);
}

TEST(StateFile, SlotOneSlowestOrder) {
  const auto s = std::get<PureState>(parse_state_file(R"({"dims": [2, 2], "re": [0, 1, 0, 0], "im": [0, 0, 0, 0]})"));
  EXPECT_EQ(s.amplitudes()(1), Complex(1.0, 0.0));  // e_0 (x) e_1
}

TEST(StateFile, MalformedJsonReportsPosition) {
  try {
    parse_state_file("{\n  \"dims\": [2, 2],\n  \"re\": [1, 0, 0 0]\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 18u);
  }
}

TEST(StateFile, LayoutErrors) {
  EXPECT_THROW(parse_state_file(R"({"dims": [2, 2], "re": [1, 0, 0], "im": [0, 0, 0, 0]})"), ParseError);
  EXPECT_THROW(parse_state_file(R"({"re": [1], "im": [0]})"), ParseError);
  EXPECT_THROW(parse_state_file(R"({"dims": [2, -2], "re": [], "im": []})"), ParseError);
  EXPECT_THROW(parse_state_file(R"({"kind": "mixed", "dims": [2, 2], "re": [1, 0, 0, 0], "im": [0, 0, 0, 0]})"),
               ParseError);
  EXPECT_THROW(parse_state_file(R"([1, 2])"), ParseError);
}

TEST(StateFile, LoadToleranceIsOneEMinusEight) {
  EXPECT_NO_THROW(parse_state_file(R"({"dims": [2, 2], "re": [1.000000005, 0, 0, 0], "im": [0, 0, 0, 0]})"));
  EXPECT_THROW(parse_state_file(R"({"dims": [2, 2], "re": [1.0000001, 0, 0, 0], "im": [0, 0, 0, 0]})"),
               InvariantError);
  EXPECT_THROW(parse_state_file(R"({"dims": [2, 2], "re": [1, 1, 0, 0], "im": [0, 0, 0, 0]})"), InvariantError);
}

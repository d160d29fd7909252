#include "gscp/instance_io.h"

#include <gtest/gtest.h>

#include <filesystem>

#include "fixtures.h"
#include "gscp/error.h"
#include "gscp/generator.h"

namespace gscp {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIoFailure;
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("gscp-io-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

TEST(OrLib, ParsesT3Stream) {
  const auto inst = parse_orlib_string("3 3  1 1 1  1 1  2 1 2  2 2 3", "T3");
  EXPECT_EQ(inst, testing::t3());
}

TEST(OrLib, LineBreaksCarryNoMeaning) {
  const auto inst = parse_orlib_string("3\n3 1\n1 1 1\n1 2\n1 2 2\n2 3\n", "T3");
  EXPECT_EQ(inst, testing::t3());
}

TEST(OrLib, Errors) {
  EXPECT_EQ(code_of([] { parse_orlib_string("3 3  1 1 1  1 1  2 1", "x"); }),
            ErrorCode::kTruncatedStream);
  EXPECT_EQ(code_of([] { parse_orlib_string("3 3  1 1 1  1 1  2 1 4  2 2 3", "x"); }),
            ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(code_of([] { parse_orlib_string("3 3  1 1 1  0  2 1 2  2 2 3", "x"); }),
            ErrorCode::kNonPositiveCount);
  EXPECT_EQ(code_of([] { parse_orlib_string("0 3", "x"); }), ErrorCode::kNonPositiveCount);
}

TEST(OrLib, RoundTripIsIdentity) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto type = static_cast<InstanceType>(seed % 4);
    const auto inst = generate(preset_config(type, seed), "rt");
    const auto back = parse_orlib_string(write_orlib_string(inst), "rt");
    ASSERT_EQ(back, inst) << "seed " << seed;
  }
}

TEST(Native, RoundTripThroughFile) {
  TempDir dir;
  const auto inst = testing::t3();
  write_native(inst, dir.path() / "t3.json");
  EXPECT_EQ(read_native(dir.path() / "t3.json"), inst);
}

TEST(Native, FractionalCostsAreExact) {
  const auto inst = build_instance(2, 2, {{0}, {1}},
                                   {Cost::parse("0.1"), Cost::parse("123.456789")}, "frac");
  const auto back = from_native_string(to_native_string(inst));
  EXPECT_EQ(back, inst);
}

TEST(Native, CostCountMismatchIsMalformed) {
  const std::string text =
      R"({"format_version":"scp-1","name":"x","m":1,"n":2,"costs":[1],"rows":[[0,1]]})";
  EXPECT_EQ(code_of([&] { from_native_string(text); }), ErrorCode::kMalformedFile);
}

TEST(Native, UnknownVersion) {
  const std::string text =
      R"({"format_version":"scp-9","name":"x","m":1,"n":1,"costs":[1],"rows":[[0]]})";
  EXPECT_EQ(code_of([&] { from_native_string(text); }), ErrorCode::kVersionMismatch);
}

TEST(Native, TruncatedJsonIsMalformed) {
  const std::string full = to_native_string(testing::t3());
  EXPECT_EQ(code_of([&] { from_native_string(full.substr(0, full.size() / 2)); }),
            ErrorCode::kMalformedFile);
}

TEST(Native, RoundTripIsIdentity) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto type = static_cast<InstanceType>(seed % 4);
    const auto inst = generate(preset_config(type, seed + 1000), "native-" + std::to_string(seed));
    ASSERT_EQ(from_native_string(to_native_string(inst)), inst) << "seed " << seed;
  }
}

TEST(Native, MissingFileIsIoFailure) {
  EXPECT_EQ(code_of([] { read_native("/nonexistent/dir/x.json"); }), ErrorCode::kIoFailure);
}

}  // namespace
}  // namespace gscp

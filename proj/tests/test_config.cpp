#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "fluctua/config.hpp"
#include "support.hpp"

using namespace fluctua;
using namespace fluctua::config;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("fluctua_config_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

  fs::path write(const std::string& name, const std::string& text) const {
    const auto p = path_ / name;
    std::ofstream(p) << text;
    return p;
  }

 private:
  fs::path path_;
};

class PresetDirOverride {
 public:
  explicit PresetDirOverride(const fs::path& dir) {
    if (const char* old = std::getenv("FLUCTUA_PRESET_DIR")) old_ = old;
    ::setenv("FLUCTUA_PRESET_DIR", dir.c_str(), 1);
  }
  ~PresetDirOverride() {
    if (old_.empty())
      ::unsetenv("FLUCTUA_PRESET_DIR");
    else
      ::setenv("FLUCTUA_PRESET_DIR", old_.c_str(), 1);
  }

 private:
  std::string old_;
};

}  // namespace

TEST(ParamsJson, RoundTripWithInfinity) {
  ModelParams p;
  p.a0 = 2.0;
  p.u0 = 0.25;
  p.d = 2.5;
  p.x_c = 3.0;
  const json j = params_to_json(p);
  EXPECT_EQ(j.at("L"), "inf");
  const ModelParams back = params_from_json(j);
  EXPECT_EQ(back.a0, 2.0);
  EXPECT_EQ(back.u0, 0.25);
  EXPECT_EQ(back.d, 2.5);
  EXPECT_TRUE(std::isinf(back.L));
  EXPECT_EQ(back.x_c, 3.0);
  EXPECT_EQ(params_to_json(back), j);
}

TEST(ParamsJson, RejectsUnknownAndInvalid) {
  EXPECT_THROW(params_from_json(json{{"a0", 1}, {"Tc", 1}, {"gamma", 3}}), Error);
  EXPECT_THROW(params_from_json(json{{"a0", -1}}), Error);
  EXPECT_THROW(params_from_json(json{{"L", "big"}}), Error);
  EXPECT_THROW(constants_from_json(json{{"hbar", 1}, {"c", 3}}), Error);
  EXPECT_THROW(constants_from_json(json{{"mass", 0}}), Error);
}

TEST(RunConfigJson, FullDocument) {
  const json doc = json::parse(R"({
    "name": "x", "description": "y",
    "params": {"u0": 3, "L": 12, "x_c": 1},
    "constants": {"hbar": 2},
    "grid": {"start": 0.5, "stop": 1.5, "count": 11},
    "geometry": {"kind": "wire", "thickness": 0.5, "width": 2},
    "l0": [4, 8],
    "oracle": {"few_mode_u0": 0.02, "aleph_value": 0.03, "aleph_dim": 2}
  })");
  const RunConfig cfg = from_json(doc);
  EXPECT_EQ(cfg.params.u0, 3.0);
  EXPECT_EQ(cfg.constants.hbar, 2.0);
  ASSERT_TRUE(cfg.grid);
  EXPECT_EQ(cfg.grid->values().size(), 11u);
  ASSERT_TRUE(cfg.geometry);
  EXPECT_EQ(std::get<Wire>(*cfg.geometry).width, 2.0);
  EXPECT_EQ(cfg.l0.size(), 2u);
  EXPECT_EQ(*cfg.oracle.u0, 0.02);
  EXPECT_EQ(cfg.oracle.aleph_dim, 2);
  EXPECT_THROW(from_json(json{{"extra", 1}}), Error);
  EXPECT_THROW(from_json(json{{"geometry", {{"kind", "sphere"}}}}), Error);
  EXPECT_THROW(from_json(json{{"grid", {{"start", 1}, {"stop", 0}, {"count", 3}}}}), Error);
}

TEST(Grid, ParseAndValidate) {
  const auto g = parse_grid("1,2,5");
  const auto v = g.values();
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.front(), 1.0);
  EXPECT_EQ(v[2], 1.5);
  EXPECT_EQ(v.back(), 2.0);
  for (const char* bad : {"1,2", "2,1,5", "1,2,1", "a,b,c", "1,2,3,4", "1,2,3x"})
    EXPECT_THROW(parse_grid(bad), Error) << bad;
}

TEST(Presets, ShippedPresetsCalibrate) {
  for (const auto& [name, width] : std::vector<std::pair<std::string, double>>{
           {"conventional-sc", 1e-14}, {"cuprate", 1e-1}, {"thinfilm-ferroelectric", 1e-2}}) {
    const RunConfig cfg = load(name, std::nullopt);
    EXPECT_LT(testing_support::rel(solve_critical_point(cfg.params).ginzburg_width, width), 1e-6)
        << name;
  }
  const RunConfig toy = load(std::string("toy3d"), std::nullopt);
  EXPECT_EQ(toy.params.u0, 30.0);
  EXPECT_LT(solve_critical_point(toy.params).T_star, toy.params.Tc);
}

TEST(Presets, ListAndEnvironmentOverride) {
  const auto shipped = list_presets();
  std::vector<std::string> names;
  for (const auto& p : shipped) names.push_back(p.name);
  for (const char* expected : {"conventional-sc", "cuprate", "thinfilm-ferroelectric", "toy3d"})
    EXPECT_NE(std::find(names.begin(), names.end(), expected), names.end()) << expected;

  TempDir dir;
  dir.write("alpha.json", R"({"description": "first", "params": {"u0": 2, "L": 5}})");
  dir.write("notes.txt", "ignored");
  PresetDirOverride env(dir.path());
  const auto custom = list_presets();
  ASSERT_EQ(custom.size(), 1u);
  EXPECT_EQ(custom[0].name, "alpha");
  EXPECT_EQ(custom[0].description, "first");
  EXPECT_EQ(load(std::string("alpha"), std::nullopt).params.L, 5.0);
  EXPECT_THROW(load(std::string("toy3d"), std::nullopt), Error);
  EXPECT_THROW(load(std::string("../alpha"), std::nullopt), Error);
}

TEST(Load, ConfigMergesOverPreset) {
  TempDir dir;
  const auto path = dir.write("run.json", R"({"params": {"L": 20}})");
  const RunConfig cfg = load(std::string("toy3d"), path);
  EXPECT_EQ(cfg.params.L, 20.0);
  EXPECT_EQ(cfg.params.u0, 30.0);
}

TEST(Load, FileErrors) {
  TempDir dir;
  try {
    load(std::nullopt, dir.path() / "missing.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
  const auto broken = dir.write("broken.json", "{ not json");
  try {
    load(std::nullopt, broken);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
  }
}

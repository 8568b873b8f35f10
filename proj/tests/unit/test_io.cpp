#include <gtest/gtest.h>

#include <fstream>

#include <json.hpp>

#include "cmv/errors.hpp"
#include "cmv/io.hpp"

using namespace cmv;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cmv_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  os << text;
}

}  // namespace

TEST(Io, ParseComplexForms) {
  EXPECT_EQ(parse_complex("0.5"), cplx(0.5, 0.0));
  EXPECT_EQ(parse_complex("-0.2+0.3i"), cplx(-0.2, 0.3));
  EXPECT_EQ(parse_complex("0.1-0.4i"), cplx(0.1, -0.4));
  EXPECT_EQ(parse_complex("0.4i"), cplx(0.0, 0.4));
  EXPECT_EQ(parse_complex("(0.1,0.2)"), cplx(0.1, 0.2));
  EXPECT_EQ(parse_complex("1e-3+2e-3i"), cplx(1e-3, 2e-3));
  EXPECT_THROW(parse_complex("abc"), DomainError);
  EXPECT_THROW(parse_complex(""), DomainError);
}

TEST(Io, ParseLists) {
  EXPECT_EQ(parse_double_list("0.9, 0.99,0.999"), (std::vector<double>{0.9, 0.99, 0.999}));
  const auto ab = parse_alphabet("(0.3,0.1),-0.5");
  EXPECT_EQ(ab.first, cplx(0.3, 0.1));
  EXPECT_EQ(ab.second, cplx(-0.5, 0.0));
  EXPECT_THROW(parse_alphabet("0.5"), DomainError);
}

TEST(Io, KeyValueConfig) {
  const fs::path p = scratch("a.cfg");
  write_text(p, "# comment\nmodel = constant\nalpha = 0.2+0.1i\ntheta_count=64\nr = 0.5,0.6\n");
  const RunConfig cfg = load_config(p);
  EXPECT_EQ(cfg.model, ModelKind::constant);
  EXPECT_EQ(cfg.alpha, cplx(0.2, 0.1));
  EXPECT_EQ(cfg.theta_count, 64);
  EXPECT_EQ(cfg.r, (std::vector<double>{0.5, 0.6}));
  EXPECT_EQ(cfg.depth, RunConfig{}.depth);
}

TEST(Io, JsonConfigAndRoundTrip) {
  const fs::path p = scratch("b.json");
  write_text(p, R"({"model": "sturmian", "omega": 0.4142135623730951, "depth": 6, "eps": "0.01,0.02,0.04"})");
  const RunConfig cfg = load_config(p);
  EXPECT_EQ(cfg.model, ModelKind::sturmian);
  EXPECT_DOUBLE_EQ(cfg.omega, 0.4142135623730951);
  EXPECT_EQ(cfg.depth, 6);
  EXPECT_EQ(cfg.eps.size(), 3u);
  const auto j = nlohmann::json::parse(config_json(cfg));
  EXPECT_EQ(j.at("depth").get<int>(), 6);
  EXPECT_EQ(j.at("model").get<std::string>(), "sturmian");
}

TEST(Io, UnknownKeysAndValidation) {
  RunConfig cfg;
  EXPECT_THROW(apply_setting(cfg, "no_such_key", "1"), DomainError);
  RunConfig bad_alpha;
  apply_setting(bad_alpha, "alpha", "1.2");
  apply_setting(bad_alpha, "model", "constant");
  EXPECT_THROW(validate(bad_alpha), ModulusError);
  RunConfig bad_omega;
  apply_setting(bad_omega, "omega", "1.5");
  EXPECT_THROW(validate(bad_omega), FrequencyRangeError);
  RunConfig bad_r;
  apply_setting(bad_r, "r", "0.5,1.0");
  EXPECT_THROW(validate(bad_r), DomainError);
  RunConfig bad_depth;
  apply_setting(bad_depth, "depth", "0");
  EXPECT_THROW(validate(bad_depth), DomainError);
  EXPECT_NO_THROW(validate(RunConfig{}));
}

TEST(Io, ModelKinds) {
  RunConfig cfg;
  cfg.model = ModelKind::free;
  EXPECT_EQ(make_model(cfg).alpha(-7), cplx{});
  cfg.model = ModelKind::constant;
  cfg.alpha = 0.3;
  EXPECT_EQ(make_model(cfg).alpha(5), cplx(0.3));
  cfg.model = ModelKind::sturmian;
  const auto s = make_model(cfg);
  EXPECT_EQ(s.support(), Support::two_sided);
  EXPECT_EQ(s.alpha(1), cplx(0.5));  // first letter of the golden word is 1

  const fs::path csv = scratch("alpha.csv");
  write_text(csv, "n,re,im\n-1,0.1,0.0\n0,0.2,0.1\n1,-0.3,0.0\n");
  cfg.model = ModelKind::explicit_file;
  cfg.explicit_file = csv.string();
  const auto e = make_model(cfg);
  EXPECT_EQ(e.alpha(-1), cplx(0.1, 0.0));
  EXPECT_EQ(e.alpha(0), cplx(0.2, 0.1));
  EXPECT_EQ(e.alpha(1), cplx(-0.3, 0.0));
  EXPECT_EQ(e.alpha(10), cplx{});
}

TEST(Io, RunDirectoriesAreUnique) {
  const fs::path base = scratch("runs");
  fs::remove_all(base);
  const fs::path a = make_run_directory(base, "walk");
  const fs::path b = make_run_directory(base, "walk");
  EXPECT_TRUE(fs::is_directory(a));
  EXPECT_TRUE(fs::is_directory(b));
  EXPECT_NE(a, b);
  EXPECT_EQ(a.filename().string().rfind("walk-", 0), 0u);
}

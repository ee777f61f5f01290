#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "bsmsentinel/config.hpp"
#include "bsmsentinel/errors.hpp"

using namespace bsmsentinel;

namespace {

std::vector<ConfigEntry> entries(const std::string& text) {
  std::istringstream in(text);
  return parse_key_values(in, "test.conf");
}

EnvLookup env_of(std::map<std::string, std::string> vars) {
  return [vars = std::move(vars)](const std::string& name) -> std::optional<std::string> {
    const auto it = vars.find(name);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(KeyValues, SectionsCommentsAndBlocks) {
  const auto e = entries("# top\nseed = 4\n\n[attack]\nkind = DOS\n[attack]\nkind = DOS\n");
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0].section, "");
  EXPECT_EQ(e[0].value, "4");
  EXPECT_EQ(e[0].line, 2u);
  EXPECT_EQ(e[1].section, "attack");
  EXPECT_NE(e[1].block, e[2].block);
}

TEST(KeyValues, MalformedLineNamesLocation) {
  EXPECT_NE(message_of([] { entries("seed = 1\nnot a pair\n"); }).find("test.conf:2"), std::string::npos);
  EXPECT_NE(message_of([] { entries("[attack\n"); }).find("test.conf:1"), std::string::npos);
}

TEST(DetectorConfigFile, AppliesEveryKey) {
  const auto c = load_detector_config(entries(
                                          "window_len = 0.2\ncalibration_window_seconds = 3\nn_sigma = 4\n"
                                          "k_rule = zero\nreset_on_detect = false\none_sided = true\n"
                                          "[detector]\nem_threshold = 0.01\nem_max_iter = 50\nem_tol = 1e-6\n"
                                          "em_offset_sigmas = 6\nem_refit_every = 20\ncontamination = error\n"),
                                      "test.conf");
  EXPECT_EQ(c.window_len, 0.2);
  EXPECT_EQ(c.calibration_window_seconds, 3.0);
  EXPECT_EQ(c.n_sigma, 4.0);
  EXPECT_EQ(c.k_rule.sigma_multiple, 0.0);
  EXPECT_FALSE(c.reset_on_detect);
  EXPECT_TRUE(c.one_sided);
  EXPECT_EQ(c.em_threshold, 0.01);
  EXPECT_EQ(c.em_max_iter, 50u);
  EXPECT_EQ(c.em_tol, 1e-6);
  EXPECT_EQ(c.em_offset_sigmas, 6.0);
  EXPECT_EQ(c.em_refit_every, 20u);
  EXPECT_EQ(c.contamination, ContaminationPolicy::kError);
  EXPECT_EQ(detector_setting_keys().size(), 12u);
}

TEST(DetectorConfigFile, ErrorsCarryFileAndLine) {
  const auto msg = message_of([] { load_detector_config(entries("n_sigma = 5\nbogus = 1\n"), "test.conf"); });
  EXPECT_NE(msg.find("test.conf:2"), std::string::npos);
  EXPECT_NE(msg.find("bogus"), std::string::npos);
  EXPECT_NE(message_of([] { load_detector_config(entries("em_threshold = 2\n"), "test.conf"); }).find("em_threshold"),
            std::string::npos);
  EXPECT_THROW(load_detector_config(entries("[scenario]\nseed = 1\n"), "test.conf"), ConfigError);
}

TEST(EnvOverrides, ReplaceFileValues) {
  DetectorConfig c;
  apply_env_overrides(c, env_of({{"BSMSENTINEL_N_SIGMA", "3"}, {"BSMSENTINEL_ONE_SIDED", " true "}}));
  EXPECT_EQ(c.n_sigma, 3.0);
  EXPECT_TRUE(c.one_sided);
  const auto msg = message_of([] {
    DetectorConfig d;
    apply_env_overrides(d, env_of({{"BSMSENTINEL_EM_MAX_ITER", "-4"}}));
  });
  EXPECT_NE(msg.find("BSMSENTINEL_EM_MAX_ITER"), std::string::npos);
}

TEST(ScenarioFileLoad, AttacksAndForcedVehicles) {
  const auto f = load_scenario(entries("duration = 60\nseed = 9\nflow = 100\n"
                                       "[vehicle]\nspawn_time = 0\nlane = 1\nentry_speed = 5\n"
                                       "[attack]\nkind = DOS\ntarget = 1\nonset = 10\nduration = 2\nrate = 500\n"
                                       "[attack]\nkind = IMPERSONATION\ntarget = 3\nvictim = 2\nonset = 20\nduration = 1\n"
                                       "[attack]\nkind = FALSE_INFO\ntarget = 2\nonset = 30\nduration = 1\n"
                                       "lat_box = 0.1\nlon_box = 0.2\n"),
                               "test.conf");
  EXPECT_EQ(f.scenario.duration, 60.0);
  EXPECT_EQ(f.scenario.seed, 9u);
  ASSERT_EQ(f.scenario.forced.size(), 1u);
  EXPECT_EQ(f.scenario.forced[0].lane, 1);
  EXPECT_EQ(f.scenario.forced[0].entry_speed, 5.0);
  ASSERT_EQ(f.attacks.size(), 3u);
  EXPECT_EQ(f.attacks[0].kind, AttackKind::kDos);
  EXPECT_EQ(f.attacks[0].dos_rate, 500.0);
  EXPECT_EQ(f.attacks[1].victim_id, 2);
  EXPECT_EQ(f.attacks[2].lon_box, 0.2);
}

TEST(ScenarioFileLoad, InvalidSpecsRejected) {
  EXPECT_THROW(load_scenario(entries("[attack]\nkind = DOS\ntarget = 1\nonset = 1\nduration = 1\nrate = 10\n"),
                             "test.conf"),
               ConfigError);
  EXPECT_THROW(load_scenario(entries("duration = 10\n[attack]\nkind = DOS\ntarget = 1\nonset = 9.5\nduration = 1\n"),
                             "test.conf"),
               ConfigError);
  const auto msg = message_of([] { load_scenario(entries("seed = 1\n[attack]\nkind = SPOOF\n"), "test.conf"); });
  EXPECT_NE(msg.find("test.conf:3"), std::string::npos);
  EXPECT_THROW(load_scenario(entries("[weather]\nrain = 1\n"), "test.conf"), ConfigError);
}

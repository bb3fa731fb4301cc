// Exercises the shared library through its C header only.
#include "excon/excon.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <string>

#ifndef EXCON_TEST_DATA
#error "EXCON_TEST_DATA must point at tests/data"
#endif

namespace {

std::string data_path(const char* name) { return std::string(EXCON_TEST_DATA) + "/" + name; }

std::string render(excon_report* r, excon_format f) {
    const char* text = nullptr;
    EXPECT_EQ(excon_report_render(r, f, &text), EXCON_OK);
    return text ? text : "";
}

} // namespace

TEST(CApi, VersionAndStatusNames) {
    EXPECT_STREQ(excon_version(), "0.1.0");
    EXPECT_STREQ(excon_status_name(EXCON_E_PARSE), "parse error");
}

TEST(CApi, Numerics) {
    double v = 0.0;
    ASSERT_EQ(excon_critical_value(0.025, 0.5, &v), EXCON_OK);
    EXPECT_NEAR(v, 2.21, 0.005);
    ASSERT_EQ(excon_bvn_lower_cdf(0.0, 0.0, 0.5, &v), EXCON_OK);
    EXPECT_NEAR(v, 1.0 / 3.0, 1e-12);
    EXPECT_EQ(excon_normal_quantile(1.5, &v), EXCON_E_DOMAIN);
    EXPECT_NE(std::string(excon_last_error()).size(), 0u);
    EXPECT_EQ(excon_bvn_lower_cdf(0.0, 0.0, 2.0, &v), EXCON_E_DOMAIN);
    EXPECT_EQ(excon_normal_cdf(0.0, nullptr), EXCON_E_INVALID_ARGUMENT);
}

TEST(CApi, CombinedTestAndTipping) {
    const excon_arm_summary t{100, 0.6, 1.0}, i{50, 0.0, 1.0}, e{150, 0.0, 1.0};
    excon_test_config cfg = excon_test_config_default();
    EXPECT_EQ(cfg.alpha, 0.025);
    EXPECT_NE(cfg.w_auto, 0);
    excon_test_outcome out{};
    ASSERT_EQ(excon_combined_test(&t, &i, &e, &cfg, &out), EXCON_OK);
    EXPECT_EQ(out.w_used, 0.25);
    EXPECT_TRUE(out.reject);
    excon_tipping tip{};
    ASSERT_EQ(excon_tipping_point(&t, &i, &e, &cfg, &tip), EXCON_OK);
    EXPECT_TRUE(tip.combined_insensitive);

    const excon_arm_summary tiny{1, 0.0, 1.0};
    EXPECT_EQ(excon_combined_test(&tiny, &i, &e, &cfg, &out), EXCON_E_INSUFFICIENT_DATA);
}

TEST(CApi, Power) {
    excon_power_scenario s{0.2, 0.0, 0.2, 0.2, 75.0, 50.0 / 75.0, 75.0, 1.0, 1.0, 1.0, 0.25, 0.025};
    double p = 0.0;
    ASSERT_EQ(excon_power_combined(&s, 0, &p), EXCON_OK);
    EXPECT_NEAR(p, 0.185, 0.0005);
    ASSERT_EQ(excon_power_t1(&s, &p), EXCON_OK);
    EXPECT_NEAR(p, 0.126, 0.0005);
    double d = 0.0;
    ASSERT_EQ(excon_design_sensitivity(0.3, 0.0, 0.2, 0.25, &d), EXCON_OK);
    EXPECT_NEAR(d, 0.6, 1e-12);
    s.theta_star = 0.0;
    EXPECT_EQ(excon_optimal_w(&s, &d), EXCON_E_DOMAIN);
}

TEST(CApi, DatasetLifecycle) {
    excon_dataset* data = nullptr;
    ASSERT_EQ(excon_dataset_load(data_path("trial_small.csv").c_str(), &data), EXCON_OK);
    size_t n = 0, p = 0;
    ASSERT_EQ(excon_dataset_size(data, &n, &p), EXCON_OK);
    EXPECT_EQ(n, 160u);
    EXPECT_EQ(p, 3u);
    excon_arm_summary arms[3];
    ASSERT_EQ(excon_dataset_summaries(data, arms), EXCON_OK);
    EXPECT_EQ(arms[0].n, 40u);
    EXPECT_EQ(arms[1].n, 20u);
    EXPECT_EQ(arms[2].n, 100u);

    excon_test_config cfg = excon_test_config_default();
    excon_report* report = nullptr;
    ASSERT_EQ(excon_run_test(data, "combined", &cfg, &report), EXCON_OK);
    EXPECT_NE(render(report, EXCON_FORMAT_JSON).find("\"command\": \"test\""), std::string::npos);
    excon_report_free(report);

    EXPECT_EQ(excon_run_test(data, "bogus", &cfg, &report), EXCON_E_INVALID_ARGUMENT);

    excon_pairs* pairs = nullptr;
    ASSERT_EQ(excon_run_match(data, 0.2, &report, &pairs), EXCON_OK);
    size_t n_pairs = 0;
    ASSERT_EQ(excon_pairs_size(pairs, &n_pairs), EXCON_OK);
    EXPECT_EQ(n_pairs, 40u);
    excon_report_free(report);
    ASSERT_EQ(excon_run_balance(data, pairs, &report), EXCON_OK);
    excon_report_free(report);
    excon_pairs_free(pairs);
    excon_dataset_free(data);
}

TEST(CApi, DatasetErrors) {
    excon_dataset* data = nullptr;
    EXPECT_EQ(excon_dataset_load(data_path("external_treated.csv").c_str(), &data), EXCON_E_PARSE);
    EXPECT_NE(std::string(excon_last_error()).find(":3:"), std::string::npos);
    EXPECT_EQ(data, nullptr);
    EXPECT_EQ(excon_dataset_load(data_path("bad_header.csv").c_str(), &data), EXCON_E_PARSE);
    EXPECT_EQ(excon_dataset_load(data_path("missing.csv").c_str(), &data), EXCON_E_IO);
    excon_dataset_free(nullptr);
}

TEST(CApi, BuiltinConfigs) {
    excon_config* cfg = nullptr;
    ASSERT_EQ(excon_config_builtin(0, &cfg), EXCON_OK);
    excon_report* report = nullptr;
    ASSERT_EQ(excon_run_power_table(cfg, 0, &report), EXCON_OK);
    const std::string tsv = render(report, EXCON_FORMAT_TSV);
    EXPECT_NE(tsv.find("result\trows\t48"), std::string::npos);
    excon_report_free(report);
    int has = 1;
    uint64_t seed = 0;
    ASSERT_EQ(excon_config_seed(cfg, &has, &seed), EXCON_OK);
    EXPECT_EQ(has, 0);
    excon_config_free(cfg);
}

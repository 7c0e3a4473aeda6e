#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "wzns/wzns.h"

namespace {

std::string take(char* s)
{
    std::string out = s ? s : "";
    wzns_string_free(s);
    return out;
}

struct Config {
    wzns_config* c = nullptr;
    Config() { EXPECT_EQ(wzns_config_create(&c), WZNS_OK); }
    ~Config() { wzns_config_destroy(c); }
};

}  // namespace

TEST(CApi, VersionAndNames)
{
    EXPECT_EQ(std::string(wzns_version()).rfind("wzns ", 0), 0u);
    EXPECT_STREQ(wzns_status_name(WZNS_CONSTRAINT), "constraint");
    EXPECT_STREQ(wzns_status_name(WZNS_UNKNOWN_KEY), "unknown_key");
    char* keys = nullptr;
    ASSERT_EQ(wzns_valid_keys(&keys), WZNS_OK);
    EXPECT_NE(take(keys).find("solver.nu\n"), std::string::npos);
}

TEST(CApi, ConfigErrors)
{
    Config cfg;
    EXPECT_EQ(wzns_config_set(cfg.c, "solver.nu", "2.5"), WZNS_OK);
    EXPECT_EQ(wzns_config_set(cfg.c, "bogus", "1"), WZNS_UNKNOWN_KEY);
    EXPECT_NE(std::string(wzns_last_error()).find("valid keys"), std::string::npos);
    char* rec = nullptr;
    ASSERT_EQ(wzns_last_error_record(&rec), WZNS_OK);
    EXPECT_NE(take(rec).find("\"unknown_key\""), std::string::npos);

    EXPECT_EQ(wzns_config_set(cfg.c, "M", "4"), WZNS_OK);
    EXPECT_EQ(wzns_config_set(cfg.c, "N", "4"), WZNS_OK);
    EXPECT_EQ(wzns_config_validate(cfg.c, "simulate"), WZNS_CONSTRAINT);
    EXPECT_NE(std::string(wzns_last_error()).find("M must be"), std::string::npos);
    EXPECT_EQ(wzns_config_set(cfg.c, "N", "2"), WZNS_OK);
    EXPECT_EQ(wzns_config_validate(cfg.c, "simulate"), WZNS_OK);
    EXPECT_STREQ(wzns_last_error(), "");

    EXPECT_EQ(wzns_config_load_text(cfg.c, "[solver]\nM = x\n"), WZNS_CONFIGURATION);
    EXPECT_EQ(wzns_config_load_file(cfg.c, "/nonexistent/wzns.ini"), WZNS_IO);
    EXPECT_EQ(wzns_config_set(nullptr, "M", "4"), WZNS_INVALID_ARGUMENT);
    EXPECT_EQ(wzns_config_create(nullptr), WZNS_INVALID_ARGUMENT);

    char* text = nullptr;
    ASSERT_EQ(wzns_config_text(cfg.c, &text), WZNS_OK);
    const std::string t = take(text);
    EXPECT_NE(t.find("nu=2.5\n"), std::string::npos);
    EXPECT_NE(t.find("out=wzns_out\n"), std::string::npos);
}

TEST(CApi, RunSimulateInMemory)
{
    Config cfg;
    ASSERT_EQ(wzns_config_load_text(cfg.c, "[solver]\nM=4\nN=1\nT=0.03125\nn=8\n[experiment]\nsave_points=2\n"),
              WZNS_OK);
    std::uint64_t h = 0;
    ASSERT_EQ(wzns_config_hash(cfg.c, &h), WZNS_OK);
    wzns_report* rep = nullptr;
    ASSERT_EQ(wzns_run(cfg.c, "simulate", 0, &rep), WZNS_OK);
    size_t rows = 0, cols = 0;
    ASSERT_EQ(wzns_report_shape(rep, &rows, &cols), WZNS_OK);
    EXPECT_EQ(rows, 257u);  // T/dt steps plus the initial state
    EXPECT_EQ(cols, 7u);
    char* name = nullptr;
    ASSERT_EQ(wzns_report_column_name(rep, 1, &name), WZNS_OK);
    EXPECT_EQ(take(name), "enstrophy");
    double e0 = 0.0;
    ASSERT_EQ(wzns_report_value(rep, 0, 1, &e0), WZNS_OK);
    EXPECT_NEAR(e0, 1.0, 1e-12);  // K = 1
    double dummy;
    EXPECT_EQ(wzns_report_value(rep, rows, 0, &dummy), WZNS_INVALID_ARGUMENT);
    char* json = nullptr;
    ASSERT_EQ(wzns_report_json(rep, &json), WZNS_OK);
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    EXPECT_NE(take(json).find(hex), std::string::npos);
    char* csv = nullptr;
    ASSERT_EQ(wzns_report_records_csv(rep, &csv), WZNS_OK);
    EXPECT_EQ(take(csv).rfind("# experiment=simulate", 0), 0u);
    wzns_report_destroy(rep);

    rep = nullptr;
    EXPECT_EQ(wzns_run(cfg.c, "explode", 0, &rep), WZNS_CONFIGURATION);
    EXPECT_EQ(rep, nullptr);
}

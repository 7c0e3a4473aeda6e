#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_util.hpp"
#include "wzns/config.hpp"

using namespace wzns;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text)
{
    RunConfig c;
    std::istringstream is(text);
    apply_config_text(c, is);
    return c;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

RunConfig small_run(const std::string& dir)
{
    RunConfig c = parse("[solver]\nM = 4\nN = 1\nT = 0.03125\nn = 8\n"
                        "[experiment]\nsamples = 2\nn_list = 4,8\nn_ref = 8\nstratonovich_check = 0\nsave_points = 4\n");
    c.out_dir = (fs::path(testing::TempDir()) / dir).string();
    fs::remove_all(c.out_dir);
    return c;
}

}  // namespace

TEST(Config, EmptyFileGivesDefaults)
{
    const RunConfig c = parse("");
    EXPECT_EQ(canonical_config(c.experiment), canonical_config(ExperimentConfig{}));
    EXPECT_EQ(c.out_dir, "wzns_out");
}

TEST(Config, SectionsBareKeysAndOverrides)
{
    RunConfig c = parse("seed = 9\n[solver]\nnu = 3\nM=6\n[experiment]\nn_list = 8, 16\n[output]\nout = here\n");
    EXPECT_EQ(c.experiment.solver.seed, 9u);
    EXPECT_EQ(c.experiment.solver.nu, 3.0);
    EXPECT_EQ(c.experiment.solver.M, 6);
    EXPECT_EQ(c.experiment.n_list, (std::vector<int>{8, 16}));
    EXPECT_EQ(c.out_dir, "here");
    set_key(c, "", "nu", "5");  // flags are applied after the file
    EXPECT_EQ(c.experiment.solver.nu, 5.0);
}

TEST(Config, UnknownKeysListValidOnes)
{
    try {
        parse("[solver]\nviscocity = 2\n");
        FAIL() << "no error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::unknown_key);
        const std::string m = e.what();
        EXPECT_NE(m.find("viscocity"), std::string::npos);
        EXPECT_NE(m.find("solver.viscosity"), std::string::npos);
        EXPECT_NE(m.find("experiment.n_list"), std::string::npos);
    }
    EXPECT_WZNS_ERROR(parse("[experiment]\nnu = 2\n"), ErrorCode::unknown_key);
    EXPECT_WZNS_ERROR(parse("[physics]\nnu = 2\n"), ErrorCode::unknown_key);
    EXPECT_WZNS_ERROR(parse("[solver]\nM = eight\n"), ErrorCode::configuration);
    EXPECT_WZNS_ERROR(parse("[solver]\nseed = -1\n"), ErrorCode::configuration);
    EXPECT_WZNS_ERROR(parse("[solver]\nnoise = maybe\n"), ErrorCode::configuration);
    EXPECT_WZNS_ERROR(parse("[solver\n"), ErrorCode::configuration);
}

TEST(Config, Constraints)
{
    RunConfig c = parse("M = 4\nN = 4\n");
    try {
        validate(c, "simulate");
        FAIL() << "no error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::constraint);
        EXPECT_NE(std::string(e.what()).find("M must be ≥ 2N"), std::string::npos);
    }
    EXPECT_NO_THROW(validate(parse(""), "simulate"));
    EXPECT_NO_THROW(validate(parse(""), "wz-convergence"));
    EXPECT_WZNS_ERROR(validate(parse("dt = 0.003\n"), "simulate"), ErrorCode::constraint);  // h/4 = 1/512
    EXPECT_WZNS_ERROR(validate(parse("n_ref = 2048\n"), "wz-convergence"), ErrorCode::constraint);  // dt > T/8192
    EXPECT_WZNS_ERROR(validate(parse("alpha = 0.3\n"), "simulate"), ErrorCode::constraint);
    EXPECT_WZNS_ERROR(validate(parse("alpha = 0.6\n"), "simulate"), ErrorCode::constraint);
    EXPECT_NO_THROW(validate(parse("alpha = 0.5\n"), "simulate"));
    EXPECT_WZNS_ERROR(validate(parse("gamma = 0\n"), "simulate"), ErrorCode::constraint);
    EXPECT_WZNS_ERROR(validate(parse("delta = -1\n"), "simulate"), ErrorCode::constraint);
    EXPECT_WZNS_ERROR(validate(parse("n = 24\n"), "simulate"), ErrorCode::constraint);
    EXPECT_WZNS_ERROR(validate(parse("n_list = 8,12\n"), "wz-convergence"), ErrorCode::constraint);
    EXPECT_WZNS_ERROR(validate(parse("M = 6\n"), "scaling-limit"), ErrorCode::constraint);  // N_list has 4
    EXPECT_WZNS_ERROR(validate(parse("mode = ito\n"), "simulate"), ErrorCode::constraint);
    EXPECT_WZNS_ERROR(validate(parse(""), "plot"), ErrorCode::configuration);
}

TEST(Config, SimulateZeroFieldWritesFiles)
{
    RunConfig c = small_run("sim_zero");
    set_key(c, "", "initial", "zero");
    const RunOutcome r = run(c, "simulate");
    for (double e : r.report.column("enstrophy")) EXPECT_EQ(e, 0.0);
    const fs::path root(c.out_dir);
    ASSERT_TRUE(fs::exists(root / "report.json"));
    const std::string csv = slurp(root / "samples" / "trajectory.csv");
    EXPECT_EQ(csv.rfind("# experiment=simulate", 0), 0u);
    EXPECT_NE(csv.find("seed=1"), std::string::npos);
    for (int i = 0; i <= 4; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "state_%05d.bin", i);
        const LoadedField f = load_field((root / "states" / name).string());
        EXPECT_EQ(f.config_hash, r.report.config_hash);
        EXPECT_EQ(f.field.max_abs(), 0.0);
    }
    const auto j = nlohmann::json::parse(slurp(root / "report.json"));
    EXPECT_EQ(j["command"], "simulate");
    EXPECT_EQ(j["config"]["initial"], "zero");
}

TEST(Config, RepeatedRunIsByteIdentical)
{
    RunConfig a = small_run("rep_a");
    RunConfig b = small_run("rep_b");
    run(a, "wz-convergence");
    run(b, "wz-convergence");
    const std::string x = slurp(fs::path(a.out_dir) / "samples" / "records.csv");
    EXPECT_FALSE(x.empty());
    EXPECT_EQ(x, slurp(fs::path(b.out_dir) / "samples" / "records.csv"));
}

TEST(Config, ErrorRecord)
{
    const auto j = nlohmann::json::parse(error_record(15, "constraint", "M must be ≥ 2N"));
    EXPECT_EQ(j["error"]["status"], 15);
    EXPECT_EQ(j["error"]["code"], "constraint");
}

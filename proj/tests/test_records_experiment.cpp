#include <gtest/gtest.h>

#include <sstream>

#include "voterlab/experiment.hpp"
#include "voterlab/records.hpp"

using namespace voterlab;

namespace {

RunRecord sample_record() {
    RunRecord r;
    r.run_id = 3;
    r.model_name = "mix";
    r.p = 0.1;
    r.q = 1.0 / 3.0;
    r.L = 32;
    r.convention = Convention::exact;
    r.replicate = 7;
    r.seed = 0xfedcba9876543210ULL;
    r.interface_length = 123;
    r.displacement_max = 4.5 / 7.0;
    r.class_origin_size = 9;
    r.class_max_size = 40;
    r.conn_origin_size = 5;
    r.conn_max_size = 30;
    r.cuts_largest = true;
    r.events = 99999;
    return r;
}

std::string csv_of(const std::vector<RunRecord>& rows) {
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.models = {parse_model("voter"), parse_model("cow"), parse_model("mid:0.3:0.5")};
    cfg.L_list = {6, 11};
    cfg.m = 4;
    cfg.master_seed = 2024;
    return cfg;
}

}  // namespace

TEST(Records, RoundTrip) {
    const RunRecord r = sample_record();
    std::istringstream is(csv_of({r}));
    const auto back = read_csv(is);
    ASSERT_EQ(back.size(), 1U);
    const RunRecord& b = back[0];
    EXPECT_EQ(b.run_id, r.run_id);
    EXPECT_EQ(b.model_name, r.model_name);
    EXPECT_EQ(b.p, r.p);
    EXPECT_EQ(b.q, r.q);
    EXPECT_EQ(b.L, r.L);
    EXPECT_EQ(b.convention, r.convention);
    EXPECT_EQ(b.seed, r.seed);
    EXPECT_EQ(b.displacement_max, r.displacement_max);
    EXPECT_EQ(b.cuts_largest, r.cuts_largest);
    EXPECT_EQ(b.events, r.events);
    EXPECT_EQ(csv_of(back), csv_of({r}));
}

TEST(Records, HeaderMatchesColumns) {
    std::ostringstream os;
    write_csv_header(os);
    std::string expected;
    for (std::size_t k = 0; k < kCsvColumns.size(); ++k) {
        if (k) expected += ',';
        expected += kCsvColumns[k];
    }
    EXPECT_EQ(os.str(), expected + "\n");
}

TEST(Records, ParseErrors) {
    {
        std::istringstream is("run_id,model\n");
        EXPECT_THROW(read_csv(is), ParseError);
    }
    {
        std::string text = csv_of({sample_record()});
        text.replace(text.find(",32,"), 4, ",xx,");
        std::istringstream is(text);
        try {
            read_csv(is);
            FAIL() << "expected ParseError";
        } catch (const ParseError& e) {
            EXPECT_NE(std::string(e.what()).find("L"), std::string::npos);
        }
    }
    {
        std::string text = csv_of({sample_record()});
        text.pop_back();
        text += ",extra\n";
        std::istringstream is(text);
        EXPECT_THROW(read_csv(is), ParseError);
    }
    EXPECT_THROW(parse_convention("sideways"), ParseError);
}

TEST(Records, ConventionSides) {
    EXPECT_EQ(simulated_side(128, Convention::appendix), 130);
    EXPECT_EQ(simulated_side(128, Convention::exact), 128);
    EXPECT_EQ(parse_convention("exact"), Convention::exact);
}

TEST(Experiment, ParseModels) {
    EXPECT_EQ(parse_model("cow").params.q, 0.0);
    EXPECT_EQ(parse_model("cow").params.p, 1.0);
    const NamedModel m = parse_model(" mine:0.25:0.75 ");
    EXPECT_EQ(m.name, "mine");
    EXPECT_EQ(m.params.p, 0.25);
    EXPECT_EQ(m.params.q, 0.75);
    EXPECT_THROW(parse_model("bogus"), ConfigError);
    EXPECT_THROW(parse_model("x:1.5:0"), ConfigError);
    EXPECT_THROW(parse_model("x:a:0"), ConfigError);
}

TEST(Experiment, ConfigText) {
    std::istringstream is(
        "# sweep\n[run]\nmodels = [voter, \"cow\", w:0.1:0.2]\nL = [8, 16]  # sizes\n"
        "m = 3\nseed = 11\nconvention = exact\nthreads = 2\n");
    ExperimentConfig cfg;
    for (const auto& [k, v] : parse_config_text(is)) apply_setting(cfg, k, v);
    ASSERT_EQ(cfg.models.size(), 3U);
    EXPECT_EQ(cfg.models[2].name, "w");
    EXPECT_EQ(cfg.L_list, (std::vector<int>{8, 16}));
    EXPECT_EQ(cfg.m, 3U);
    EXPECT_EQ(cfg.master_seed, 11U);
    EXPECT_EQ(cfg.convention, Convention::exact);
    EXPECT_EQ(cfg.threads, 2U);
    EXPECT_NO_THROW(cfg.validate());

    EXPECT_THROW(apply_setting(cfg, "colour", "red"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "m", "three"), ConfigError);
    std::istringstream bad("models voter\n");
    EXPECT_THROW(parse_config_text(bad), ConfigError);
    ExperimentConfig tiny;
    tiny.models = {parse_model("voter")};
    tiny.L_list = {2};
    EXPECT_THROW(tiny.validate(), ConfigError);
    tiny.L_list = {4};
    tiny.models.push_back(parse_model("voter"));
    EXPECT_THROW(tiny.validate(), ConfigError);
}

TEST(Experiment, RowCountAndOrder) {
    const ExperimentConfig cfg = small_config();
    const auto rows = run_experiment(cfg);
    ASSERT_EQ(rows.size(), 3U * 2U * 4U);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        EXPECT_EQ(rows[k].run_id, k);
        EXPECT_TRUE(rows[k].ok());
        EXPECT_EQ(rows[k].replicate, k % 4);
        EXPECT_EQ(rows[k].L, cfg.L_list[(k / 4) % 2]);
        EXPECT_EQ(rows[k].model_name, cfg.models[k / 8].name);
        EXPECT_GE(rows[k].interface_length, 3U);
    }
}

TEST(Experiment, ThreadCountDoesNotChangeOutput) {
    ExperimentConfig cfg = small_config();
    cfg.threads = 1;
    const std::string one = csv_of(run_experiment(cfg));
    cfg.threads = 4;
    const std::string four = csv_of(run_experiment(cfg));
    EXPECT_EQ(one, four);
    cfg.master_seed = 2025;
    EXPECT_NE(csv_of(run_experiment(cfg)), one);
}

TEST(Experiment, RunawayRowsAreFlagged) {
    ExperimentConfig cfg;
    cfg.models = {parse_model("voter")};
    cfg.L_list = {20};
    cfg.m = 2;
    cfg.event_cap = 5;
    const auto rows = run_experiment(cfg);
    ASSERT_EQ(rows.size(), 2U);
    for (const auto& r : rows) EXPECT_EQ(r.status, "runaway");
}

TEST(Experiment, SeedsAreDistinctAcrossTasks) {
    ExperimentConfig cfg = small_config();
    cfg.m = 500;
    EXPECT_NO_THROW(plan_tasks(cfg));
}

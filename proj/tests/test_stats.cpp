#include <gtest/gtest.h>

#include <cmath>

#include "voterlab/stats.hpp"

using namespace voterlab;

TEST(Stats, TildeExponent) {
    EXPECT_NEAR(tilde_exponent(std::pow(100.0, 1.75), 100), 1.75, 1e-14);
    EXPECT_DOUBLE_EQ(tilde_exponent(1.0, 57), 0.0);
    EXPECT_THROW(tilde_exponent(0.0, 10), DomainError);
    EXPECT_THROW(tilde_exponent(-1.0, 10), DomainError);
}

TEST(Stats, HatExponent) {
    EXPECT_NEAR(hat_exponent(100.0, 100.0 * std::pow(2.0, 1.5)), 1.5, 1e-14);
    EXPECT_DOUBLE_EQ(hat_exponent(7.0, 7.0), 0.0);
    EXPECT_THROW(hat_exponent(0.0, 1.0), DomainError);
}

TEST(Stats, OlsExactFit) {
    const OlsFit fit = ols_loglog({{2, 4}, {4, 16}, {8, 64}});
    EXPECT_NEAR(fit.slope, 2.0, 1e-14);
    EXPECT_NEAR(fit.intercept, 0.0, 1e-14);
    EXPECT_EQ(fit.slope_se, 0.0);
}

TEST(Stats, OlsMatchesClosedFormOnNoisyData) {
    // y = log(v): points chosen so the hand-computed fit is slope 1, intercept 0.1, SSR 0.02
    const double e = 0.1;
    const std::vector<LogLogPoint> pts{{std::exp(0.0), std::exp(0.1 + 0.0)},
                                       {std::exp(1.0), std::exp(0.1 + 1.0 + e)},
                                       {std::exp(2.0), std::exp(0.1 + 2.0 - 2 * e)},
                                       {std::exp(3.0), std::exp(0.1 + 3.0 + e)}};
    const OlsFit fit = ols_loglog(pts);
    // x = 0..3, mean 1.5, Sxx = 5; residual pattern (0, e, -2e, e) has zero mean and
    // covariance with x of (0*-1.5 + e*-0.5 + -2e*0.5 + e*1.5) = 0, so the slope is exactly 1
    EXPECT_NEAR(fit.slope, 1.0, 1e-12);
    EXPECT_NEAR(fit.intercept, 0.1, 1e-12);
    EXPECT_NEAR(fit.residual_se, std::sqrt(6 * e * e / 2), 1e-12);
    EXPECT_NEAR(fit.slope_se, std::sqrt(6 * e * e / 2 / 5), 1e-12);
    EXPECT_EQ(fit.df, 2U);
}

TEST(Stats, OlsRejectsDegenerateDesigns) {
    EXPECT_THROW(ols_loglog({{8, 1}, {8, 2}, {8, 3}}), RankError);
    EXPECT_THROW(ols_loglog({{8, 1}, {16, 2}}), RankError);
    EXPECT_THROW(ols_loglog({{8, 1}, {16, 0}, {32, 1}}), DomainError);
}

namespace {

std::vector<RunRecord> power_law_records(double c, double beta, std::vector<int> Ls, int per_L) {
    std::vector<RunRecord> out;
    for (int L : Ls) {
        for (int k = 0; k < per_L; ++k) {
            RunRecord r;
            r.model_name = "synthetic";
            r.L = L;
            r.interface_length = static_cast<std::uint64_t>(std::llround(c * std::pow(L, beta)));
            r.displacement_max = c * std::pow(L, beta);
            r.class_origin_size = r.class_max_size = r.conn_origin_size = r.conn_max_size = r.interface_length;
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace

TEST(Stats, SummarizeEmpty) {
    const EstimatorReport report = summarize({});
    EXPECT_TRUE(report.tables.empty());
    EXPECT_TRUE(report.cuts.empty());
}

TEST(Stats, ExactPowerLawIsRecovered) {
    const auto records = power_law_records(1.0, 2.0, {16, 32, 64, 128}, 3);
    const EstimatorReport report = summarize(records);
    for (Statistic s : kAllStatistics) {
        const StatisticTable* t = report.find("synthetic", s);
        ASSERT_NE(t, nullptr);
        for (const auto& lv : t->levels) EXPECT_NEAR(lv.tilde, 2.0, 1e-14);
        ASSERT_EQ(t->hats.size(), 4U);
        for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(*t->hats[k].value, 2.0, 1e-14);
        EXPECT_FALSE(t->hats[3].value);  // no L = 256 data
        ASSERT_TRUE(t->ols);
        EXPECT_NEAR(t->ols->slope, 2.0, 1e-14);
        EXPECT_EQ(t->ols->slope_se, 0.0);
    }
}

TEST(Stats, ScaleShiftsOnlyTilde) {
    const double c = 3.7;
    const double beta = 1.3;
    const std::vector<int> Ls{10, 20, 40, 80};
    const EstimatorReport base = summarize(power_law_records(1.0, beta, Ls, 2));
    const EstimatorReport scaled = summarize(power_law_records(c, beta, Ls, 2));
    const StatisticTable* a = base.find("synthetic", Statistic::displacement_max);
    const StatisticTable* b = scaled.find("synthetic", Statistic::displacement_max);
    for (std::size_t k = 0; k < Ls.size(); ++k) {
        EXPECT_NEAR(b->levels[k].tilde, beta + std::log(c) / std::log(Ls[k]), 1e-13);
        EXPECT_NEAR(b->levels[k].tilde - a->levels[k].tilde, std::log(c) / std::log(Ls[k]), 1e-13);
        if (a->hats[k].value) {
            EXPECT_NEAR(*b->hats[k].value, *a->hats[k].value, 1e-13);
        }
    }
    EXPECT_NEAR(b->ols->slope, a->ols->slope, 1e-13);
    EXPECT_NEAR(b->ols->slope, beta, 1e-13);
    EXPECT_EQ(b->ols->slope_se, 0.0);
}

TEST(Stats, FailedRowsAreIgnoredAndCutsAggregated) {
    auto records = power_law_records(1.0, 1.0, {8, 16, 32}, 4);
    records[0].status = "runaway";
    records[0].interface_length = 999999;
    records[1].cuts_largest = true;
    const EstimatorReport report = summarize(records);
    const StatisticTable* t = report.find("synthetic", Statistic::interface_length);
    EXPECT_EQ(t->levels[0].n, 3U);
    EXPECT_DOUBLE_EQ(t->levels[0].mean, 8.0);
    ASSERT_EQ(report.cuts.size(), 3U);
    EXPECT_DOUBLE_EQ(report.cuts[0].proportion, 1.0 / 3.0);
}

TEST(Stats, DeltaMethodStandardError) {
    EXPECT_NEAR(hat_exponent_se(10, 0.1, 40, 0.4), std::sqrt(2 * 0.01 * 0.01) / std::log(2.0), 1e-15);
}

#ifndef VOTERLAB_STATS_HPP
#define VOTERLAB_STATS_HPP

//! \file stats.hpp
//! Scaling-exponent estimators.
//!
//!   tilde(L)    = log(mean at L) / log(L)
//!   hat(L)      = log2(mean at 2L / mean at L)
//!   ols slope   = least-squares slope of per-sample log(value) on log(L)
//!
//! Under the appendix convention the means come from (L+2)-boxes while the
//! formulas keep the nominal L.

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "records.hpp"

namespace voterlab {

class RankError : public DomainError {
  public:
    using DomainError::DomainError;
};

inline double tilde_exponent(double mean_value, int L, Convention convention = Convention::appendix) {
    // Both conventions divide by log of the nominal L; they differ in which box produced the mean.
    (void)convention;
    if (!(mean_value > 0.0)) throw DomainError("tilde exponent needs a positive mean");
    if (L < 3) throw DomainError("tilde exponent needs L >= 3");
    return std::log(mean_value) / std::log(static_cast<double>(L));
}

inline double hat_exponent(double mean_L, double mean_2L) {
    if (!(mean_L > 0.0) || !(mean_2L > 0.0)) throw DomainError("hat exponent needs positive means");
    return std::log2(mean_2L / mean_L);
}

// Delta-method standard error of hat from the two sample means' standard errors.
inline double hat_exponent_se(double mean_L, double se_L, double mean_2L, double se_2L) {
    const double a = se_L / mean_L;
    const double b = se_2L / mean_2L;
    return std::sqrt(a * a + b * b) / std::log(2.0);
}

struct ResidualSummary {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
    double residual_se = 0.0;
    std::size_t n = 0;
    std::size_t df = 0;
    ResidualSummary residuals;
};

namespace detail {

// Linear-interpolation quantile (R's default, type 7) of sorted data.
inline double quantile_sorted(const std::vector<double>& v, double prob) {
    const double h = (static_cast<double>(v.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace detail

struct LogLogPoint {
    double L = 0.0;
    double value = 0.0;
};

// Ordinary least squares of log(value) on log(L) with the classical unbiased residual variance.
inline OlsFit ols_loglog(const std::vector<LogLogPoint>& points) {
    if (points.size() < 3) throw RankError("log-log regression needs at least 3 points");
    std::set<double> distinct;
    for (const auto& pt : points) {
        if (!(pt.value > 0.0) || !(pt.L > 0.0)) throw DomainError("log-log regression needs positive L and values");
        distinct.insert(pt.L);
    }
    if (distinct.size() < 2) throw RankError("log-log regression needs at least 2 distinct L");

    const auto n = static_cast<double>(points.size());
    double mx = 0.0;
    double my = 0.0;
    for (const auto& pt : points) {
        mx += std::log(pt.L);
        my += std::log(pt.value);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& pt : points) {
        const double dx = std::log(pt.L) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(pt.value) - my);
    }
    OlsFit fit;
    fit.n = points.size();
    fit.df = points.size() - 2;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    std::vector<double> res;
    res.reserve(points.size());
    double ssr = 0.0;
    for (const auto& pt : points) {
        double r = std::log(pt.value) - (fit.intercept + fit.slope * std::log(pt.L));
        // Residuals at the rounding level of the data are exact zeros.
        if (std::abs(r) <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(std::log(pt.value))))
            r = 0.0;
        res.push_back(r);
        ssr += r * r;
    }
    const double sigma2 = ssr / static_cast<double>(fit.df);
    fit.residual_se = std::sqrt(sigma2);
    fit.slope_se = std::sqrt(sigma2 / sxx);
    fit.intercept_se = std::sqrt(sigma2 * (1.0 / n + mx * mx / sxx));
    std::sort(res.begin(), res.end());
    fit.residuals = {res.front(), detail::quantile_sorted(res, 0.25), detail::quantile_sorted(res, 0.5),
                     detail::quantile_sorted(res, 0.75), res.back()};
    return fit;
}

enum class Statistic {
    interface_length,
    displacement_max,
    class_origin_size,
    class_max_size,
    conn_origin_size,
    conn_max_size,
};

inline constexpr std::array<Statistic, 6> kAllStatistics{
    Statistic::interface_length, Statistic::displacement_max, Statistic::class_origin_size,
    Statistic::class_max_size,   Statistic::conn_origin_size, Statistic::conn_max_size};

inline const char* to_string(Statistic s) {
    switch (s) {
        case Statistic::interface_length: return "interface_length";
        case Statistic::displacement_max: return "displacement_max";
        case Statistic::class_origin_size: return "class_origin_size";
        case Statistic::class_max_size: return "class_max_size";
        case Statistic::conn_origin_size: return "conn_origin_size";
        case Statistic::conn_max_size: return "conn_max_size";
    }
    return "?";
}

// Exponent symbol each statistic estimates.
inline const char* exponent_name(Statistic s) {
    switch (s) {
        case Statistic::interface_length: return "d";
        case Statistic::displacement_max: return "alpha";
        case Statistic::class_origin_size: return "gamma";
        case Statistic::class_max_size: return "beta";
        case Statistic::conn_origin_size: return "gamma'";
        case Statistic::conn_max_size: return "beta'";
    }
    return "?";
}

inline double value_of(const RunRecord& r, Statistic s) {
    switch (s) {
        case Statistic::interface_length: return static_cast<double>(r.interface_length);
        case Statistic::displacement_max: return r.displacement_max;
        case Statistic::class_origin_size: return static_cast<double>(r.class_origin_size);
        case Statistic::class_max_size: return static_cast<double>(r.class_max_size);
        case Statistic::conn_origin_size: return static_cast<double>(r.conn_origin_size);
        case Statistic::conn_max_size: return static_cast<double>(r.conn_max_size);
    }
    return 0.0;
}

struct LevelSummary {
    int L = 0;
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
    double tilde = 0.0;
};

struct HatCell {
    int L = 0;
    std::optional<double> value;  // absent when no 2L data
    std::optional<double> se;     // delta method; not part of the published tables
};

struct StatisticTable {
    std::string model;
    Convention convention = Convention::appendix;
    Statistic statistic = Statistic::interface_length;
    std::vector<LevelSummary> levels;
    std::vector<HatCell> hats;
    std::optional<OlsFit> ols;
    std::size_t ols_dropped = 0;  // samples with nonpositive value left out of the regression
};

struct CutsSummary {
    std::string model;
    Convention convention = Convention::appendix;
    int L = 0;
    std::size_t n = 0;
    double proportion = 0.0;
};

struct EstimatorReport {
    std::vector<StatisticTable> tables;
    std::vector<CutsSummary> cuts;

    const StatisticTable* find(const std::string& model, Statistic s) const {
        for (const auto& t : tables)
            if (t.model == model && t.statistic == s) return &t;
        return nullptr;
    }
};

inline StatisticTable summarize_statistic(const std::string& model, Convention convention, Statistic stat,
                                          const std::map<int, std::vector<double>>& by_L) {
    StatisticTable table{model, convention, stat, {}, {}, std::nullopt, 0};
    std::vector<LogLogPoint> points;
    for (const auto& [L, values] : by_L) {
        LevelSummary lv;
        lv.L = L;
        lv.n = values.size();
        double sum = 0.0;
        for (double v : values) sum += v;
        lv.mean = sum / static_cast<double>(lv.n);
        double ss = 0.0;
        for (double v : values) ss += (v - lv.mean) * (v - lv.mean);
        lv.sd = lv.n > 1 ? std::sqrt(ss / static_cast<double>(lv.n - 1)) : 0.0;
        lv.se = lv.sd / std::sqrt(static_cast<double>(lv.n));
        lv.tilde = lv.mean > 0.0 && L >= 3 ? tilde_exponent(lv.mean, L, convention) : std::nan("");
        table.levels.push_back(lv);
        for (double v : values) {
            if (v > 0.0) {
                points.push_back({static_cast<double>(L), v});
            } else {
                ++table.ols_dropped;
            }
        }
    }
    for (const auto& lv : table.levels) {
        HatCell cell{lv.L, std::nullopt, std::nullopt};
        const auto it = std::find_if(table.levels.begin(), table.levels.end(),
                                     [&](const LevelSummary& o) { return o.L == 2 * lv.L; });
        if (it != table.levels.end() && lv.mean > 0.0 && it->mean > 0.0) {
            cell.value = hat_exponent(lv.mean, it->mean);
            cell.se = hat_exponent_se(lv.mean, lv.se, it->mean, it->se);
        }
        table.hats.push_back(cell);
    }
    try {
        table.ols = ols_loglog(points);
    } catch (const DomainError&) {
        table.ols.reset();
    }
    return table;
}

// Groups successful records by (model, convention); failed rows are ignored.
inline EstimatorReport summarize(const std::vector<RunRecord>& records) {
    EstimatorReport report;
    std::vector<std::pair<std::string, Convention>> groups;
    for (const auto& r : records) {
        if (!r.ok()) continue;
        const std::pair<std::string, Convention> key{r.model_name, r.convention};
        if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
    }
    for (const auto& [model, convention] : groups) {
        for (Statistic stat : kAllStatistics) {
            std::map<int, std::vector<double>> by_L;
            for (const auto& r : records)
                if (r.ok() && r.model_name == model && r.convention == convention) by_L[r.L].push_back(value_of(r, stat));
            report.tables.push_back(summarize_statistic(model, convention, stat, by_L));
        }
        std::map<int, std::pair<std::size_t, std::size_t>> cuts;
        for (const auto& r : records) {
            if (!r.ok() || r.model_name != model || r.convention != convention) continue;
            auto& [n, k] = cuts[r.L];
            ++n;
            k += r.cuts_largest ? 1 : 0;
        }
        for (const auto& [L, nk] : cuts) {
            report.cuts.push_back({model, convention, L, nk.first,
                                   static_cast<double>(nk.second) / static_cast<double>(nk.first)});
        }
    }
    return report;
}

namespace detail {

inline std::string fmt_fixed(double v, int digits) {
    if (std::isnan(v)) return "NA";
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

}  // namespace detail

// Long-format CSV: model,convention,statistic,exponent,estimator,L,value,se
inline void write_report_csv(std::ostream& os, const EstimatorReport& report) {
    os << "model,convention,statistic,exponent,estimator,L,value,se\n";
    auto row = [&](const StatisticTable& t, const char* est, const std::string& L, const std::string& v,
                   const std::string& se) {
        os << t.model << ',' << to_string(t.convention) << ',' << to_string(t.statistic) << ','
           << exponent_name(t.statistic) << ',' << est << ',' << L << ',' << v << ',' << se << '\n';
    };
    for (const auto& t : report.tables) {
        for (const auto& lv : t.levels) {
            row(t, "mean", std::to_string(lv.L), format_double(lv.mean), format_double(lv.se));
            row(t, "tilde", std::to_string(lv.L), std::isnan(lv.tilde) ? "NA" : format_double(lv.tilde), "NA");
        }
        for (const auto& h : t.hats) {
            row(t, "hat", std::to_string(h.L), h.value ? format_double(*h.value) : "NA",
                h.se ? format_double(*h.se) : "NA");
        }
        if (t.ols) {
            row(t, "ols_slope", "all", format_double(t.ols->slope), format_double(t.ols->slope_se));
            row(t, "ols_intercept", "all", format_double(t.ols->intercept), format_double(t.ols->intercept_se));
        }
    }
    for (const auto& c : report.cuts) {
        os << c.model << ',' << to_string(c.convention) << ",cuts_largest,NA,proportion," << c.L << ','
           << format_double(c.proportion) << ','
           << format_double(std::sqrt(c.proportion * (1.0 - c.proportion) / static_cast<double>(c.n))) << '\n';
    }
}

// Aligned text in the shape of the usual exponent tables: hat and tilde per L, then the OLS slope.
inline void write_report_text(std::ostream& os, const EstimatorReport& report) {
    using detail::fmt_fixed;
    for (Statistic stat : kAllStatistics) {
        bool header = false;
        for (const auto& t : report.tables) {
            if (t.statistic != stat || t.levels.empty()) continue;
            if (!header) {
                os << "== " << to_string(stat) << " (exponent " << exponent_name(stat) << ")\n";
                header = true;
            }
            os << "  " << t.model << " [" << to_string(t.convention) << "]\n";
            os << "    " << std::left << std::setw(8) << "L" << std::setw(10) << "n" << std::setw(16) << "mean"
               << std::setw(10) << "tilde" << std::setw(10) << "hat" << "hat_se\n";
            for (std::size_t k = 0; k < t.levels.size(); ++k) {
                const auto& lv = t.levels[k];
                const auto& h = t.hats[k];
                os << "    " << std::setw(8) << lv.L << std::setw(10) << lv.n << std::setw(16) << fmt_fixed(lv.mean, 4)
                   << std::setw(10) << fmt_fixed(lv.tilde, 4) << std::setw(10)
                   << (h.value ? fmt_fixed(*h.value, 4) : std::string("-")) << (h.se ? fmt_fixed(*h.se, 4) : "-")
                   << '\n';
            }
            if (t.ols) {
                os << "    ols slope " << fmt_fixed(t.ols->slope, 6) << " (s.e. " << fmt_fixed(t.ols->slope_se, 6)
                   << "), intercept " << fmt_fixed(t.ols->intercept, 6) << ", residual s.e. "
                   << fmt_fixed(t.ols->residual_se, 4) << " on " << t.ols->df << " df\n";
                os << "    residuals min " << fmt_fixed(t.ols->residuals.min, 5) << " q1 "
                   << fmt_fixed(t.ols->residuals.q1, 5) << " median " << fmt_fixed(t.ols->residuals.median, 5)
                   << " q3 " << fmt_fixed(t.ols->residuals.q3, 5) << " max " << fmt_fixed(t.ols->residuals.max, 5)
                   << '\n';
            }
            if (t.ols_dropped > 0) os << "    (" << t.ols_dropped << " nonpositive samples left out of the fit)\n";
            os << std::right;
        }
    }
    if (!report.cuts.empty()) {
        os << "== largest class cut by the interface\n";
        for (const auto& c : report.cuts) {
            os << "  " << c.model << " [" << to_string(c.convention) << "] L=" << c.L << " n=" << c.n
               << " proportion " << fmt_fixed(c.proportion, 4) << '\n';
        }
    }
}

}  // namespace voterlab

#endif  // VOTERLAB_STATS_HPP

#ifndef VOTERLAB_RECORDS_HPP
#define VOTERLAB_RECORDS_HPP

//! \file records.hpp
//! Per-sample observables and their flat CSV form.
//!
//! Columns, in order:
//!   run_id, model_name, p, q, L, convention, replicate, seed, status,
//!   interface_length, displacement_max, class_origin_size, class_max_size,
//!   conn_origin_size, conn_max_size, cuts_largest, events, elapsed_ms
//! UTF-8, '\n' line endings, '.' decimal separator.

#include <array>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace voterlab {

// exact: simulate on the L-box. appendix: simulate on the (L+2)-box, keep L in estimator denominators.
enum class Convention { exact, appendix };

inline const char* to_string(Convention c) { return c == Convention::exact ? "exact" : "appendix"; }

inline Convention parse_convention(std::string_view s) {
    if (s == "exact") return Convention::exact;
    if (s == "appendix") return Convention::appendix;
    throw ParseError("unknown convention '" + std::string(s) + "' (expected exact|appendix)");
}

inline int simulated_side(int nominal_L, Convention c) { return c == Convention::appendix ? nominal_L + 2 : nominal_L; }

struct RunRecord {
    std::uint64_t run_id = 0;
    std::string model_name;
    double p = 0.0;
    double q = 0.0;
    int L = 0;  // nominal side length
    Convention convention = Convention::appendix;
    std::uint64_t replicate = 0;
    std::uint64_t seed = 0;
    std::string status = "ok";
    std::uint64_t interface_length = 0;
    double displacement_max = 0.0;
    std::uint64_t class_origin_size = 0;
    std::uint64_t class_max_size = 0;
    std::uint64_t conn_origin_size = 0;
    std::uint64_t conn_max_size = 0;
    bool cuts_largest = false;
    std::uint64_t events = 0;
    std::uint64_t elapsed_ms = 0;

    bool ok() const noexcept { return status == "ok"; }
};

inline constexpr std::array<std::string_view, 18> kCsvColumns{
    "run_id",           "model_name",     "p",                "q",
    "L",                "convention",     "replicate",        "seed",
    "status",           "interface_length", "displacement_max", "class_origin_size",
    "class_max_size",   "conn_origin_size", "conn_max_size",  "cuts_largest",
    "events",           "elapsed_ms"};

inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline void write_csv_header(std::ostream& os) {
    for (std::size_t k = 0; k < kCsvColumns.size(); ++k) os << (k ? "," : "") << kCsvColumns[k];
    os << '\n';
}

inline void write_csv_row(std::ostream& os, const RunRecord& r) {
    os << r.run_id << ',' << r.model_name << ',' << format_double(r.p) << ',' << format_double(r.q) << ',' << r.L
       << ',' << to_string(r.convention) << ',' << r.replicate << ',' << r.seed << ',' << r.status << ','
       << r.interface_length << ',' << format_double(r.displacement_max) << ',' << r.class_origin_size << ','
       << r.class_max_size << ',' << r.conn_origin_size << ',' << r.conn_max_size << ',' << (r.cuts_largest ? 1 : 0)
       << ',' << r.events << ',' << r.elapsed_ms << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<RunRecord>& records) {
    write_csv_header(os);
    for (const auto& r : records) write_csv_row(os, r);
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view field, std::size_t row, std::string_view column) {
    T value{};
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw ParseError("row " + std::to_string(row) + ", column '" + std::string(column) + "': cannot parse '" +
                         std::string(field) + "'");
    }
    return value;
}

}  // namespace detail

// Throws ParseError naming the offending row (1-based, header = row 1) and column.
inline std::vector<RunRecord> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("empty CSV: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = detail::split_fields(line);
    for (std::size_t k = 0; k < kCsvColumns.size(); ++k) {
        if (k >= header.size() || header[k] != kCsvColumns[k]) {
            throw ParseError("header column " + std::to_string(k + 1) + ": expected '" + std::string(kCsvColumns[k]) +
                             "', found '" + (k < header.size() ? std::string(header[k]) : std::string("<missing>")) +
                             "'");
        }
    }
    if (header.size() != kCsvColumns.size()) throw ParseError("header has extra columns");

    std::vector<RunRecord> out;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = detail::split_fields(line);
        if (f.size() != kCsvColumns.size()) {
            throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(kCsvColumns.size()) +
                             " fields, found " + std::to_string(f.size()));
        }
        using detail::parse_number;
        RunRecord r;
        r.run_id = parse_number<std::uint64_t>(f[0], row, kCsvColumns[0]);
        r.model_name = std::string(f[1]);
        r.p = parse_number<double>(f[2], row, kCsvColumns[2]);
        r.q = parse_number<double>(f[3], row, kCsvColumns[3]);
        r.L = parse_number<int>(f[4], row, kCsvColumns[4]);
        try {
            r.convention = parse_convention(f[5]);
        } catch (const ParseError& e) {
            throw ParseError("row " + std::to_string(row) + ", column 'convention': " + e.what());
        }
        r.replicate = parse_number<std::uint64_t>(f[6], row, kCsvColumns[6]);
        r.seed = parse_number<std::uint64_t>(f[7], row, kCsvColumns[7]);
        r.status = std::string(f[8]);
        r.interface_length = parse_number<std::uint64_t>(f[9], row, kCsvColumns[9]);
        r.displacement_max = parse_number<double>(f[10], row, kCsvColumns[10]);
        r.class_origin_size = parse_number<std::uint64_t>(f[11], row, kCsvColumns[11]);
        r.class_max_size = parse_number<std::uint64_t>(f[12], row, kCsvColumns[12]);
        r.conn_origin_size = parse_number<std::uint64_t>(f[13], row, kCsvColumns[13]);
        r.conn_max_size = parse_number<std::uint64_t>(f[14], row, kCsvColumns[14]);
        const int cuts = parse_number<int>(f[15], row, kCsvColumns[15]);
        if (cuts != 0 && cuts != 1) throw ParseError("row " + std::to_string(row) + ", column 'cuts_largest': not 0/1");
        r.cuts_largest = cuts == 1;
        r.events = parse_number<std::uint64_t>(f[16], row, kCsvColumns[16]);
        r.elapsed_ms = parse_number<std::uint64_t>(f[17], row, kCsvColumns[17]);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace voterlab

#endif  // VOTERLAB_RECORDS_HPP

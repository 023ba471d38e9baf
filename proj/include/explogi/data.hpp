#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "explogi/csv.hpp"
#include "explogi/distributions.hpp"
#include "explogi/errors.hpp"
#include "explogi/rng.hpp"

namespace explogi {

struct WeightedRecord {
    double value = 0.0;
    double weight = 1.0;

    bool operator==(const WeightedRecord&) const = default;
};

/// Observed values with per-record survey weights. Weights scale records to
/// population counts; unweighted data is the all-ones special case.
struct WeightedSample {
    std::vector<WeightedRecord> records;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }

    double total_weight() const {
        long double w = 0.0L;
        for (const auto& r : records) w += r.weight;
        return static_cast<double>(w);
    }

    void validate() const {
        if (records.empty()) throw DataError("weighted sample: no records");
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (!(records[i].value >= 0.0))
                throw DataError("weighted sample: record " + std::to_string(i + 1) +
                                " has negative value");
            if (!(records[i].weight > 0.0))
                throw DataError("weighted sample: record " + std::to_string(i + 1) +
                                " has non-positive weight");
        }
    }
};

namespace detail {

/// Successive weighted selection without replacement: each draw picks index i
/// with probability weight_i / (sum of remaining weights), then removes it.
/// Returns the selected original indices in draw order.
inline std::vector<std::size_t> select_weighted_without_replacement(std::vector<double> weights,
                                                                    std::size_t n_select, Rng& rng) {
    if (n_select > weights.size())
        throw std::invalid_argument("select_weighted_without_replacement: n_select exceeds pool");
    std::vector<std::size_t> index(weights.size());
    for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;

    long double total = 0.0L;
    for (double w : weights) total += w;

    std::vector<std::size_t> selected;
    selected.reserve(n_select);
    for (std::size_t draw = 0; draw < n_select; ++draw) {
        const double u = rng.uniform() * static_cast<double>(total);
        long double acc = 0.0L;
        std::size_t pick = weights.size() - 1;  // rounding fallback: last remaining item
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < static_cast<double>(acc)) {
                pick = i;
                break;
            }
        }
        selected.push_back(index[pick]);
        total -= weights[pick];
        weights[pick] = weights.back();
        index[pick] = index.back();
        weights.pop_back();
        index.pop_back();
    }
    return selected;
}

}  // namespace detail

/// Reproduces the biased sampling recipe: draw a pool of n_pool exponential
/// values, weight each by its logistic reporting probability, then select
/// n_obs of them without replacement, successively, with probability
/// proportional to weight. Output weights are all 1.
inline WeightedSample simulate_biased(std::size_t n_pool, double lambda, double mu, double sigma,
                                      std::size_t n_obs, Rng& rng) {
    if (!(lambda > 0.0)) throw std::domain_error("simulate_biased: lambda must be > 0");
    if (!(sigma > 0.0)) throw std::domain_error("simulate_biased: sigma must be > 0");
    if (n_obs > n_pool) throw std::invalid_argument("simulate_biased: n_obs must be <= n_pool");

    std::vector<double> values(n_pool), weights(n_pool);
    for (std::size_t i = 0; i < n_pool; ++i) {
        values[i] = rng.exponential(lambda);
        weights[i] = logistic_cdf(values[i], mu, sigma);
    }

    WeightedSample out;
    out.records.reserve(n_obs);
    for (std::size_t i : detail::select_weighted_without_replacement(weights, n_obs, rng))
        out.records.push_back({values[i], 1.0});
    return out;
}

/// Reads (value[, weight]) records from a CSV file. Without a weight column
/// every record gets weight 1. Rejects negative values and non-positive
/// weights with the offending line number.
inline WeightedSample read_weighted_csv(const std::string& path, const std::string& value_column,
                                        const std::optional<std::string>& weight_column = {}) {
    const CsvTable table = read_csv(path);
    const std::size_t vcol = table.find_column(value_column);
    if (vcol == CsvTable::npos)
        throw DataError("'" + path + "': column '" + value_column + "' not found");
    std::size_t wcol = CsvTable::npos;
    if (weight_column) {
        wcol = table.find_column(*weight_column);
        if (wcol == CsvTable::npos)
            throw DataError("'" + path + "': column '" + *weight_column + "' not found");
    }
    if (table.rows.empty()) throw DataError("'" + path + "': no data rows");

    WeightedSample sample;
    sample.records.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const std::size_t line = table.line_of_row(i);
        const double value = parse_double_field(table.rows[i][vcol], line, value_column);
        if (!(value >= 0.0))
            throw DataError("line " + std::to_string(line) + ", column '" + value_column +
                            "': value must be >= 0");
        double weight = 1.0;
        if (wcol != CsvTable::npos) {
            weight = parse_double_field(table.rows[i][wcol], line, *weight_column);
            if (!(weight > 0.0))
                throw DataError("line " + std::to_string(line) + ", column '" + *weight_column +
                                "': weight must be > 0");
        }
        sample.records.push_back({value, weight});
    }
    return sample;
}

/// Reads a pipeline-format sample: column "value" required, "weight" used
/// when present (the format written by the simulate and ciss-filter commands).
inline WeightedSample read_pipeline_sample(const std::string& path) {
    const CsvTable probe = read_csv(path);
    const bool has_weight = probe.find_column("weight") != CsvTable::npos;
    return read_weighted_csv(path, "value",
                             has_weight ? std::optional<std::string>("weight") : std::nullopt);
}

inline void write_weighted_csv(const std::string& path, const WeightedSample& sample) {
    auto out = open_output(path);
    out << "value,weight\n";
    for (const auto& r : sample.records)
        out << format_double(r.value) << ',' << format_double(r.weight) << '\n';
    if (!out) throw DataError("failed writing '" + path + "'");
}

struct CissFilterReport {
    std::size_t vehicles_total = 0;
    std::size_t kept = 0;
    std::size_t excluded_no_occupants = 0;  // vehicles with no OCC rows: excluded, counted here
    std::size_t excluded_injured = 0;
    std::size_t excluded_case_injured = 0;  // strict-case mode only
    std::size_t excluded_bodycat = 0;
    std::size_t excluded_crashconf = 0;
    std::size_t excluded_missing_dv = 0;
};

struct CissFilterResult {
    WeightedSample sample;
    CissFilterReport report;
};

namespace detail {

inline void require_columns(const CsvTable& table, const std::vector<std::string>& needed,
                            const std::string& table_name) {
    std::string missing;
    for (const auto& c : needed) {
        if (table.find_column(c) == CsvTable::npos) {
            if (!missing.empty()) missing += ", ";
            missing += c;
        }
    }
    if (!missing.empty())
        throw DataError(table_name + " table: missing columns: " + missing);
}

}  // namespace detail

/// Selects uninjured passenger-vehicle rear-end records with a known
/// crash-severity value from CISS-style GV (vehicle) and OCC (occupant)
/// extracts, keyed by (CASEID, VEHNO). A vehicle is kept when every joined
/// occupant has MAIS 0, BODYCAT is in 1..6, CRASHCONF is "D" and DVTOTAL is
/// not the 999 "unavailable" sentinel. With strict_case, an injured occupant
/// anywhere in the same CASEID also excludes the vehicle. Emits
/// (DVTOTAL, CASEWGT) pairs in GV row order.
inline CissFilterResult ciss_filter(const CsvTable& gv, const CsvTable& occ, bool strict_case = false) {
    detail::require_columns(gv, {"CASEID", "VEHNO", "BODYCAT", "CRASHCONF", "DVTOTAL", "CASEWGT"}, "GV");
    detail::require_columns(occ, {"CASEID", "VEHNO", "MAIS"}, "OCC");

    const std::size_t o_case = occ.find_column("CASEID");
    const std::size_t o_veh = occ.find_column("VEHNO");
    const std::size_t o_mais = occ.find_column("MAIS");

    // (caseid, vehno) -> any occupant injured; caseid -> any occupant injured
    std::map<std::pair<std::string, std::string>, bool> vehicle_injured;
    std::map<std::string, bool> case_injured;
    for (std::size_t i = 0; i < occ.rows.size(); ++i) {
        const auto& row = occ.rows[i];
        const long mais = parse_long_field(row[o_mais], occ.line_of_row(i), "MAIS");
        if (mais < 0)
            throw DataError("OCC line " + std::to_string(occ.line_of_row(i)) + ": MAIS must be >= 0");
        const bool injured = mais > 0;
        auto key = std::make_pair(row[o_case], row[o_veh]);
        auto [it, inserted] = vehicle_injured.emplace(key, injured);
        if (!inserted) it->second = it->second || injured;
        auto [cit, cinserted] = case_injured.emplace(row[o_case], injured);
        if (!cinserted) cit->second = cit->second || injured;
    }

    const std::size_t g_case = gv.find_column("CASEID");
    const std::size_t g_veh = gv.find_column("VEHNO");
    const std::size_t g_body = gv.find_column("BODYCAT");
    const std::size_t g_conf = gv.find_column("CRASHCONF");
    const std::size_t g_dv = gv.find_column("DVTOTAL");
    const std::size_t g_wgt = gv.find_column("CASEWGT");

    CissFilterResult result;
    result.report.vehicles_total = gv.rows.size();
    for (std::size_t i = 0; i < gv.rows.size(); ++i) {
        const auto& row = gv.rows[i];
        const std::size_t line = gv.line_of_row(i);
        auto& rep = result.report;

        const auto veh_it = vehicle_injured.find(std::make_pair(row[g_case], row[g_veh]));
        if (veh_it == vehicle_injured.end()) {
            ++rep.excluded_no_occupants;
            continue;
        }
        if (veh_it->second) {
            ++rep.excluded_injured;
            continue;
        }
        if (strict_case && case_injured.at(row[g_case])) {
            ++rep.excluded_case_injured;
            continue;
        }
        const long bodycat = parse_long_field(row[g_body], line, "BODYCAT");
        if (bodycat < 1 || bodycat > 6) {
            ++rep.excluded_bodycat;
            continue;
        }
        if (row[g_conf] != "D") {
            ++rep.excluded_crashconf;
            continue;
        }
        const double dv = parse_double_field(row[g_dv], line, "DVTOTAL");
        if (dv == 999.0) {
            ++rep.excluded_missing_dv;
            continue;
        }
        if (!(dv >= 0.0)) throw DataError("GV line " + std::to_string(line) + ": DVTOTAL must be >= 0");
        const double wgt = parse_double_field(row[g_wgt], line, "CASEWGT");
        if (!(wgt > 0.0)) throw DataError("GV line " + std::to_string(line) + ": CASEWGT must be > 0");
        result.sample.records.push_back({dv, wgt});
        ++rep.kept;
    }
    return result;
}

}  // namespace explogi

//
// Corpus statistics over harvested datasets: per-person tweet-type counts,
// author-pattern histograms, the position x cue-lag percentage matrix,
// summary scalars and word-count distributions.
//
// The accumulator keeps raw sums only, so partial aggregates merge
// associatively; percentages and means are derived at render time.
// Percentages are rounded half-up to one decimal, and matrix marginals come
// from the raw counts rather than from already-rounded cells.
//

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cueharvest/core.hpp"
#include "cueharvest/pipeline.hpp"

namespace cueharvest {

class EmptyInputError : public std::runtime_error {
public:
    explicit EmptyInputError(const std::string& message) : std::runtime_error(message) {}
};

struct TypeCounts {
    std::size_t sarcastic = 0;
    std::size_t oblivious = 0;
    std::size_t eliciting = 0;

    bool operator==(const TypeCounts&) const = default;
};

struct PersonBreakdown {
    std::array<TypeCounts, 3> per_class;  // index 0/1/2 = First/Second/Third
    TypeCounts total;
};

struct PatternRow {
    std::string sequence;  // "Other" for the rollup row
    TypeCounts counts;

    bool operator==(const PatternRow&) const = default;
};

struct PatternHistogram {
    std::array<std::vector<PatternRow>, 3> per_class;
};

// Rows: cue lag 1, 2, 3+ and a total row. Columns: position 0..4, 5+ and a
// total column. Values are percentages of all sarcastic instances.
struct PositionLagMatrix {
    static constexpr std::size_t kLagRows = 3;
    static constexpr std::size_t kPositionCols = 6;

    std::array<std::array<double, kPositionCols + 1>, kLagRows + 1> cells{};
    std::size_t total_instances = 0;
};

struct CorpusSummary {
    double mean_thread_length = 0.0;
    double mean_cue_lag = 0.0;
    // fraction of sarcastic tweets that are root tweets, per perspective
    std::optional<double> intended_root_fraction;
    std::optional<double> perceived_root_fraction;
    // group ("sarcastic_intended" | "sarcastic_perceived" | "non_sarcastic")
    // -> word count -> frequency
    std::map<std::string, std::map<std::size_t, std::size_t>> word_count_histogram;
};

// Whitespace tokens after URL and @mention stripping.
std::size_t word_count(const std::string& text);

class StatsAccumulator {
public:
    void add(const LabeledInstance& instance);
    void merge(const StatsAccumulator& other);

    PersonBreakdown person_breakdown() const;
    PatternHistogram pattern_histogram(std::size_t top_k) const;
    PositionLagMatrix position_lag_matrix() const;  // throws EmptyInputError
    CorpusSummary corpus_summary() const;           // throws EmptyInputError

    std::size_t sarcastic_count() const { return sarcastic_count_; }
    std::size_t negative_count() const { return negative_count_; }

    bool operator==(const StatsAccumulator&) const = default;

private:
    std::size_t sarcastic_count_ = 0;
    std::size_t negative_count_ = 0;
    std::array<TypeCounts, 3> per_class_{};
    std::map<std::pair<int, std::string>, TypeCounts> patterns_;  // (person, sequence)
    std::array<std::array<std::size_t, PositionLagMatrix::kPositionCols>,
               PositionLagMatrix::kLagRows>
        cell_counts_{};
    std::uint64_t thread_length_sum_ = 0;
    std::uint64_t cue_lag_sum_ = 0;
    std::array<std::size_t, 2> root_counts_{};   // per perspective
    std::array<std::size_t, 2> total_counts_{};  // per perspective
    std::map<std::string, std::map<std::size_t, std::size_t>> word_counts_;
};

PersonBreakdown person_breakdown(std::span<const LabeledInstance> instances);
PatternHistogram pattern_histogram(std::span<const LabeledInstance> instances, std::size_t top_k);
PositionLagMatrix position_lag_matrix(std::span<const LabeledInstance> instances);
CorpusSummary corpus_summary(std::span<const LabeledInstance> instances);

std::string render_stats_text(const StatsAccumulator& stats, std::size_t top_k);
nlohmann::ordered_json stats_to_json(const StatsAccumulator& stats, std::size_t top_k);

}  // namespace cueharvest

#include "cueharvest/stats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace cueharvest {

namespace {

double round_half_up_1dp(double x) { return std::floor(x * 10.0 + 0.5) / 10.0; }

std::size_t lag_row(std::size_t cue_lag) { return cue_lag >= 3 ? 2 : cue_lag - 1; }

std::size_t position_col(std::size_t position) { return position >= 5 ? 5 : position; }

std::size_t perspective_index(Perspective p) { return p == Perspective::Intended ? 0 : 1; }

bool starts_with_ci(const std::string& token, const char* prefix) {
    std::size_t i = 0;
    for (; prefix[i] != '\0'; ++i) {
        if (i >= token.size()) return false;
        if (std::tolower(static_cast<unsigned char>(token[i])) != prefix[i]) return false;
    }
    return true;
}

void add_counts(TypeCounts& into, const TypeCounts& from) {
    into.sarcastic += from.sarcastic;
    into.oblivious += from.oblivious;
    into.eliciting += from.eliciting;
}

const char* kPersonLabels[3] = {"1st", "2nd", "3rd"};
const char* kPersonKeys[3] = {"first", "second", "third"};
const char* kLagLabels[PositionLagMatrix::kLagRows] = {"1", "2", "3+"};
const char* kPositionLabels[PositionLagMatrix::kPositionCols] = {"0", "1", "2", "3", "4", "5+"};

}  // namespace

std::size_t word_count(const std::string& text) {
    std::istringstream in(text);
    std::string token;
    std::size_t count = 0;
    while (in >> token) {
        if (token.size() > 1 && token[0] == '@') continue;
        if (starts_with_ci(token, "http://") || starts_with_ci(token, "https://") ||
            starts_with_ci(token, "www.")) {
            continue;
        }
        ++count;
    }
    return count;
}

void StatsAccumulator::add(const LabeledInstance& instance) {
    if (instance.label == Label::NonSarcastic) {
        ++negative_count_;
        ++word_counts_["non_sarcastic"][word_count(instance.sarcastic_tweet.text)];
        return;
    }
    if (!instance.person || !instance.perspective || !instance.author_sequence ||
        !instance.position || !instance.cue_lag) {
        throw std::invalid_argument("sarcastic instance is missing person/sequence/position data");
    }
    ++sarcastic_count_;

    const int person = person_number(*instance.person);
    TypeCounts& klass = per_class_[static_cast<std::size_t>(person - 1)];
    ++klass.sarcastic;
    if (instance.oblivious_tweet) ++klass.oblivious;
    if (instance.eliciting_tweet) ++klass.eliciting;

    TypeCounts& pattern = patterns_[{person, *instance.author_sequence}];
    ++pattern.sarcastic;
    if (instance.oblivious_tweet) ++pattern.oblivious;
    if (instance.eliciting_tweet) ++pattern.eliciting;

    ++cell_counts_[lag_row(*instance.cue_lag)][position_col(*instance.position)];
    thread_length_sum_ += instance.author_sequence->size();
    cue_lag_sum_ += *instance.cue_lag;

    const std::size_t p = perspective_index(*instance.perspective);
    ++total_counts_[p];
    if (*instance.position == 0) ++root_counts_[p];

    const char* group = *instance.perspective == Perspective::Intended ? "sarcastic_intended"
                                                                       : "sarcastic_perceived";
    ++word_counts_[group][word_count(instance.sarcastic_tweet.text)];
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
    sarcastic_count_ += other.sarcastic_count_;
    negative_count_ += other.negative_count_;
    for (std::size_t i = 0; i < 3; ++i) add_counts(per_class_[i], other.per_class_[i]);
    for (const auto& [key, counts] : other.patterns_) add_counts(patterns_[key], counts);
    for (std::size_t l = 0; l < PositionLagMatrix::kLagRows; ++l) {
        for (std::size_t p = 0; p < PositionLagMatrix::kPositionCols; ++p) {
            cell_counts_[l][p] += other.cell_counts_[l][p];
        }
    }
    thread_length_sum_ += other.thread_length_sum_;
    cue_lag_sum_ += other.cue_lag_sum_;
    for (std::size_t i = 0; i < 2; ++i) {
        root_counts_[i] += other.root_counts_[i];
        total_counts_[i] += other.total_counts_[i];
    }
    for (const auto& [group, histogram] : other.word_counts_) {
        for (const auto& [words, freq] : histogram) word_counts_[group][words] += freq;
    }
}

PersonBreakdown StatsAccumulator::person_breakdown() const {
    PersonBreakdown breakdown;
    breakdown.per_class = per_class_;
    for (const TypeCounts& counts : per_class_) add_counts(breakdown.total, counts);
    return breakdown;
}

PatternHistogram StatsAccumulator::pattern_histogram(std::size_t top_k) const {
    PatternHistogram histogram;
    for (int person = 1; person <= 3; ++person) {
        std::vector<PatternRow> rows;
        for (const auto& [key, counts] : patterns_) {
            if (key.first == person) rows.push_back({key.second, counts});
        }
        if (rows.empty()) continue;
        std::sort(rows.begin(), rows.end(), [](const PatternRow& a, const PatternRow& b) {
            if (a.counts.sarcastic != b.counts.sarcastic) {
                return a.counts.sarcastic > b.counts.sarcastic;
            }
            return a.sequence < b.sequence;
        });
        std::vector<PatternRow>& out = histogram.per_class[static_cast<std::size_t>(person - 1)];
        if (rows.size() > top_k) {
            out.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(top_k));
            PatternRow other{"Other", {}};
            for (std::size_t i = top_k; i < rows.size(); ++i) {
                add_counts(other.counts, rows[i].counts);
            }
            out.push_back(std::move(other));
        } else {
            out = std::move(rows);
        }
    }
    return histogram;
}

PositionLagMatrix StatsAccumulator::position_lag_matrix() const {
    if (sarcastic_count_ == 0) {
        throw EmptyInputError("position_lag_matrix: no sarcastic instances");
    }
    PositionLagMatrix matrix;
    matrix.total_instances = sarcastic_count_;
    const double total = static_cast<double>(sarcastic_count_);

    std::array<std::size_t, PositionLagMatrix::kPositionCols> col_sums{};
    for (std::size_t l = 0; l < PositionLagMatrix::kLagRows; ++l) {
        std::size_t row_sum = 0;
        for (std::size_t p = 0; p < PositionLagMatrix::kPositionCols; ++p) {
            matrix.cells[l][p] = round_half_up_1dp(100.0 * cell_counts_[l][p] / total);
            row_sum += cell_counts_[l][p];
            col_sums[p] += cell_counts_[l][p];
        }
        matrix.cells[l][PositionLagMatrix::kPositionCols] =
            round_half_up_1dp(100.0 * static_cast<double>(row_sum) / total);
    }
    for (std::size_t p = 0; p < PositionLagMatrix::kPositionCols; ++p) {
        matrix.cells[PositionLagMatrix::kLagRows][p] =
            round_half_up_1dp(100.0 * static_cast<double>(col_sums[p]) / total);
    }
    matrix.cells[PositionLagMatrix::kLagRows][PositionLagMatrix::kPositionCols] = 100.0;
    return matrix;
}

CorpusSummary StatsAccumulator::corpus_summary() const {
    if (sarcastic_count_ == 0) {
        throw EmptyInputError("corpus_summary: no sarcastic instances");
    }
    CorpusSummary summary;
    const double total = static_cast<double>(sarcastic_count_);
    summary.mean_thread_length = static_cast<double>(thread_length_sum_) / total;
    summary.mean_cue_lag = static_cast<double>(cue_lag_sum_) / total;
    if (total_counts_[0] > 0) {
        summary.intended_root_fraction =
            static_cast<double>(root_counts_[0]) / static_cast<double>(total_counts_[0]);
    }
    if (total_counts_[1] > 0) {
        summary.perceived_root_fraction =
            static_cast<double>(root_counts_[1]) / static_cast<double>(total_counts_[1]);
    }
    summary.word_count_histogram = word_counts_;
    return summary;
}

namespace {

StatsAccumulator accumulate(std::span<const LabeledInstance> instances) {
    StatsAccumulator stats;
    for (const LabeledInstance& instance : instances) stats.add(instance);
    return stats;
}

}  // namespace

PersonBreakdown person_breakdown(std::span<const LabeledInstance> instances) {
    return accumulate(instances).person_breakdown();
}

PatternHistogram pattern_histogram(std::span<const LabeledInstance> instances, std::size_t top_k) {
    return accumulate(instances).pattern_histogram(top_k);
}

PositionLagMatrix position_lag_matrix(std::span<const LabeledInstance> instances) {
    return accumulate(instances).position_lag_matrix();
}

CorpusSummary corpus_summary(std::span<const LabeledInstance> instances) {
    return accumulate(instances).corpus_summary();
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_stats_text(const StatsAccumulator& stats, std::size_t top_k) {
    std::ostringstream out;
    out << std::fixed;

    const PersonBreakdown breakdown = stats.person_breakdown();
    out << "== data breakdown by person class ==\n";
    out << std::left << std::setw(8) << "person" << std::setw(12) << "perspective" << std::right
        << std::setw(10) << "sarcastic" << std::setw(10) << "oblivious" << std::setw(10)
        << "eliciting" << '\n';
    for (std::size_t i = 0; i < 3; ++i) {
        const char* perspective = i == 0 ? "intended" : "perceived";
        out << std::left << std::setw(8) << kPersonLabels[i] << std::setw(12) << perspective
            << std::right << std::setw(10) << breakdown.per_class[i].sarcastic << std::setw(10)
            << breakdown.per_class[i].oblivious << std::setw(10) << breakdown.per_class[i].eliciting
            << '\n';
    }
    out << std::left << std::setw(8) << "total" << std::setw(12) << "" << std::right
        << std::setw(10) << breakdown.total.sarcastic << std::setw(10) << breakdown.total.oblivious
        << std::setw(10) << breakdown.total.eliciting << '\n';

    const PatternHistogram histogram = stats.pattern_histogram(top_k);
    out << "\n== author patterns by person class (top " << top_k << ") ==\n";
    out << std::left << std::setw(8) << "person" << std::setw(10) << "pattern" << std::right
        << std::setw(10) << "sarcastic" << std::setw(10) << "oblivious" << std::setw(10)
        << "eliciting" << '\n';
    for (std::size_t i = 0; i < 3; ++i) {
        TypeCounts subtotal;
        for (const PatternRow& row : histogram.per_class[i]) {
            out << std::left << std::setw(8) << kPersonLabels[i] << std::setw(10) << row.sequence
                << std::right << std::setw(10) << row.counts.sarcastic << std::setw(10)
                << row.counts.oblivious << std::setw(10) << row.counts.eliciting << '\n';
            add_counts(subtotal, row.counts);
        }
        if (!histogram.per_class[i].empty()) {
            out << std::left << std::setw(8) << "" << std::setw(10) << "subtotal" << std::right
                << std::setw(10) << subtotal.sarcastic << std::setw(10) << subtotal.oblivious
                << std::setw(10) << subtotal.eliciting << '\n';
        }
    }

    if (stats.sarcastic_count() > 0) {
        const PositionLagMatrix matrix = stats.position_lag_matrix();
        out << "\n== % of sarcastic tweets by position (distance from root) and cue lag ==\n";
        out << std::setprecision(1);
        out << std::left << std::setw(8) << "lag" << std::right;
        for (const char* label : kPositionLabels) out << std::setw(8) << label;
        out << std::setw(8) << "total" << '\n';
        for (std::size_t l = 0; l <= PositionLagMatrix::kLagRows; ++l) {
            out << std::left << std::setw(8)
                << (l < PositionLagMatrix::kLagRows ? kLagLabels[l] : "total") << std::right;
            for (std::size_t p = 0; p <= PositionLagMatrix::kPositionCols; ++p) {
                out << std::setw(8) << matrix.cells[l][p];
            }
            out << '\n';
        }

        const CorpusSummary summary = stats.corpus_summary();
        out << std::setprecision(2);
        out << "\n== summary ==\n";
        out << "sarcastic instances: " << stats.sarcastic_count() << '\n';
        out << "negative instances: " << stats.negative_count() << '\n';
        out << "mean thread length: " << summary.mean_thread_length << '\n';
        out << "mean cue lag: " << summary.mean_cue_lag << '\n';
        out << std::setprecision(3);
        if (summary.intended_root_fraction) {
            out << "intended sarcasm root fraction: " << *summary.intended_root_fraction
                << " (replies: " << 1.0 - *summary.intended_root_fraction << ")\n";
        }
        if (summary.perceived_root_fraction) {
            out << "perceived sarcasm root fraction: " << *summary.perceived_root_fraction
                << " (replies: " << 1.0 - *summary.perceived_root_fraction << ")\n";
        }
        out << "\n== word count distribution (whitespace tokens after URL/mention stripping) ==\n";
        for (const auto& [group, histogram_entries] : summary.word_count_histogram) {
            out << group << ":";
            for (const auto& [words, freq] : histogram_entries) {
                out << ' ' << words << ':' << freq;
            }
            out << '\n';
        }
    } else {
        out << "\nno sarcastic instances; positional statistics omitted\n";
        out << "negative instances: " << stats.negative_count() << '\n';
    }
    return out.str();
}

nlohmann::ordered_json stats_to_json(const StatsAccumulator& stats, std::size_t top_k) {
    nlohmann::ordered_json j;

    const PersonBreakdown breakdown = stats.person_breakdown();
    nlohmann::ordered_json breakdown_json;
    for (std::size_t i = 0; i < 3; ++i) {
        breakdown_json[kPersonKeys[i]] = {{"sarcastic", breakdown.per_class[i].sarcastic},
                                          {"oblivious", breakdown.per_class[i].oblivious},
                                          {"eliciting", breakdown.per_class[i].eliciting}};
    }
    breakdown_json["total"] = {{"sarcastic", breakdown.total.sarcastic},
                               {"oblivious", breakdown.total.oblivious},
                               {"eliciting", breakdown.total.eliciting}};
    j["person_breakdown"] = breakdown_json;

    const PatternHistogram histogram = stats.pattern_histogram(top_k);
    nlohmann::ordered_json histogram_json;
    for (std::size_t i = 0; i < 3; ++i) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const PatternRow& row : histogram.per_class[i]) {
            rows.push_back({{"sequence", row.sequence},
                            {"sarcastic", row.counts.sarcastic},
                            {"oblivious", row.counts.oblivious},
                            {"eliciting", row.counts.eliciting}});
        }
        histogram_json[kPersonKeys[i]] = rows;
    }
    j["pattern_histogram"] = histogram_json;

    if (stats.sarcastic_count() > 0) {
        const PositionLagMatrix matrix = stats.position_lag_matrix();
        nlohmann::ordered_json matrix_json;
        matrix_json["total_instances"] = matrix.total_instances;
        matrix_json["lag_rows"] = {"1", "2", "3+", "total"};
        matrix_json["position_cols"] = {"0", "1", "2", "3", "4", "5+", "total"};
        nlohmann::ordered_json cells = nlohmann::ordered_json::array();
        for (const auto& row : matrix.cells) {
            cells.push_back(std::vector<double>(row.begin(), row.end()));
        }
        matrix_json["cells"] = cells;
        j["position_lag_matrix"] = matrix_json;

        const CorpusSummary summary = stats.corpus_summary();
        nlohmann::ordered_json summary_json;
        summary_json["sarcastic_instances"] = stats.sarcastic_count();
        summary_json["negative_instances"] = stats.negative_count();
        summary_json["mean_thread_length"] = summary.mean_thread_length;
        summary_json["mean_cue_lag"] = summary.mean_cue_lag;
        if (summary.intended_root_fraction) {
            summary_json["intended_root_fraction"] = *summary.intended_root_fraction;
        } else {
            summary_json["intended_root_fraction"] = nullptr;
        }
        if (summary.perceived_root_fraction) {
            summary_json["perceived_root_fraction"] = *summary.perceived_root_fraction;
        } else {
            summary_json["perceived_root_fraction"] = nullptr;
        }
        summary_json["word_count_rule"] = "whitespace tokens after URL/mention stripping";
        nlohmann::ordered_json words_json;
        for (const auto& [group, histogram_entries] : summary.word_count_histogram) {
            nlohmann::ordered_json group_json;
            for (const auto& [words, freq] : histogram_entries) {
                group_json[std::to_string(words)] = freq;
            }
            words_json[group] = group_json;
        }
        summary_json["word_count_histogram"] = words_json;
        j["summary"] = summary_json;
    } else {
        j["position_lag_matrix"] = nullptr;
        nlohmann::ordered_json summary_json;
        summary_json["sarcastic_instances"] = 0;
        summary_json["negative_instances"] = stats.negative_count();
        j["summary"] = summary_json;
    }
    return j;
}

}  // namespace cueharvest

#pragma once

// Pair-comparison grading records: ingestion, weighted voting and per-judge
// response summaries.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nka/axioms.hpp"
#include "nka/core.hpp"

namespace nka {

/// A pair-comparison verdict. Its index matches LabelSet::pair_comparison().
enum class Grade { A = 0, B = 1, Tie = 2 };

std::string_view to_string(Grade grade);
/// Case-insensitive "a", "b" or "tie".
std::optional<Grade> parse_grade(std::string_view text);
Grade swap_models(Grade grade);

/// Half-unit vote weights. A tie splits one vote evenly between the models.
struct VoteTally {
  Rational weight_a;
  Rational weight_b;
};

VoteTally tally_votes(std::span<const Grade> grades);

/// The heavier side wins; equal weights give a tie. Throws InvalidArgument
/// for an empty list.
Grade weighted_vote(std::span<const Grade> grades);

/// One pair comparison and the grade each judge gave it. `grades` is aligned
/// with the judges of the owning table; a judge may have no grade.
struct GradingRecord {
  std::string question_id;
  std::string model_a;
  std::string model_b;
  std::vector<std::optional<Grade>> grades;
};

class GradingTable {
 public:
  GradingTable(std::vector<std::string> judges, std::vector<GradingRecord> records);

  /// Header `question_id,model_a,model_b,<judge>...`; empty cells mean "not
  /// graded". Errors carry the 1-based line number.
  static GradingTable parse_csv(std::string_view text);
  /// {"judges": [...], "records": [{"question_id", "model_a", "model_b",
  /// "grades": {judge: grade}}]}; "judges" is optional.
  static GradingTable parse_json(std::string_view text);
  /// Dispatches on the extension: ".json" is JSON, anything else CSV.
  static GradingTable load(const std::filesystem::path& path);

  /// Canonical CSV: lowercase grades, LF line endings, trailing newline.
  std::string to_csv() const;

  const std::vector<std::string>& judges() const { return judges_; }
  const std::vector<GradingRecord>& records() const { return records_; }
  /// Throws InvalidArgument naming the judge when it is not a column.
  std::size_t judge_index(std::string_view judge) const;

  /// The judge's grades in record order. Throws InvalidArgument naming the
  /// first question the judge left ungraded.
  std::vector<Grade> column(std::string_view judge) const;

 private:
  std::vector<std::string> judges_;
  std::vector<GradingRecord> records_;
};

/// The 25 turn-1 MT-Bench pair comparisons with `experts`, `authors` and
/// `gpt4` columns, exactly as shipped in data/mt_bench_pairs.csv.
std::string_view bundled_fixture_csv();
const GradingTable& bundled_fixture();

/// Counts of a/b/tie grades from one judge over every record.
ResponseSummary summarize(const GradingTable& table, std::string_view judge);

/// Accuracy of `judge` on the records where `reference` gave each label; empty
/// for labels the reference never used.
std::vector<std::optional<Rational>> accuracy_against(const GradingTable& table,
                                                      std::string_view judge,
                                                      std::string_view reference);

/// Question-aligned joint grade counts of two judges.
PairSummary pair_summary(const GradingTable& table, std::string_view first,
                         std::string_view second);

}  // namespace nka

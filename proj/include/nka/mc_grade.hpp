#pragma once

// Multiple-choice grades and sequence relabeling.

#include <span>
#include <string>
#include <vector>

#include "nka/core.hpp"

namespace nka {

/// Fraction of items answered correctly: trace / Q. Throws InvalidArgument
/// for an empty test.
Rational grade(const EvaluationMatrix& eval, const QcPoint& qc);

struct GradeRange {
  QcPoint qc;
  Rational min_grade;
  Rational max_grade;
};

/// Consistent grade ranges, one per answer key in lexicographic order.
struct GradeSet {
  std::vector<GradeRange> entries;
};

/// Largest feasible trace over Q: sum_t min(R_t, Q_t) / Q.
Rational max_grade(const QcPoint& qc, const ResponseSummary& summary);

/// Smallest feasible trace over Q. Every label but one can be made entirely
/// wrong; the exception is a label with R_t + Q_t > Q, which must keep at
/// least R_t + Q_t - Q correct answers.
Rational min_grade(const QcPoint& qc, const ResponseSummary& summary);

/// Throws InvalidArgument for an empty test.
GradeSet grade_set(const ResponseSummary& summary);

/// Summarizes the Q - S + 1 overlapping windows of length S of a response
/// sequence. Product labels join their parts with '|' and are ordered
/// lexicographically by tuple index, so "a|a", "a|b", ... for S = 2. S = 1
/// returns the plain summary. Throws InvalidArgument when the sequence is
/// shorter than S or S is zero.
ResponseSummary sequence_relabel(std::span<const std::size_t> responses, const LabelSet& labels,
                                 std::size_t window);

/// The product label set used by sequence_relabel.
LabelSet product_labels(const LabelSet& labels, std::size_t window);

}  // namespace nka

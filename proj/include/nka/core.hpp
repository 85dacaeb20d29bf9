#pragma once

// Core value types for reasoning about classifier evaluations from response
// counts alone: label sets, observed response summaries, candidate answer-key
// summaries (points of the Q-complex) and full evaluation matrices.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nka/rational.hpp"

namespace nka {

/// Ordered, immutable set of R >= 2 distinct response labels. Copies share
/// storage, so passing LabelSet by value is cheap.
class LabelSet {
 public:
  explicit LabelSet(std::vector<std::string> labels);

  /// The {a, b, tie} set used for pair-comparison grading.
  static LabelSet pair_comparison();

  std::size_t size() const { return labels_->size(); }
  const std::string& operator[](std::size_t index) const { return (*labels_)[index]; }
  const std::vector<std::string>& names() const { return *labels_; }

  /// Throws InvalidArgument when the label is unknown.
  std::size_t index_of(std::string_view label) const;
  std::optional<std::size_t> find(std::string_view label) const;

  bool operator==(const LabelSet& other) const {
    return labels_ == other.labels_ || *labels_ == *other.labels_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> labels_;
};

namespace detail {

// Non-negative per-label counts with a cached total. Shared by the observed
// response summary and the answer-key summary, which are distinct types.
class LabelCounts {
 public:
  LabelCounts(LabelSet labels, std::vector<Count> counts);
  LabelCounts(LabelSet labels, std::vector<Count> counts, Count test_size);

  const LabelSet& labels() const { return labels_; }
  std::size_t label_count() const { return counts_.size(); }
  Count test_size() const { return test_size_; }
  Count operator[](std::size_t label) const { return counts_[label]; }
  Count at(std::string_view label) const { return counts_[labels_.index_of(label)]; }
  std::span<const Count> counts() const { return counts_; }

 protected:
  bool same_counts(const LabelCounts& other) const {
    return labels_ == other.labels_ && counts_ == other.counts_;
  }

 private:
  LabelSet labels_;
  std::vector<Count> counts_;
  Count test_size_ = 0;
};

}  // namespace detail

/// A classifier's observed response counts (R_l1, ..., R_lR) on a Q-item test.
class ResponseSummary : public detail::LabelCounts {
 public:
  using LabelCounts::LabelCounts;
  bool operator==(const ResponseSummary& other) const { return same_counts(other); }
};

/// A candidate answer-key summary (Q_l1, ..., Q_lR).
class QcPoint : public detail::LabelCounts {
 public:
  using LabelCounts::LabelCounts;
  bool operator==(const QcPoint& other) const { return same_counts(other); }
  /// Lexicographic on the counts; both points must share a label set.
  bool operator<(const QcPoint& other) const;
};

/// Counts R_{lr;lt} of response lr on items whose true label is lt. Rows are
/// responses, columns are true labels. Row sums give the observed summary and
/// column sums the answer-key summary.
class EvaluationMatrix {
 public:
  /// `entries` is row-major, R*R long.
  EvaluationMatrix(LabelSet labels, std::vector<Count> entries);

  /// The diagonal matrix diag(qc): every response correct.
  static EvaluationMatrix perfect(const QcPoint& qc);

  const LabelSet& labels() const { return labels_; }
  std::size_t label_count() const { return labels_.size(); }
  Count operator()(std::size_t response, std::size_t truth) const {
    return entries_[response * labels_.size() + truth];
  }
  std::span<const Count> entries() const { return entries_; }

  Count test_size() const;
  Count correct(std::size_t label) const { return (*this)(label, label); }
  std::vector<Count> diagonal() const;
  Count trace() const;

  /// Row sums as a response summary.
  ResponseSummary responses() const;
  /// Column sums as an answer-key summary.
  QcPoint answer_key() const;

  bool operator==(const EvaluationMatrix& other) const {
    return labels_ == other.labels_ && entries_ == other.entries_;
  }
  bool operator<(const EvaluationMatrix& other) const { return entries_ < other.entries_; }

 private:
  LabelSet labels_;
  std::vector<Count> entries_;
};

/// An evaluation in prevalence/accuracy coordinates. Accuracies are empty for
/// labels absent from the answer key.
struct PSpacePoint {
  std::vector<Rational> prevalences;
  std::vector<std::optional<Rational>> label_accuracies;
};

/// C(n, k) computed exactly in 64 bits; throws InvalidArgument on overflow.
std::uint64_t binomial(Count n, Count k);

/// Every composition of Q into labels.size() non-negative parts, in
/// lexicographic order. There are C(Q+R-1, R-1) of them.
std::vector<QcPoint> qc_points(Count test_size, const LabelSet& labels);

/// Calls `visit` on each point of qc_points(test_size, labels) without
/// materializing the whole sequence.
void for_each_qc_point(Count test_size, const LabelSet& labels,
                       const std::function<void(const QcPoint&)>& visit);

/// R_{l;l} / Q_l, or nullopt when Q_l = 0.
std::optional<Rational> label_accuracy(const EvaluationMatrix& eval, const QcPoint& qc,
                                       std::size_t label);

/// Prevalences Q_l / Q and per-label accuracies. Throws InvalidArgument for an
/// empty test.
PSpacePoint to_pspace(const EvaluationMatrix& eval, const QcPoint& qc);

/// Throws StructuralError unless both label sets are equal.
void require_same_labels(const LabelSet& a, const LabelSet& b, std::string_view context);

}  // namespace nka

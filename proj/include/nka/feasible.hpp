#pragma once

// The set of evaluations logically consistent with observed response counts.
// At a fixed answer-key summary the feasible evaluations of one classifier are
// exactly the non-negative integer matrices with the observed responses as
// row sums and the answer key as column sums.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nka/core.hpp"

namespace nka {

enum class ConstraintLevel {
  MarginsOnly,       // answer-key column sums only
  WithInequalities,  // plus R[t;t] <= R_t for every label
  WithM1Axioms,      // plus the single-classifier axioms (equivalently, row sums)
};

std::string_view to_string(ConstraintLevel level);
/// Accepts "margins_only", "with_inequalities", "with_m1_axioms".
ConstraintLevel parse_constraint_level(std::string_view text);

enum class FeasibilityBackend {
  Automatic,    // enumeration for small tests, flow otherwise
  Enumeration,  // exhaustive walk of the feasible set
  Flow,         // circulation with lower bounds on the diagonal
};

/// Visits every feasible matrix in lexicographic row-major order. Returning
/// false from `visit` stops the walk. Mismatched totals yield nothing.
void for_each_single(const QcPoint& qc, const ResponseSummary& summary,
                     const std::function<bool(const EvaluationMatrix&)>& visit);

std::vector<EvaluationMatrix> enumerate_single(const QcPoint& qc, const ResponseSummary& summary);

/// Size of the feasible set at one answer key, without materializing it.
std::uint64_t count_single(const QcPoint& qc, const ResponseSummary& summary);

/// Size of the single-classifier evaluation space before any responses are
/// observed: sum over the Q-complex of prod_t C(Q_t + R - 1, R - 1).
std::uint64_t count_all_evaluations(Count test_size, std::size_t label_count);

/// Evaluations that survive `level`, summed over the whole Q-complex.
std::uint64_t count_filtered(const ResponseSummary& summary, ConstraintLevel level);

/// Largest feasible R[t;t]; equal to min(R_t, Q_t). Throws InvalidArgument
/// when the totals differ.
Count max_correct(const QcPoint& qc, const ResponseSummary& summary, std::size_t label);

/// Smallest integer count strictly above x * Q_t, i.e. floor(x * Q_t) + 1, or
/// 0 for labels absent from the answer key.
std::vector<Count> strict_lower_bounds(const QcPoint& qc, std::span<const Rational> thresholds);

/// A feasible matrix whose diagonal meets `lower_bounds`, if one exists.
std::optional<EvaluationMatrix> find_evaluation_with_correct(
    const QcPoint& qc, const ResponseSummary& summary, std::span<const Count> lower_bounds,
    FeasibilityBackend backend = FeasibilityBackend::Automatic);

/// Whether one feasible matrix has every defined label accuracy strictly above
/// its threshold. Thresholds are per label and must lie in [0, 1].
bool joint_threshold_feasible(const QcPoint& qc, const ResponseSummary& summary,
                              std::span<const Rational> thresholds,
                              FeasibilityBackend backend = FeasibilityBackend::Automatic);

/// Uniform-threshold convenience overload.
bool joint_threshold_feasible(const QcPoint& qc, const ResponseSummary& summary,
                              const Rational& threshold,
                              FeasibilityBackend backend = FeasibilityBackend::Automatic);

/// Diagonal tuples of one classifier's feasible set with their multiplicities,
/// in lexicographic order of the tuple.
std::vector<std::pair<std::vector<Count>, std::uint64_t>> diagonal_multiplicities(
    const QcPoint& qc, const ResponseSummary& summary);

/// A point of the correctness grid of two classifiers: the correct counts of
/// each classifier per label and how many full evaluation pairs project there.
struct CorrectnessCell {
  std::vector<Count> first;
  std::vector<Count> second;
  std::uint64_t multiplicity = 0;

  bool operator==(const CorrectnessCell&) const = default;
};

/// The product of two feasible sets projected onto diagonals. Throws
/// InvalidArgument unless exactly two summaries are given.
std::vector<CorrectnessCell> correctness_multiplicity(const QcPoint& qc,
                                                      std::span<const ResponseSummary> summaries);

}  // namespace nka

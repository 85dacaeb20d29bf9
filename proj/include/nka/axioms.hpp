#pragma once

// Linear constraint systems over the integer evaluation space: margin
// equalities, response inequalities and the single (M=1) and pair (M=2)
// axioms. Observed counts are substituted as constants unless a symbolic
// builder is used.

#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nka/core.hpp"

namespace nka {

enum class VarKind : std::uint8_t {
  Eval,          // R[r;t|c]   response r on true label t by classifier c
  PairEval,      // R[r,s;t]   pair responses (r by i, s by j) on true label t
  Key,           // Q[t]       answer-key count of label t
  Observed,      // R[r|c]     observed response count (symbolic mode only)
  PairObserved,  // R[r,s]     observed pair count (symbolic mode only)
  TestSize,      // Q          test size (symbolic mode only)
};

/// Identifies one unknown. Term order in every constraint dump follows the
/// ordering of this type, so dumps are stable across runs.
struct VariableId {
  VarKind kind = VarKind::Key;
  std::uint8_t classifier = 0;
  std::uint16_t first = 0;
  std::uint16_t second = 0;
  std::uint16_t third = 0;

  static VariableId eval(std::size_t classifier, std::size_t response, std::size_t truth);
  static VariableId pair_eval(std::size_t response_i, std::size_t response_j, std::size_t truth);
  static VariableId key(std::size_t truth);
  static VariableId observed(std::size_t classifier, std::size_t response);
  static VariableId pair_observed(std::size_t response_i, std::size_t response_j);
  static VariableId test_size();

  auto operator<=>(const VariableId&) const = default;
};

/// The declared unknowns for one or two classifiers over a label set.
/// Classifier names only affect rendering.
class VariableSpace {
 public:
  VariableSpace(LabelSet labels, std::vector<std::string> classifiers, bool symbolic = false);

  static VariableSpace single(LabelSet labels, std::string classifier = "i");
  static VariableSpace pair(LabelSet labels, std::string first = "i", std::string second = "j");

  const LabelSet& labels() const { return labels_; }
  const std::vector<std::string>& classifiers() const { return classifiers_; }
  bool symbolic() const { return symbolic_; }
  bool has_pair_variables() const { return classifiers_.size() == 2; }

  bool contains(const VariableId& id) const;
  /// Every declared variable, in VariableId order.
  std::vector<VariableId> declared() const;
  /// Stable textual name, e.g. "R[a;tie|gpt4]", "Q[b]", "R[a,b;tie|i,j]".
  std::string name(const VariableId& id) const;

 private:
  LabelSet labels_;
  std::vector<std::string> classifiers_;
  bool symbolic_ = false;
};

enum class Relation { Equal, LessEqual };

/// sum(coefficient * variable) <relation> rhs, with integer coefficients.
class LinearConstraint {
 public:
  LinearConstraint() = default;
  LinearConstraint(Relation relation, Count rhs) : relation_(relation), rhs_(rhs) {}

  /// Adds `coefficient` to the variable's term; zero terms are dropped.
  LinearConstraint& add(const VariableId& id, Count coefficient);

  Relation relation() const { return relation_; }
  Count rhs() const { return rhs_; }
  void set_rhs(Count rhs) { rhs_ = rhs; }
  const std::map<VariableId, Count>& terms() const { return terms_; }
  Count coefficient(const VariableId& id) const;
  bool trivial() const { return terms_.empty() && rhs_ == 0; }

  /// Termwise sum; both sides must be equalities.
  LinearConstraint& operator+=(const LinearConstraint& other);
  friend LinearConstraint operator+(LinearConstraint a, const LinearConstraint& b) {
    a += b;
    return a;
  }
  LinearConstraint operator-() const;
  bool operator==(const LinearConstraint&) const = default;

 private:
  std::map<VariableId, Count> terms_;
  Relation relation_ = Relation::Equal;
  Count rhs_ = 0;
};

/// Integer values for some set of variables.
class Assignment {
 public:
  void set(const VariableId& id, Count value) { values_[id] = value; }
  /// Throws InvalidArgument for an unbound variable.
  Count get(const VariableId& id) const;
  bool contains(const VariableId& id) const { return values_.contains(id); }

  void bind_answer_key(const QcPoint& qc);
  void bind_evaluation(const EvaluationMatrix& eval, std::size_t classifier = 0);

 private:
  std::map<VariableId, Count> values_;
};

/// Replaces every variable bound in `values` by its value, folding it into
/// the right-hand side.
LinearConstraint substitute(const LinearConstraint& constraint, const Assignment& values);

/// Left-hand side minus right-hand side under the assignment.
Count residual(const LinearConstraint& constraint, const Assignment& values);
bool satisfied(const LinearConstraint& constraint, const Assignment& values);

/// Renders as "<coef>*<var> ... <relation> <rhs>", e.g.
/// "1*R[a;a|i] -1*R[b;b|i] -1*Q[a] == -6".
std::string format(const LinearConstraint& constraint, const VariableSpace& space);
void write_constraints(std::ostream& out, std::span<const LinearConstraint> constraints,
                       const VariableSpace& space);

/// Question-aligned joint response counts R[r_i, s_j] of two classifiers.
/// Rows index the first classifier's label, columns the second's.
class PairSummary {
 public:
  PairSummary(LabelSet labels, std::vector<Count> counts);

  const LabelSet& labels() const { return labels_; }
  Count operator()(std::size_t first, std::size_t second) const {
    return counts_[first * labels_.size() + second];
  }
  Count test_size() const;
  ResponseSummary first_marginal() const;
  ResponseSummary second_marginal() const;

 private:
  LabelSet labels_;
  std::vector<Count> counts_;
};

/// Pair responses given true label, R[r_i, s_j; t], as an R*R*R tensor.
class PairEvaluation {
 public:
  /// `entries` indexed ((r * R) + s) * R + t.
  PairEvaluation(LabelSet labels, std::vector<Count> entries);

  const LabelSet& labels() const { return labels_; }
  Count operator()(std::size_t first, std::size_t second, std::size_t truth) const {
    const std::size_t r = labels_.size();
    return entries_[(first * r + second) * r + truth];
  }
  std::span<const Count> entries() const { return entries_; }

  PairSummary pair_summary() const;
  EvaluationMatrix first_evaluation() const;
  EvaluationMatrix second_evaluation() const;
  QcPoint answer_key() const;

 private:
  LabelSet labels_;
  std::vector<Count> entries_;
};

/// Binds Key, both classifiers' Eval variables and every PairEval variable.
void bind_pair_evaluation(Assignment& values, const PairEvaluation& eval);

/// R column equalities sum_r R[r;t] == Q_t followed by R row equalities
/// sum_t R[r;t] == R_r.
std::vector<LinearConstraint> margin_constraints(const QcPoint& qc, const ResponseSummary& summary,
                                                 std::size_t classifier = 0);

/// R[r;t] <= R_r for every (r, t) in row-major order, then non-negativity of
/// every Eval and Key variable.
std::vector<LinearConstraint> m1_inequalities(const ResponseSummary& summary,
                                              std::size_t classifier = 0);

/// The diagonal subset of m1_inequalities: R[t;t] <= R_t.
std::vector<LinearConstraint> correct_count_inequalities(const ResponseSummary& summary,
                                                         std::size_t classifier = 0);

/// The R single-classifier axioms. The one for true label t reads
///   R[t;t] - Q_t + sum_{r!=t} R_r - sum_{l!=t} sum_{r!=t} R[r;l] == 0
/// with the observed R_r moved to the right-hand side.
std::vector<LinearConstraint> m1_axioms(const ResponseSummary& summary, std::size_t classifier = 0);

/// The same axioms with observed counts kept as Observed variables. Needs a
/// symbolic VariableSpace.
std::vector<LinearConstraint> m1_axioms_symbolic(const LabelSet& labels,
                                                 std::size_t classifier = 0);

/// sum_t Q_t == Q, sum_r R_r == Q and sum_{r,t} R[r;t] == Q, all symbolic.
std::vector<LinearConstraint> test_size_identities(const LabelSet& labels,
                                                   std::size_t classifier = 0);

/// The R pair axioms. For true label t:
///   R[t,t;t] - Q_t
///   + sum_{c in i,j} sum_{r!=t} R_{r,c}
///   - sum_{c in i,j} sum_{r!=t} sum_{s!=t} R[s;r|c]
///   - sum_{r!=t} R[r,r]
///   + sum_{r!=t} sum_{s!=t} R[s,s;r]
///   - sum_{r,s,t pairwise distinct} R[r,s;t]  == 0
/// Throws InvalidArgument unless the pair marginals equal the two summaries.
std::vector<LinearConstraint> m2_axioms(const PairSummary& pair, const ResponseSummary& first,
                                        const ResponseSummary& second);

/// R[r,s;t] <= R[r,s] for every (r, s, t), then non-negativity of every
/// PairEval variable.
std::vector<LinearConstraint> m2_inequalities(const PairSummary& pair);

/// True iff the matrix's row sums equal `summary` and its column sums equal
/// `qc`. Never throws.
bool verify_decomposition(const EvaluationMatrix& eval, const ResponseSummary& summary,
                          const QcPoint& qc);

/// Gamma = R[r,s;t]/Q_t - (R[r;t|i]/Q_t)(R[s;t|j]/Q_t), marginals taken from
/// the tensor. Throws InvalidArgument when Q_t = 0 or qc is not the tensor's
/// answer key.
Rational pair_correlation(const PairEvaluation& eval, const QcPoint& qc, std::size_t response_i,
                          std::size_t response_j, std::size_t truth);

/// Rank of the augmented [coefficients | rhs] rows of a set of equalities,
/// computed exactly over the rationals.
std::size_t equality_rank(std::span<const LinearConstraint> constraints);

/// Whether `target` is a rational linear combination of `basis` (augmented
/// rows, equalities only).
bool in_equality_span(const LinearConstraint& target, std::span<const LinearConstraint> basis);

}  // namespace nka

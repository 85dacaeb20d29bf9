#include "nka/axioms.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "nka/error.hpp"

namespace nka {
namespace {

std::uint16_t narrow_label(std::size_t label) {
  if (label > 0xFFFF) throw InvalidArgument("label index out of range");
  return static_cast<std::uint16_t>(label);
}

}  // namespace

VariableId VariableId::eval(std::size_t classifier, std::size_t response, std::size_t truth) {
  return {VarKind::Eval, static_cast<std::uint8_t>(classifier), narrow_label(response),
          narrow_label(truth), 0};
}

VariableId VariableId::pair_eval(std::size_t response_i, std::size_t response_j,
                                 std::size_t truth) {
  return {VarKind::PairEval, 0, narrow_label(response_i), narrow_label(response_j),
          narrow_label(truth)};
}

VariableId VariableId::key(std::size_t truth) {
  return {VarKind::Key, 0, narrow_label(truth), 0, 0};
}

VariableId VariableId::observed(std::size_t classifier, std::size_t response) {
  return {VarKind::Observed, static_cast<std::uint8_t>(classifier), narrow_label(response), 0, 0};
}

VariableId VariableId::pair_observed(std::size_t response_i, std::size_t response_j) {
  return {VarKind::PairObserved, 0, narrow_label(response_i), narrow_label(response_j), 0};
}

VariableId VariableId::test_size() { return {VarKind::TestSize, 0, 0, 0, 0}; }

// ---------------------------------------------------------------------------
// VariableSpace

VariableSpace::VariableSpace(LabelSet labels, std::vector<std::string> classifiers, bool symbolic)
    : labels_(std::move(labels)), classifiers_(std::move(classifiers)), symbolic_(symbolic) {
  if (classifiers_.empty() || classifiers_.size() > 2) {
    throw InvalidArgument("a variable space covers one or two classifiers");
  }
  if (classifiers_.size() == 2 && classifiers_[0] == classifiers_[1]) {
    throw InvalidArgument("classifier names must differ");
  }
}

VariableSpace VariableSpace::single(LabelSet labels, std::string classifier) {
  return VariableSpace(std::move(labels), {std::move(classifier)});
}

VariableSpace VariableSpace::pair(LabelSet labels, std::string first, std::string second) {
  return VariableSpace(std::move(labels), {std::move(first), std::move(second)});
}

bool VariableSpace::contains(const VariableId& id) const {
  const std::size_t r = labels_.size();
  const std::size_t m = classifiers_.size();
  switch (id.kind) {
    case VarKind::Eval:
      return id.classifier < m && id.first < r && id.second < r && id.third == 0;
    case VarKind::PairEval:
      return m == 2 && id.classifier == 0 && id.first < r && id.second < r && id.third < r;
    case VarKind::Key:
      return id.classifier == 0 && id.first < r && id.second == 0 && id.third == 0;
    case VarKind::Observed:
      return symbolic_ && id.classifier < m && id.first < r && id.second == 0 && id.third == 0;
    case VarKind::PairObserved:
      return symbolic_ && m == 2 && id.classifier == 0 && id.first < r && id.second < r &&
             id.third == 0;
    case VarKind::TestSize:
      return symbolic_ && id == VariableId::test_size();
  }
  return false;
}

std::vector<VariableId> VariableSpace::declared() const {
  const std::size_t r = labels_.size();
  const std::size_t m = classifiers_.size();
  std::vector<VariableId> ids;
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t t = 0; t < r; ++t) ids.push_back(VariableId::eval(c, a, t));
  if (m == 2) {
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b)
        for (std::size_t t = 0; t < r; ++t) ids.push_back(VariableId::pair_eval(a, b, t));
  }
  for (std::size_t t = 0; t < r; ++t) ids.push_back(VariableId::key(t));
  if (symbolic_) {
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t a = 0; a < r; ++a) ids.push_back(VariableId::observed(c, a));
    if (m == 2) {
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) ids.push_back(VariableId::pair_observed(a, b));
    }
    ids.push_back(VariableId::test_size());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string VariableSpace::name(const VariableId& id) const {
  if (!contains(id)) throw InvalidArgument("variable is not declared in this space");
  const auto& l = labels_;
  switch (id.kind) {
    case VarKind::Eval:
      return "R[" + l[id.first] + ";" + l[id.second] + "|" + classifiers_[id.classifier] + "]";
    case VarKind::PairEval:
      return "R[" + l[id.first] + "," + l[id.second] + ";" + l[id.third] + "|" + classifiers_[0] +
             "," + classifiers_[1] + "]";
    case VarKind::Key:
      return "Q[" + l[id.first] + "]";
    case VarKind::Observed:
      return "R[" + l[id.first] + "|" + classifiers_[id.classifier] + "]";
    case VarKind::PairObserved:
      return "R[" + l[id.first] + "," + l[id.second] + "|" + classifiers_[0] + "," +
             classifiers_[1] + "]";
    case VarKind::TestSize:
      return "Q";
  }
  return {};
}

// ---------------------------------------------------------------------------
// LinearConstraint and evaluation

LinearConstraint& LinearConstraint::add(const VariableId& id, Count coefficient) {
  if (coefficient == 0) return *this;
  auto [it, inserted] = terms_.try_emplace(id, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
  return *this;
}

Count LinearConstraint::coefficient(const VariableId& id) const {
  auto it = terms_.find(id);
  return it == terms_.end() ? 0 : it->second;
}

LinearConstraint& LinearConstraint::operator+=(const LinearConstraint& other) {
  if (relation_ != Relation::Equal || other.relation_ != Relation::Equal) {
    throw InvalidArgument("only equalities can be summed");
  }
  for (const auto& [id, coefficient] : other.terms_) add(id, coefficient);
  rhs_ += other.rhs_;
  return *this;
}

LinearConstraint LinearConstraint::operator-() const {
  if (relation_ != Relation::Equal) throw InvalidArgument("only equalities can be negated");
  LinearConstraint negated(Relation::Equal, -rhs_);
  for (const auto& [id, coefficient] : terms_) negated.add(id, -coefficient);
  return negated;
}

Count Assignment::get(const VariableId& id) const {
  auto it = values_.find(id);
  if (it == values_.end()) throw InvalidArgument("variable has no assigned value");
  return it->second;
}

void Assignment::bind_answer_key(const QcPoint& qc) {
  for (std::size_t t = 0; t < qc.label_count(); ++t) set(VariableId::key(t), qc[t]);
}

void Assignment::bind_evaluation(const EvaluationMatrix& eval, std::size_t classifier) {
  const std::size_t r = eval.label_count();
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t t = 0; t < r; ++t) set(VariableId::eval(classifier, a, t), eval(a, t));
}

LinearConstraint substitute(const LinearConstraint& constraint, const Assignment& values) {
  LinearConstraint out(constraint.relation(), constraint.rhs());
  Count folded = 0;
  for (const auto& [id, coefficient] : constraint.terms()) {
    if (values.contains(id)) {
      folded += coefficient * values.get(id);
    } else {
      out.add(id, coefficient);
    }
  }
  out.set_rhs(constraint.rhs() - folded);
  return out;
}

Count residual(const LinearConstraint& constraint, const Assignment& values) {
  Count lhs = 0;
  for (const auto& [id, coefficient] : constraint.terms()) lhs += coefficient * values.get(id);
  return lhs - constraint.rhs();
}

bool satisfied(const LinearConstraint& constraint, const Assignment& values) {
  const Count diff = residual(constraint, values);
  return constraint.relation() == Relation::Equal ? diff == 0 : diff <= 0;
}

std::string format(const LinearConstraint& constraint, const VariableSpace& space) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [id, coefficient] : constraint.terms()) {
    if (!first) out << ' ';
    out << coefficient << '*' << space.name(id);
    first = false;
  }
  if (first) out << '0';
  out << (constraint.relation() == Relation::Equal ? " == " : " <= ") << constraint.rhs();
  return out.str();
}

void write_constraints(std::ostream& out, std::span<const LinearConstraint> constraints,
                       const VariableSpace& space) {
  for (const auto& c : constraints) out << format(c, space) << '\n';
}

// ---------------------------------------------------------------------------
// Pair summaries and tensors

PairSummary::PairSummary(LabelSet labels, std::vector<Count> counts)
    : labels_(std::move(labels)), counts_(std::move(counts)) {
  if (counts_.size() != labels_.size() * labels_.size()) {
    throw StructuralError("pair summary needs R*R counts");
  }
  if (std::any_of(counts_.begin(), counts_.end(), [](Count c) { return c < 0; })) {
    throw InvalidArgument("pair counts must be non-negative");
  }
}

Count PairSummary::test_size() const {
  Count total = 0;
  for (Count c : counts_) total += c;
  return total;
}

ResponseSummary PairSummary::first_marginal() const {
  const std::size_t r = labels_.size();
  std::vector<Count> sums(r, 0);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) sums[a] += (*this)(a, b);
  return ResponseSummary(labels_, std::move(sums));
}

ResponseSummary PairSummary::second_marginal() const {
  const std::size_t r = labels_.size();
  std::vector<Count> sums(r, 0);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) sums[b] += (*this)(a, b);
  return ResponseSummary(labels_, std::move(sums));
}

PairEvaluation::PairEvaluation(LabelSet labels, std::vector<Count> entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
  const std::size_t r = labels_.size();
  if (entries_.size() != r * r * r) throw StructuralError("pair evaluation needs R^3 entries");
  if (std::any_of(entries_.begin(), entries_.end(), [](Count c) { return c < 0; })) {
    throw InvalidArgument("pair evaluation entries must be non-negative");
  }
}

PairSummary PairEvaluation::pair_summary() const {
  const std::size_t r = labels_.size();
  std::vector<Count> counts(r * r, 0);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t t = 0; t < r; ++t) counts[a * r + b] += (*this)(a, b, t);
  return PairSummary(labels_, std::move(counts));
}

EvaluationMatrix PairEvaluation::first_evaluation() const {
  const std::size_t r = labels_.size();
  std::vector<Count> entries(r * r, 0);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t t = 0; t < r; ++t) entries[a * r + t] += (*this)(a, b, t);
  return EvaluationMatrix(labels_, std::move(entries));
}

EvaluationMatrix PairEvaluation::second_evaluation() const {
  const std::size_t r = labels_.size();
  std::vector<Count> entries(r * r, 0);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t t = 0; t < r; ++t) entries[b * r + t] += (*this)(a, b, t);
  return EvaluationMatrix(labels_, std::move(entries));
}

QcPoint PairEvaluation::answer_key() const { return first_evaluation().answer_key(); }

void bind_pair_evaluation(Assignment& values, const PairEvaluation& eval) {
  const std::size_t r = eval.labels().size();
  values.bind_answer_key(eval.answer_key());
  values.bind_evaluation(eval.first_evaluation(), 0);
  values.bind_evaluation(eval.second_evaluation(), 1);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t t = 0; t < r; ++t) values.set(VariableId::pair_eval(a, b, t), eval(a, b, t));
}

// ---------------------------------------------------------------------------
// Constraint builders

std::vector<LinearConstraint> margin_constraints(const QcPoint& qc, const ResponseSummary& summary,
                                                 std::size_t classifier) {
  require_same_labels(qc.labels(), summary.labels(), "margin constraints");
  if (qc.test_size() != summary.test_size()) {
    throw InvalidArgument("answer key has " + std::to_string(qc.test_size()) +
                          " items but the responses sum to " +
                          std::to_string(summary.test_size()));
  }
  const std::size_t r = qc.label_count();
  std::vector<LinearConstraint> out;
  for (std::size_t t = 0; t < r; ++t) {
    LinearConstraint column(Relation::Equal, qc[t]);
    for (std::size_t a = 0; a < r; ++a) column.add(VariableId::eval(classifier, a, t), 1);
    out.push_back(std::move(column));
  }
  for (std::size_t a = 0; a < r; ++a) {
    LinearConstraint row(Relation::Equal, summary[a]);
    for (std::size_t t = 0; t < r; ++t) row.add(VariableId::eval(classifier, a, t), 1);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<LinearConstraint> m1_inequalities(const ResponseSummary& summary,
                                              std::size_t classifier) {
  const std::size_t r = summary.label_count();
  std::vector<LinearConstraint> out;
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t t = 0; t < r; ++t) {
      out.push_back(LinearConstraint(Relation::LessEqual, summary[a])
                        .add(VariableId::eval(classifier, a, t), 1));
    }
  }
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t t = 0; t < r; ++t) {
      out.push_back(
          LinearConstraint(Relation::LessEqual, 0).add(VariableId::eval(classifier, a, t), -1));
    }
  }
  for (std::size_t t = 0; t < r; ++t) {
    out.push_back(LinearConstraint(Relation::LessEqual, 0).add(VariableId::key(t), -1));
  }
  return out;
}

std::vector<LinearConstraint> correct_count_inequalities(const ResponseSummary& summary,
                                                         std::size_t classifier) {
  std::vector<LinearConstraint> out;
  for (std::size_t t = 0; t < summary.label_count(); ++t) {
    out.push_back(LinearConstraint(Relation::LessEqual, summary[t])
                      .add(VariableId::eval(classifier, t, t), 1));
  }
  return out;
}

namespace {

// The variable part of the single axiom for true label t, shared by the
// substituted and symbolic forms.
LinearConstraint m1_axiom_terms(std::size_t r, std::size_t truth, std::size_t classifier) {
  LinearConstraint axiom(Relation::Equal, 0);
  axiom.add(VariableId::eval(classifier, truth, truth), 1);
  axiom.add(VariableId::key(truth), -1);
  for (std::size_t l = 0; l < r; ++l) {
    if (l == truth) continue;
    for (std::size_t a = 0; a < r; ++a) {
      if (a == truth) continue;
      axiom.add(VariableId::eval(classifier, a, l), -1);
    }
  }
  return axiom;
}

}  // namespace

std::vector<LinearConstraint> m1_axioms(const ResponseSummary& summary, std::size_t classifier) {
  const std::size_t r = summary.label_count();
  std::vector<LinearConstraint> out;
  for (std::size_t t = 0; t < r; ++t) {
    LinearConstraint axiom = m1_axiom_terms(r, t, classifier);
    Count observed_elsewhere = 0;
    for (std::size_t a = 0; a < r; ++a) {
      if (a != t) observed_elsewhere += summary[a];
    }
    axiom.set_rhs(-observed_elsewhere);
    out.push_back(std::move(axiom));
  }
  return out;
}

std::vector<LinearConstraint> m1_axioms_symbolic(const LabelSet& labels, std::size_t classifier) {
  const std::size_t r = labels.size();
  std::vector<LinearConstraint> out;
  for (std::size_t t = 0; t < r; ++t) {
    LinearConstraint axiom = m1_axiom_terms(r, t, classifier);
    for (std::size_t a = 0; a < r; ++a) {
      if (a != t) axiom.add(VariableId::observed(classifier, a), 1);
    }
    out.push_back(std::move(axiom));
  }
  return out;
}

std::vector<LinearConstraint> test_size_identities(const LabelSet& labels,
                                                   std::size_t classifier) {
  const std::size_t r = labels.size();
  LinearConstraint keys(Relation::Equal, 0);
  LinearConstraint observed(Relation::Equal, 0);
  LinearConstraint cells(Relation::Equal, 0);
  for (std::size_t a = 0; a < r; ++a) {
    keys.add(VariableId::key(a), 1);
    observed.add(VariableId::observed(classifier, a), 1);
    for (std::size_t t = 0; t < r; ++t) cells.add(VariableId::eval(classifier, a, t), 1);
  }
  std::vector<LinearConstraint> out{keys, observed, cells};
  for (auto& c : out) c.add(VariableId::test_size(), -1);
  return out;
}

std::vector<LinearConstraint> m2_axioms(const PairSummary& pair, const ResponseSummary& first,
                                        const ResponseSummary& second) {
  require_same_labels(pair.labels(), first.labels(), "pair axioms");
  require_same_labels(pair.labels(), second.labels(), "pair axioms");
  if (!(pair.first_marginal() == first) || !(pair.second_marginal() == second)) {
    throw InvalidArgument("pair summary marginals do not match the single summaries");
  }
  const std::size_t r = pair.labels().size();
  const std::array<const ResponseSummary*, 2> singles{&first, &second};
  std::vector<LinearConstraint> out;
  for (std::size_t t = 0; t < r; ++t) {
    LinearConstraint axiom(Relation::Equal, 0);
    Count constant = 0;
    axiom.add(VariableId::pair_eval(t, t, t), 1);
    axiom.add(VariableId::key(t), -1);
    for (std::size_t c = 0; c < 2; ++c) {
      for (std::size_t a = 0; a < r; ++a) {
        if (a != t) constant += (*singles[c])[a];
      }
      for (std::size_t truth = 0; truth < r; ++truth) {
        if (truth == t) continue;
        for (std::size_t response = 0; response < r; ++response) {
          if (response == t) continue;
          axiom.add(VariableId::eval(c, response, truth), -1);
        }
      }
    }
    for (std::size_t a = 0; a < r; ++a) {
      if (a != t) constant -= pair(a, a);
    }
    for (std::size_t truth = 0; truth < r; ++truth) {
      if (truth == t) continue;
      for (std::size_t s = 0; s < r; ++s) {
        if (s != t) axiom.add(VariableId::pair_eval(s, s, truth), 1);
      }
    }
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = 0; b < r; ++b) {
        if (a != b && a != t && b != t) axiom.add(VariableId::pair_eval(a, b, t), -1);
      }
    }
    axiom.set_rhs(-constant);
    out.push_back(std::move(axiom));
  }
  return out;
}

std::vector<LinearConstraint> m2_inequalities(const PairSummary& pair) {
  const std::size_t r = pair.labels().size();
  std::vector<LinearConstraint> out;
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t t = 0; t < r; ++t)
        out.push_back(LinearConstraint(Relation::LessEqual, pair(a, b))
                          .add(VariableId::pair_eval(a, b, t), 1));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t t = 0; t < r; ++t)
        out.push_back(
            LinearConstraint(Relation::LessEqual, 0).add(VariableId::pair_eval(a, b, t), -1));
  return out;
}

bool verify_decomposition(const EvaluationMatrix& eval, const ResponseSummary& summary,
                          const QcPoint& qc) {
  if (!(eval.labels() == summary.labels()) || !(eval.labels() == qc.labels())) return false;
  const auto rows = eval.responses();
  const auto cols = eval.answer_key();
  return std::equal(rows.counts().begin(), rows.counts().end(), summary.counts().begin()) &&
         std::equal(cols.counts().begin(), cols.counts().end(), qc.counts().begin());
}

Rational pair_correlation(const PairEvaluation& eval, const QcPoint& qc, std::size_t response_i,
                          std::size_t response_j, std::size_t truth) {
  require_same_labels(eval.labels(), qc.labels(), "pair correlation");
  if (!(eval.answer_key() == qc)) {
    throw InvalidArgument("answer-key summary does not match the pair evaluation");
  }
  const std::size_t r = qc.label_count();
  if (response_i >= r || response_j >= r || truth >= r) {
    throw InvalidArgument("label index out of range");
  }
  if (qc[truth] == 0) {
    throw InvalidArgument("pair correlation is undefined for a label absent from the answer key");
  }
  const Count q = qc[truth];
  const Rational joint(eval(response_i, response_j, truth), q);
  const Rational first(eval.first_evaluation()(response_i, truth), q);
  const Rational second(eval.second_evaluation()(response_j, truth), q);
  return joint - first * second;
}

// ---------------------------------------------------------------------------
// Exact linear algebra over augmented constraint rows

namespace {

using Row = std::vector<Rational>;

std::vector<Row> augmented_rows(std::span<const LinearConstraint> constraints,
                                const std::vector<VariableId>& columns) {
  std::vector<Row> rows;
  for (const auto& c : constraints) {
    if (c.relation() != Relation::Equal) {
      throw InvalidArgument("linear span checks accept equalities only");
    }
    Row row;
    row.reserve(columns.size() + 1);
    for (const auto& id : columns) row.emplace_back(c.coefficient(id));
    row.emplace_back(c.rhs());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<VariableId> union_of_variables(std::span<const LinearConstraint> constraints) {
  std::set<VariableId> ids;
  for (const auto& c : constraints)
    for (const auto& [id, coefficient] : c.terms()) ids.insert(id);
  return {ids.begin(), ids.end()};
}

// Gaussian elimination to row echelon form; returns the rank.
std::size_t eliminate(std::vector<Row>& rows) {
  if (rows.empty()) return 0;
  const std::size_t width = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < width && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      if (rows[i][col] == 0) continue;
      const Rational factor = rows[i][col] / rows[rank][col];
      for (std::size_t k = col; k < width; ++k) rows[i][k] -= factor * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::size_t equality_rank(std::span<const LinearConstraint> constraints) {
  auto rows = augmented_rows(constraints, union_of_variables(constraints));
  return eliminate(rows);
}

bool in_equality_span(const LinearConstraint& target, std::span<const LinearConstraint> basis) {
  std::vector<LinearConstraint> all(basis.begin(), basis.end());
  const auto columns = union_of_variables(all);
  auto base_rows = augmented_rows(all, columns);
  const std::size_t base_rank = eliminate(base_rows);
  all.push_back(target);
  const auto extended_columns = union_of_variables(all);
  auto rows = augmented_rows(all, extended_columns);
  return eliminate(rows) == base_rank;
}

}  // namespace nka

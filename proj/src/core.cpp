#include "nka/core.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "nka/error.hpp"

namespace nka {

LabelSet::LabelSet(std::vector<std::string> labels) {
  if (labels.size() < 2) {
    throw InvalidArgument("a label set needs at least two labels");
  }
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (label.empty()) throw InvalidArgument("labels must be non-empty");
    if (!seen.insert(label).second) throw InvalidArgument("duplicate label '" + label + "'");
  }
  labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
}

LabelSet LabelSet::pair_comparison() {
  static const LabelSet instance({"a", "b", "tie"});
  return instance;
}

std::optional<std::size_t> LabelSet::find(std::string_view label) const {
  auto it = std::find(labels_->begin(), labels_->end(), label);
  if (it == labels_->end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_->begin());
}

std::size_t LabelSet::index_of(std::string_view label) const {
  if (auto index = find(label)) return *index;
  throw InvalidArgument("unknown label '" + std::string(label) + "'");
}

void require_same_labels(const LabelSet& a, const LabelSet& b, std::string_view context) {
  if (!(a == b)) {
    throw StructuralError(std::string(context) + ": label sets differ");
  }
}

namespace detail {

LabelCounts::LabelCounts(LabelSet labels, std::vector<Count> counts)
    : labels_(std::move(labels)), counts_(std::move(counts)) {
  if (counts_.size() != labels_.size()) {
    throw StructuralError("expected " + std::to_string(labels_.size()) + " counts, got " +
                          std::to_string(counts_.size()));
  }
  for (Count c : counts_) {
    if (c < 0) throw InvalidArgument("counts must be non-negative");
  }
  test_size_ = std::accumulate(counts_.begin(), counts_.end(), Count{0});
}

LabelCounts::LabelCounts(LabelSet labels, std::vector<Count> counts, Count test_size)
    : LabelCounts(std::move(labels), std::move(counts)) {
  if (test_size_ != test_size) {
    throw InvalidArgument("counts sum to " + std::to_string(test_size_) +
                          " but the test has " + std::to_string(test_size) + " items");
  }
}

}  // namespace detail

bool QcPoint::operator<(const QcPoint& other) const {
  return std::lexicographical_compare(counts().begin(), counts().end(), other.counts().begin(),
                                      other.counts().end());
}

EvaluationMatrix::EvaluationMatrix(LabelSet labels, std::vector<Count> entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
  if (entries_.size() != labels_.size() * labels_.size()) {
    throw StructuralError("evaluation matrix needs R*R entries");
  }
  for (Count c : entries_) {
    if (c < 0) throw InvalidArgument("evaluation entries must be non-negative");
  }
}

EvaluationMatrix EvaluationMatrix::perfect(const QcPoint& qc) {
  const std::size_t r = qc.label_count();
  std::vector<Count> entries(r * r, 0);
  for (std::size_t l = 0; l < r; ++l) entries[l * r + l] = qc[l];
  return EvaluationMatrix(qc.labels(), std::move(entries));
}

Count EvaluationMatrix::test_size() const {
  return std::accumulate(entries_.begin(), entries_.end(), Count{0});
}

std::vector<Count> EvaluationMatrix::diagonal() const {
  std::vector<Count> diag(label_count());
  for (std::size_t l = 0; l < diag.size(); ++l) diag[l] = correct(l);
  return diag;
}

Count EvaluationMatrix::trace() const {
  Count sum = 0;
  for (std::size_t l = 0; l < label_count(); ++l) sum += correct(l);
  return sum;
}

ResponseSummary EvaluationMatrix::responses() const {
  const std::size_t r = label_count();
  std::vector<Count> rows(r, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t t = 0; t < r; ++t) rows[i] += (*this)(i, t);
  return ResponseSummary(labels_, std::move(rows));
}

QcPoint EvaluationMatrix::answer_key() const {
  const std::size_t r = label_count();
  std::vector<Count> cols(r, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t t = 0; t < r; ++t) cols[t] += (*this)(i, t);
  return QcPoint(labels_, std::move(cols));
}

std::uint64_t binomial(Count n, Count k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (Count i = 1; i <= k; ++i) {
    // result * m / i is exact; dividing out the gcd first keeps it in range.
    const auto m = static_cast<std::uint64_t>(n - k + i);
    const auto g = std::gcd(result, static_cast<std::uint64_t>(i));
    const std::uint64_t d = static_cast<std::uint64_t>(i) / g;
    if (__builtin_mul_overflow(result / g, m / d, &result)) {
      throw InvalidArgument("binomial coefficient overflows 64 bits");
    }
  }
  return result;
}

namespace {

void compose(Count remaining, std::size_t position, std::vector<Count>& parts,
             const LabelSet& labels, const std::function<void(const QcPoint&)>& visit) {
  if (position + 1 == parts.size()) {
    parts[position] = remaining;
    visit(QcPoint(labels, parts));
    return;
  }
  for (Count k = 0; k <= remaining; ++k) {
    parts[position] = k;
    compose(remaining - k, position + 1, parts, labels, visit);
  }
}

}  // namespace

void for_each_qc_point(Count test_size, const LabelSet& labels,
                       const std::function<void(const QcPoint&)>& visit) {
  if (test_size < 0) throw InvalidArgument("test size must be non-negative");
  std::vector<Count> parts(labels.size(), 0);
  compose(test_size, 0, parts, labels, visit);
}

std::vector<QcPoint> qc_points(Count test_size, const LabelSet& labels) {
  std::vector<QcPoint> points;
  if (test_size >= 0) {
    points.reserve(binomial(test_size + static_cast<Count>(labels.size()) - 1,
                            static_cast<Count>(labels.size()) - 1));
  }
  for_each_qc_point(test_size, labels, [&](const QcPoint& p) { points.push_back(p); });
  return points;
}

namespace {

void require_columns(const EvaluationMatrix& eval, const QcPoint& qc) {
  require_same_labels(eval.labels(), qc.labels(), "evaluation vs answer key");
  const QcPoint columns = eval.answer_key();
  if (!std::equal(qc.counts().begin(), qc.counts().end(), columns.counts().begin())) {
    throw InvalidArgument("evaluation column sums do not match the answer-key summary");
  }
}

}  // namespace

std::optional<Rational> label_accuracy(const EvaluationMatrix& eval, const QcPoint& qc,
                                       std::size_t label) {
  require_columns(eval, qc);
  if (label >= qc.label_count()) throw InvalidArgument("label index out of range");
  if (qc[label] == 0) return std::nullopt;
  return Rational(eval.correct(label), qc[label]);
}

PSpacePoint to_pspace(const EvaluationMatrix& eval, const QcPoint& qc) {
  require_columns(eval, qc);
  if (qc.test_size() == 0) throw InvalidArgument("empty test");
  PSpacePoint point;
  for (std::size_t l = 0; l < qc.label_count(); ++l) {
    point.prevalences.emplace_back(qc[l], qc.test_size());
    point.label_accuracies.push_back(label_accuracy(eval, qc, l));
  }
  return point;
}

}  // namespace nka

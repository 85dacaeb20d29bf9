#include "nka/mc_grade.hpp"

#include <algorithm>

#include "nka/error.hpp"
#include "nka/feasible.hpp"

namespace nka {

Rational grade(const EvaluationMatrix& eval, const QcPoint& qc) {
  require_same_labels(eval.labels(), qc.labels(), "grade");
  if (qc.test_size() == 0) throw InvalidArgument("empty test");
  if (!(eval.answer_key() == qc)) {
    throw InvalidArgument("evaluation columns do not match the answer key");
  }
  return Rational(eval.trace(), qc.test_size());
}

Rational max_grade(const QcPoint& qc, const ResponseSummary& summary) {
  if (qc.test_size() == 0) throw InvalidArgument("empty test");
  Count total = 0;
  for (std::size_t t = 0; t < qc.label_count(); ++t) total += max_correct(qc, summary, t);
  return Rational(total, qc.test_size());
}

Rational min_grade(const QcPoint& qc, const ResponseSummary& summary) {
  require_same_labels(qc.labels(), summary.labels(), "grade set");
  const Count q = qc.test_size();
  if (q == 0) throw InvalidArgument("empty test");
  if (summary.test_size() != q) throw InvalidArgument("answer key and responses differ in size");
  Count forced = 0;
  for (std::size_t t = 0; t < qc.label_count(); ++t) {
    forced = std::max(forced, summary[t] + qc[t] - q);
  }
  return Rational(forced, q);
}

GradeSet grade_set(const ResponseSummary& summary) {
  if (summary.test_size() == 0) throw InvalidArgument("empty test");
  GradeSet out;
  for_each_qc_point(summary.test_size(), summary.labels(), [&](const QcPoint& qc) {
    out.entries.push_back({qc, min_grade(qc, summary), max_grade(qc, summary)});
  });
  return out;
}

LabelSet product_labels(const LabelSet& labels, std::size_t window) {
  if (window == 0) throw InvalidArgument("window size must be at least 1");
  std::vector<std::string> names{""};
  for (std::size_t k = 0; k < window; ++k) {
    std::vector<std::string> next;
    next.reserve(names.size() * labels.size());
    for (const auto& prefix : names) {
      for (const auto& label : labels.names()) {
        next.push_back(prefix.empty() ? label : prefix + "|" + label);
      }
    }
    names = std::move(next);
  }
  return LabelSet(std::move(names));
}

ResponseSummary sequence_relabel(std::span<const std::size_t> responses, const LabelSet& labels,
                                 std::size_t window) {
  if (window == 0) throw InvalidArgument("window size must be at least 1");
  if (responses.size() < window) {
    throw InvalidArgument("sequence of " + std::to_string(responses.size()) +
                          " responses is shorter than the window " + std::to_string(window));
  }
  const std::size_t r = labels.size();
  for (std::size_t v : responses) {
    if (v >= r) throw InvalidArgument("response index out of range");
  }
  if (window == 1) {
    std::vector<Count> counts(r, 0);
    for (std::size_t v : responses) ++counts[v];
    return ResponseSummary(labels, std::move(counts));
  }
  LabelSet product = product_labels(labels, window);
  std::vector<Count> counts(product.size(), 0);
  for (std::size_t start = 0; start + window <= responses.size(); ++start) {
    std::size_t index = 0;
    for (std::size_t k = 0; k < window; ++k) index = index * r + responses[start + k];
    ++counts[index];
  }
  return ResponseSummary(std::move(product), std::move(counts));
}

}  // namespace nka

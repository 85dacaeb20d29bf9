#include "nka/feasible.hpp"

#include <algorithm>
#include <map>

#include "nka/error.hpp"
#include "nka/flow.hpp"

namespace nka {

std::string_view to_string(ConstraintLevel level) {
  switch (level) {
    case ConstraintLevel::MarginsOnly:
      return "margins_only";
    case ConstraintLevel::WithInequalities:
      return "with_inequalities";
    case ConstraintLevel::WithM1Axioms:
      return "with_m1_axioms";
  }
  return "";
}

ConstraintLevel parse_constraint_level(std::string_view text) {
  for (auto level : {ConstraintLevel::MarginsOnly, ConstraintLevel::WithInequalities,
                     ConstraintLevel::WithM1Axioms}) {
    if (text == to_string(level)) return level;
  }
  throw ParseError("unknown constraint level '" + std::string(text) + "'");
}

namespace {

// Row-major walk over the transportation polytope. The last cell of each row
// and every cell of the last row are forced by the margins.
class TableWalker {
 public:
  TableWalker(const QcPoint& qc, const ResponseSummary& summary)
      : r_(qc.label_count()),
        rows_(summary.counts().begin(), summary.counts().end()),
        cols_(qc.counts().begin(), qc.counts().end()),
        cells_(r_ * r_, 0) {}

  // `leaf` returns false to stop the walk; walk() then returns false too.
  template <typename Leaf>
  bool walk(Leaf&& leaf) {
    return step(0, leaf);
  }

  const std::vector<Count>& cells() const { return cells_; }

 private:
  template <typename Leaf>
  bool step(std::size_t cell, Leaf& leaf) {
    if (cell == r_ * r_) return leaf(cells_);
    const std::size_t row = cell / r_;
    const std::size_t col = cell % r_;
    const bool last_col = col + 1 == r_;
    const bool last_row = row + 1 == r_;
    Count lo = 0;
    Count hi = std::min(rows_[row], cols_[col]);
    if (last_col) {
      lo = rows_[row];
      if (lo > cols_[col]) return true;
      hi = lo;
    }
    if (last_row) {
      if (cols_[col] > rows_[row] || (last_col && cols_[col] != rows_[row])) return true;
      lo = hi = cols_[col];
    }
    for (Count v = lo; v <= hi; ++v) {
      cells_[cell] = v;
      rows_[row] -= v;
      cols_[col] -= v;
      const bool keep_going = step(cell + 1, leaf);
      rows_[row] += v;
      cols_[col] += v;
      if (!keep_going) return false;
    }
    cells_[cell] = 0;
    return true;
  }

  std::size_t r_;
  std::vector<Count> rows_;
  std::vector<Count> cols_;
  std::vector<Count> cells_;
};

bool compatible(const QcPoint& qc, const ResponseSummary& summary) {
  require_same_labels(qc.labels(), summary.labels(), "feasible set");
  return qc.test_size() == summary.test_size();
}

void require_compatible(const QcPoint& qc, const ResponseSummary& summary) {
  if (!compatible(qc, summary)) {
    throw InvalidArgument("answer key and responses have different test sizes");
  }
}

std::optional<EvaluationMatrix> search_by_enumeration(const QcPoint& qc,
                                                      const ResponseSummary& summary,
                                                      std::span<const Count> lower_bounds) {
  std::optional<EvaluationMatrix> found;
  for_each_single(qc, summary, [&](const EvaluationMatrix& m) {
    for (std::size_t l = 0; l < m.label_count(); ++l) {
      if (m.correct(l) < lower_bounds[l]) return true;
    }
    found = m;
    return false;
  });
  return found;
}

std::optional<EvaluationMatrix> search_by_flow(const QcPoint& qc, const ResponseSummary& summary,
                                               std::span<const Count> lower_bounds) {
  const std::size_t r = qc.label_count();
  const std::size_t source = 0;
  const std::size_t sink = 2 * r + 1;
  auto row_node = [](std::size_t l) { return 1 + l; };
  auto col_node = [r](std::size_t l) { return 1 + r + l; };

  FlowNetwork network(2 * r + 2);
  for (std::size_t l = 0; l < r; ++l) {
    network.add_edge(source, row_node(l), summary[l], summary[l]);
    network.add_edge(col_node(l), sink, qc[l], qc[l]);
  }
  std::vector<std::size_t> cell_edges(r * r);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t t = 0; t < r; ++t) {
      const Count upper = std::min(summary[a], qc[t]);
      const Count lower = a == t ? lower_bounds[a] : 0;
      if (lower > upper) return std::nullopt;
      cell_edges[a * r + t] = network.add_edge(row_node(a), col_node(t), lower, upper);
    }
  }
  network.add_edge(sink, source, 0, qc.test_size());
  if (!network.find_circulation()) return std::nullopt;

  std::vector<Count> cells(r * r);
  for (std::size_t k = 0; k < cells.size(); ++k) cells[k] = network.flow(cell_edges[k]);
  return EvaluationMatrix(qc.labels(), std::move(cells));
}

constexpr Count kEnumerationLimit = 12;

}  // namespace

void for_each_single(const QcPoint& qc, const ResponseSummary& summary,
                     const std::function<bool(const EvaluationMatrix&)>& visit) {
  if (!compatible(qc, summary)) return;
  TableWalker walker(qc, summary);
  walker.walk([&](const std::vector<Count>& cells) {
    return visit(EvaluationMatrix(qc.labels(), cells));
  });
}

std::vector<EvaluationMatrix> enumerate_single(const QcPoint& qc, const ResponseSummary& summary) {
  std::vector<EvaluationMatrix> out;
  for_each_single(qc, summary, [&](const EvaluationMatrix& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

std::uint64_t count_single(const QcPoint& qc, const ResponseSummary& summary) {
  if (!compatible(qc, summary)) return 0;
  std::uint64_t count = 0;
  TableWalker walker(qc, summary);
  walker.walk([&](const std::vector<Count>&) {
    ++count;
    return true;
  });
  return count;
}

std::uint64_t count_all_evaluations(Count test_size, std::size_t label_count) {
  if (label_count < 2) throw InvalidArgument("at least two labels are required");
  if (test_size < 0) throw InvalidArgument("test size must be non-negative");
  std::vector<std::string> names;
  for (std::size_t l = 0; l < label_count; ++l) names.push_back("l" + std::to_string(l));
  const LabelSet labels(std::move(names));
  const Count parts = static_cast<Count>(label_count);
  std::uint64_t total = 0;
  for_each_qc_point(test_size, labels, [&](const QcPoint& qc) {
    std::uint64_t product = 1;
    for (std::size_t t = 0; t < label_count; ++t) product *= binomial(qc[t] + parts - 1, parts - 1);
    total += product;
  });
  return total;
}

std::uint64_t count_filtered(const ResponseSummary& summary, ConstraintLevel level) {
  const Count q = summary.test_size();
  const std::size_t r = summary.label_count();
  if (level == ConstraintLevel::MarginsOnly) return count_all_evaluations(q, r);

  const Count parts = static_cast<Count>(r);
  std::uint64_t total = 0;
  for_each_qc_point(q, summary.labels(), [&](const QcPoint& qc) {
    if (level == ConstraintLevel::WithM1Axioms) {
      total += count_single(qc, summary);
      return;
    }
    // Column t: choose the correct count d <= min(Q_t, R_t), then spread the
    // remaining Q_t - d errors over the other R - 1 responses.
    std::uint64_t product = 1;
    for (std::size_t t = 0; t < r; ++t) {
      std::uint64_t column = 0;
      for (Count d = 0; d <= std::min(qc[t], summary[t]); ++d) {
        column += binomial(qc[t] - d + parts - 2, parts - 2);
      }
      product *= column;
    }
    total += product;
  });
  return total;
}

Count max_correct(const QcPoint& qc, const ResponseSummary& summary, std::size_t label) {
  require_compatible(qc, summary);
  if (label >= qc.label_count()) throw InvalidArgument("label index out of range");
  return std::min(summary[label], qc[label]);
}

std::vector<Count> strict_lower_bounds(const QcPoint& qc, std::span<const Rational> thresholds) {
  if (thresholds.size() != qc.label_count()) {
    throw InvalidArgument("need one threshold per label");
  }
  std::vector<Count> bounds(qc.label_count(), 0);
  for (std::size_t l = 0; l < bounds.size(); ++l) {
    const Rational& x = thresholds[l];
    if (x < 0 || x > 1) throw InvalidArgument("thresholds must lie in [0, 1]");
    if (qc[l] > 0) bounds[l] = floor(x * qc[l]) + 1;
  }
  return bounds;
}

std::optional<EvaluationMatrix> find_evaluation_with_correct(const QcPoint& qc,
                                                             const ResponseSummary& summary,
                                                             std::span<const Count> lower_bounds,
                                                             FeasibilityBackend backend) {
  require_compatible(qc, summary);
  if (lower_bounds.size() != qc.label_count()) {
    throw InvalidArgument("need one lower bound per label");
  }
  if (backend == FeasibilityBackend::Automatic) {
    backend = qc.test_size() <= kEnumerationLimit ? FeasibilityBackend::Enumeration
                                                  : FeasibilityBackend::Flow;
  }
  return backend == FeasibilityBackend::Enumeration ? search_by_enumeration(qc, summary, lower_bounds)
                                                    : search_by_flow(qc, summary, lower_bounds);
}

bool joint_threshold_feasible(const QcPoint& qc, const ResponseSummary& summary,
                              std::span<const Rational> thresholds, FeasibilityBackend backend) {
  const auto bounds = strict_lower_bounds(qc, thresholds);
  return find_evaluation_with_correct(qc, summary, bounds, backend).has_value();
}

bool joint_threshold_feasible(const QcPoint& qc, const ResponseSummary& summary,
                              const Rational& threshold, FeasibilityBackend backend) {
  const std::vector<Rational> thresholds(qc.label_count(), threshold);
  return joint_threshold_feasible(qc, summary, thresholds, backend);
}

std::vector<std::pair<std::vector<Count>, std::uint64_t>> diagonal_multiplicities(
    const QcPoint& qc, const ResponseSummary& summary) {
  std::map<std::vector<Count>, std::uint64_t> counts;
  if (compatible(qc, summary)) {
    const std::size_t r = qc.label_count();
    TableWalker walker(qc, summary);
    std::vector<Count> diag(r);
    walker.walk([&](const std::vector<Count>& cells) {
      for (std::size_t l = 0; l < r; ++l) diag[l] = cells[l * r + l];
      ++counts[diag];
      return true;
    });
  }
  return {counts.begin(), counts.end()};
}

std::vector<CorrectnessCell> correctness_multiplicity(const QcPoint& qc,
                                                      std::span<const ResponseSummary> summaries) {
  if (summaries.size() != 2) {
    throw InvalidArgument("correctness grids are defined for exactly two classifiers");
  }
  const auto first = diagonal_multiplicities(qc, summaries[0]);
  const auto second = diagonal_multiplicities(qc, summaries[1]);
  std::vector<CorrectnessCell> cells;
  cells.reserve(first.size() * second.size());
  for (const auto& [diag_i, count_i] : first) {
    for (const auto& [diag_j, count_j] : second) {
      cells.push_back({diag_i, diag_j, count_i * count_j});
    }
  }
  return cells;
}

}  // namespace nka

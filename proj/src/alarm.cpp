#include "nka/alarm.hpp"

#include <algorithm>
#include <thread>

#include "nka/error.hpp"
#include "nka/feasible.hpp"

namespace nka {
namespace {

void require_summaries(std::span<const ResponseSummary> summaries) {
  if (summaries.empty()) throw InvalidArgument("at least one response summary is required");
  for (const auto& s : summaries.subspan(1)) {
    require_same_labels(summaries.front().labels(), s.labels(), "alarm");
    if (s.test_size() != summaries.front().test_size()) {
      throw InvalidArgument("all summaries must come from the same test");
    }
  }
  if (summaries.front().test_size() == 0) throw InvalidArgument("empty test");
}

// Evaluates fn at every Q-complex point, keeping lexicographic order. Workers
// take interleaved indices and write disjoint slots.
template <typename Result, typename Fn>
std::vector<Result> scan(const std::vector<QcPoint>& points, ScanOptions options, Fn fn) {
  std::vector<Result> results(points.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(points.size())));
  if (workers == 1) {
    for (std::size_t k = 0; k < points.size(); ++k) results[k] = fn(points[k]);
    return results;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < points.size(); k += workers) results[k] = fn(points[k]);
    });
  }
  pool.clear();
  return results;
}

std::vector<QcPoint> complex_of(std::span<const ResponseSummary> summaries) {
  return qc_points(summaries.front().test_size(), summaries.front().labels());
}

// Places `diagonal` on the diagonal and fills the remaining margins with the
// north-west corner rule.
EvaluationMatrix fill_around_diagonal(const QcPoint& qc, const ResponseSummary& summary,
                                      const std::vector<Count>& diagonal) {
  const std::size_t r = qc.label_count();
  std::vector<Count> cells(r * r, 0);
  std::vector<Count> rows(r);
  std::vector<Count> cols(r);
  for (std::size_t l = 0; l < r; ++l) {
    cells[l * r + l] = diagonal[l];
    rows[l] = summary[l] - diagonal[l];
    cols[l] = qc[l] - diagonal[l];
  }
  std::size_t a = 0;
  std::size_t t = 0;
  while (a < r && t < r) {
    const Count moved = std::min(rows[a], cols[t]);
    cells[a * r + t] += moved;
    rows[a] -= moved;
    cols[t] -= moved;
    if (rows[a] == 0) {
      ++a;
    } else {
      ++t;
    }
  }
  return EvaluationMatrix(qc.labels(), std::move(cells));
}

std::optional<AlarmWitness> witness_at(const QcPoint& qc,
                                       std::span<const ResponseSummary> summaries,
                                       const Rational& x, AlarmMode mode) {
  const std::vector<Rational> thresholds(qc.label_count(), x);
  const auto bounds = strict_lower_bounds(qc, thresholds);
  AlarmWitness witness{qc, {}};
  for (const auto& summary : summaries) {
    if (mode == AlarmMode::Ceiling) {
      std::vector<Count> diagonal(qc.label_count());
      for (std::size_t l = 0; l < diagonal.size(); ++l) {
        diagonal[l] = max_correct(qc, summary, l);
        if (diagonal[l] < bounds[l]) return std::nullopt;
      }
      witness.evaluations.push_back(fill_around_diagonal(qc, summary, diagonal));
    } else {
      auto found = find_evaluation_with_correct(qc, summary, bounds, FeasibilityBackend::Flow);
      if (!found) return std::nullopt;
      witness.evaluations.push_back(std::move(*found));
    }
  }
  return witness;
}

}  // namespace

std::optional<Rational> ceiling_at_qc(const QcPoint& qc,
                                      std::span<const ResponseSummary> summaries) {
  std::optional<Rational> ceiling;
  for (const auto& summary : summaries) {
    for (std::size_t l = 0; l < qc.label_count(); ++l) {
      if (qc[l] == 0) continue;
      const Rational ratio(max_correct(qc, summary, l), qc[l]);
      if (!ceiling || ratio < *ceiling) ceiling = ratio;
    }
  }
  return ceiling;
}

TriggerThreshold global_trigger_threshold(std::span<const ResponseSummary> summaries,
                                          ScanOptions options) {
  require_summaries(summaries);
  const auto points = complex_of(summaries);
  const auto ceilings = scan<std::optional<Rational>>(
      points, options, [&](const QcPoint& qc) { return ceiling_at_qc(qc, summaries); });
  std::size_t best = 0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    if (ceilings[k] && (!ceilings[best] || *ceilings[k] > *ceilings[best])) best = k;
  }
  return {*ceilings[best], points[best]};
}

MinMaxCurve min_max_curve(std::span<const ResponseSummary> summaries, ScanOptions options) {
  require_summaries(summaries);
  const auto points = complex_of(summaries);
  const auto ceilings = scan<std::optional<Rational>>(
      points, options, [&](const QcPoint& qc) { return ceiling_at_qc(qc, summaries); });
  MinMaxCurve curve;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (ceilings[k]) curve.points.push_back({points[k], *ceilings[k]});
  }
  std::stable_sort(curve.points.begin(), curve.points.end(),
                   [](const CurvePoint& a, const CurvePoint& b) { return a.ceiling < b.ceiling; });
  return curve;
}

MinMaxCurve per_label_curve(std::size_t label, std::span<const ResponseSummary> summaries,
                            ScanOptions options) {
  require_summaries(summaries);
  if (label >= summaries.front().label_count()) throw InvalidArgument("label index out of range");
  const auto points = complex_of(summaries);
  const auto ceilings = scan<std::optional<Rational>>(points, options, [&](const QcPoint& qc) {
    std::optional<Rational> value;
    if (qc[label] == 0) return value;
    for (const auto& summary : summaries) {
      const Rational ratio(max_correct(qc, summary, label), qc[label]);
      if (!value || ratio < *value) value = ratio;
    }
    return value;
  });
  MinMaxCurve curve;
  curve.label = label;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (ceilings[k]) curve.points.push_back({points[k], *ceilings[k]});
  }
  std::stable_sort(curve.points.begin(), curve.points.end(),
                   [](const CurvePoint& a, const CurvePoint& b) { return a.ceiling < b.ceiling; });
  return curve;
}

std::string_view to_string(AlarmMode mode) {
  return mode == AlarmMode::Ceiling ? "ceiling" : "joint";
}

AlarmMode parse_alarm_mode(std::string_view text) {
  if (text == "ceiling") return AlarmMode::Ceiling;
  if (text == "joint") return AlarmMode::Joint;
  throw ParseError("unknown alarm mode '" + std::string(text) + "'");
}

AlarmVerdict evaluate_alarm(std::span<const ResponseSummary> summaries, const Rational& x,
                            AlarmMode mode, ScanOptions options) {
  if (x < 0 || x > 1) throw InvalidArgument("alarm threshold must lie in [0, 1]");
  require_summaries(summaries);
  const auto points = complex_of(summaries);
  const auto witnesses = scan<std::optional<AlarmWitness>>(
      points, options, [&](const QcPoint& qc) { return witness_at(qc, summaries, x, mode); });
  AlarmVerdict verdict{true, x, mode, std::nullopt};
  for (const auto& w : witnesses) {
    if (w) {
      verdict.fired = false;
      verdict.witness = w;
      break;
    }
  }
  return verdict;
}

}  // namespace nka

#pragma once

// No-knowledge alarms. An alarm at threshold x fires when no answer-key
// summary in the Q-complex lets every classifier have every defined label
// accuracy strictly above x. Threshold comparisons are strict throughout.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nka/core.hpp"

namespace nka {

/// Worker count for Q-complex scans. Results do not depend on it.
struct ScanOptions {
  unsigned workers = 1;
};

/// min over classifiers and labels with Q_t > 0 of min(R_t, Q_t) / Q_t, or
/// nullopt when no label is present (empty test).
std::optional<Rational> ceiling_at_qc(const QcPoint& qc, std::span<const ResponseSummary> summaries);

struct TriggerThreshold {
  Rational theta;
  QcPoint argmax;  // lexicographically smallest point attaining theta
};

/// The largest min-max ceiling over the Q-complex. Any threshold x >= theta
/// fires the alarm.
TriggerThreshold global_trigger_threshold(std::span<const ResponseSummary> summaries,
                                          ScanOptions options = {});

struct CurvePoint {
  QcPoint qc;
  Rational ceiling;
};

/// Ceilings sorted ascending; ties keep lexicographic Q-complex order.
struct MinMaxCurve {
  std::optional<std::size_t> label;  // set for per-label curves
  std::vector<CurvePoint> points;
};

MinMaxCurve min_max_curve(std::span<const ResponseSummary> summaries, ScanOptions options = {});

/// min over classifiers of min(R_label, Q_label) / Q_label at every point
/// with Q_label > 0.
MinMaxCurve per_label_curve(std::size_t label, std::span<const ResponseSummary> summaries,
                            ScanOptions options = {});

enum class AlarmMode {
  Ceiling,  // per-label maxima, each label taken separately
  Joint,    // one evaluation per classifier meeting every label at once
};

std::string_view to_string(AlarmMode mode);
AlarmMode parse_alarm_mode(std::string_view text);

struct AlarmWitness {
  QcPoint qc;
  std::vector<EvaluationMatrix> evaluations;  // one per classifier
};

struct AlarmVerdict {
  bool fired = false;
  Rational threshold;
  AlarmMode mode = AlarmMode::Ceiling;
  std::optional<AlarmWitness> witness;  // present iff not fired
};

/// Throws InvalidArgument for x outside [0, 1] or an empty test.
AlarmVerdict evaluate_alarm(std::span<const ResponseSummary> summaries, const Rational& x,
                            AlarmMode mode, ScanOptions options = {});

}  // namespace nka

#pragma once

// CSV and JSON renderings of the artifacts written by the command-line tool.
// Exact fractions are authoritative; decimals are provided for plotting.

#include <ostream>
#include <span>
#include <string>

#include "json.hpp"
#include "nka/alarm.hpp"
#include "nka/feasible.hpp"
#include "nka/mc_grade.hpp"

namespace nka::io {

/// Header "R[a;a],R[a;b],..." in row-major order, then one matrix per row.
void write_matrices_csv(std::ostream& out, std::span<const EvaluationMatrix> matrices);
nlohmann::json matrices_json(const QcPoint& qc, const ResponseSummary& summary,
                             std::span<const EvaluationMatrix> matrices);

/// Header "i:R[a;a],...,j:R[a;a],...,multiplicity".
void write_multiplicity_csv(std::ostream& out, const LabelSet& labels,
                            std::span<const CorrectnessCell> cells);

/// Header "rank,Q_a,...,ceiling,ceiling_decimal"; rank counts from 1. Per-label
/// curves get a leading "label" column.
void write_curve_csv(std::ostream& out, const MinMaxCurve& curve);

/// Header "Q_a,...,min_grade,min_decimal,max_grade,max_decimal".
void write_grade_set_csv(std::ostream& out, const GradeSet& grades);

nlohmann::json matrix_json(const EvaluationMatrix& matrix);
nlohmann::json qc_json(const QcPoint& qc);
nlohmann::json verdict_json(const AlarmVerdict& verdict, const TriggerThreshold& theta,
                            std::span<const std::string> classifiers);

}  // namespace nka::io

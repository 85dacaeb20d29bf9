#include "nka/io.hpp"

namespace nka::io {
namespace {

std::string cell_name(const LabelSet& labels, std::size_t response, std::size_t truth) {
  return "R[" + labels[response] + ";" + labels[truth] + "]";
}

void write_matrix_header(std::ostream& out, const LabelSet& labels, const std::string& prefix) {
  const std::size_t r = labels.size();
  for (std::size_t k = 0; k < r * r; ++k) {
    if (k > 0) out << ',';
    out << prefix << cell_name(labels, k / r, k % r);
  }
}

template <typename Range>
void write_joined(std::ostream& out, const Range& values) {
  bool first = true;
  for (const auto& v : values) {
    if (!first) out << ',';
    out << v;
    first = false;
  }
}

}  // namespace

void write_matrices_csv(std::ostream& out, std::span<const EvaluationMatrix> matrices) {
  if (matrices.empty()) return;
  write_matrix_header(out, matrices.front().labels(), "");
  out << '\n';
  for (const auto& m : matrices) {
    write_joined(out, m.entries());
    out << '\n';
  }
}

nlohmann::json matrix_json(const EvaluationMatrix& matrix) {
  nlohmann::json rows = nlohmann::json::array();
  const std::size_t r = matrix.label_count();
  for (std::size_t a = 0; a < r; ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t t = 0; t < r; ++t) row.push_back(matrix(a, t));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json qc_json(const QcPoint& qc) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t l = 0; l < qc.label_count(); ++l) out[qc.labels()[l]] = qc[l];
  return out;
}

nlohmann::json matrices_json(const QcPoint& qc, const ResponseSummary& summary,
                             std::span<const EvaluationMatrix> matrices) {
  nlohmann::json doc;
  doc["labels"] = qc.labels().names();
  doc["qc"] = std::vector<Count>(qc.counts().begin(), qc.counts().end());
  doc["summary"] = std::vector<Count>(summary.counts().begin(), summary.counts().end());
  doc["note"] = "rows are responses, columns are true labels";
  doc["evaluations"] = nlohmann::json::array();
  for (const auto& m : matrices) doc["evaluations"].push_back(matrix_json(m));
  return doc;
}

void write_multiplicity_csv(std::ostream& out, const LabelSet& labels,
                            std::span<const CorrectnessCell> cells) {
  for (const char* prefix : {"i:", "j:"}) {
    for (std::size_t l = 0; l < labels.size(); ++l) {
      out << prefix << cell_name(labels, l, l) << ',';
    }
  }
  out << "multiplicity\n";
  for (const auto& cell : cells) {
    write_joined(out, cell.first);
    out << ',';
    write_joined(out, cell.second);
    out << ',' << cell.multiplicity << '\n';
  }
}

void write_curve_csv(std::ostream& out, const MinMaxCurve& curve) {
  if (curve.label) out << "label,";
  out << "rank";
  if (!curve.points.empty()) {
    for (const auto& name : curve.points.front().qc.labels().names()) out << ",Q_" << name;
  }
  out << ",ceiling,ceiling_decimal\n";
  std::size_t rank = 0;
  for (const auto& p : curve.points) {
    if (curve.label) out << p.qc.labels()[*curve.label] << ',';
    out << ++rank;
    for (Count c : p.qc.counts()) out << ',' << c;
    out << ',' << to_string(p.ceiling) << ',' << to_decimal(p.ceiling) << '\n';
  }
}

void write_grade_set_csv(std::ostream& out, const GradeSet& grades) {
  if (grades.entries.empty()) return;
  for (const auto& name : grades.entries.front().qc.labels().names()) out << "Q_" << name << ',';
  out << "min_grade,min_decimal,max_grade,max_decimal\n";
  for (const auto& e : grades.entries) {
    for (Count c : e.qc.counts()) out << c << ',';
    out << to_string(e.min_grade) << ',' << to_decimal(e.min_grade) << ','
        << to_string(e.max_grade) << ',' << to_decimal(e.max_grade) << '\n';
  }
}

nlohmann::json verdict_json(const AlarmVerdict& verdict, const TriggerThreshold& theta,
                            std::span<const std::string> classifiers) {
  nlohmann::json doc;
  doc["fired"] = verdict.fired;
  doc["threshold"] = to_string(verdict.threshold);
  doc["threshold_decimal"] = to_double(verdict.threshold);
  doc["mode"] = std::string(to_string(verdict.mode));
  doc["comparison"] = "strict";
  doc["theta"] = to_string(theta.theta);
  doc["theta_decimal"] = to_double(theta.theta);
  doc["theta_qc"] = qc_json(theta.argmax);
  doc["classifiers"] = std::vector<std::string>(classifiers.begin(), classifiers.end());
  if (verdict.witness) {
    nlohmann::json witness;
    witness["qc"] = qc_json(verdict.witness->qc);
    witness["evaluations"] = nlohmann::json::array();
    for (std::size_t i = 0; i < verdict.witness->evaluations.size(); ++i) {
      nlohmann::json entry;
      entry["classifier"] = i < classifiers.size() ? classifiers[i] : std::to_string(i);
      entry["matrix"] = matrix_json(verdict.witness->evaluations[i]);
      witness["evaluations"].push_back(std::move(entry));
    }
    doc["witness"] = std::move(witness);
  } else {
    doc["witness"] = nullptr;
  }
  return doc;
}

}  // namespace nka::io

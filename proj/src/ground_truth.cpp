#include "nka/ground_truth.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "nka/error.hpp"

namespace nka {

std::string_view to_string(Grade grade) {
  switch (grade) {
    case Grade::A:
      return "a";
    case Grade::B:
      return "b";
    case Grade::Tie:
      return "tie";
  }
  return "";
}

std::optional<Grade> parse_grade(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "a") return Grade::A;
  if (lower == "b") return Grade::B;
  if (lower == "tie") return Grade::Tie;
  return std::nullopt;
}

Grade swap_models(Grade grade) {
  if (grade == Grade::A) return Grade::B;
  if (grade == Grade::B) return Grade::A;
  return Grade::Tie;
}

VoteTally tally_votes(std::span<const Grade> grades) {
  VoteTally tally{0, 0};
  const Rational half(1, 2);
  for (Grade g : grades) {
    switch (g) {
      case Grade::A:
        tally.weight_a += 1;
        break;
      case Grade::B:
        tally.weight_b += 1;
        break;
      case Grade::Tie:
        tally.weight_a += half;
        tally.weight_b += half;
        break;
    }
  }
  return tally;
}

Grade weighted_vote(std::span<const Grade> grades) {
  if (grades.empty()) throw InvalidArgument("cannot vote over an empty list of grades");
  const VoteTally tally = tally_votes(grades);
  if (tally.weight_a > tally.weight_b) return Grade::A;
  if (tally.weight_b > tally.weight_a) return Grade::B;
  return Grade::Tie;
}

// ---------------------------------------------------------------------------
// GradingTable

GradingTable::GradingTable(std::vector<std::string> judges, std::vector<GradingRecord> records)
    : judges_(std::move(judges)), records_(std::move(records)) {
  if (judges_.empty()) throw InvalidArgument("grading table has no judge columns");
  std::set<std::string> seen;
  for (const auto& j : judges_) {
    if (j.empty()) throw InvalidArgument("judge names must be non-empty");
    if (!seen.insert(j).second) throw InvalidArgument("duplicate judge '" + j + "'");
  }
  for (const auto& record : records_) {
    if (record.grades.size() != judges_.size()) {
      throw StructuralError("question " + record.question_id + " has " +
                            std::to_string(record.grades.size()) + " grades for " +
                            std::to_string(judges_.size()) + " judges");
    }
    if (std::none_of(record.grades.begin(), record.grades.end(),
                     [](const auto& g) { return g.has_value(); })) {
      throw InvalidArgument("question " + record.question_id + " has no grades");
    }
  }
}

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

GradingTable GradingTable::parse_csv(std::string_view text) {
  std::vector<std::string> judges;
  std::vector<GradingRecord> records;
  bool have_header = false;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_number;
    if (line.empty()) continue;

    auto fields = split_fields(line);
    if (!have_header) {
      if (fields.size() < 4 || fields[0] != "question_id" || fields[1] != "model_a" ||
          fields[2] != "model_b") {
        throw ParseError(at_line(line_number) +
                         "header must be question_id,model_a,model_b,<judge>...");
      }
      judges.assign(fields.begin() + 3, fields.end());
      have_header = true;
      continue;
    }
    if (fields.size() != judges.size() + 3) {
      throw ParseError(at_line(line_number) + "expected " + std::to_string(judges.size() + 3) +
                       " fields, found " + std::to_string(fields.size()));
    }
    GradingRecord record{fields[0], fields[1], fields[2], {}};
    if (record.question_id.empty()) throw ParseError(at_line(line_number) + "missing question_id");
    for (std::size_t j = 0; j < judges.size(); ++j) {
      const std::string& cell = fields[3 + j];
      if (cell.empty()) {
        record.grades.emplace_back();
        continue;
      }
      auto grade = parse_grade(cell);
      if (!grade) {
        throw ParseError(at_line(line_number) + "unknown grade '" + cell + "' for judge " +
                         judges[j] + " (expected a, b or tie)");
      }
      record.grades.push_back(grade);
    }
    if (std::none_of(record.grades.begin(), record.grades.end(),
                     [](const auto& g) { return g.has_value(); })) {
      throw ParseError(at_line(line_number) + "question " + record.question_id + " has no grades");
    }
    records.push_back(std::move(record));
  }
  if (!have_header) throw ParseError("empty input: no header row");
  if (records.empty()) throw ParseError("input has a header but no records");
  return GradingTable(std::move(judges), std::move(records));
}

GradingTable GradingTable::parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("records") || !doc["records"].is_array()) {
    throw ParseError("JSON input needs a \"records\" array");
  }
  std::vector<std::string> judges;
  if (doc.contains("judges")) {
    judges = doc["judges"].get<std::vector<std::string>>();
  } else {
    std::set<std::string> names;
    for (const auto& r : doc["records"]) {
      if (r.contains("grades") && r["grades"].is_object()) {
        for (const auto& [name, value] : r["grades"].items()) names.insert(name);
      }
    }
    judges.assign(names.begin(), names.end());
  }
  std::vector<GradingRecord> records;
  std::size_t index = 0;
  for (const auto& r : doc["records"]) {
    ++index;
    const std::string where = "record " + std::to_string(index) + ": ";
    try {
      GradingRecord record{r.at("question_id").is_string() ? r.at("question_id").get<std::string>()
                                                          : r.at("question_id").dump(),
                           r.at("model_a").get<std::string>(), r.at("model_b").get<std::string>(),
                           std::vector<std::optional<Grade>>(judges.size())};
      const auto& grades = r.at("grades");
      for (const auto& [name, value] : grades.items()) {
        auto it = std::find(judges.begin(), judges.end(), name);
        if (it == judges.end()) throw ParseError(where + "grade from undeclared judge " + name);
        auto grade = parse_grade(value.get<std::string>());
        if (!grade) {
          throw ParseError(where + "unknown grade '" + value.get<std::string>() + "' for judge " +
                           name + " (expected a, b or tie)");
        }
        record.grades[static_cast<std::size_t>(it - judges.begin())] = grade;
      }
      records.push_back(std::move(record));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where + e.what());
    }
  }
  if (records.empty()) throw ParseError("JSON input has no records");
  try {
    return GradingTable(std::move(judges), std::move(records));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

GradingTable GradingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (path.extension() == ".json") return parse_json(text);
  return parse_csv(text);
}

std::string GradingTable::to_csv() const {
  std::ostringstream out;
  out << "question_id,model_a,model_b";
  for (const auto& j : judges_) out << ',' << j;
  out << '\n';
  for (const auto& r : records_) {
    out << r.question_id << ',' << r.model_a << ',' << r.model_b;
    for (const auto& g : r.grades) {
      out << ',';
      if (g) out << to_string(*g);
    }
    out << '\n';
  }
  return out.str();
}

std::size_t GradingTable::judge_index(std::string_view judge) const {
  auto it = std::find(judges_.begin(), judges_.end(), judge);
  if (it == judges_.end()) throw InvalidArgument("unknown judge '" + std::string(judge) + "'");
  return static_cast<std::size_t>(it - judges_.begin());
}

std::vector<Grade> GradingTable::column(std::string_view judge) const {
  const std::size_t j = judge_index(judge);
  std::vector<Grade> grades;
  grades.reserve(records_.size());
  for (std::size_t k = 0; k < records_.size(); ++k) {
    const auto& g = records_[k].grades[j];
    if (!g) {
      throw InvalidArgument("judge " + std::string(judge) + " did not grade question " +
                            records_[k].question_id + " (record " + std::to_string(k + 1) + ")");
    }
    grades.push_back(*g);
  }
  return grades;
}

const GradingTable& bundled_fixture() {
  static const GradingTable table = GradingTable::parse_csv(bundled_fixture_csv());
  return table;
}

// ---------------------------------------------------------------------------
// Summaries

ResponseSummary summarize(const GradingTable& table, std::string_view judge) {
  std::vector<Count> counts(3, 0);
  for (Grade g : table.column(judge)) ++counts[static_cast<std::size_t>(g)];
  return ResponseSummary(LabelSet::pair_comparison(), std::move(counts),
                         static_cast<Count>(table.records().size()));
}

std::vector<std::optional<Rational>> accuracy_against(const GradingTable& table,
                                                      std::string_view judge,
                                                      std::string_view reference) {
  const auto graded = table.column(judge);
  const auto truth = table.column(reference);
  std::vector<Count> hits(3, 0);
  std::vector<Count> totals(3, 0);
  for (std::size_t k = 0; k < graded.size(); ++k) {
    const auto t = static_cast<std::size_t>(truth[k]);
    ++totals[t];
    if (graded[k] == truth[k]) ++hits[t];
  }
  std::vector<std::optional<Rational>> out(3);
  for (std::size_t t = 0; t < 3; ++t) {
    if (totals[t] > 0) out[t] = Rational(hits[t], totals[t]);
  }
  return out;
}

PairSummary pair_summary(const GradingTable& table, std::string_view first,
                         std::string_view second) {
  const auto a = table.column(first);
  const auto b = table.column(second);
  std::vector<Count> counts(9, 0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    ++counts[static_cast<std::size_t>(a[k]) * 3 + static_cast<std::size_t>(b[k])];
  }
  return PairSummary(LabelSet::pair_comparison(), std::move(counts));
}

}  // namespace nka

#include "cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nka/alarm.hpp"
#include "nka/axioms.hpp"
#include "nka/error.hpp"
#include "nka/feasible.hpp"
#include "nka/ground_truth.hpp"
#include "nka/io.hpp"
#include "nka/mc_grade.hpp"

namespace nka::cli {
namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t\r");
    parts.push_back(first == std::string::npos ? "" : item.substr(first, last - first + 1));
  }
  return parts;
}

Count parse_count(const std::string& text, const std::string& what) {
  Count value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
    throw ParseError(what + ": '" + text + "' is not a non-negative integer");
  }
  return value;
}

std::vector<Count> parse_counts(const std::string& text, const std::string& what) {
  std::vector<Count> counts;
  for (const auto& part : split_list(text)) counts.push_back(parse_count(part, what));
  return counts;
}

// a,b for two labels, a,b,tie for three, otherwise a,b,c,...
LabelSet resolve_labels(const std::string& option, std::size_t count) {
  if (!option.empty()) {
    LabelSet labels(split_list(option));
    if (count != 0 && labels.size() != count) {
      throw InvalidArgument("--labels names " + std::to_string(labels.size()) +
                            " labels but the counts have " + std::to_string(count));
    }
    return labels;
  }
  if (count == 3) return LabelSet::pair_comparison();
  if (count < 2 || count > 26) throw InvalidArgument("need between 2 and 26 labels");
  std::vector<std::string> names;
  for (std::size_t l = 0; l < count; ++l) names.emplace_back(1, static_cast<char>('a' + l));
  return LabelSet(std::move(names));
}

ResponseSummary summary_from(const std::string& text, const std::string& labels) {
  auto counts = parse_counts(text, "--summary");
  LabelSet names = resolve_labels(labels, counts.size());
  return ResponseSummary(std::move(names), std::move(counts));
}

GradingTable load_table(const std::string& input) {
  return input.empty() ? bundled_fixture() : GradingTable::load(input);
}

std::vector<std::string> judges_or(const std::string& option, std::vector<std::string> fallback) {
  return option.empty() ? fallback : split_list(option);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path.string());
  file << content;
}

// Reads "first,second,count" lines; a header line is skipped.
PairSummary load_pair_file(const std::string& path, const LabelSet& labels) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  const std::size_t r = labels.size();
  std::vector<Count> counts(r * r, 0);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_list(line);
    const std::string where = path + ":" + std::to_string(line_number) + ": ";
    if (fields.size() != 3) throw ParseError(where + "expected first,second,count");
    if (line_number == 1 && !labels.find(fields[0])) continue;
    const auto a = labels.find(fields[0]);
    const auto b = labels.find(fields[1]);
    if (!a || !b) throw ParseError(where + "unknown label in '" + line + "'");
    counts[*a * r + *b] += parse_count(fields[2], where + "count");
  }
  return PairSummary(labels, std::move(counts));
}

// Labels named in a pair file, used when neither --labels nor --summary
// fixes them. The default names are kept when they cover the file.
LabelSet pair_file_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::set<std::string> seen;
  std::string line;
  for (std::size_t line_number = 1; std::getline(in, line); ++line_number) {
    const auto fields = split_list(line);
    if (fields.size() != 3 || (line_number == 1 && fields[2] == "count")) continue;
    seen.insert(fields[0]);
    seen.insert(fields[1]);
  }
  const std::size_t count = std::max<std::size_t>(seen.size(), 2);
  const LabelSet defaults = resolve_labels("", count);
  for (const auto& name : seen) {
    if (!defaults.find(name)) return LabelSet({seen.begin(), seen.end()});
  }
  return defaults;
}

struct Options {
  std::string input;
  std::string judges;
  std::string labels;
  std::string threshold;
  std::string mode = "ceiling";
  std::string level;
  std::string out;
  std::string qc;
  std::string pair;
  std::string format = "csv";
  std::vector<std::string> summaries;
  Count q = -1;
  std::size_t r = 0;
  unsigned workers = 1;
  bool inequalities = false;
  bool margins = false;
};

int cmd_summarize(const Options& o, std::ostream& out) {
  const GradingTable table = load_table(o.input);
  const auto judges = judges_or(o.judges, table.judges());
  std::vector<ResponseSummary> summaries;
  for (const auto& j : judges) summaries.push_back(summarize(table, j));
  out << "judge";
  for (const auto& name : LabelSet::pair_comparison().names()) out << ',' << name;
  out << ",total\n";
  for (std::size_t k = 0; k < judges.size(); ++k) {
    out << judges[k];
    for (Count c : summaries[k].counts()) out << ',' << c;
    out << ',' << summaries[k].test_size() << '\n';
  }
  return kOk;
}

int cmd_count(const Options& o, std::ostream& out) {
  std::optional<ResponseSummary> summary;
  if (!o.summaries.empty()) {
    if (o.summaries.size() > 1) throw InvalidArgument("count takes a single --summary");
    summary = summary_from(o.summaries.front(), o.labels);
  }
  Count q = o.q;
  if (summary) {
    if (q >= 0 && q != summary->test_size()) {
      throw InvalidArgument("--q " + std::to_string(q) + " does not match the summary total " +
                            std::to_string(summary->test_size()));
    }
    q = summary->test_size();
  }
  if (q < 0) throw InvalidArgument("count needs --q or --summary");
  std::size_t r = summary ? summary->label_count() : o.r;
  if (r == 0) r = o.labels.empty() ? 2 : split_list(o.labels).size();
  if (summary && o.r != 0 && o.r != r) throw InvalidArgument("--r does not match the summary");

  std::vector<ConstraintLevel> levels;
  if (!o.level.empty()) {
    levels.push_back(parse_constraint_level(o.level));
  } else if (summary) {
    levels = {ConstraintLevel::MarginsOnly, ConstraintLevel::WithInequalities,
              ConstraintLevel::WithM1Axioms};
  } else {
    levels = {ConstraintLevel::MarginsOnly};
  }
  for (auto level : levels) {
    std::uint64_t n = 0;
    if (level == ConstraintLevel::MarginsOnly) {
      n = count_all_evaluations(q, r);
    } else {
      if (!summary) throw InvalidArgument(std::string(to_string(level)) + " needs --summary");
      n = count_filtered(*summary, level);
    }
    out << to_string(level) << ' ' << n << '\n';
  }
  return kOk;
}

int cmd_alarm(const Options& o, std::ostream& out) {
  if (o.threshold.empty()) throw InvalidArgument("alarm needs --threshold");
  const Rational x = parse_rational(o.threshold);
  if (x < 0 || x > 1) throw InvalidArgument("--threshold must lie in [0, 1]");
  const AlarmMode mode = parse_alarm_mode(o.mode);

  std::vector<ResponseSummary> summaries;
  std::vector<std::string> names;
  if (!o.summaries.empty()) {
    if (!o.input.empty() || !o.judges.empty()) {
      throw InvalidArgument("use either --summary or --input/--judges, not both");
    }
    for (std::size_t k = 0; k < o.summaries.size(); ++k) {
      summaries.push_back(summary_from(o.summaries[k], o.labels));
      names.push_back("c" + std::to_string(k + 1));
    }
  } else {
    const GradingTable table = load_table(o.input);
    names = judges_or(o.judges, {"authors", "gpt4"});
    for (const auto& j : names) summaries.push_back(summarize(table, j));
  }

  const ScanOptions scan{o.workers};
  const AlarmVerdict verdict = evaluate_alarm(summaries, x, mode, scan);
  const TriggerThreshold theta = global_trigger_threshold(summaries, scan);
  const auto doc = io::verdict_json(verdict, theta, names);

  if (!o.out.empty()) {
    const std::filesystem::path dir(o.out);
    std::filesystem::create_directories(dir);
    std::ostringstream curve;
    io::write_curve_csv(curve, min_max_curve(summaries, scan));
    write_file(dir / "minmax.csv", curve.str());
    std::ostringstream by_label;
    for (std::size_t l = 0; l < summaries.front().label_count(); ++l) {
      std::ostringstream one;
      io::write_curve_csv(one, per_label_curve(l, summaries, scan));
      std::string text = one.str();
      if (l > 0) text.erase(0, text.find('\n') + 1);
      by_label << text;
    }
    write_file(dir / "minmax_by_label.csv", by_label.str());
    write_file(dir / "verdict.json", doc.dump(2) + "\n");
  }
  out << doc.dump(2) << '\n';
  return verdict.fired ? kAlarmFired : kOk;
}

int cmd_axioms(const Options& o, std::ostream& out) {
  std::vector<ResponseSummary> summaries;
  std::vector<std::string> names;
  std::optional<PairSummary> pair;
  if (!o.input.empty() || !o.judges.empty()) {
    const GradingTable table = load_table(o.input);
    names = judges_or(o.judges, {});
    if (names.empty() || names.size() > 2) throw InvalidArgument("axioms takes one or two judges");
    for (const auto& j : names) summaries.push_back(summarize(table, j));
    if (names.size() == 2) pair = pair_summary(table, names[0], names[1]);
  } else {
    if (o.summaries.size() > 2) throw InvalidArgument("axioms takes at most two summaries");
    for (const auto& s : o.summaries) summaries.push_back(summary_from(s, o.labels));
    if (!o.pair.empty()) {
      const LabelSet labels = summaries.empty() ? (o.labels.empty() ? pair_file_labels(o.pair)
                                                                  : resolve_labels(o.labels, 0))
                                                : summaries.front().labels();
      pair = load_pair_file(o.pair, labels);
      if (summaries.empty()) summaries.push_back(pair->first_marginal());
      if (summaries.size() == 1) summaries.push_back(pair->second_marginal());
    }
    if (summaries.empty()) throw InvalidArgument("axioms needs --summary, --pair or --judges");
    names = summaries.size() == 1 ? std::vector<std::string>{"i"}
                                  : std::vector<std::string>{"i", "j"};
  }

  const LabelSet& labels = summaries.front().labels();
  const VariableSpace space(labels, names);
  std::vector<LinearConstraint> system;
  auto append = [&system](std::vector<LinearConstraint> more) {
    system.insert(system.end(), more.begin(), more.end());
  };
  for (std::size_t c = 0; c < summaries.size(); ++c) {
    if (o.margins) {
      // Column equalities need a concrete answer key, so only the row sums
      // are dumped here.
      std::vector<Count> zero(labels.size(), 0);
      zero[0] = summaries[c].test_size();
      auto rows = margin_constraints(QcPoint(labels, zero), summaries[c], c);
      system.insert(system.end(), rows.begin() + static_cast<std::ptrdiff_t>(labels.size()),
                    rows.end());
    }
    append(m1_axioms(summaries[c], c));
    if (o.inequalities) append(m1_inequalities(summaries[c], c));
  }
  if (pair) {
    append(m2_axioms(*pair, summaries[0], summaries[1]));
    if (o.inequalities) append(m2_inequalities(*pair));
  }
  write_constraints(out, system, space);
  return kOk;
}

int cmd_grade_set(const Options& o, std::ostream& out) {
  if (o.summaries.size() != 1) throw InvalidArgument("grade-set takes exactly one --summary");
  const GradeSet grades = grade_set(summary_from(o.summaries.front(), o.labels));
  std::ostringstream csv;
  io::write_grade_set_csv(csv, grades);
  if (o.out.empty()) {
    out << csv.str();
  } else {
    write_file(o.out, csv.str());
  }
  return kOk;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  if (o.summaries.empty() || o.summaries.size() > 2) {
    throw InvalidArgument("enumerate takes one --summary, or two for a correctness grid");
  }
  if (o.qc.empty()) throw InvalidArgument("enumerate needs --qc");
  if (o.format != "csv" && o.format != "json") throw InvalidArgument("--format is csv or json");
  std::vector<ResponseSummary> summaries;
  for (const auto& s : o.summaries) summaries.push_back(summary_from(s, o.labels));
  auto key = parse_counts(o.qc, "--qc");
  const QcPoint qc(summaries.front().labels(), std::move(key));
  for (const auto& s : summaries) {
    if (s.test_size() != qc.test_size()) {
      throw InvalidArgument("--qc totals " + std::to_string(qc.test_size()) +
                            " items but the summary totals " + std::to_string(s.test_size()));
    }
  }

  std::ostringstream text;
  if (summaries.size() == 2) {
    const auto cells = correctness_multiplicity(qc, summaries);
    if (o.format == "json") {
      nlohmann::json doc = nlohmann::json::array();
      for (const auto& c : cells) {
        doc.push_back({{"i", c.first}, {"j", c.second}, {"multiplicity", c.multiplicity}});
      }
      text << doc.dump(2) << '\n';
    } else {
      io::write_multiplicity_csv(text, qc.labels(), cells);
    }
  } else {
    const auto matrices = enumerate_single(qc, summaries.front());
    if (o.format == "json") {
      text << io::matrices_json(qc, summaries.front(), matrices).dump(2) << '\n';
    } else {
      io::write_matrices_csv(text, matrices);
    }
  }
  if (o.out.empty()) {
    out << text.str();
  } else {
    write_file(o.out, text.str());
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluations consistent with observed response counts, and no-knowledge alarms",
               "nka"};
  app.require_subcommand(1);
  Options o;

  auto* summarize_cmd = app.add_subcommand("summarize", "Per-judge a/b/tie counts");
  summarize_cmd->add_option("--input", o.input, "Grading CSV or JSON (default: bundled fixture)");
  summarize_cmd->add_option("--judges", o.judges, "Comma-separated judges (default: all)");

  auto* count_cmd = app.add_subcommand("count", "Count evaluations at each constraint level");
  count_cmd->add_option("--q", o.q, "Test size");
  count_cmd->add_option("--r", o.r, "Number of labels");
  count_cmd->add_option("--summary", o.summaries, "Observed counts, e.g. 4,6");
  count_cmd->add_option("--labels", o.labels, "Comma-separated label names");
  count_cmd->add_option("--level", o.level, "margins_only, with_inequalities or with_m1_axioms");

  auto* alarm_cmd = app.add_subcommand("alarm", "Evaluate the no-knowledge alarm");
  alarm_cmd->add_option("--input", o.input, "Grading CSV or JSON (default: bundled fixture)");
  alarm_cmd->add_option("--judges", o.judges, "Comma-separated judges (default: authors,gpt4)");
  alarm_cmd->add_option("--summary", o.summaries, "Observed counts of one classifier (repeatable)");
  alarm_cmd->add_option("--labels", o.labels, "Comma-separated label names");
  alarm_cmd->add_option("--threshold", o.threshold, "Accuracy threshold x, fraction or decimal");
  alarm_cmd->add_option("--mode", o.mode, "ceiling or joint");
  alarm_cmd->add_option("--out", o.out, "Directory for minmax.csv, minmax_by_label.csv, verdict.json");
  alarm_cmd->add_option("--workers", o.workers, "Threads for the answer-key scan");

  auto* axioms_cmd = app.add_subcommand("axioms", "Dump the constraint system");
  axioms_cmd->add_option("--summary", o.summaries, "Observed counts (repeatable, at most two)");
  axioms_cmd->add_option("--labels", o.labels, "Comma-separated label names");
  axioms_cmd->add_option("--pair", o.pair, "Pair counts CSV: first,second,count");
  axioms_cmd->add_option("--input", o.input, "Grading CSV or JSON (default: bundled fixture)");
  axioms_cmd->add_option("--judges", o.judges, "One or two judges from the grading input");
  axioms_cmd->add_flag("--inequalities", o.inequalities, "Also emit the response inequalities");
  axioms_cmd->add_flag("--margins", o.margins, "Also emit the row-sum equalities");

  auto* grade_cmd = app.add_subcommand("grade-set", "Consistent grade range per answer key");
  grade_cmd->add_option("--summary", o.summaries, "Observed counts");
  grade_cmd->add_option("--labels", o.labels, "Comma-separated label names");
  grade_cmd->add_option("--out", o.out, "Output CSV path (default: stdout)");

  auto* enum_cmd = app.add_subcommand("enumerate", "List the feasible evaluations at one answer key");
  enum_cmd->add_option("--summary", o.summaries, "Observed counts (two for a correctness grid)");
  enum_cmd->add_option("--qc", o.qc, "Answer-key counts, e.g. 6,4");
  enum_cmd->add_option("--labels", o.labels, "Comma-separated label names");
  enum_cmd->add_option("--format", o.format, "csv or json");
  enum_cmd->add_option("--out", o.out, "Output path (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto chosen = app.get_subcommands();
    out << (chosen.empty() ? app.help() : chosen.front()->help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }

  try {
    if (summarize_cmd->parsed()) return cmd_summarize(o, out);
    if (count_cmd->parsed()) return cmd_count(o, out);
    if (alarm_cmd->parsed()) return cmd_alarm(o, out);
    if (axioms_cmd->parsed()) return cmd_axioms(o, out);
    if (grade_cmd->parsed()) return cmd_grade_set(o, out);
    if (enum_cmd->parsed()) return cmd_enumerate(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace nka::cli

#include "doctest.h"
#include "nka/alarm.hpp"
#include "nka/axioms.hpp"
#include "nka/error.hpp"
#include "nka/feasible.hpp"
#include "oracles.hpp"

using namespace nka;

namespace {

const LabelSet& pc() {
  static const LabelSet labels = LabelSet::pair_comparison();
  return labels;
}

std::vector<ResponseSummary> summaries(std::initializer_list<std::vector<Count>> counts,
                                       const LabelSet& labels = pc()) {
  std::vector<ResponseSummary> out;
  for (const auto& c : counts) out.emplace_back(labels, c);
  return out;
}

std::vector<std::vector<Count>> raw(const std::vector<ResponseSummary>& ss) {
  std::vector<std::vector<Count>> out;
  for (const auto& s : ss) out.emplace_back(s.counts().begin(), s.counts().end());
  return out;
}

void check_theta(const std::vector<ResponseSummary>& ss, Rational expected,
                 std::vector<Count> expected_qc) {
  const auto t = global_trigger_threshold(ss);
  const auto brute = oracle::direct_theta(raw(ss));
  CHECK(t.theta == Rational(brute.num, brute.den));
  CHECK(std::vector<Count>(t.argmax.counts().begin(), t.argmax.counts().end()) == brute.qc);
  CHECK(t.theta == expected);
  CHECK(brute.qc == expected_qc);
}

void check_witness(const AlarmVerdict& v, const std::vector<ResponseSummary>& ss) {
  REQUIRE(v.witness.has_value());
  const auto& w = *v.witness;
  REQUIRE(w.evaluations.size() == ss.size());
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const auto& m = w.evaluations[i];
    CHECK(verify_decomposition(m, ss[i], w.qc));
    Assignment values;
    values.bind_answer_key(w.qc);
    values.bind_evaluation(m);
    for (const auto& c : m1_axioms(ss[i])) CHECK(satisfied(c, values));
    for (const auto& c : m1_inequalities(ss[i])) CHECK(satisfied(c, values));
    for (std::size_t l = 0; l < w.qc.label_count(); ++l) {
      if (w.qc[l] > 0) CHECK(Rational(m.correct(l), w.qc[l]) > v.threshold);
    }
  }
}

}  // namespace

TEST_CASE("trigger thresholds for the pair-comparison judges") {
  // Quoted summary counts for gpt4.
  check_theta(summaries({{5, 10, 10}, {4, 18, 3}}), Rational(2, 3), {6, 15, 4});
  // gpt4 counts taken from the graded table.
  check_theta(summaries({{5, 10, 10}, {5, 18, 2}}), Rational(2, 3), {7, 15, 3});
  check_theta(summaries({{4, 14, 7}, {5, 10, 10}, {5, 18, 2}}), Rational(5, 8), {6, 16, 3});
  // Exchanging gpt4's a and b counts lands near 45%.
  check_theta(summaries({{5, 10, 10}, {18, 4, 3}}), Rational(5, 11), {11, 8, 6});
}

TEST_CASE("trigger threshold of agreeing classifiers is one") {
  check_theta(summaries({{3, 9, 13}}), Rational(1), {3, 9, 13});
  check_theta(summaries({{5, 10, 10}, {5, 10, 10}}), Rational(1), {5, 10, 10});
}

TEST_CASE("ceiling at one answer key") {
  const auto both = summaries({{5, 10, 10}, {4, 18, 3}});
  CHECK(*ceiling_at_qc(QcPoint(pc(), {1, 1, 23}), both) == Rational(3, 23));
  CHECK(*ceiling_at_qc(QcPoint(pc(), {5, 10, 10}), summaries({{5, 10, 10}, {5, 10, 10}})) ==
        Rational(1));
  CHECK_FALSE(ceiling_at_qc(QcPoint(pc(), {0, 0, 0}), summaries({{0, 0, 0}})).has_value());
  // Every label over-represented relative to every classifier.
  const auto low = summaries({{2, 2, 6}, {2, 6, 2}});
  CHECK(*ceiling_at_qc(QcPoint(pc(), {3, 3, 4}), low) < Rational(1));
}

TEST_CASE("ceilings match brute-force enumeration") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Count q = 1 + static_cast<Count>(rng() % 5);
    const auto a = oracle::random_counts(rng, q, 3);
    const auto b = oracle::random_counts(rng, q, 3);
    const auto ss = summaries({a, b});
    for (const auto& qc : qc_points(q, pc())) {
      std::optional<Rational> expected;
      for (const auto& s : {a, b}) {
        const auto set = oracle::feasible_matrices({qc.counts().begin(), qc.counts().end()}, s);
        for (std::size_t l = 0; l < 3; ++l) {
          if (qc[l] == 0) continue;
          Count best = 0;
          for (const auto& cells : set) best = std::max(best, cells[l * 3 + l]);
          const Rational ratio(best, qc[l]);
          if (!expected || ratio < *expected) expected = ratio;
        }
      }
      CHECK(ceiling_at_qc(qc, ss) == expected);
    }
  }
}

TEST_CASE("min-max curve") {
  const auto both = summaries({{5, 10, 10}, {4, 18, 3}});
  const auto curve = min_max_curve(both);
  REQUIRE(curve.points.size() == 351);
  CHECK_FALSE(curve.label.has_value());
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    CHECK(curve.points[k].ceiling >= Rational(0));
    CHECK(curve.points[k].ceiling <= Rational(1));
    if (k > 0) {
      CHECK(curve.points[k - 1].ceiling <= curve.points[k].ceiling);
      if (curve.points[k - 1].ceiling == curve.points[k].ceiling) {
        CHECK(curve.points[k - 1].qc < curve.points[k].qc);
      }
    }
  }
  CHECK(curve.points.back().ceiling == global_trigger_threshold(both).theta);
}

TEST_CASE("per-label curves") {
  const auto both = summaries({{5, 10, 10}, {5, 18, 2}});
  for (std::size_t l = 0; l < 3; ++l) {
    const auto curve = per_label_curve(l, both);
    CHECK(curve.label == l);
    CHECK(curve.points.size() == 351 - 26);
    CHECK(curve.points.back().ceiling == Rational(1));
    for (const auto& p : curve.points) CHECK(p.qc[l] > 0);
  }
  const auto silent = summaries({{0, 12, 13}, {5, 10, 10}});
  CHECK(per_label_curve(0, silent).points.back().ceiling == Rational(0));
  CHECK_THROWS_AS(per_label_curve(3, both), InvalidArgument);
}

TEST_CASE("alarm verdicts") {
  const auto same = summaries({{5, 10, 10}, {5, 10, 10}});
  const auto v = evaluate_alarm(same, Rational(99, 100), AlarmMode::Ceiling);
  CHECK_FALSE(v.fired);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->qc == QcPoint(pc(), {5, 10, 10}));
  check_witness(v, same);

  const auto both = summaries({{5, 10, 10}, {4, 18, 3}});
  for (auto mode : {AlarmMode::Ceiling, AlarmMode::Joint}) {
    CHECK(evaluate_alarm(both, Rational(1), mode).fired);
    CHECK(evaluate_alarm(same, Rational(1), mode).fired);
    CHECK(evaluate_alarm(both, Rational(2, 3), mode).fired);
    const auto below = evaluate_alarm(both, Rational(2, 3) - Rational(1, 1000), mode);
    CHECK_FALSE(below.fired);
    check_witness(below, both);
    // Half the items is not enough to trigger with these counts.
    CHECK_FALSE(evaluate_alarm(both, Rational(1, 2), mode).fired);
  }
  CHECK_THROWS_AS(evaluate_alarm(both, Rational(6, 5), AlarmMode::Ceiling), InvalidArgument);
  CHECK_THROWS_AS(evaluate_alarm(both, Rational(-1, 5), AlarmMode::Ceiling), InvalidArgument);
  CHECK_THROWS_AS(evaluate_alarm(summaries({{0, 0, 0}}), Rational(1, 2), AlarmMode::Ceiling),
                  InvalidArgument);
  CHECK_THROWS_AS(evaluate_alarm({}, Rational(1, 2), AlarmMode::Ceiling), InvalidArgument);
  CHECK(parse_alarm_mode("joint") == AlarmMode::Joint);
  CHECK_THROWS_AS(parse_alarm_mode("strict"), ParseError);
}

TEST_CASE("firing is monotone and agrees with theta") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const Count q = 2 + static_cast<Count>(rng() % 10);
    const auto ss = summaries({oracle::random_counts(rng, q, 3), oracle::random_counts(rng, q, 3)});
    const Rational theta = global_trigger_threshold(ss).theta;
    bool fired_before = false;
    for (Count k = 0; k <= 20; ++k) {
      const Rational x(k, 20);
      const auto ceiling = evaluate_alarm(ss, x, AlarmMode::Ceiling);
      const auto joint = evaluate_alarm(ss, x, AlarmMode::Joint);
      CHECK(ceiling.fired == (x >= theta));
      CHECK((!ceiling.fired || joint.fired));
      CHECK(joint.fired == ceiling.fired);
      CHECK((!fired_before || ceiling.fired));
      fired_before = ceiling.fired;
      if (!joint.fired) check_witness(joint, ss);
      if (!ceiling.fired) check_witness(ceiling, ss);
    }
  }
}

TEST_CASE("label and classifier symmetry") {
  std::mt19937_64 rng(23);
  const LabelSet permuted_labels({"tie", "a", "b"});
  for (int trial = 0; trial < 20; ++trial) {
    const Count q = 3 + static_cast<Count>(rng() % 15);
    const auto a = oracle::random_counts(rng, q, 3);
    const auto b = oracle::random_counts(rng, q, 3);
    const auto ss = summaries({a, b});
    const Rational theta = global_trigger_threshold(ss).theta;
    CHECK(global_trigger_threshold(summaries({b, a})).theta == theta);
    const auto permuted = summaries({{a[2], a[0], a[1]}, {b[2], b[0], b[1]}}, permuted_labels);
    CHECK(global_trigger_threshold(permuted).theta == theta);
    const Rational x(static_cast<Count>(rng() % 10), 10);
    CHECK(evaluate_alarm(ss, x, AlarmMode::Joint).fired ==
          evaluate_alarm(summaries({b, a}), x, AlarmMode::Joint).fired);
    CHECK(evaluate_alarm(ss, x, AlarmMode::Ceiling).fired ==
          evaluate_alarm(permuted, x, AlarmMode::Ceiling).fired);
  }
}

TEST_CASE("results do not depend on the worker count") {
  const auto ss = summaries({{4, 14, 7}, {5, 10, 10}, {5, 18, 2}});
  const auto one = min_max_curve(ss, {1});
  for (unsigned workers : {2u, 3u, 8u}) {
    const auto many = min_max_curve(ss, {workers});
    REQUIRE(many.points.size() == one.points.size());
    for (std::size_t k = 0; k < one.points.size(); ++k) {
      CHECK(many.points[k].qc == one.points[k].qc);
      CHECK(many.points[k].ceiling == one.points[k].ceiling);
    }
    const auto t1 = global_trigger_threshold(ss, {1});
    const auto tn = global_trigger_threshold(ss, {workers});
    CHECK(t1.theta == tn.theta);
    CHECK(t1.argmax == tn.argmax);
    const auto v1 = evaluate_alarm(ss, Rational(1, 2), AlarmMode::Joint, {1});
    const auto vn = evaluate_alarm(ss, Rational(1, 2), AlarmMode::Joint, {workers});
    CHECK(v1.fired == vn.fired);
    REQUIRE(v1.witness.has_value() == vn.witness.has_value());
    if (v1.witness) {
      CHECK(v1.witness->qc == vn.witness->qc);
      CHECK(v1.witness->evaluations == vn.witness->evaluations);
    }
  }
}

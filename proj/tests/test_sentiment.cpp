#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "doctest.h"
#include "sentreg/error.hpp"
#include "sentreg/sentiment.hpp"
#include "support.hpp"

using namespace sentreg;
using namespace sentreg::sentiment;
using doctest::Approx;

namespace {

corpus::TokenStream words(std::vector<std::string> ws) {
  corpus::TokenStream s;
  for (auto& w : ws) s.tokens.push_back({w, w, s.tokens.size()});
  return s;
}

Lexicon small_lexicon() {
  Lexicon lex;
  lex.valences = {{"great", 1.0}, {"awful", -2.0}, {"good", 0.5}};
  lex.negators = {"not", "never"};
  lex.amplifiers = {{"very", 1.5}};
  return lex;
}

ScoredDocument doc(std::string state, double value) {
  return {"", std::move(state), {value, classify(value), 0}};
}

}  // namespace

TEST_CASE("score examples") {
  const auto lex = small_lexicon();
  const auto one = score(words({"great"}), lex);
  CHECK(one.value == 1.0);
  CHECK(one.polarity == Polarity::Positive);
  CHECK(one.matched_count == 1);

  const auto neg = score(words({"not", "great"}), lex);
  CHECK(neg.value == Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(neg.polarity == Polarity::Negative);

  const auto none = score(words({"the", "economy"}), lex);
  CHECK(none.value == 0.0);
  CHECK(none.polarity == Polarity::Neutral);
  CHECK(score(words({}), lex).value == 0.0);
}

TEST_CASE("shifter window is the two preceding tokens") {
  const auto lex = small_lexicon();
  CHECK(score(words({"not", "very", "good"}), lex).value == Approx(-0.75 / std::sqrt(3.0)));
  CHECK(score(words({"not", "not", "great"}), lex).value == Approx(1.0 / std::sqrt(3.0)));
  CHECK(score(words({"not", "x", "y", "great"}), lex).value == Approx(0.5));
  CHECK(score(words({"very", "very", "good"}), lex).value == Approx(1.125 / std::sqrt(3.0)));
}

TEST_CASE("score is clamped to [-2, 2]") {
  Lexicon lex;
  lex.valences = {{"wow", 2.0}};
  lex.amplifiers = {{"so", 5.0}};
  CHECK(score(words({"so", "so", "wow"}), lex).value == 2.0);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> val(-2.0, 2.0), amp(1.0001, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    Lexicon r;
    for (int i = 0; i < 5; ++i) r.valences["v" + std::to_string(i)] = val(rng);
    r.negators = {"n0", "n1"};
    for (int i = 0; i < 3; ++i) r.amplifiers["a" + std::to_string(i)] = amp(rng);
    const std::vector<std::string> vocab = {"v0", "v1", "v2", "v3", "v4", "n0", "n1", "a0", "a1", "a2", "x"};
    std::vector<std::string> ws;
    for (auto n = rng() % 20; n > 0; --n) ws.push_back(vocab[rng() % vocab.size()]);
    const auto s = score(words(ws), r);
    CHECK(s.value >= -2.0);
    CHECK(s.value <= 2.0);
  }
}

TEST_CASE("classify and to_binary") {
  CHECK(classify(0.0) == Polarity::Neutral);
  CHECK(classify(0.5) == Polarity::Positive);
  CHECK(classify(-0.3) == Polarity::Negative);
  CHECK_THROWS_AS(classify(std::numeric_limits<double>::quiet_NaN()), InputError);
  CHECK(to_binary(Polarity::Positive) == 1);
  CHECK(to_binary(Polarity::Neutral) == 0);
  CHECK(to_binary(Polarity::Negative) == 0);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double v = i == 0 ? 0.0 : u(rng);
    const auto c = classify(v), flipped = classify(-v);
    if (c == Polarity::Neutral) CHECK(flipped == Polarity::Neutral);
    else CHECK(flipped != c);
    CHECK((flipped != Polarity::Neutral || c == Polarity::Neutral));
    CHECK(to_binary(c) == (v > 0 ? 1 : 0));
  }
}

TEST_CASE("aggregate_by_state examples") {
  const auto nc = aggregate_by_state({doc("NC", 1), doc("NC", -1), doc("NC", 0)});
  REQUIRE(nc.size() == 1);
  CHECK(nc[0].mean_score == 0.0);
  CHECK(nc[0].share_positive == Approx(1.0 / 3));
  CHECK(nc[0].share_negative == Approx(1.0 / 3));
  CHECK(nc[0].share_neutral == Approx(1.0 / 3));

  const auto wy = aggregate_by_state({doc("WY", 2)});
  CHECK(wy.at(0).mean_score == 2.0);
  CHECK(wy.at(0).share_positive == 1.0);
  CHECK(aggregate_by_state({}).empty());
}

TEST_CASE("aggregate_by_state matches an independent group-by") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::vector<std::string> states = {"WY", "NC", "AK", "TX"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ScoredDocument> scored;
    for (auto n = 1 + rng() % 40; n > 0; --n) {
      const double v = rng() % 5 == 0 ? 0.0 : u(rng);
      scored.push_back(doc(states[rng() % states.size()], v));
    }
    std::map<std::string, std::vector<double>> groups;
    for (const auto& d : scored) groups[d.state].push_back(d.score.value);

    const auto out = aggregate_by_state(scored);
    REQUIRE(out.size() == groups.size());
    std::size_t total = 0, i = 0;
    for (const auto& [state, values] : groups) {
      const auto& s = out[i++];
      CHECK(s.state == state);
      CHECK(s.n_docs == values.size());
      double sum = 0;
      std::size_t pos = 0;
      for (double v : values) sum += v, pos += v > 0;
      CHECK(s.mean_score == Approx(sum / values.size()).epsilon(1e-12));
      CHECK(s.share_positive == Approx(double(pos) / values.size()));
      CHECK(std::fabs(s.share_positive + s.share_negative + s.share_neutral - 1.0) <= 1e-12);
      total += s.n_docs;
    }
    CHECK(total == scored.size());
  }
}

TEST_CASE("scoring is independent of document order") {
  const auto lex = small_lexicon();
  const std::vector<std::vector<std::string>> docs = {{"great"}, {"not", "good"}, {"awful", "very", "good"}};
  std::vector<double> forward, backward;
  for (const auto& d : docs) forward.push_back(score(words(d), lex).value);
  for (auto it = docs.rbegin(); it != docs.rend(); ++it) backward.insert(backward.begin(), score(words(*it), lex).value);
  CHECK(forward == backward);
}

TEST_CASE("lexicon validation and bundled files") {
  auto lex = small_lexicon();
  CHECK_NOTHROW(lex.validate());
  lex.valences["bad"] = 3.0;
  CHECK_THROWS_AS(lex.validate(), InputError);
  lex = small_lexicon();
  lex.negators.insert("great");
  CHECK_THROWS_AS(lex.validate(), InputError);
  lex = small_lexicon();
  lex.amplifiers["very"] = 1.0;
  CHECK_THROWS_AS(lex.validate(), InputError);

  const auto d = testing::data_dir();
  const auto bundled = load_lexicon(d / "lexicon.tsv", d / "negators.tsv", d / "amplifiers.tsv");
  CHECK(bundled.valences.size() >= 150);
  CHECK(bundled.negators.contains("not"));
  CHECK(bundled.amplifiers.at("very") > 1.0);
  CHECK(load_lexicon(d / "lexicon.tsv", {}, {}).negators.empty());
  CHECK_THROWS_AS(load_lexicon(d / "missing.tsv", {}, {}), IoError);
  CHECK(parse_polarity("neutral") == Polarity::Neutral);
  CHECK_THROWS_AS(parse_polarity("mixed"), InputError);
}

#include "sentreg/sentiment.hpp"

#include <algorithm>
#include <cmath>

#include "sentreg/csv.hpp"
#include "sentreg/error.hpp"

namespace sentreg::sentiment {

namespace {

// Rows of a TSV with at least `min_fields` tab-separated fields.
std::vector<std::vector<std::string>> read_tsv(const std::filesystem::path& path, std::size_t min_fields) {
  const std::string content = read_text_file(path);
  std::vector<std::vector<std::string>> rows;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string::npos) nl = content.size();
    std::string_view line = std::string_view(content).substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      fields.emplace_back(trim(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start)));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() < min_fields || fields[0].empty())
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(min_fields) + " tab-separated field(s)");
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

void Lexicon::validate() const {
  for (const auto& [term, v] : valences) {
    if (!std::isfinite(v) || v < -kScoreBound || v > kScoreBound)
      throw InputError("lexicon: valence of '" + term + "' must be finite and within [-2, 2]");
  }
  for (const auto& term : negators)
    if (valences.contains(term)) throw InputError("lexicon: negator '" + term + "' also has a valence");
  for (const auto& [term, m] : amplifiers) {
    if (!(m > 1.0) || !std::isfinite(m))
      throw InputError("lexicon: amplifier '" + term + "' must have a finite multiplier > 1");
    if (valences.contains(term)) throw InputError("lexicon: amplifier '" + term + "' also has a valence");
    if (negators.contains(term)) throw InputError("lexicon: '" + term + "' is both negator and amplifier");
  }
}

Lexicon load_lexicon(const std::filesystem::path& valences, const std::filesystem::path& negators,
                     const std::filesystem::path& amplifiers) {
  Lexicon lex;
  for (const auto& row : read_tsv(valences, 2))
    lex.valences.insert_or_assign(corpus::to_lower(row[0]),
                                  parse_double(row[1], valences.string() + ": valence of '" + row[0] + "'"));
  if (!negators.empty())
    for (const auto& row : read_tsv(negators, 1)) lex.negators.insert(corpus::to_lower(row[0]));
  if (!amplifiers.empty())
    for (const auto& row : read_tsv(amplifiers, 2))
      lex.amplifiers.insert_or_assign(corpus::to_lower(row[0]),
                                      parse_double(row[1], amplifiers.string() + ": multiplier of '" + row[0] + "'"));
  lex.validate();
  return lex;
}

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::Positive: return "positive";
    case Polarity::Negative: return "negative";
    case Polarity::Neutral: return "neutral";
  }
  return "neutral";
}

Polarity parse_polarity(std::string_view name) {
  if (name == "positive") return Polarity::Positive;
  if (name == "negative") return Polarity::Negative;
  if (name == "neutral") return Polarity::Neutral;
  throw InputError("unknown sentiment class '" + std::string(name) + "'");
}

SentimentScore score(const corpus::TokenStream& stream, const Lexicon& lexicon) {
  SentimentScore out;
  double raw = 0.0;
  const auto& tokens = stream.tokens;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto hit = lexicon.valences.find(tokens[i].normalized);
    if (hit == lexicon.valences.end()) continue;
    ++out.matched_count;
    double sign = 1.0;
    double amplifier = 1.0;
    for (std::size_t back = 1; back <= kShifterWindow && back <= i; ++back) {
      const auto& prev = tokens[i - back].normalized;
      if (lexicon.negators.contains(prev)) sign = -sign;
      if (auto amp = lexicon.amplifiers.find(prev); amp != lexicon.amplifiers.end()) amplifier *= amp->second;
    }
    raw += hit->second * amplifier * sign;
  }
  const double length = static_cast<double>(std::max<std::size_t>(1, tokens.size()));
  out.value = std::clamp(raw / std::sqrt(length), -kScoreBound, kScoreBound);
  out.polarity = classify(out.value);
  return out;
}

Polarity classify(double value) {
  if (std::isnan(value)) throw InputError("classify: score is NaN");
  if (value > 0.0) return Polarity::Positive;
  if (value < 0.0) return Polarity::Negative;
  return Polarity::Neutral;
}

int to_binary(Polarity p) { return p == Polarity::Positive ? 1 : 0; }

std::vector<StateSummary> aggregate_by_state(const std::vector<ScoredDocument>& scored) {
  struct Acc {
    std::size_t n = 0, pos = 0, neg = 0, neu = 0;
    double sum = 0.0;
  };
  std::map<std::string, Acc> groups;
  for (const auto& d : scored) {
    auto& a = groups[d.state];
    ++a.n;
    a.sum += d.score.value;
    switch (d.score.polarity) {
      case Polarity::Positive: ++a.pos; break;
      case Polarity::Negative: ++a.neg; break;
      case Polarity::Neutral: ++a.neu; break;
    }
  }
  std::vector<StateSummary> out;
  out.reserve(groups.size());
  for (const auto& [state, a] : groups) {
    const double n = static_cast<double>(a.n);
    out.push_back({state, a.n, a.sum / n, static_cast<double>(a.pos) / n, static_cast<double>(a.neg) / n,
                   static_cast<double>(a.neu) / n});
  }
  return out;
}

}  // namespace sentreg::sentiment

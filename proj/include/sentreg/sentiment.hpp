#pragma once

// Lexicon scoring of token streams, sign classification and per-state
// aggregation.

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sentreg/corpus.hpp"

namespace sentreg::sentiment {

inline constexpr double kScoreBound = 2.0;
inline constexpr std::size_t kShifterWindow = 2;

struct Lexicon {
  std::map<std::string, double, std::less<>> valences;
  std::set<std::string, std::less<>> negators;
  std::map<std::string, double, std::less<>> amplifiers;

  /// Throws InputError if a valence is non-finite or outside [-2, 2], an
  /// amplifier is not > 1, or negators/amplifiers overlap the valence terms.
  void validate() const;
};

/// `valences` is `term<TAB>valence`, `negators` one term per line (a TSV with
/// a single column), `amplifiers` is `term<TAB>multiplier`. Empty paths are
/// skipped for the optional files.
Lexicon load_lexicon(const std::filesystem::path& valences, const std::filesystem::path& negators,
                     const std::filesystem::path& amplifiers);

enum class Polarity { Positive, Negative, Neutral };
std::string_view to_string(Polarity p);
Polarity parse_polarity(std::string_view name);

struct SentimentScore {
  double value = 0.0;
  Polarity polarity = Polarity::Neutral;
  std::size_t matched_count = 0;
};

/// Sum of matched valences, each scaled by amplifiers and flipped by negators
/// among the two preceding tokens, divided by sqrt(max(1, length)) and
/// clamped to [-2, 2]. Expects lowercased tokens.
SentimentScore score(const corpus::TokenStream& stream, const Lexicon& lexicon);

/// Throws InputError on NaN.
Polarity classify(double value);
int to_binary(Polarity p);

struct ScoredDocument {
  std::string id;
  std::string state;
  SentimentScore score;
};

struct StateSummary {
  std::string state;
  std::size_t n_docs = 0;
  double mean_score = 0.0;
  double share_positive = 0.0;
  double share_negative = 0.0;
  double share_neutral = 0.0;
};

/// One summary per state present, sorted by state code.
std::vector<StateSummary> aggregate_by_state(const std::vector<ScoredDocument>& scored);

}  // namespace sentreg::sentiment

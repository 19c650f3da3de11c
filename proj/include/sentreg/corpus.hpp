#pragma once

// Document ingestion and text preprocessing: tokenization, normalization and
// the count structures built on top of token streams.

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sentreg {
class CsvTable;
}

namespace sentreg::corpus {

/// The 50 states plus DC, as upper-case postal codes.
std::span<const std::string_view> state_codes();
bool is_state_code(std::string_view code);

struct Document {
  std::string id;
  std::string state;
  std::string text;
  std::size_t text_width = 0;  // Unicode code points in `text`
};

struct LoadedCorpus {
  std::vector<Document> documents;
  std::size_t dropped = 0;               // rows with an unknown state code
  std::vector<std::size_t> dropped_lines;
};

/// Reads an `id,state,text` CSV. Extra columns are ignored.
LoadedCorpus load_corpus(const std::filesystem::path& path);
LoadedCorpus load_corpus(const CsvTable& table);

/// Number of code points; throws InputError on invalid UTF-8.
std::size_t utf8_length(std::string_view text);

struct Token {
  std::string surface;
  std::string normalized;
  std::size_t position = 0;

  bool operator==(const Token&) const = default;
};

struct TokenStream {
  std::string doc_id;
  std::vector<Token> tokens;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }
  std::vector<std::string> surfaces() const;
  std::vector<std::string> normalized() const;
  bool operator==(const TokenStream&) const = default;
};

using WordSet = std::set<std::string, std::less<>>;
using Dictionary = std::map<std::string, std::string, std::less<>>;

/// Removes whitespace-delimited chunks that begin with "http" (after any
/// leading punctuation), case-insensitively.
std::string strip_urls(std::string_view text);

/// Maximal runs of Unicode letters, digits and internal apostrophes. Anything
/// else separates tokens. `normalized` starts equal to `surface`.
TokenStream tokenize(std::string_view text, std::string doc_id = {});

/// Full Unicode lowercase mapping (root locale).
std::string to_lower(std::string_view text);
TokenStream lowercase(TokenStream stream);

/// Drops tokens whose lowercased surface is in `stoplist`. Survivors keep
/// their original positions.
TokenStream remove_stopwords(const TokenStream& stream, const WordSet& stoplist);

struct StemRule {
  std::string suffix;
  std::string replacement;
};

/// Ordered suffix rewriting. The first rule whose suffix matches and leaves at
/// least `min_stem` code points wins; words matching none pass through.
struct StemRules {
  std::vector<StemRule> rules;
  std::size_t min_stem = 3;

  std::string apply(std::string_view word) const;
  /// True if some rule rewrote (or explicitly protected) the word.
  bool matches(std::string_view word) const;
};

TokenStream stem(const TokenStream& stream, const StemRules& rules);
TokenStream lemmatize(const TokenStream& stream, const Dictionary& dictionary);

enum class Normalization { None, Stem, Lemmatize, LemmatizeThenStem };
Normalization parse_normalization(std::string_view name);

/// Applies the chosen normalization to the `normalized` field. In
/// LemmatizeThenStem mode dictionary hits take the lemma and misses are stemmed.
TokenStream normalize(const TokenStream& stream, Normalization mode, const StemRules& rules,
                      const Dictionary& lemmas);

/// Term counts over normalized tokens, iterated in order of first occurrence.
class BagOfWords {
 public:
  const std::vector<std::pair<std::string, std::size_t>>& entries() const noexcept { return entries_; }
  std::size_t count(std::string_view term) const;
  std::size_t distinct() const noexcept { return entries_.size(); }
  std::size_t total() const noexcept { return total_; }

 private:
  friend BagOfWords bag_of_words(const TokenStream& stream);
  std::vector<std::pair<std::string, std::size_t>> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::size_t total_ = 0;
};

BagOfWords bag_of_words(const TokenStream& stream);

/// Sparse documents x terms counts in CSR layout; terms sorted bytewise.
struct DocumentTermMatrix {
  std::vector<std::string> doc_ids;
  std::vector<std::string> terms;
  std::vector<std::size_t> row_start;  // size rows()+1
  std::vector<std::size_t> column;
  std::vector<std::size_t> value;

  std::size_t rows() const noexcept { return doc_ids.size(); }
  std::size_t cols() const noexcept { return terms.size(); }
  std::size_t nonzeros() const noexcept { return value.size(); }
  std::size_t at(std::size_t row, std::size_t col) const;
  std::size_t row_total(std::size_t row) const;
};

DocumentTermMatrix build_dtm(std::span<const TokenStream> corpus);

using Ngram = std::vector<std::string>;
std::vector<Ngram> ngrams(const TokenStream& stream, std::size_t n);

enum class PosTag { Noun, Verb, Adj, Art, Pron, Other };
std::string_view to_string(PosTag tag);
PosTag parse_pos_tag(std::string_view name);
using PosLexicon = std::map<std::string, PosTag, std::less<>>;

struct TaggedToken {
  Token token;
  PosTag tag = PosTag::Other;
};
using PosTaggedStream = std::vector<TaggedToken>;

/// Dictionary lookup on the normalized form; misses are tagged Other.
PosTaggedStream pos_tag(const TokenStream& stream, const PosLexicon& lexicon);

// Resource files. Lists are newline-delimited with '#' comments; maps are
// `key<TAB>value` TSV.
WordSet load_wordlist(const std::filesystem::path& path);
Dictionary load_dictionary(const std::filesystem::path& path);
StemRules load_stem_rules(const std::filesystem::path& path);
PosLexicon load_pos_lexicon(const std::filesystem::path& path);

/// The fixed preprocessing order: URL strip, tokenize, lowercase, stopword
/// and slang removal, then normalization.
struct Preprocessor {
  WordSet stopwords;
  WordSet slang;
  StemRules stem_rules;
  Dictionary lemmas;
  Normalization mode = Normalization::LemmatizeThenStem;

  struct Output {
    TokenStream lowered;  // after lowercasing, before any removal
    TokenStream terms;    // fully preprocessed
    bool operator==(const Output&) const = default;
  };
  Output run(const Document& doc) const;
};

}  // namespace sentreg::corpus

#include "sentreg/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/locid.h>
#include <unicode/utf8.h>

#include "sentreg/csv.hpp"
#include "sentreg/error.hpp"

namespace sentreg::corpus {

namespace {

constexpr std::array<std::string_view, 51> kStateCodes = {
    "AK", "AL", "AR", "AZ", "CA", "CO", "CT", "DC", "DE", "FL", "GA", "HI", "IA",
    "ID", "IL", "IN", "KS", "KY", "LA", "MA", "MD", "ME", "MI", "MN", "MO", "MS",
    "MT", "NC", "ND", "NE", "NH", "NJ", "NM", "NV", "NY", "OH", "OK", "OR", "PA",
    "RI", "SC", "SD", "TN", "TX", "UT", "VA", "VT", "WA", "WI", "WV", "WY"};

bool is_word_char(UChar32 c) { return u_isalpha(c) || u_isdigit(c); }

// Combining marks extend a word that is already open (decomposed accents).
bool is_mark(UChar32 c) {
  return (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0;
}

bool is_apostrophe(UChar32 c) { return c == 0x27 || c == 0x2019; }

struct CodePoint {
  UChar32 value;
  std::size_t begin;
  std::size_t end;
};

std::vector<CodePoint> decode(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t begin = i;
    UChar32 c = 0;
    U8_NEXT(s, i, length, c);
    out.push_back({c, static_cast<std::size_t>(begin), static_cast<std::size_t>(i)});
  }
  return out;
}

bool starts_with_http(std::string_view chunk) {
  std::size_t i = 0;
  while (i < chunk.size() && static_cast<unsigned char>(chunk[i]) < 0x80 &&
         !std::isalnum(static_cast<unsigned char>(chunk[i])))
    ++i;
  if (chunk.size() - i < 4) return false;
  for (std::size_t k = 0; k < 4; ++k)
    if (std::tolower(static_cast<unsigned char>(chunk[i + k])) != "http"[k]) return false;
  return true;
}

std::vector<std::pair<std::string, std::string>> load_pairs(const std::filesystem::path& path) {
  const std::string content = read_text_file(path);
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string::npos) nl = content.size();
    std::string_view line(content.data() + pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected key<TAB>value");
    out.emplace_back(std::string(trim(line.substr(0, tab))), std::string(trim(line.substr(tab + 1))));
    if (out.back().first.empty())
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": empty key");
  }
  return out;
}

}  // namespace

std::span<const std::string_view> state_codes() { return kStateCodes; }

bool is_state_code(std::string_view code) {
  return std::binary_search(kStateCodes.begin(), kStateCodes.end(), code);
}

std::size_t utf8_length(std::string_view text) {
  std::size_t n = 0;
  for (const auto& cp : decode(text)) {
    if (cp.value < 0) throw InputError("invalid UTF-8 sequence at byte " + std::to_string(cp.begin));
    ++n;
  }
  return n;
}

LoadedCorpus load_corpus(const std::filesystem::path& path) {
  return load_corpus(CsvTable::read_file(path));
}

LoadedCorpus load_corpus(const CsvTable& table) {
  const std::size_t id_col = table.column("id");
  const std::size_t state_col = table.column("state");
  const std::size_t text_col = table.column("text");

  LoadedCorpus out;
  std::unordered_set<std::string> seen;
  for (const auto& row : table.rows()) {
    const std::string where = table.source() + ":" + std::to_string(row.line);
    Document doc;
    doc.id = std::string(trim(row.fields[id_col]));
    doc.state = std::string(trim(row.fields[state_col]));
    doc.text = row.fields[text_col];
    if (doc.id.empty()) throw InputError(where + ": malformed row: empty id");
    if (!seen.insert(doc.id).second) throw InputError(where + ": duplicate id '" + doc.id + "'");
    try {
      doc.text_width = utf8_length(doc.text);
    } catch (const InputError& e) {
      throw InputError(where + ": malformed row: " + e.what());
    }
    if (!is_state_code(doc.state)) {
      ++out.dropped;
      out.dropped_lines.push_back(row.line);
      continue;
    }
    out.documents.push_back(std::move(doc));
  }
  return out;
}

std::vector<std::string> TokenStream::surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::vector<std::string> TokenStream::normalized() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.normalized);
  return out;
}

std::string strip_urls(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  while (i < text.size()) {
    if (is_space(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    const std::string_view chunk = text.substr(i, j - i);
    if (starts_with_http(chunk))
      out.push_back(' ');
    else
      out.append(chunk);
    i = j;
  }
  return out;
}

TokenStream tokenize(std::string_view text, std::string doc_id) {
  TokenStream stream;
  stream.doc_id = std::move(doc_id);
  const auto cps = decode(text);

  std::size_t k = 0;
  while (k < cps.size()) {
    if (cps[k].value < 0 || !is_word_char(cps[k].value)) {
      ++k;
      continue;
    }
    const std::size_t start = k;
    std::size_t end = k + 1;  // one past the last code point of the token
    while (end < cps.size()) {
      const UChar32 c = cps[end].value;
      if (c < 0) break;
      if (is_word_char(c) || is_mark(c)) {
        ++end;
      } else if (is_apostrophe(c) && end + 1 < cps.size() && cps[end + 1].value >= 0 &&
                 is_word_char(cps[end + 1].value)) {
        end += 2;
      } else {
        break;
      }
    }
    std::string surface(text.substr(cps[start].begin, cps[end - 1].end - cps[start].begin));
    stream.tokens.push_back(Token{surface, surface, stream.tokens.size()});
    k = end;
  }
  return stream;
}

std::string to_lower(std::string_view text) {
  bool ascii = true;
  for (char c : text)
    if (static_cast<unsigned char>(c) >= 0x80) {
      ascii = false;
      break;
    }
  if (ascii) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  }
  auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  u.toLower(icu::Locale::getRoot());
  std::string out;
  u.toUTF8String(out);
  return out;
}

TokenStream lowercase(TokenStream stream) {
  for (auto& t : stream.tokens) t.normalized = to_lower(t.surface);
  return stream;
}

TokenStream remove_stopwords(const TokenStream& stream, const WordSet& stoplist) {
  TokenStream out;
  out.doc_id = stream.doc_id;
  for (const auto& t : stream.tokens)
    if (!stoplist.contains(to_lower(t.surface))) out.tokens.push_back(t);
  return out;
}

bool StemRules::matches(std::string_view word) const {
  const std::size_t length = utf8_length(word);
  for (const auto& rule : rules) {
    if (word.ends_with(rule.suffix) && length - utf8_length(rule.suffix) >= min_stem) return true;
  }
  return false;
}

std::string StemRules::apply(std::string_view word) const {
  const std::size_t length = utf8_length(word);
  for (const auto& rule : rules) {
    if (!word.ends_with(rule.suffix)) continue;
    if (length - utf8_length(rule.suffix) < min_stem) continue;
    std::string out(word.substr(0, word.size() - rule.suffix.size()));
    out += rule.replacement;
    return out;
  }
  return std::string(word);
}

TokenStream stem(const TokenStream& stream, const StemRules& rules) {
  TokenStream out = stream;
  for (auto& t : out.tokens) t.normalized = rules.apply(t.normalized);
  return out;
}

TokenStream lemmatize(const TokenStream& stream, const Dictionary& dictionary) {
  TokenStream out = stream;
  for (auto& t : out.tokens) {
    if (auto it = dictionary.find(t.normalized); it != dictionary.end()) t.normalized = it->second;
  }
  return out;
}

Normalization parse_normalization(std::string_view name) {
  if (name == "none") return Normalization::None;
  if (name == "stem") return Normalization::Stem;
  if (name == "lemmatize") return Normalization::Lemmatize;
  if (name == "lemmatize-then-stem") return Normalization::LemmatizeThenStem;
  throw InputError("unknown normalization '" + std::string(name) +
                   "' (expected none, stem, lemmatize, lemmatize-then-stem)");
}

TokenStream normalize(const TokenStream& stream, Normalization mode, const StemRules& rules,
                      const Dictionary& lemmas) {
  switch (mode) {
    case Normalization::None:
      return stream;
    case Normalization::Stem:
      return stem(stream, rules);
    case Normalization::Lemmatize:
      return lemmatize(stream, lemmas);
    case Normalization::LemmatizeThenStem: {
      TokenStream out = stream;
      for (auto& t : out.tokens) {
        if (auto it = lemmas.find(t.normalized); it != lemmas.end())
          t.normalized = it->second;
        else
          t.normalized = rules.apply(t.normalized);
      }
      return out;
    }
  }
  return stream;
}

std::size_t BagOfWords::count(std::string_view term) const {
  auto it = index_.find(term);
  return it == index_.end() ? 0 : entries_[it->second].second;
}

BagOfWords bag_of_words(const TokenStream& stream) {
  BagOfWords bow;
  for (const auto& t : stream.tokens) {
    auto [it, inserted] = bow.index_.try_emplace(t.normalized, bow.entries_.size());
    if (inserted) bow.entries_.emplace_back(t.normalized, 0);
    ++bow.entries_[it->second].second;
    ++bow.total_;
  }
  return bow;
}

std::size_t DocumentTermMatrix::at(std::size_t row, std::size_t col) const {
  const auto first = column.begin() + static_cast<std::ptrdiff_t>(row_start[row]);
  const auto last = column.begin() + static_cast<std::ptrdiff_t>(row_start[row + 1]);
  auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0;
  return value[static_cast<std::size_t>(it - column.begin())];
}

std::size_t DocumentTermMatrix::row_total(std::size_t row) const {
  std::size_t sum = 0;
  for (std::size_t k = row_start[row]; k < row_start[row + 1]; ++k) sum += value[k];
  return sum;
}

DocumentTermMatrix build_dtm(std::span<const TokenStream> corpus) {
  if (corpus.empty()) throw InputError("build_dtm: empty corpus");
  DocumentTermMatrix dtm;
  std::set<std::string, std::less<>> vocab;
  for (const auto& doc : corpus)
    for (const auto& t : doc.tokens) vocab.insert(t.normalized);
  dtm.terms.assign(vocab.begin(), vocab.end());

  dtm.row_start.push_back(0);
  for (const auto& doc : corpus) {
    dtm.doc_ids.push_back(doc.doc_id);
    std::map<std::size_t, std::size_t> row;
    for (const auto& t : doc.tokens) {
      auto it = std::lower_bound(dtm.terms.begin(), dtm.terms.end(), t.normalized);
      ++row[static_cast<std::size_t>(it - dtm.terms.begin())];
    }
    for (const auto& [col, n] : row) {
      dtm.column.push_back(col);
      dtm.value.push_back(n);
    }
    dtm.row_start.push_back(dtm.column.size());
  }
  return dtm;
}

std::vector<Ngram> ngrams(const TokenStream& stream, std::size_t n) {
  if (n == 0) throw InputError("ngrams: n must be at least 1");
  std::vector<Ngram> out;
  if (stream.size() < n) return out;
  out.reserve(stream.size() - n + 1);
  for (std::size_t i = 0; i + n <= stream.size(); ++i) {
    Ngram g;
    g.reserve(n);
    for (std::size_t k = 0; k < n; ++k) g.push_back(stream.tokens[i + k].normalized);
    out.push_back(std::move(g));
  }
  return out;
}

std::string_view to_string(PosTag tag) {
  switch (tag) {
    case PosTag::Noun: return "NOUN";
    case PosTag::Verb: return "VERB";
    case PosTag::Adj: return "ADJ";
    case PosTag::Art: return "ART";
    case PosTag::Pron: return "PRON";
    case PosTag::Other: return "OTHER";
  }
  return "OTHER";
}

PosTag parse_pos_tag(std::string_view name) {
  for (PosTag t : {PosTag::Noun, PosTag::Verb, PosTag::Adj, PosTag::Art, PosTag::Pron, PosTag::Other})
    if (to_string(t) == name) return t;
  throw InputError("unknown POS tag '" + std::string(name) + "'");
}

PosTaggedStream pos_tag(const TokenStream& stream, const PosLexicon& lexicon) {
  PosTaggedStream out;
  out.reserve(stream.size());
  for (const auto& t : stream.tokens) {
    auto it = lexicon.find(t.normalized);
    out.push_back({t, it == lexicon.end() ? PosTag::Other : it->second});
  }
  return out;
}

WordSet load_wordlist(const std::filesystem::path& path) {
  const std::string content = read_text_file(path);
  WordSet out;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string::npos) nl = content.size();
    std::string_view line = trim(std::string_view(content).substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty() || line.front() == '#') continue;
    out.insert(to_lower(line));
  }
  return out;
}

Dictionary load_dictionary(const std::filesystem::path& path) {
  Dictionary out;
  for (auto& [k, v] : load_pairs(path)) out.insert_or_assign(std::move(k), std::move(v));
  return out;
}

StemRules load_stem_rules(const std::filesystem::path& path) {
  StemRules rules;
  // Keep raw replacement text: an empty replacement means plain suffix removal.
  const std::string content = read_text_file(path);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string::npos) nl = content.size();
    std::string_view line = std::string_view(content).substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    const std::string_view suffix = trim(line.substr(0, tab));
    const std::string_view replacement = tab == std::string_view::npos ? std::string_view{} : trim(line.substr(tab + 1));
    if (suffix.empty()) throw InputError(path.string() + ":" + std::to_string(line_no) + ": empty suffix");
    rules.rules.push_back({std::string(suffix), std::string(replacement)});
  }
  return rules;
}

PosLexicon load_pos_lexicon(const std::filesystem::path& path) {
  PosLexicon out;
  for (auto& [k, v] : load_pairs(path)) {
    try {
      out.insert_or_assign(std::move(k), parse_pos_tag(v));
    } catch (const InputError& e) {
      throw InputError(path.string() + ": " + e.what());
    }
  }
  return out;
}

Preprocessor::Output Preprocessor::run(const Document& doc) const {
  Output out;
  out.lowered = lowercase(tokenize(strip_urls(doc.text), doc.id));
  TokenStream kept;
  kept.doc_id = doc.id;
  for (const auto& t : out.lowered.tokens)
    if (!stopwords.contains(t.normalized) && !slang.contains(t.normalized)) kept.tokens.push_back(t);
  out.terms = normalize(kept, mode, stem_rules, lemmas);
  return out;
}

}  // namespace sentreg::corpus

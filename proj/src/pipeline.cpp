#include "sentreg/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <set>
#include <thread>

#include <Eigen/Core>
#include <fmt/format.h>
#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <unicode/uversion.h>

#include "sentreg/csv.hpp"
#include "sentreg/diagnostics.hpp"
#include "sentreg/logit.hpp"
#include "sentreg/report.hpp"
#include "sentreg/sentiment.hpp"
#include "sentreg/tabulate.hpp"

namespace sentreg::pipeline {

namespace {

constexpr const char* kVersion = "1.0.0";

template <class F>
void stage(const char* name, F&& body) {
  try {
    body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  } catch (const nlohmann::json::exception& e) {
    throw StageError(name, InputError(e.what()));
  } catch (const std::filesystem::filesystem_error& e) {
    throw StageError(name, IoError(e.what()));
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory: " + dir.string());
}

// Static chunking; results land in per-index slots so the merge order never
// depends on scheduling. The lowest-index failure is the one reported.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
      for (std::size_t i = lo; i < hi; ++i) {
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

corpus::TokenStream split_tokens(std::string_view text, std::string doc_id) {
  corpus::TokenStream s;
  s.doc_id = std::move(doc_id);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find(' ', pos), text.size());
    if (end > pos) {
      corpus::Token t;
      t.surface = std::string(text.substr(pos, end - pos));
      t.normalized = t.surface;
      t.position = s.tokens.size();
      s.tokens.push_back(std::move(t));
    }
    pos = end + 1;
  }
  return s;
}

std::string where(const CsvTable& t, const CsvRecord& r, std::string_view column) {
  return t.source() + ":" + std::to_string(r.line) + ": " + std::string(column);
}

corpus::Preprocessor make_preprocessor(const Config& cfg) {
  corpus::Preprocessor pre;
  if (!cfg.stopwords.empty()) pre.stopwords = corpus::load_wordlist(cfg.stopwords);
  if (!cfg.slang.empty()) pre.slang = corpus::load_wordlist(cfg.slang);
  if (!cfg.stem_rules.empty()) pre.stem_rules = corpus::load_stem_rules(cfg.stem_rules);
  if (!cfg.lemmas.empty()) pre.lemmas = corpus::load_dictionary(cfg.lemmas);
  pre.mode = cfg.normalization;
  return pre;
}

std::string dtm_csv(const corpus::DocumentTermMatrix& dtm) {
  std::string out = csv_line({"id", "term", "count"});
  for (std::size_t r = 0; r < dtm.rows(); ++r)
    for (std::size_t k = dtm.row_start[r]; k < dtm.row_start[r + 1]; ++k)
      out += csv_line({dtm.doc_ids[r], dtm.terms[dtm.column[k]], std::to_string(dtm.value[k])});
  return out;
}

std::string state_summary_csv(const std::vector<sentiment::StateSummary>& rows) {
  std::string out =
      csv_line({"state", "n_docs", "mean_score", "share_positive", "share_negative", "share_neutral"});
  for (const auto& s : rows)
    out += csv_line({s.state, std::to_string(s.n_docs), format_double(s.mean_score), format_double(s.share_positive),
                     format_double(s.share_negative), format_double(s.share_neutral)});
  return out;
}

struct AnalysisData {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::vector<double> y;
};

// Reads the response plus the named predictors; an empty `predictors` means
// every column other than id and sentiment.
AnalysisData read_analysis(const fs::path& path, std::vector<std::string> predictors = {}) {
  const auto table = CsvTable::read_file(path);
  const std::size_t c_y = table.column("sentiment");
  if (predictors.empty()) {
    for (const auto& h : table.header())
      if (h != "id" && h != "sentiment") predictors.push_back(h);
  }
  std::vector<std::size_t> idx;
  for (const auto& p : predictors) idx.push_back(table.column(p));

  AnalysisData d;
  d.names = predictors;
  d.columns.assign(predictors.size(), {});
  for (const auto& row : table.rows()) {
    d.y.push_back(parse_double(row.fields[c_y], where(table, row, "sentiment")));
    for (std::size_t j = 0; j < idx.size(); ++j)
      d.columns[j].push_back(parse_double(row.fields[idx[j]], where(table, row, predictors[j])));
  }
  if (d.y.empty()) throw InputError(table.source() + ": no observations");
  return d;
}

std::string dump(const report::Json& j) { return j.dump(2) + "\n"; }

void write_fit_report(const fs::path& dir, const report::Json& j) {
  write_text_file(dir / kFitJson, dump(j));
  write_text_file(dir / kFitText, report::human_report(j));
}

}  // namespace

void Config::validate() const {
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw InputError("cutoff must lie in (0, 1), got " + format_double(cutoff));
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InputError("tol must be positive, got " + format_double(tol));
  if (max_iter < 1) throw InputError("max-iter must be at least 1, got " + std::to_string(max_iter));
  if (threads < 1) throw InputError("threads must be at least 1");
}

Config default_config(const fs::path& data_dir) {
  Config c;
  c.lexicon = data_dir / "lexicon.tsv";
  c.negators = data_dir / "negators.tsv";
  c.amplifiers = data_dir / "amplifiers.tsv";
  c.stopwords = data_dir / "stopwords.txt";
  c.slang = data_dir / "slang.txt";
  c.stem_rules = data_dir / "stem_rules.tsv";
  c.lemmas = data_dir / "lemmas.tsv";
  c.covariates = data_dir / "covariates.csv";
  return c;
}

std::string sha256_file(const fs::path& path) {
  const std::string bytes = read_text_file(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("sha256 failed for " + path.string());
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

void preprocess(const Config& cfg, const fs::path& tokens_out) {
  stage("preprocess", [&] {
    cfg.validate();
    const auto loaded = corpus::load_corpus(cfg.corpus);
    if (loaded.documents.empty()) throw InputError(cfg.corpus.string() + ": no documents with a known state code");
    const auto pre = make_preprocessor(cfg);

    const auto& docs = loaded.documents;
    std::vector<corpus::Preprocessor::Output> outputs(docs.size());
    parallel_for(docs.size(), cfg.threads, [&](std::size_t i) { outputs[i] = pre.run(docs[i]); });

    std::string csv = csv_line({"id", "state", "text_width", "tokens", "terms"});
    for (std::size_t i = 0; i < docs.size(); ++i)
      csv += csv_line({docs[i].id, docs[i].state, std::to_string(docs[i].text_width),
                       join_words(outputs[i].lowered.normalized()), join_words(outputs[i].terms.normalized())});
    ensure_dir(tokens_out.parent_path().empty() ? fs::path(".") : tokens_out.parent_path());
    write_text_file(tokens_out, csv);

    if (cfg.write_dtm) {
      std::vector<corpus::TokenStream> terms;
      for (auto& o : outputs) terms.push_back(std::move(o.terms));
      write_text_file(cfg.out / kDtm, dtm_csv(corpus::build_dtm(terms)));
    }
  });
}

void score(const Config& cfg, const fs::path& tokens_in) {
  stage("score", [&] {
    const auto lexicon = sentiment::load_lexicon(cfg.lexicon, cfg.negators, cfg.amplifiers);
    lexicon.validate();
    const auto table = CsvTable::read_file(tokens_in);
    const std::size_t c_id = table.column("id"), c_state = table.column("state"),
                      c_width = table.column("text_width"), c_tokens = table.column("tokens");
    const auto& rows = table.rows();

    std::vector<sentiment::ScoredDocument> scored(rows.size());
    std::vector<long long> widths(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      widths[i] = parse_int(rows[i].fields[c_width], where(table, rows[i], "text_width"));
      if (widths[i] < 0) throw InputError(where(table, rows[i], "text_width") + " must be non-negative");
      if (!corpus::is_state_code(rows[i].fields[c_state]))
        throw InputError(where(table, rows[i], "state") + ": unknown state code '" + rows[i].fields[c_state] + "'");
    }
    parallel_for(rows.size(), cfg.threads, [&](std::size_t i) {
      const auto& f = rows[i].fields;
      scored[i] = {f[c_id], f[c_state], sentiment::score(split_tokens(f[c_tokens], f[c_id]), lexicon)};
    });

    std::string csv = csv_line({"id", "state", "text_width", "score", "class", "binary"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& s = scored[i];
      csv += csv_line({s.id, s.state, std::to_string(widths[i]), format_double(s.score.value),
                       std::string(sentiment::to_string(s.score.polarity)),
                       std::to_string(sentiment::to_binary(s.score.polarity))});
    }
    ensure_dir(cfg.out);
    write_text_file(cfg.out / kScored, csv);
    write_text_file(cfg.out / kStateSummary, state_summary_csv(sentiment::aggregate_by_state(scored)));
  });
}

void join(const Config& cfg, const fs::path& scored_in) {
  stage("join", [&] {
    const auto covars = tabulate::load_covariates(cfg.covariates);
    const auto table = CsvTable::read_file(scored_in);
    const std::size_t c_id = table.column("id"), c_state = table.column("state"),
                      c_width = table.column("text_width"), c_bin = table.column("binary");
    std::vector<tabulate::JoinInput> docs;
    for (const auto& row : table.rows()) {
      tabulate::JoinInput d;
      d.id = row.fields[c_id];
      d.state = row.fields[c_state];
      const long long w = parse_int(row.fields[c_width], where(table, row, "text_width"));
      if (w < 0) throw InputError(where(table, row, "text_width") + " must be non-negative");
      d.text_width = static_cast<std::size_t>(w);
      const long long b = parse_int(row.fields[c_bin], where(table, row, "binary"));
      if (b != 0 && b != 1) throw InputError(where(table, row, "binary") + " must be 0 or 1");
      d.binary = static_cast<int>(b);
      docs.push_back(std::move(d));
    }
    const auto rows = tabulate::join(docs, covars);
    ensure_dir(cfg.out);
    write_text_file(cfg.out / kAnalysis, tabulate::analysis_table_csv(rows));
    write_text_file(cfg.out / kDescriptives, tabulate::descriptives_csv(tabulate::descriptive_stats(rows)));
  });
}

void fit(const Config& cfg, const fs::path& analysis_in) {
  stage("fit", [&] {
    cfg.validate();
    auto data = read_analysis(analysis_in);
    const logit::DesignMatrix X(std::move(data.names), std::move(data.columns), std::move(data.y));
    const auto result = logit::fit(X, {cfg.tol, cfg.max_iter});
    ensure_dir(cfg.out);
    write_fit_report(cfg.out, report::fit_json(result, "sentiment"));
  });
}

void diagnose(const Config& cfg, const fs::path& fit_report_in, const fs::path& analysis_in) {
  stage("diagnose", [&] {
    cfg.validate();
    auto j = report::Json::parse(read_text_file(fit_report_in));
    const auto fitted = report::fit_from_json(j);
    const std::vector<std::string> predictors(fitted.names.begin() + 1, fitted.names.end());
    auto data = read_analysis(analysis_in, predictors);
    const logit::DesignMatrix X(std::move(data.names), std::move(data.columns), std::move(data.y));
    if (X.rows() != fitted.n_obs)
      throw InputError(analysis_in.string() + " has " + std::to_string(X.rows()) + " rows but " +
                       fit_report_in.string() + " was fitted on " + std::to_string(fitted.n_obs));

    const auto patterns = diagnostics::covariate_patterns(X, fitted);
    const auto pearson = diagnostics::pearson_chi2(patterns, X.cols());
    const auto cls = diagnostics::classification_summary(fitted, X, cfg.cutoff);
    const std::set<std::string, std::less<>> discrete(cfg.discrete.begin(), cfg.discrete.end());
    const auto kinds = diagnostics::kinds_for(X, discrete);
    const auto margins = diagnostics::marginal_effects(fitted, X, kinds);
    const auto qq = diagnostics::qq_export(patterns);

    j.erase("diagnostics");
    j["diagnostics"] = report::diagnostics_json(pearson, cls);
    ensure_dir(cfg.out);
    write_fit_report(cfg.out, j);
    write_text_file(cfg.out / kMargins, report::margins_csv(margins));
    write_text_file(cfg.out / kQq, report::qq_csv(qq));
  });
}

std::vector<fs::path> run(const Config& cfg) {
  using Clock = std::chrono::steady_clock;
  report::Json timings = report::Json::object();
  auto timed = [&](const char* name, auto&& body) {
    const auto t0 = Clock::now();
    body();
    timings[name] = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  };

  stage("run", [&] {
    cfg.validate();
    ensure_dir(cfg.out);
    // Every named input must exist before any stage starts writing.
    const std::pair<const char*, const fs::path*> required[] = {{"corpus", &cfg.corpus},
                                                                {"lexicon", &cfg.lexicon},
                                                                {"covariates", &cfg.covariates}};
    for (const auto& [name, path] : required)
      if (path->empty()) throw InputError(std::string("no ") + name + " file given");
  });

  const fs::path tokens = cfg.out / kTokens;
  timed("preprocess", [&] { preprocess(cfg, tokens); });
  timed("score", [&] { score(cfg, tokens); });
  timed("join", [&] { join(cfg, cfg.out / kScored); });
  timed("fit", [&] { fit(cfg, cfg.out / kAnalysis); });
  timed("diagnose", [&] { diagnose(cfg, cfg.out / kFitJson, cfg.out / kAnalysis); });

  std::vector<fs::path> written = {tokens};
  if (cfg.write_dtm) written.push_back(cfg.out / kDtm);
  for (const char* name : {kScored, kStateSummary, kAnalysis, kDescriptives, kFitJson, kFitText, kMargins, kQq})
    written.push_back(cfg.out / name);

  stage("manifest", [&] {
    report::Json m;
    m["tool"] = "sentreg";
    m["version"] = kVersion;
    report::Json inputs = report::Json::array();
    const std::pair<const char*, const fs::path*> roles[] = {
        {"corpus", &cfg.corpus},       {"lexicon", &cfg.lexicon},       {"negators", &cfg.negators},
        {"amplifiers", &cfg.amplifiers}, {"stopwords", &cfg.stopwords}, {"slang", &cfg.slang},
        {"stem_rules", &cfg.stem_rules}, {"lemmas", &cfg.lemmas},       {"covariates", &cfg.covariates}};
    for (const auto& [role, path] : roles) {
      if (path->empty()) continue;
      inputs.push_back({{"role", role},
                        {"path", path->string()},
                        {"bytes", fs::file_size(*path)},
                        {"sha256", sha256_file(*path)}});
    }
    m["inputs"] = std::move(inputs);
    report::Json outputs = report::Json::array();
    for (const auto& p : written)
      outputs.push_back({{"name", p.filename().string()}, {"bytes", fs::file_size(p)}, {"sha256", sha256_file(p)}});
    m["outputs"] = std::move(outputs);
    m["settings"] = {{"cutoff", cfg.cutoff},
                     {"tol", cfg.tol},
                     {"max_iter", cfg.max_iter},
                     {"seed", cfg.seed},
                     {"normalization", cfg.normalization == corpus::Normalization::None        ? "none"
                                       : cfg.normalization == corpus::Normalization::Stem      ? "stem"
                                       : cfg.normalization == corpus::Normalization::Lemmatize ? "lemmatize"
                                                                                               : "lemmatize-then-stem"},
                     {"discrete", cfg.discrete}};
    m["versions"] = {{"sentreg", kVersion},
                     {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
                     {"icu", U_ICU_VERSION},
                     {"fmt", fmt::format("{}.{}.{}", FMT_VERSION / 10000, FMT_VERSION / 100 % 100, FMT_VERSION % 100)},
                     {"openssl", OpenSSL_version(OPENSSL_VERSION)}};
    m["timings_ms"] = timings;
    write_text_file(cfg.out / kManifest, dump(m));
  });
  written.push_back(cfg.out / kManifest);
  return written;
}

}  // namespace sentreg::pipeline

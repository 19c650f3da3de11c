#pragma once

// File-staged orchestration: each stage reads the previous stage's files and
// writes its own, so any stage can be rerun or inspected alone.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sentreg/corpus.hpp"
#include "sentreg/error.hpp"

namespace sentreg::pipeline {

namespace fs = std::filesystem;

struct Config {
  fs::path corpus;
  fs::path lexicon;
  fs::path negators;    // optional
  fs::path amplifiers;  // optional
  fs::path stopwords;   // optional
  fs::path slang;       // optional
  fs::path stem_rules;
  fs::path lemmas;      // optional
  fs::path covariates;
  fs::path out = ".";

  double cutoff = 0.5;
  double tol = 1e-10;
  int max_iter = 100;
  std::uint64_t seed = 0;
  corpus::Normalization normalization = corpus::Normalization::LemmatizeThenStem;
  std::vector<std::string> discrete = {"NE", "MW", "WEST"};
  unsigned threads = 1;
  bool write_dtm = false;

  /// Throws InputError for out-of-range numbers.
  void validate() const;
};

/// Config whose resource paths point into `data_dir` (the bundled defaults).
Config default_config(const fs::path& data_dir);

/// Wraps an error raised inside a stage; what() starts with "[stage] ".
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), "[" + stage + "] " + cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

// Artifact names inside the output directory.
inline constexpr const char* kTokens = "tokens.csv";
inline constexpr const char* kDtm = "dtm.csv";
inline constexpr const char* kScored = "scored.csv";
inline constexpr const char* kStateSummary = "state_summary.csv";
inline constexpr const char* kAnalysis = "analysis_table.csv";
inline constexpr const char* kDescriptives = "descriptives.csv";
inline constexpr const char* kFitJson = "fit_report.json";
inline constexpr const char* kFitText = "fit_report.txt";
inline constexpr const char* kMargins = "margins.csv";
inline constexpr const char* kQq = "qq.csv";
inline constexpr const char* kManifest = "run_manifest.json";

/// corpus -> tokens.csv (id,state,text_width,tokens,terms) and optionally dtm.csv.
void preprocess(const Config& cfg, const fs::path& tokens_out);
/// tokens.csv -> scored.csv (id,state,text_width,score,class,binary) and state_summary.csv.
void score(const Config& cfg, const fs::path& tokens_in);
/// scored.csv + covariates -> analysis_table.csv and descriptives.csv.
void join(const Config& cfg, const fs::path& scored_in);
/// analysis_table.csv -> fit_report.json and fit_report.txt.
void fit(const Config& cfg, const fs::path& analysis_in);
/// fit_report.json + analysis_table.csv -> diagnostics appended to the report,
/// margins.csv and qq.csv.
void diagnose(const Config& cfg, const fs::path& fit_report_in, const fs::path& analysis_in);

/// All stages in order, then run_manifest.json. Returns the artifact paths in
/// the order they were written.
std::vector<fs::path> run(const Config& cfg);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const fs::path& path);

}  // namespace sentreg::pipeline

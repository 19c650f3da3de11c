// sentreg: text sentiment -> state covariates -> binary logit, as file stages.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "sentreg/error.hpp"
#include "sentreg/pipeline.hpp"

namespace fs = std::filesystem;
using sentreg::pipeline::Config;

namespace {

const char* kFormats = R"(File formats:
  corpus       CSV with header id,state,text (extra columns ignored). state is a
               two-letter postal code (50 states + DC); other rows are dropped.
  lexicon      TSV term<TAB>valence, valence in [-2, 2]. '#' starts a comment.
  negators     one term per line; flips the sign of a valence within the two
               preceding tokens.
  amplifiers   TSV term<TAB>multiplier (> 1), same two-token window.
  stopwords    one term per line, removed before normalization.
  slang        one term per line, removed like stopwords.
  stem-rules   TSV suffix<TAB>replacement, applied in file order; the first
               rule leaving a stem of at least 3 characters wins.
  lemmas       TSV word<TAB>lemma.
  covariates   CSV with header
               state,FHH_pct,AFS,EDU2,EDU3,AGE2,WP,OCH,PWHI,LF,POPDEN,CASES,PR,MHHI,GR,region
               region is Northeast, Midwest, South or West (South is the baseline).

Artifacts written to --out:
  tokens.csv, scored.csv, state_summary.csv, analysis_table.csv,
  descriptives.csv, fit_report.json, fit_report.txt, margins.csv, qq.csv,
  run_manifest.json (run only).

Exit codes: 0 success, 2 input or schema error, 3 estimation error
(separation, collinearity, single-class response), 4 I/O error.)";

void add_resources(CLI::App& app, Config& c) {
  app.add_option("--lexicon", c.lexicon, "Valence lexicon TSV")->capture_default_str();
  app.add_option("--negators", c.negators, "Negator list")->capture_default_str();
  app.add_option("--amplifiers", c.amplifiers, "Amplifier TSV")->capture_default_str();
  app.add_option("--stopwords", c.stopwords, "Stopword list")->capture_default_str();
  app.add_option("--slang", c.slang, "Slang list")->capture_default_str();
  app.add_option("--stem-rules", c.stem_rules, "Stemming rules TSV")->capture_default_str();
  app.add_option("--lemmas", c.lemmas, "Lemma dictionary TSV")->capture_default_str();
  app.add_option("--covariates", c.covariates, "State covariates CSV")->capture_default_str();
}

void add_model(CLI::App& app, Config& c) {
  app.add_option("--cutoff", c.cutoff, "Classification cutoff in (0,1)")->capture_default_str();
  app.add_option("--tol", c.tol, "Log-likelihood convergence tolerance")->capture_default_str();
  app.add_option("--max-iter", c.max_iter, "Newton iteration limit")->capture_default_str();
  app.add_option("--seed", c.seed, "Seed recorded in the manifest; the pipeline itself draws no random numbers")
      ->capture_default_str();
  app.add_option("--discrete", c.discrete, "Predictors whose margins are discrete changes")->capture_default_str();
}

void add_common(CLI::App& app, Config& c) {
  app.add_option("--out", c.out, "Output directory")->capture_default_str();
  app.add_option("--threads", c.threads, "Worker threads for per-document stages")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
#ifdef SENTREG_DATA_DIR
  Config cfg = sentreg::pipeline::default_config(SENTREG_DATA_DIR);
#else
  Config cfg = sentreg::pipeline::default_config("data");
#endif
  std::string normalization = "lemmatize-then-stem";
  fs::path tokens_in, scored_in, analysis_in, report_in;

  CLI::App app{"Lexicon sentiment of state-tagged documents regressed on state covariates with a binary logit."};
  app.footer(kFormats);
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run every stage and write run_manifest.json");
  auto* pre = app.add_subcommand("preprocess", "corpus -> tokens.csv");
  auto* sc = app.add_subcommand("score", "tokens.csv -> scored.csv, state_summary.csv");
  auto* jn = app.add_subcommand("join", "scored.csv + covariates -> analysis_table.csv, descriptives.csv");
  auto* ft = app.add_subcommand("fit", "analysis_table.csv -> fit_report.json, fit_report.txt");
  auto* dg = app.add_subcommand("diagnose", "fit_report.json + analysis_table.csv -> diagnostics, margins.csv, qq.csv");

  for (auto* s : {run, pre}) {
    s->add_option("--corpus", cfg.corpus, "Corpus CSV (id,state,text)")->required();
    s->add_option("--normalization", normalization, "none | stem | lemmatize | lemmatize-then-stem")
        ->capture_default_str();
  }
  pre->add_flag("--dtm", cfg.write_dtm, "Also write dtm.csv (id,term,count)");
  run->add_flag("--dtm", cfg.write_dtm, "Also write dtm.csv (id,term,count)");
  for (auto* s : {run, pre, sc, jn, ft, dg}) {
    add_common(*s, cfg);
    add_resources(*s, cfg);
    add_model(*s, cfg);
  }
  pre->add_option("--tokens", tokens_in, "tokens.csv to write (default: <out>/tokens.csv)");
  sc->add_option("--tokens", tokens_in, "tokens.csv to read (default: <out>/tokens.csv)");
  jn->add_option("--scored", scored_in, "scored.csv to read (default: <out>/scored.csv)");
  ft->add_option("--analysis", analysis_in, "analysis_table.csv to read (default: <out>/analysis_table.csv)");
  dg->add_option("--analysis", analysis_in, "analysis_table.csv to read (default: <out>/analysis_table.csv)");
  dg->add_option("--fit-report", report_in, "fit_report.json to read (default: <out>/fit_report.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(sentreg::ErrorKind::Input);
  }

  auto or_default = [&](const fs::path& p, const char* name) { return p.empty() ? cfg.out / name : p; };
  namespace pl = sentreg::pipeline;
  try {
    cfg.normalization = sentreg::corpus::parse_normalization(normalization);
    if (*run) {
      for (const auto& p : pl::run(cfg)) std::cout << p.string() << '\n';
    } else if (*pre) {
      pl::preprocess(cfg, or_default(tokens_in, pl::kTokens));
    } else if (*sc) {
      pl::score(cfg, or_default(tokens_in, pl::kTokens));
    } else if (*jn) {
      pl::join(cfg, or_default(scored_in, pl::kScored));
    } else if (*ft) {
      pl::fit(cfg, or_default(analysis_in, pl::kAnalysis));
    } else if (*dg) {
      pl::diagnose(cfg, or_default(report_in, pl::kFitJson), or_default(analysis_in, pl::kAnalysis));
    }
  } catch (const sentreg::Error& e) {
    std::cerr << "sentreg: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "sentreg: internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

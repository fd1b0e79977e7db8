#include "signgram/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "signgram/corpus.hpp"
#include "signgram/error.hpp"
#include "signgram/eval.hpp"
#include "signgram/infotheory.hpp"
#include "signgram/ngram.hpp"
#include "signgram/random.hpp"
#include "signgram/restore.hpp"
#include "signgram/service.hpp"
#include "signgram/significance.hpp"
#include "signgram/stats.hpp"

namespace signgram::cli {

namespace {

// Shortest decimal that reads back to the same double.
std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<int> parse_orders(const std::string& spec) {
  std::vector<int> out;
  auto to_int = [&](const std::string& s) {
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size()) throw CLI::ValidationError("--orders", spec);
    return v;
  };
  if (const auto dots = spec.find(".."); dots != std::string::npos) {
    const int lo = to_int(spec.substr(0, dots));
    const int hi = to_int(spec.substr(dots + 2));
    if (lo > hi) throw CLI::ValidationError("--orders", spec);
    for (int n = lo; n <= hi; ++n) out.push_back(n);
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_int(item));
  }
  for (int n : out) {
    if (n < 1 || n > kMaxOrder) throw CLI::ValidationError("--orders", "orders must be in 1..5");
  }
  return out;
}

struct CorpusInput {
  std::string path;
  std::optional<std::uint32_t> vocabulary_size;
  std::size_t max_length = kDefaultMaxTextLength;
  bool reverse = false;

  void add_to(CLI::App* cmd, bool positional = true) {
    if (positional) cmd->add_option("corpus", path, "Corpus file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--vocab", vocabulary_size, "Override the vocabulary size from the header")
        ->check(CLI::Range(1u, kMaxVocabularySize));
    cmd->add_option("--max-length", max_length, "Longest accepted text")->check(CLI::PositiveNumber);
    cmd->add_flag("--reverse", reverse, "Reverse every text on read");
  }

  Corpus read(const std::string& file) const {
    ParseOptions opts;
    opts.vocabulary_size = vocabulary_size;
    opts.max_text_length = max_length;
    opts.reverse = reverse;
    return read_corpus_file(file, opts);
  }
  Corpus read() const { return read(path); }
};

struct ModelFlags {
  int order = 2;
  std::string smoothing = "witten_bell";
  int katz_threshold = 5;
  double katz_discount = 0.5;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--order", order, "n-gram order (1..5)")->check(CLI::Range(1, kMaxOrder));
    cmd->add_option("--smoothing", smoothing, "mle, add_one, witten_bell or katz")
        ->check(
            [](const std::string& name) {
              try {
                parse_smoothing(name);
                return std::string();
              } catch (const Error&) {
                return "unknown smoothing: " + name;
              }
            },
            "SMOOTHING");
    cmd->add_option("--katz-threshold", katz_threshold, "Good-Turing applies to counts <= k")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--katz-discount", katz_discount, "Absolute discount used when Good-Turing is unusable")
        ->check(CLI::Range(0.0, 1.0));
  }

  ModelConfig config(std::uint32_t vocabulary_size) const {
    ModelConfig c;
    c.order = order;
    c.smoothing = parse_smoothing(smoothing);
    c.vocabulary_size = vocabulary_size;
    c.katz_gt_threshold = katz_threshold;
    c.katz_fallback_discount = katz_discount;
    return c;
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path);
  return f;
}

std::string join(const std::vector<Sign>& signs) {
  std::string s;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(signs[i].id);
  }
  return s;
}

void write_rank_table(std::ostream& out, const FrequencyTable& table) {
  out << "rank\tsign\tfrequency\n";
  for (const auto& r : rank_frequency(table)) out << r.rank << '\t' << r.sign.id << '\t' << r.frequency << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statistics, n-gram models and restoration for sign-sequence corpora", "signgram"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // clean
  auto* clean = app.add_subcommand("clean", "Drop damaged, multi-line and duplicate texts");
  CorpusInput clean_in;
  clean_in.add_to(clean);
  std::string clean_out;
  bool keep_damaged = false, keep_multiline = false, keep_duplicates = false;
  clean->add_option("-o,--output", clean_out, "Write the cleaned corpus here instead of stdout");
  clean->add_flag("--keep-damaged", keep_damaged, "Keep texts with gaps");
  clean->add_flag("--keep-multiline", keep_multiline, "Keep texts spanning several lines");
  clean->add_flag("--keep-duplicates", keep_duplicates, "Keep repeated sign sequences");

  // stats
  auto* stats = app.add_subcommand("stats", "Frequency statistics");
  CorpusInput stats_in;
  stats_in.add_to(stats);
  bool want_zipf = false, want_positional = false, want_lengths = false;
  std::optional<double> coverage_fraction;
  stats->add_flag("--zipf", want_zipf, "Fit the Zipf-Mandelbrot law to the rank-frequency curve");
  stats->add_option("--coverage", coverage_fraction, "Signs needed to cover this fraction (all, beginners, enders)")
      ->check(CLI::Range(0.0, 1.0));
  stats->add_flag("--positional", want_positional, "Per-sign beginner and ender counts");
  stats->add_flag("--lengths", want_lengths, "Text length histogram");

  // train
  auto* train = app.add_subcommand("train", "Count n-grams and save a model");
  CorpusInput train_in;
  train_in.add_to(train);
  ModelFlags train_model;
  train_model.add_to(train);
  std::string train_out;
  std::optional<std::string> train_label;
  train->add_option("-o,--output", train_out, "Model file to write")->required();
  train->add_option("--label", train_label, "Label stored in the model (default: corpus label)");

  // score
  auto* score = app.add_subcommand("score", "log2 probability of each text");
  std::string score_model;
  CorpusInput score_in;
  score->add_option("model", score_model, "Model file")->required()->check(CLI::ExistingFile);
  score_in.add_to(score);
  bool score_no_end = false, score_no_start = false;
  score->add_flag("--no-end", score_no_end, "Do not score the end of text; renormalize over signs");
  score->add_flag("--no-start", score_no_start, "Condition the first sign on nothing instead of <s>");

  // generate
  auto* gen = app.add_subcommand("generate", "Sample texts from a model");
  std::string gen_model;
  std::uint64_t gen_seed = 0;
  std::size_t gen_count = 1, gen_max = kDefaultMaxTextLength;
  gen->add_option("model", gen_model, "Model file")->required()->check(CLI::ExistingFile);
  gen->add_option("--seed", gen_seed, "Random seed")->required();
  gen->add_option("-n,--count", gen_count, "Number of texts")->check(CLI::PositiveNumber);
  gen->add_option("--max-length", gen_max, "Stop after this many signs")->check(CLI::PositiveNumber);

  // matrix
  auto* matrix = app.add_subcommand("matrix", "Bigram conditional probability matrix");
  std::string matrix_model;
  bool matrix_reference = false;
  matrix->add_option("model", matrix_model, "Model file")->required()->check(CLI::ExistingFile);
  matrix->add_flag("--reference", matrix_reference, "No-correlation reference: every row is the unigram distribution");

  // entropy
  auto* ent = app.add_subcommand("entropy", "Unigram entropy and adjacent-pair mutual information");
  CorpusInput ent_in;
  ent_in.add_to(ent);
  bool ent_boundaries = false;
  ent->add_flag("--include-boundaries", ent_boundaries, "Count (<s>, a) and (a, </s>) as pairs");

  // perplexity
  auto* perp = app.add_subcommand("perplexity", "Held-out cross-entropy and perplexity by order");
  CorpusInput perp_in;
  perp_in.add_to(perp, false);
  std::optional<std::string> perp_corpus, perp_train, perp_test;
  double perp_holdout = 0.2;
  std::optional<std::uint64_t> perp_seed;
  std::string perp_orders = "1..5";
  ModelFlags perp_model;
  bool perp_exclude_end = false;
  perp->add_option("corpus", perp_corpus, "Corpus to split with --holdout")->check(CLI::ExistingFile);
  perp->add_option("--train", perp_train, "Training corpus")->check(CLI::ExistingFile);
  perp->add_option("--test", perp_test, "Held-out corpus")->check(CLI::ExistingFile);
  perp->add_option("--holdout", perp_holdout, "Held-out fraction when splitting one corpus")
      ->check(CLI::Range(0.0, 1.0));
  perp->add_option("--seed", perp_seed, "Seed for the holdout split");
  perp->add_option("--orders", perp_orders, "Orders as lo..hi or a comma list");
  perp_model.add_to(perp);
  perp->add_flag("--exclude-end", perp_exclude_end, "Do not count the end of text as an event");

  // significant
  auto* sig = app.add_subcommand("significant", "Sign pairs ranked by log-likelihood ratio");
  CorpusInput sig_in;
  sig_in.add_to(sig);
  std::size_t sig_top = 20;
  bool sig_boundaries = false, sig_by_frequency = false;
  sig->add_option("--top", sig_top, "Number of pairs")->check(CLI::PositiveNumber);
  sig->add_flag("--include-boundaries", sig_boundaries, "Count pairs with <s> and </s>");
  sig->add_flag("--by-frequency", sig_by_frequency, "Order by pair frequency instead");

  // restore
  auto* rest = app.add_subcommand("restore", "Ranked fillings for texts with gaps");
  std::string rest_model;
  std::optional<std::string> rest_file, rest_text;
  std::size_t rest_top = 10;
  bool rest_json = false;
  rest->add_option("model", rest_model, "Model file")->required()->check(CLI::ExistingFile);
  rest->add_option("input", rest_file, "Corpus file of gapped texts")->check(CLI::ExistingFile);
  rest->add_option("--text", rest_text, "One text such as \"267 ? 342\"");
  rest->add_option("--top", rest_top, "Fillings per text")->check(CLI::PositiveNumber);
  rest->add_flag("--json", rest_json, "One JSON record per text, as served by /api/restore");

  // argmax-text
  auto* argmax = app.add_subcommand("argmax-text", "Most probable text of a given length");
  std::string argmax_model;
  std::size_t argmax_length = 0;
  argmax->add_option("model", argmax_model, "Bigram model file")->required()->check(CLI::ExistingFile);
  argmax->add_option("--length", argmax_length, "Text length")->required()->check(CLI::PositiveNumber);

  // crossval
  auto* cv = app.add_subcommand("crossval", "k-fold cross-validation of restoration sensitivity");
  CorpusInput cv_in;
  cv_in.add_to(cv);
  CrossValidationConfig cv_config;
  ModelFlags cv_model;
  std::optional<std::string> cv_trials_out;
  cv->add_option("--k", cv_config.folds, "Number of folds")->check(CLI::Range(2, 1000));
  cv->add_option("--coverage", cv_config.coverage, "Cumulative probability of the candidate set")
      ->check(CLI::Range(0.0, 1.0));
  cv->add_option("--trials", cv_config.trials_per_fold, "Trials per fold")->check(CLI::PositiveNumber);
  cv->add_option("--seed", cv_config.seed, "Master seed")->required();
  cv->add_option("--threads", cv_config.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  cv->add_option("--trials-out", cv_trials_out, "Write per-trial sensitivities here");
  cv_model.add_to(cv);

  // serve
  auto* srv = app.add_subcommand("serve", "HTTP service for restoration");
  std::string srv_model;
  ServeOptions srv_opts;
  srv->add_option("model", srv_model, "Smoothed model file")->required()->check(CLI::ExistingFile);
  srv->add_option("--port", srv_opts.port, "Port")->check(CLI::Range(1, 65535));
  srv->add_option("--host", srv_opts.host, "Bind address");
  srv->add_option("--static-dir", srv_opts.static_dir, "Serve these files at /")->check(CLI::ExistingDirectory);
  srv->add_option("--cors-origin", srv_opts.cors_origin, "Access-Control-Allow-Origin value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (clean->parsed()) {
      const Corpus raw = clean_in.read();
      CleaningOptions opts{!keep_damaged, !keep_multiline, !keep_duplicates};
      const auto result = clean_corpus(raw, opts);
      if (clean_out.empty()) {
        serialize_corpus(result.corpus, out);
      } else {
        auto f = open_output(clean_out);
        serialize_corpus(result.corpus, f);
      }
      const auto& r = result.report;
      err << "input\tremoved_damaged\tremoved_multiline\tremoved_duplicates\toutput\n"
          << r.input_texts << '\t' << r.removed_damaged << '\t' << r.removed_multiline << '\t'
          << r.removed_duplicates << '\t' << r.output_texts << '\n';
      if (r.warnings) err << "warning: cleaned corpus is empty\n";
    } else if (stats->parsed()) {
      const Corpus corpus = stats_in.read();
      const auto table = unigram_frequencies(corpus);
      const bool any = want_zipf || coverage_fraction || want_positional || want_lengths;
      if (!any) {
        write_rank_table(out, table);
      }
      if (want_zipf) {
        const auto points = rank_points(rank_frequency(table));
        const auto fit = fit_zipf_mandelbrot(points);
        out << "a\tb\tc\tresidual\tdegenerate\n"
            << num(fit.a) << '\t' << num(fit.b) << '\t' << num(fit.c) << '\t' << num(fit.residual) << '\t'
            << (fit.degenerate ? 1 : 0) << '\n';
      }
      if (coverage_fraction) {
        if (*coverage_fraction <= 0.0) throw DataError("coverage must be in (0, 1]");
        out << "set\tsigns\tdistinct\tcoverage\n";
        out << "all\t" << cumulative_coverage(table, *coverage_fraction) << '\t' << table.distinct() << '\t'
            << num(*coverage_fraction) << '\n';
        const auto ends = positional_frequencies(corpus, TextPosition::ender);
        const auto begins = positional_frequencies(corpus, TextPosition::beginner);
        out << "enders\t" << cumulative_coverage(ends, *coverage_fraction) << '\t' << ends.distinct() << '\t'
            << num(*coverage_fraction) << '\n';
        out << "beginners\t" << cumulative_coverage(begins, *coverage_fraction) << '\t' << begins.distinct()
            << '\t' << num(*coverage_fraction) << '\n';
      }
      if (want_positional) {
        const auto ends = positional_frequencies(corpus, TextPosition::ender);
        const auto begins = positional_frequencies(corpus, TextPosition::beginner);
        out << "sign\ttotal\tbeginner\tender\n";
        for (const auto& [s, n] : table.counts) {
          const auto b = begins.counts.find(s);
          const auto e = ends.counts.find(s);
          out << s.id << '\t' << n << '\t' << (b == begins.counts.end() ? 0 : b->second) << '\t'
              << (e == ends.counts.end() ? 0 : e->second) << '\n';
        }
      }
      if (want_lengths) {
        out << "length\ttexts\n";
        for (const auto& [len, n] : length_histogram(corpus)) out << len << '\t' << n << '\n';
      }
    } else if (train->parsed()) {
      const Corpus corpus = train_in.read();
      const auto config = train_model.config(corpus.vocabulary_size);
      NgramModel model = NgramModel::train(corpus, config);
      if (train_label) model = NgramModel(model.config(), model.counts(), *train_label);
      save_model_file(model, train_out);
      err << "order\tsmoothing\tvocabulary\ttexts\n"
          << config.order << '\t' << to_string(config.smoothing) << '\t' << config.vocabulary_size << '\t'
          << corpus.size() << '\n';
    } else if (score->parsed()) {
      const NgramModel model = load_model_file(score_model);
      if (!score_in.vocabulary_size) score_in.vocabulary_size = model.vocabulary_size();
      const Corpus corpus = score_in.read();
      const ScoreOptions opts{!score_no_end, !score_no_start};
      out << "index\tid\tlength\tlog2_prob\n";
      double total = 0.0;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Text& t = corpus.texts[i];
        const double lp = sequence_log_prob(model, t, opts);
        total += lp;
        out << i << '\t' << t.source_id.value_or("") << '\t' << t.size() << '\t' << num(lp) << '\n';
      }
      out << "# total_log2_prob=" << num(total) << '\n';
    } else if (gen->parsed()) {
      const NgramModel model = load_model_file(gen_model);
      out << "#! vocab=" << model.vocabulary_size() << " label=generated\n";
      for (std::size_t i = 0; i < gen_count; ++i) {
        const auto signs = generate(model, derive_seed(gen_seed, i), gen_max);
        if (signs.empty())
          out << "# empty\n";
        else
          out << join(signs) << '\n';
      }
    } else if (matrix->parsed()) {
      const NgramModel model = load_model_file(matrix_model);
      const BigramMatrix m = matrix_reference ? independence_matrix(model) : bigram_matrix(model);
      const std::uint32_t v = m.vocabulary_size();
      out << "history";
      for (TokenId b = 1; b <= v; ++b) out << '\t' << b;
      out << "\t</s>\n";
      for (TokenId a = 0; a <= v; ++a) {
        if (a == kStartToken)
          out << "<s>";
        else
          out << a;
        for (TokenId b = 1; b <= v + 1; ++b) out << '\t' << num(m.at(a, b));
        out << '\n';
      }
    } else if (ent->parsed()) {
      const Corpus corpus = ent_in.read();
      const auto r = corpus_entropy_mi(corpus, PairOptions{ent_boundaries});
      out << "entropy_bits\tmutual_information_bits\ttokens\tpairs\n"
          << num(r.entropy_bits) << '\t' << num(r.mutual_information_bits) << '\t' << r.token_count << '\t'
          << r.pair_count << '\n';
    } else if (perp->parsed()) {
      const auto orders = parse_orders(perp_orders);
      Corpus train_corpus, test_corpus;
      if (perp_train || perp_test) {
        if (!perp_train || !perp_test || perp_corpus) throw CLI::ValidationError("perplexity", "give --train and --test, or one corpus with --holdout");
        train_corpus = perp_in.read(*perp_train);
        test_corpus = perp_in.read(*perp_test);
        if (train_corpus.vocabulary_size != test_corpus.vocabulary_size)
          throw DataError("train and test vocabularies differ");
      } else {
        if (!perp_corpus) throw CLI::ValidationError("perplexity", "a corpus or --train/--test is required");
        if (!perp_seed) throw CLI::ValidationError("perplexity", "--seed is required with --holdout");
        if (perp_holdout <= 0.0 || perp_holdout >= 1.0) throw CLI::ValidationError("--holdout", "must be in (0, 1)");
        const Corpus corpus = perp_in.read(*perp_corpus);
        std::vector<std::size_t> idx(corpus.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        Rng rng(*perp_seed);
        for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
        const auto n_test = static_cast<std::size_t>(perp_holdout * static_cast<double>(corpus.size()) + 0.5);
        if (n_test == 0 || n_test >= corpus.size()) throw DataError("holdout leaves an empty train or test set");
        train_corpus.vocabulary_size = test_corpus.vocabulary_size = corpus.vocabulary_size;
        train_corpus.label = corpus.label + "/train";
        test_corpus.label = corpus.label + "/test";
        for (std::size_t i = 0; i < idx.size(); ++i)
          (i < n_test ? test_corpus : train_corpus).texts.push_back(corpus.texts[idx[i]]);
      }
      const auto reports = perplexity_sweep(train_corpus, test_corpus, perp_model.config(train_corpus.vocabulary_size),
                                            orders, PerplexityOptions{!perp_exclude_end});
      out << "order\tcross_entropy_bits\tperplexity\tevents\n";
      for (const auto& r : reports)
        out << r.order << '\t' << num(r.cross_entropy_bits_per_token) << '\t' << num(r.perplexity) << '\t'
            << r.held_out_token_count << '\n';
    } else if (sig->parsed()) {
      const Corpus corpus = sig_in.read();
      const auto counts = count_ngrams(corpus, 2);
      const AssociationOptions opts{sig_boundaries};
      const auto pairs = sig_by_frequency ? rank_frequent_pairs(counts, sig_top, opts)
                                          : rank_significant_pairs(counts, sig_top, opts);
      const TokenId end = end_token(corpus.vocabulary_size);
      auto label = [&](TokenId t) {
        return t == kStartToken ? std::string("<s>") : t == end ? std::string("</s>") : std::to_string(t);
      };
      out << "ll_rank\tfrequency_rank\tfirst\tsecond\tcount\tg2\n";
      for (const auto& p : pairs)
        out << p.ll_rank << '\t' << p.frequency_rank << '\t' << label(p.first) << '\t' << label(p.second) << '\t'
            << p.observed_count << '\t' << num(p.ll_value) << '\n';
    } else if (rest->parsed()) {
      if (rest_file.has_value() == rest_text.has_value())
        throw CLI::ValidationError("restore", "give exactly one of an input file or --text");
      const NgramModel model = load_model_file(rest_model);
      std::vector<Text> texts;
      if (rest_text) {
        texts.push_back(parse_text(*rest_text, model.vocabulary_size()));
      } else {
        ParseOptions opts;
        opts.vocabulary_size = model.vocabulary_size();
        texts = read_corpus_file(*rest_file, opts).texts;
      }
      std::unique_ptr<TransitionTable> table;
      if (model.config().order == 2) table = std::make_unique<TransitionTable>(model);
      if (!rest_json) out << "text\trank\tfilling\tlog2_prob\tprobability\n";
      for (std::size_t i = 0; i < texts.size(); ++i) {
        nlohmann::json r;
        try {
          r = restore_json(model, table.get(), texts[i], rest_top);
        } catch (const ApiError& e) {
          throw DataError("text " + std::to_string(i) + ": " + e.what());
        }
        if (rest_json) {
          out << r.dump() << '\n';
          continue;
        }
        std::size_t rank = 1;
        for (const auto& a : r["assignments"]) {
          std::string filling;
          for (const auto& s : a["signs"]) filling += (filling.empty() ? "" : " ") + std::to_string(s.get<std::uint32_t>());
          out << i << '\t' << rank++ << '\t' << filling << '\t' << num(a["log_prob"].get<double>()) << '\t'
              << num(a["probability"].get<double>()) << '\n';
        }
      }
    } else if (argmax->parsed()) {
      const NgramModel model = load_model_file(argmax_model);
      const auto best = most_probable_text(model, argmax_length);
      out << "length\tlog2_prob\ttext\n" << argmax_length << '\t' << num(best.log_prob) << '\t' << join(best.signs) << '\n';
    } else if (cv->parsed()) {
      const Corpus corpus = cv_in.read();
      cv_config.model = cv_model.config(corpus.vocabulary_size);
      const auto report = cross_validate(corpus, cv_config);
      write_sensitivity_summary(out, report);
      if (cv_trials_out) {
        auto f = open_output(*cv_trials_out);
        write_trial_sensitivities(f, report);
      }
    } else if (srv->parsed()) {
      RestorationService service(load_model_file(srv_model));
      err << "listening on http://" << srv_opts.host << ':' << srv_opts.port << '\n';
      if (!serve(service, srv_opts)) throw DataError("could not listen on " + srv_opts.host + ':' + std::to_string(srv_opts.port));
    }
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace signgram::cli

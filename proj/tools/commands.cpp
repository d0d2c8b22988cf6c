// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "slam/data/batching.hpp"
#include "slam/data/corpus.hpp"
#include "slam/data/interleave.hpp"
#include "slam/data/packing.hpp"
#include "slam/data/preference.hpp"
#include "slam/data/synth.hpp"
#include "slam/dpo/dpo.hpp"
#include "slam/error.hpp"
#include "slam/eval/adapters.hpp"
#include "slam/eval/generative.hpp"
#include "slam/eval/pairs.hpp"
#include "slam/eval/report.hpp"
#include "slam/model/accounting.hpp"
#include "slam/model/checkpoint.hpp"
#include "slam/model/surgery.hpp"
#include "slam/model/transformer.hpp"
#include "slam/recipe.hpp"
#include "slam/train/budget.hpp"
#include "slam/train/recipe.hpp"
#include "slam/train/trainer.hpp"

namespace slam::cli {

namespace {

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

void require(const fs::path& p, const char* what) {
  if (p.empty()) throw ConfigError(std::string("missing required input: ") + what);
}

RecipeFile read_recipe(const RunManifest& m) {
  return m.recipe.empty() ? RecipeFile{} : load_recipe(m.recipe);
}

const model::ModelConfig& model_section(const RecipeFile& r, const RunManifest& m) {
  if (!r.model) throw ConfigError("recipe '" + m.recipe.string() + "' has no [model] section");
  return *r.model;
}

// Budget overrides from the manifest; otherwise the recipe's hour limit, and
// finally the step count.
train::BudgetLimits limits_for(const RunManifest& m, std::optional<double> recipe_hours,
                               std::uint64_t total_steps) {
  train::BudgetLimits l;
  if (m.max_steps) l.steps = *m.max_steps;
  if (m.wall_hours) l.wall_seconds = *m.wall_hours * 3600.0;
  if (m.max_flops) l.flops = *m.max_flops;
  if (!l.steps && !l.wall_seconds && !l.flops) {
    if (recipe_hours) l.wall_seconds = *recipe_hours * 3600.0;
    else l.steps = total_steps;
  }
  return l;
}

void write_manifest(const RunManifest& m) {
  auto out = open_out(m.out / "manifest.txt");
  m.write(out, deterministic_mode());
}

void copy_bytes(const fs::path& from, const fs::path& to) {
  fs::copy_file(from, to, fs::copy_options::overwrite_existing);
}

std::vector<data::PreferenceRecord> filtered_preferences(const RunManifest& m,
                                                         const RecipeFile& r,
                                                         std::size_t& loaded) {
  const auto all = data::load_preferences(m.preferences);
  loaded = all.size();
  auto kept = data::filter_by_auto_bleu(all, r.auto_bleu_threshold);
  if (kept.empty()) {
    throw InputError("no preference records survive the auto-BLEU filter at " +
                     fmt(r.auto_bleu_threshold));
  }
  return kept;
}

dpo::DPOConfig dpo_config(const RecipeFile& r, std::uint64_t seed) {
  auto cfg = r.dpo;
  cfg.seed = seed;
  cfg.optim.seed = seed;
  return cfg;
}

train::TrainRecipe train_recipe(const RecipeFile& r, const RunManifest& m) {
  if (!r.has_train) throw ConfigError("recipe '" + m.recipe.string() + "' has no [train] section");
  auto t = r.train;
  t.seed = m.seed;
  return t;
}

std::vector<std::shared_ptr<const data::PackedDataset>> load_sources(const RunManifest& m,
                                                                     std::size_t context) {
  if (m.data.empty()) throw ConfigError("missing required input: --data");
  std::vector<std::shared_ptr<const data::PackedDataset>> sources;
  for (const auto& p : m.data) {
    auto ds = std::make_shared<const data::PackedDataset>(data::load_packed(p));
    if (ds->context_length != context) {
      throw ConfigError("dataset '" + p.string() + "' is packed at context " +
                        std::to_string(ds->context_length) + " but the recipe uses " +
                        std::to_string(context));
    }
    sources.push_back(std::move(ds));
  }
  return sources;
}

struct PretrainOutcome {
  train::TrainResult result;
  std::optional<double> validation_loss;
};

PretrainOutcome run_pretrain(model::Checkpoint init, const RunManifest& m,
                             const train::TrainRecipe& recipe, const train::BudgetLimits& limits,
                             const fs::path& out_dir) {
  const auto sources = load_sources(m, recipe.context_length);
  std::optional<data::PackedDataset> validation;
  if (!m.validation.empty()) validation = data::load_packed(m.validation);
  data::BalancedBatcher batches(sources, recipe.per_device_batch * recipe.context_length, m.seed);
  train::BudgetClock budget(limits);
  train::TrainHooks hooks;
  if (validation) hooks.validation = &*validation;
  if (recipe.checkpoint_interval > 0) {
    fs::create_directories(out_dir / "checkpoints");
    hooks.on_checkpoint = [&](const model::Checkpoint& c) {
      model::save_checkpoint(out_dir / "checkpoints" /
                                 ("step_" + std::to_string(c.training_step) + ".ckpt"),
                             c, model::DType::kFloat64);
    };
  }
  PretrainOutcome out{train::train(std::move(init), batches, recipe, budget, hooks), {}};
  if (!out.result.log.validation.empty()) out.validation_loss = out.result.log.validation.back().loss;
  return out;
}

std::vector<TokenSeq> load_prompts(const fs::path& path) {
  auto corpus = data::load_corpus(path);
  if (corpus.documents.empty()) throw InputError("prompt file '" + path.string() + "' is empty");
  return std::move(corpus.documents);
}

model::SamplingConfig sampling_for(const RecipeFile& r, std::uint64_t seed) {
  auto s = r.sampling;
  s.seed = seed;
  return s;
}

void write_samples(std::ostream& out, const model::SamplingConfig& s,
                   const std::vector<eval::GeneratedSample>& samples) {
  out << "# temperature = " << fmt(s.temperature) << '\n'
      << "# top_k = " << s.top_k << '\n'
      << "# max_new_tokens = " << s.max_new_tokens << '\n'
      << "# repetition_penalty = " << fmt(s.repetition_penalty) << '\n'
      << "# seed = " << s.seed << '\n';
  for (const auto& g : samples) {
    for (std::size_t i = 0; i < g.prompt.size(); ++i) out << (i ? " " : "") << g.prompt[i];
    out << " |";
    for (Token t : g.continuation) out << ' ' << t;
    out << '\n';
  }
}

}  // namespace

std::string to_string(Stage s) {
  switch (s) {
    case Stage::kPack: return "pack";
    case Stage::kSynth: return "synth";
    case Stage::kImport: return "import";
    case Stage::kInit: return "init";
    case Stage::kInterleave: return "interleave";
    case Stage::kPretrain: return "pretrain";
    case Stage::kDpo: return "dpo";
    case Stage::kEval: return "eval";
    case Stage::kGenerate: return "generate";
    case Stage::kSweep: return "dpo-sweep";
  }
  return "unknown";
}

bool deterministic_mode() {
  const char* v = std::getenv("SLAM_DETERMINISTIC");
  return v != nullptr && std::string(v) != "" && std::string(v) != "0";
}

void RunManifest::prepare() const {
  std::vector<fs::path> inputs{recipe, validation, checkpoint, reference, preferences, prompts,
                               alignments};
  inputs.insert(inputs.end(), data.begin(), data.end());
  inputs.insert(inputs.end(), pairs.begin(), pairs.end());
  for (const auto& p : inputs) {
    if (!p.empty() && !fs::exists(p)) throw ConfigError("input path '" + p.string() + "' does not exist");
  }
  if (out.empty()) throw ConfigError("missing required output directory (--out)");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) {
    throw ConfigError("cannot create output directory '" + out.string() + "'");
  }
}

void RunManifest::write(std::ostream& o, bool deterministic) const {
  o << "stage = " << to_string(stage) << '\n';
  if (!recipe.empty()) o << "recipe = " << recipe.string() << '\n';
  for (const auto& d : data) o << "data = " << d.string() << '\n';
  if (!validation.empty()) o << "validation = " << validation.string() << '\n';
  if (!checkpoint.empty()) o << "checkpoint = " << checkpoint.string() << '\n';
  if (!reference.empty()) o << "reference = " << reference.string() << '\n';
  if (!preferences.empty()) o << "preferences = " << preferences.string() << '\n';
  for (const auto& p : pairs) o << "pairs = " << p.string() << '\n';
  if (!prompts.empty()) o << "prompts = " << prompts.string() << '\n';
  if (!alignments.empty()) o << "alignments = " << alignments.string() << '\n';
  o << "out = " << out.string() << '\n' << "seed = " << seed << '\n';
  if (max_steps) o << "max_steps = " << *max_steps << '\n';
  if (wall_hours) o << "wall_hours = " << fmt(*wall_hours) << '\n';
  if (max_flops) o << "max_flops = " << fmt(*max_flops) << '\n';
  o << "deterministic = " << (deterministic ? "true" : "false") << '\n';
  if (!deterministic) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    o << "started = " << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ") << '\n';
  }
}

void cmd_pack(const RunManifest& m, const PackArgs& args) {
  require(m.data.empty() ? fs::path{} : m.data.front(), "--corpus");
  m.prepare();
  const auto corpus = data::load_corpus(m.data.front());
  const RecipeFile r = read_recipe(m);
  const model::ModelConfig cfg =
      r.model ? *r.model : model::unit_lm_config(std::max<std::size_t>(corpus.vocab_size, 1), 8, 1, 1, 8, 8);
  data::PackOptions po;
  po.context_length = args.context_length;
  po.sep_token = cfg.special_tokens.at(model::SpecialRole::kSeparator);
  po.pad_token = cfg.special_tokens.at(model::SpecialRole::kPad);
  po.model_vocab_size = cfg.vocab_size;
  po.insert_separator = args.separators;
  const auto packed = data::pack(corpus, po);
  data::save_packed(packed, m.out / "packed.bin");
  write_manifest(m);
}

void cmd_synth(const RunManifest& m, const SynthArgs& a) {
  m.prepare();
  data::GeneratorSpec spec;
  if (a.kind == "markov") spec.kind = data::GeneratorSpec::Kind::kMarkov;
  else if (a.kind == "cycle") spec.kind = data::GeneratorSpec::Kind::kCycle;
  else if (a.kind == "uniform") spec.kind = data::GeneratorSpec::Kind::kUniform;
  else throw ConfigError("unknown generator kind '" + a.kind + "'");
  spec.vocab_size = a.vocab;
  spec.order = a.order;
  spec.branching = a.branching;
  spec.seed = m.seed;
  const auto corpus = data::synth_toy_corpus(spec, a.documents, {a.min_length, a.max_length});
  data::save_corpus(corpus, m.out / "corpus.bin");
  if (a.preference_records > 0) {
    const data::MarkovSource source(spec);
    const auto prompts =
        data::synth_toy_corpus(spec, a.preference_records, {a.prompt_length, a.prompt_length});
    data::PreferenceRules rules;
    rules.positive = data::PreferenceRules::Positive::kSourceContinuation;
    rules.negative = data::PreferenceRules::Negative::kShuffledPositive;
    rules.prompt_length = a.prompt_length;
    rules.continuation_length = a.continuation_length;
    rules.source = &source;
    data::save_preferences(data::make_preference_pairs(prompts, rules, m.seed),
                           m.out / "preferences.txt");
  }
  write_manifest(m);
}

void cmd_import(const RunManifest& m, const ImportArgs& a) {
  require(m.data.empty() ? fs::path{} : m.data.front(), "--tokens");
  m.prepare();
  std::ifstream in(m.data.front());
  if (!in) throw ConfigError("cannot open '" + m.data.front().string() + "'");
  data::UnitCorpus corpus;
  corpus.vocab_size = a.vocab;
  if (a.modality == "speech") corpus.modality = data::Modality::kSpeech;
  else if (a.modality == "text") corpus.modality = data::Modality::kText;
  else if (a.modality == "interleaved") corpus.modality = data::Modality::kInterleaved;
  else throw ConfigError("unknown modality '" + a.modality + "'");
  corpus.metadata = "imported from " + m.data.front().filename().string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    TokenSeq doc;
    std::string word;
    while (ls >> word) {
      std::uint64_t v = 0;
      const auto res = std::from_chars(word.data(), word.data() + word.size(), v);
      if (res.ec != std::errc{} || res.ptr != word.data() + word.size() || v >= a.vocab) {
        throw FormatError(m.data.front().string() + ":" + std::to_string(line_no) +
                          ": bad token '" + word + "'");
      }
      doc.push_back(static_cast<Token>(v));
    }
    if (!doc.empty()) corpus.documents.push_back(std::move(doc));
  }
  corpus.validate();
  data::save_corpus(corpus, m.out / "corpus.bin");
  write_manifest(m);
}

void cmd_init(const RunManifest& m) {
  require(m.recipe, "--recipe");
  m.prepare();
  const RecipeFile r = read_recipe(m);
  const auto& cfg = model_section(r, m);
  model::Checkpoint ckpt;
  if (!m.checkpoint.empty()) {
    if (!r.twist_init) {
      throw ConfigError("a base checkpoint was given but the recipe does not set twist_init");
    }
    const auto base = model::load_checkpoint(m.checkpoint);
    ckpt = model::resize_vocabulary(base, cfg.vocab_size, cfg.special_tokens,
                                    model::EmbeddingInit::kNormalMatchedStd, m.seed);
    if (ckpt.config.model_dim != cfg.model_dim || ckpt.config.n_layers != cfg.n_layers ||
        ckpt.config.n_heads != cfg.n_heads || ckpt.config.ffn_dim != cfg.ffn_dim) {
      throw ConfigError("base checkpoint body does not match the recipe's [model] shape");
    }
  } else {
    ckpt = model::build_model(cfg, m.seed);
  }
  model::save_checkpoint(m.out / "init.ckpt", ckpt, model::DType::kFloat64);
  write_manifest(m);
}

void cmd_interleave(const RunManifest& m) {
  require(m.recipe, "--recipe");
  require(m.alignments, "--alignments");
  if (m.data.size() != 2) throw ConfigError("interleave needs --speech and --text corpora");
  m.prepare();
  const RecipeFile r = read_recipe(m);
  const auto& cfg = model_section(r, m);
  const auto speech = data::load_corpus(m.data[0]);
  auto text = data::load_corpus(m.data[1]);
  if (speech.vocab_size > r.n_units) {
    throw ConfigError("speech corpus vocabulary exceeds the recipe's n_units");
  }
  if (text.vocab_size > r.text_vocab) {
    throw ConfigError("text corpus vocabulary exceeds the recipe's text_vocab");
  }
  for (auto& doc : text.documents) {
    for (auto& t : doc) t = static_cast<Token>(t + r.n_units);
  }
  const auto pairs = data::make_aligned_pairs(speech, text, data::load_alignments(m.alignments));
  data::InterleaveConfig ic;
  ic.span_length_mean = r.span_length_mean;
  ic.speech_fraction = r.speech_fraction;
  ic.begin_speech = cfg.special_tokens.at(model::SpecialRole::kBeginSpeech);
  ic.begin_text = cfg.special_tokens.at(model::SpecialRole::kBeginText);
  ic.seed = m.seed;
  data::UnitCorpus out;
  out.vocab_size = cfg.vocab_size;
  out.modality = data::Modality::kInterleaved;
  std::size_t spans = 0, span_units = 0, speech_tokens = 0, text_tokens = 0, markers = 0,
              switches = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto doc = data::build_interleaved_detailed(pairs[i], ic, i);
    for (const auto& s : doc.speech_spans) {
      ++spans;
      span_units += s.size();
    }
    speech_tokens += doc.speech_tokens;
    text_tokens += doc.text_tokens;
    markers += doc.markers;
    switches += doc.modality_switches;
    out.documents.push_back(std::move(doc.tokens));
  }
  data::save_corpus(out, m.out / "interleaved.bin");
  auto stats = open_out(m.out / "interleave_stats.txt");
  stats << "documents = " << pairs.size() << '\n'
        << "speech_spans = " << spans << '\n'
        << "mean_span_units = " << fmt(spans ? double(span_units) / double(spans) : 0.0) << '\n'
        << "speech_share = "
        << fmt(speech_tokens + text_tokens
                   ? double(speech_tokens) / double(speech_tokens + text_tokens)
                   : 0.0)
        << '\n'
        << "markers = " << markers << '\n'
        << "modality_switches = " << switches << '\n';
  write_manifest(m);
}

void cmd_train(const RunManifest& m) {
  require(m.recipe, "--recipe");
  m.prepare();
  const RecipeFile r = read_recipe(m);
  const auto recipe = train_recipe(r, m);
  model::Checkpoint init = m.checkpoint.empty() ? model::build_model(model_section(r, m), m.seed)
                                                : model::load_checkpoint(m.checkpoint);
  const auto limits = limits_for(m, r.train_hours, recipe.total_steps);
  const auto outcome = run_pretrain(std::move(init), m, recipe, limits, m.out);
  const auto& result = outcome.result;
  model::save_checkpoint(m.out / "final.ckpt", result.checkpoint, model::DType::kFloat64);
  {
    auto csv = open_out(m.out / "train_log.csv");
    result.log.write_csv(csv);
  }
  if (!result.log.validation.empty()) {
    auto csv = open_out(m.out / "validation_log.csv");
    result.log.write_validation_csv(csv);
  }
  auto summary = open_out(m.out / "summary.txt");
  summary << "stop_reason = " << result.log.stop_reason << '\n'
          << "steps = " << result.log.steps.size() << '\n'
          << "training_step = " << result.checkpoint.training_step << '\n';
  if (!result.log.steps.empty()) {
    const auto& last = result.log.steps.back();
    summary << "tokens_seen = " << last.tokens_seen << '\n'
            << "cumulative_flops = " << fmt(last.cumulative_flops) << '\n'
            << "final_train_loss = " << fmt(last.train_loss) << '\n';
  }
  if (outcome.validation_loss) summary << "validation_loss = " << fmt(*outcome.validation_loss) << '\n';
  write_manifest(m);
}

void cmd_dpo(const RunManifest& m) {
  require(m.checkpoint, "--base");
  require(m.preferences, "--preferences");
  m.prepare();
  const RecipeFile r = read_recipe(m);
  const auto cfg = dpo_config(r, m.seed);
  std::size_t loaded = 0;
  const auto records = filtered_preferences(m, r, loaded);
  const auto policy = model::load_checkpoint(m.checkpoint);
  std::optional<model::Checkpoint> reference;
  if (!m.reference.empty()) reference = model::load_checkpoint(m.reference);
  const double before = dpo::preference_accuracy(policy, records);
  train::BudgetClock budget(limits_for(m, r.dpo_hours, cfg.optim.total_steps));
  auto result = dpo::dpo_train(policy, records, cfg, budget, reference ? &*reference : nullptr);
  if (result.log.steps.empty()) {
    copy_bytes(m.checkpoint, m.out / "final.ckpt");
  } else {
    result.checkpoint.provenance += "; dpo steps=" + std::to_string(result.log.steps.size());
    model::save_checkpoint(m.out / "final.ckpt", result.checkpoint, model::DType::kFloat64);
  }
  {
    auto csv = open_out(m.out / "dpo_log.csv");
    result.log.write_csv(csv);
  }
  const double after = dpo::preference_accuracy(result.checkpoint, records);
  auto rep = open_out(m.out / "dpo_report.txt");
  rep << "beta = " << fmt(cfg.beta) << '\n'
      << "learning_rate = " << fmt(cfg.optim.peak_lr) << '\n'
      << "scheduler = " << train::to_string(cfg.optim.scheduler) << '\n'
      << "auto_bleu_threshold = " << fmt(r.auto_bleu_threshold) << '\n'
      << "records_loaded = " << loaded << '\n'
      << "records_used = " << records.size() << '\n'
      << "steps = " << result.log.steps.size() << '\n'
      << "stop_reason = " << result.log.stop_reason << '\n'
      << "preference_accuracy_before = " << fmt(before) << '\n'
      << "preference_accuracy_after = " << fmt(after) << '\n';
  write_manifest(m);
}

void cmd_eval(const RunManifest& m) {
  require(m.checkpoint, "--checkpoint");
  if (m.pairs.empty() && m.prompts.empty()) {
    throw ConfigError("eval needs --pairs and/or --prompts");
  }
  m.prepare();
  const RecipeFile r = read_recipe(m);
  const auto ckpt = model::load_checkpoint(m.checkpoint);
  const std::size_t threads = deterministic_mode() ? 1 : std::max<std::size_t>(1, m.threads);

  eval::MetricReport report;
  if (!m.prompts.empty()) {
    const auto transcriber = eval::make_transcriber(r.eval.transcriber);
    const auto scorer = eval::make_scorer(r.eval.scorer);
    const auto sampling = sampling_for(r, m.seed);
    auto gen = eval::generative_eval(ckpt, load_prompts(m.prompts), sampling, *transcriber,
                                     *scorer, threads);
    report = gen.report;
    auto samples = open_out(m.out / "samples.txt");
    write_samples(samples, sampling, gen.samples);
  }
  if (!m.pairs.empty()) {
    std::vector<eval::LikelihoodPair> pairs;
    for (const auto& p : m.pairs) {
      auto part = eval::load_pairs(p);
      for (auto& pair : part) {
        if (pair.tag.empty()) pair.tag = p.stem().string();
      }
      pairs.insert(pairs.end(), part.begin(), part.end());
    }
    const auto result =
        eval::pairwise_accuracy(ckpt, pairs, r.eval.normalization, r.eval.scoring, threads);
    for (const auto& [tag, count] : result.per_tag) {
      report.benchmarks[tag] = {count.accuracy(), count.pairs};
    }
    report.config["normalization"] = eval::to_string(r.eval.normalization);
    report.config["scoring"] = eval::to_string(r.eval.scoring);
  }
  report.config["seed"] = std::to_string(m.seed);
  report.validate();
  {
    auto keyed = open_out(m.out / "report.txt");
    report.write_keyed(keyed);
  }
  auto csv = open_out(m.out / "report.csv");
  report.write_csv_header(csv);
  report.write_csv_row(csv);
  write_manifest(m);
}

void cmd_generate(const RunManifest& m) {
  require(m.checkpoint, "--checkpoint");
  require(m.prompts, "--prompts");
  m.prepare();
  const RecipeFile r = read_recipe(m);
  const auto ckpt = model::load_checkpoint(m.checkpoint);
  const auto sampling = sampling_for(r, m.seed);
  std::vector<eval::GeneratedSample> samples;
  const auto prompts = load_prompts(m.prompts);
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    auto s = sampling;
    s.seed += i;
    eval::GeneratedSample g;
    g.prompt = prompts[i];
    g.continuation = model::generate(ckpt, prompts[i], s);
    samples.push_back(std::move(g));
  }
  auto out = open_out(m.out / "samples.txt");
  write_samples(out, sampling, samples);
  write_manifest(m);
}

void cmd_dpo_sweep(const RunManifest& m, const std::vector<double>& fractions,
                   std::uint64_t budget_steps) {
  require(m.recipe, "--recipe");
  require(m.preferences, "--preferences");
  if (fractions.empty()) throw ConfigError("dpo-sweep needs at least one fraction");
  if (budget_steps == 0) throw ConfigError("dpo-sweep needs a positive --budget-steps");
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("sweep fraction " + fmt(f) + " outside [0, 1]");
  }
  m.prepare();
  const RecipeFile r = read_recipe(m);
  const auto& cfg = model_section(r, m);
  const auto base_recipe = train_recipe(r, m);
  std::size_t loaded = 0;
  const auto records = filtered_preferences(m, r, loaded);
  std::vector<eval::LikelihoodPair> pairs;
  for (const auto& p : m.pairs) {
    auto part = eval::load_pairs(p);
    pairs.insert(pairs.end(), part.begin(), part.end());
  }

  auto csv = open_out(m.out / "sweep.csv");
  csv << "fraction,pretrain_steps,dpo_steps,pretrain_loss,validation_loss,preference_accuracy";
  if (!pairs.empty()) csv << ",pair_accuracy";
  csv << '\n';
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double f = fractions[i];
    const auto [pre, post] = train::split_budget(static_cast<double>(budget_steps), f);
    const auto pre_steps = static_cast<std::uint64_t>(std::llround(pre));
    const auto dpo_steps = static_cast<std::uint64_t>(std::llround(post));
    const fs::path run_dir = m.out / ("run_" + std::to_string(i));
    fs::create_directories(run_dir);

    model::Checkpoint ckpt = model::build_model(cfg, m.seed);
    std::string pretrain_loss, val_loss;
    if (pre_steps > 0) {
      auto recipe = base_recipe;
      recipe.total_steps = pre_steps;
      train::BudgetLimits limits;
      limits.steps = pre_steps;
      auto outcome = run_pretrain(std::move(ckpt), m, recipe, limits, run_dir);
      ckpt = std::move(outcome.result.checkpoint);
      auto log = open_out(run_dir / "train_log.csv");
      outcome.result.log.write_csv(log);
      if (!outcome.result.log.steps.empty()) {
        pretrain_loss = fmt(outcome.result.log.steps.back().train_loss);
      }
      if (outcome.validation_loss) val_loss = fmt(*outcome.validation_loss);
    }
    if (dpo_steps > 0) {
      auto dcfg = dpo_config(r, m.seed);
      dcfg.epochs.reset();
      dcfg.optim.total_steps = dpo_steps;
      train::BudgetClock budget(train::BudgetLimits{std::nullopt, dpo_steps, std::nullopt});
      auto result = dpo::dpo_train(std::move(ckpt), records, dcfg, budget);
      ckpt = std::move(result.checkpoint);
      auto log = open_out(run_dir / "dpo_log.csv");
      result.log.write_csv(log);
    }
    model::save_checkpoint(run_dir / "final.ckpt", ckpt, model::DType::kFloat64);
    csv << fmt(f) << ',' << pre_steps << ',' << dpo_steps << ',' << pretrain_loss << ','
        << val_loss << ',' << fmt(dpo::preference_accuracy(ckpt, records));
    if (!pairs.empty()) csv << ',' << fmt(eval::pairwise_accuracy(ckpt, pairs).accuracy());
    csv << '\n';
  }
  write_manifest(m);
}

void cmd_flops(const RunManifest& m, const FlopsArgs& a, std::ostream& out) {
  std::uint64_t n = 0;
  if (a.params) {
    n = *a.params;
  } else {
    require(m.recipe, "--params or --recipe");
    if (!fs::exists(m.recipe)) throw ConfigError("input path '" + m.recipe.string() + "' does not exist");
    n = model::param_count(model_section(load_recipe(m.recipe), m));
  }
  if (!(a.tokens >= 0.0) || a.tokens != std::floor(a.tokens) || a.tokens > 1.8e19) {
    throw ConfigError("--tokens must be a non-negative whole number");
  }
  const auto d = static_cast<std::uint64_t>(a.tokens);
  out << "params = " << n << '\n'
      << "tokens = " << d << '\n'
      << "flops = " << fmt(model::flops_estimate(n, d)) << '\n';
}

}  // namespace slam::cli

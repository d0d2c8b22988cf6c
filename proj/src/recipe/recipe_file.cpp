// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/recipe.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include "../common/text.hpp"
#include "slam/error.hpp"

namespace slam {

namespace {

struct ModelKeys {
  std::size_t n_units = 0, text_vocab = 0, model_dim = 0, n_layers = 0, n_heads = 0, ffn_dim = 0,
              context_length = 0;
  double rope_theta = 10000.0, dropout = 0.0;
  bool tie = false;
};

using Setter = std::function<void(std::string_view value)>;

class Parser {
 public:
  Parser(std::string source, std::size_t line) : source_(std::move(source)), line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(source_ + ":" + std::to_string(line_) + ": " + msg);
  }

  template <typename T>
  Setter number(T& out) const {
    return [this, &out](std::string_view v) {
      if (!text::parse_number(v, out)) fail("expected a number, got '" + std::string(v) + "'");
    };
  }
  Setter boolean(bool& out) const {
    return [this, &out](std::string_view v) {
      if (!text::parse_bool(v, out)) fail("expected true or false, got '" + std::string(v) + "'");
    };
  }
  Setter string(std::string& out) const {
    return [&out](std::string_view v) { out = std::string(v); };
  }

 private:
  std::string source_;
  std::size_t line_;
};

void add_optimizer_keys(std::map<std::string, Setter>& keys, const Parser& p,
                        train::TrainRecipe& r) {
  keys["learning_rate"] = p.number(r.peak_lr);
  keys["warmup_ratio"] = p.number(r.warmup_ratio);
  keys["scheduler"] = [&r, &p](std::string_view v) {
    try {
      r.scheduler = train::scheduler_from_string(std::string(v));
    } catch (const ConfigError& e) {
      p.fail(e.what());
    }
  };
  keys["min_lr"] = p.number(r.min_lr);
  keys["weight_decay"] = p.number(r.weight_decay);
  keys["adam_beta1"] = p.number(r.adam_beta1);
  keys["adam_beta2"] = p.number(r.adam_beta2);
  keys["adam_eps"] = p.number(r.adam_eps);
  keys["per_device_batch_size"] = p.number(r.per_device_batch);
  keys["gradient_accumulation"] = p.number(r.grad_accum_steps);
  keys["max_grad_norm"] = p.number(r.max_grad_norm);
  keys["total_steps"] = p.number(r.total_steps);
  keys["context_length"] = p.number(r.context_length);
  keys["dtype"] = p.string(r.dtype);
}

}  // namespace

RecipeFile parse_recipe(std::istream& in, const std::string& source_name) {
  RecipeFile out;
  ModelKeys mk;
  bool has_model = false;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> end_token;
  double dpo_epochs = 0.0, train_hours = 0.0, dpo_hours = 0.0;
  bool set_epochs = false, set_train_hours = false, set_dpo_hours = false;

  while (std::getline(in, line)) {
    ++line_no;
    const Parser p(source_name, line_no);
    auto view = text::trim(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = text::trim(view.substr(0, hash));
    }
    if (view.empty()) continue;
    if (view.front() == '[') {
      if (view.back() != ']') p.fail("malformed section header");
      section = std::string(text::trim(view.substr(1, view.size() - 2)));
      if (section == "model") has_model = true;
      else if (section == "train") out.has_train = true;
      else if (section == "dpo") out.has_dpo = true;
      else if (section == "sampling") out.has_sampling = true;
      else if (section == "eval") out.has_eval = true;
      else if (section == "interleave") out.has_interleave = true;
      else p.fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) p.fail("expected 'key = value'");
    const std::string key(text::trim(view.substr(0, eq)));
    const auto value = text::trim(view.substr(eq + 1));
    if (section.empty()) p.fail("key '" + key + "' outside of any section");
    if (value.empty()) p.fail("empty value for '" + key + "'");

    std::map<std::string, Setter> keys;
    if (section == "model") {
      keys["n_units"] = p.number(mk.n_units);
      keys["text_vocab"] = p.number(mk.text_vocab);
      keys["model_dim"] = p.number(mk.model_dim);
      keys["n_layers"] = p.number(mk.n_layers);
      keys["n_heads"] = p.number(mk.n_heads);
      keys["ffn_dim"] = p.number(mk.ffn_dim);
      keys["context_length"] = p.number(mk.context_length);
      keys["rope_theta"] = p.number(mk.rope_theta);
      keys["dropout"] = p.number(mk.dropout);
      keys["tie_embeddings"] = p.boolean(mk.tie);
      keys["base_model"] = p.string(out.base_model);
      keys["twist_init"] = p.boolean(out.twist_init);
    } else if (section == "train") {
      add_optimizer_keys(keys, p, out.train);
      keys["train_hours"] = [&](std::string_view v) {
        p.number(train_hours)(v);
        set_train_hours = true;
      };
      keys["validation_interval"] = p.number(out.train.validation_interval);
      keys["checkpoint_interval"] = p.number(out.train.checkpoint_interval);
    } else if (section == "dpo") {
      add_optimizer_keys(keys, p, out.dpo.optim);
      keys["beta"] = p.number(out.dpo.beta);
      keys["epochs"] = [&](std::string_view v) {
        p.number(dpo_epochs)(v);
        set_epochs = true;
      };
      keys["auto_bleu_threshold"] = p.number(out.auto_bleu_threshold);
      keys["train_hours"] = [&](std::string_view v) {
        p.number(dpo_hours)(v);
        set_dpo_hours = true;
      };
    } else if (section == "eval") {
      keys["normalization"] = [&](std::string_view v) {
        try {
          out.eval.normalization = eval::normalization_from_string(std::string(v));
        } catch (const ConfigError& e) {
          p.fail(e.what());
        }
      };
      keys["scoring"] = [&](std::string_view v) {
        try {
          out.eval.scoring = eval::scoring_mode_from_string(std::string(v));
        } catch (const ConfigError& e) {
          p.fail(e.what());
        }
      };
      keys["transcriber"] = p.string(out.eval.transcriber);
      keys["scorer"] = p.string(out.eval.scorer);
    } else if (section == "interleave") {
      keys["span_length_mean"] = p.number(out.span_length_mean);
      keys["speech_fraction"] = p.number(out.speech_fraction);
    } else {
      keys["temperature"] = p.number(out.sampling.temperature);
      keys["top_k"] = p.number(out.sampling.top_k);
      keys["max_new_tokens"] = p.number(out.sampling.max_new_tokens);
      keys["repetition_penalty"] = p.number(out.sampling.repetition_penalty);
      keys["end_token"] = [&](std::string_view v) {
        std::size_t t = 0;
        p.number(t)(v);
        end_token = t;
      };
    }
    const auto it = keys.find(key);
    if (it == keys.end()) p.fail("unknown key '" + key + "' in [" + section + "]");
    it->second(value);
  }

  if (has_model) {
    auto cfg = model::unit_lm_config(mk.n_units + mk.text_vocab, mk.model_dim, mk.n_layers,
                                     mk.n_heads, mk.ffn_dim, mk.context_length);
    cfg.rope_theta = mk.rope_theta;
    cfg.dropout_rate = mk.dropout;
    cfg.tie_embeddings = mk.tie;
    if (mk.n_units == 0) throw ConfigError(source_name + ": [model] n_units must be positive");
    cfg.validate();
    out.model = cfg;
    out.n_units = mk.n_units;
    out.text_vocab = mk.text_vocab;
  }
  if (set_epochs) out.dpo.epochs = dpo_epochs;
  if (set_train_hours) out.train_hours = train_hours;
  if (set_dpo_hours) out.dpo_hours = dpo_hours;
  if (end_token) out.sampling.end_token = static_cast<Token>(*end_token);
  if (out.has_train) out.train.validate();
  if (out.has_dpo) out.dpo.validate();
  if (out.has_sampling) out.sampling.validate();
  if (out.has_interleave) {
    if (!(out.span_length_mean > 0.0)) {
      throw ConfigError(source_name + ": [interleave] span_length_mean must be positive");
    }
    if (!(out.speech_fraction >= 0.0 && out.speech_fraction <= 1.0)) {
      throw ConfigError(source_name + ": [interleave] speech_fraction must lie in [0, 1]");
    }
  }
  return out;
}

RecipeFile load_recipe(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open recipe '" + path.string() + "'");
  return parse_recipe(in, path.string());
}

namespace {

void write_optimizer(std::ostream& out, const train::TrainRecipe& r) {
  out << "learning_rate = " << text::format_double(r.peak_lr) << '\n'
      << "warmup_ratio = " << text::format_double(r.warmup_ratio) << '\n'
      << "scheduler = " << train::to_string(r.scheduler) << '\n'
      << "min_lr = " << text::format_double(r.min_lr) << '\n'
      << "weight_decay = " << text::format_double(r.weight_decay) << '\n'
      << "adam_beta1 = " << text::format_double(r.adam_beta1) << '\n'
      << "adam_beta2 = " << text::format_double(r.adam_beta2) << '\n'
      << "adam_eps = " << text::format_double(r.adam_eps) << '\n'
      << "per_device_batch_size = " << r.per_device_batch << '\n'
      << "gradient_accumulation = " << r.grad_accum_steps << '\n'
      << "max_grad_norm = " << text::format_double(r.max_grad_norm) << '\n'
      << "total_steps = " << r.total_steps << '\n'
      << "context_length = " << r.context_length << '\n'
      << "dtype = " << r.dtype << '\n';
}

}  // namespace

void write_recipe(std::ostream& out, const RecipeFile& r) {
  if (r.model) {
    const auto& m = *r.model;
    out << "[model]\n"
        << "n_units = " << r.n_units << '\n';
    if (r.text_vocab > 0) out << "text_vocab = " << r.text_vocab << '\n';
    out << "model_dim = " << m.model_dim << '\n'
        << "n_layers = " << m.n_layers << '\n'
        << "n_heads = " << m.n_heads << '\n'
        << "ffn_dim = " << m.ffn_dim << '\n'
        << "context_length = " << m.context_length << '\n'
        << "rope_theta = " << text::format_double(m.rope_theta) << '\n'
        << "dropout = " << text::format_double(m.dropout_rate) << '\n'
        << "tie_embeddings = " << (m.tie_embeddings ? "true" : "false") << '\n';
    if (!r.base_model.empty()) out << "base_model = " << r.base_model << '\n';
    out << "twist_init = " << (r.twist_init ? "true" : "false") << "\n\n";
  }
  if (r.has_train) {
    out << "[train]\n";
    write_optimizer(out, r.train);
    if (r.train_hours) out << "train_hours = " << text::format_double(*r.train_hours) << '\n';
    out << "validation_interval = " << r.train.validation_interval << '\n'
        << "checkpoint_interval = " << r.train.checkpoint_interval << "\n\n";
  }
  if (r.has_dpo) {
    out << "[dpo]\n";
    write_optimizer(out, r.dpo.optim);
    out << "beta = " << text::format_double(r.dpo.beta) << '\n';
    if (r.dpo.epochs) out << "epochs = " << text::format_double(*r.dpo.epochs) << '\n';
    out << "auto_bleu_threshold = " << text::format_double(r.auto_bleu_threshold) << '\n';
    if (r.dpo_hours) out << "train_hours = " << text::format_double(*r.dpo_hours) << '\n';
    out << '\n';
  }
  if (r.has_sampling) {
    const auto& s = r.sampling;
    out << "[sampling]\n"
        << "temperature = " << text::format_double(s.temperature) << '\n'
        << "top_k = " << s.top_k << '\n'
        << "max_new_tokens = " << s.max_new_tokens << '\n'
        << "repetition_penalty = " << text::format_double(s.repetition_penalty) << '\n';
    if (s.end_token) out << "end_token = " << *s.end_token << '\n';
    out << '\n';
  }
  if (r.has_eval) {
    out << "[eval]\n"
        << "normalization = " << eval::to_string(r.eval.normalization) << '\n'
        << "scoring = " << eval::to_string(r.eval.scoring) << '\n'
        << "transcriber = " << r.eval.transcriber << '\n'
        << "scorer = " << r.eval.scorer << "\n\n";
  }
  if (r.has_interleave) {
    out << "[interleave]\n"
        << "span_length_mean = " << text::format_double(r.span_length_mean) << '\n'
        << "speech_fraction = " << text::format_double(r.speech_fraction) << '\n';
  }
}

}  // namespace slam

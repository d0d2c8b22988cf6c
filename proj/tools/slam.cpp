// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "slam/error.hpp"

namespace {

using slam::cli::RunManifest;
using slam::cli::Stage;

void add_seed(CLI::App* cmd, RunManifest& m) {
  cmd->add_option("--seed", m.seed, "Seed for every random stream of the run");
}

void add_out(CLI::App* cmd, RunManifest& m) {
  cmd->add_option("--out", m.out, "Output directory")->required();
}

void add_budget(CLI::App* cmd, RunManifest& m) {
  cmd->add_option("--max-steps", m.max_steps, "Optimizer step limit");
  cmd->add_option("--wall-hours", m.wall_hours, "Wall-clock limit in hours");
  cmd->add_option("--max-flops", m.max_flops, "Compute limit in 6*N*D FLOPs");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const slam::ConfigError*>(&e)) return 2;
  if (dynamic_cast<const slam::FormatError*>(&e)) return 3;
  if (dynamic_cast<const slam::InputError*>(&e)) return 3;
  if (dynamic_cast<const slam::NumericError*>(&e)) return 4;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slam: speech language model recipes at desk scale"};
  app.require_subcommand(1);
  RunManifest m;

  slam::cli::SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic unit corpus (and preferences)");
  c_synth->add_option("--kind", synth.kind, "markov, cycle or uniform");
  c_synth->add_option("--vocab", synth.vocab);
  c_synth->add_option("--order", synth.order);
  c_synth->add_option("--branching", synth.branching);
  c_synth->add_option("--documents", synth.documents);
  c_synth->add_option("--min-length", synth.min_length);
  c_synth->add_option("--max-length", synth.max_length);
  c_synth->add_option("--preferences", synth.preference_records,
                      "Also write this many source-vs-shuffled preference records");
  c_synth->add_option("--prompt-length", synth.prompt_length);
  c_synth->add_option("--continuation-length", synth.continuation_length);
  add_seed(c_synth, m);
  add_out(c_synth, m);

  slam::cli::ImportArgs import;
  std::string token_file;
  auto* c_import = app.add_subcommand("import", "Convert text token lines into a corpus");
  c_import->add_option("--tokens", token_file, "One document per line")->required();
  c_import->add_option("--vocab", import.vocab, "Vocabulary size")->required();
  c_import->add_option("--modality", import.modality, "speech, text or interleaved");
  add_out(c_import, m);

  slam::cli::PackArgs pack;
  std::string corpus;
  auto* c_pack = app.add_subcommand("pack", "Pack a corpus into fixed-length chunks");
  c_pack->add_option("--corpus", corpus, "Corpus file")->required();
  c_pack->add_option("--context-length", pack.context_length, "Chunk length")->required();
  c_pack->add_option("--recipe", m.recipe, "Recipe whose [model] fixes the special ids");
  c_pack->add_flag("!--no-separator", pack.separators, "Do not append document separators");
  add_out(c_pack, m);

  auto* c_init = app.add_subcommand("init", "Build an initial checkpoint from a recipe");
  c_init->add_option("--recipe", m.recipe)->required();
  c_init->add_option("--base", m.checkpoint, "Text checkpoint for vocabulary replacement");
  add_seed(c_init, m);
  add_out(c_init, m);

  std::string speech, text_corpus;
  auto* c_inter = app.add_subcommand("interleave", "Build interleaved speech-text documents");
  c_inter->add_option("--recipe", m.recipe)->required();
  c_inter->add_option("--speech", speech)->required();
  c_inter->add_option("--text", text_corpus)->required();
  c_inter->add_option("--alignments", m.alignments)->required();
  add_seed(c_inter, m);
  add_out(c_inter, m);

  auto* c_train = app.add_subcommand("train", "Pretrain under a budget");
  c_train->add_option("--recipe", m.recipe)->required();
  c_train->add_option("--data", m.data, "Packed dataset, one per source")->required();
  c_train->add_option("--validation", m.validation, "Packed validation dataset");
  c_train->add_option("--init", m.checkpoint, "Start from this checkpoint");
  add_seed(c_train, m);
  add_budget(c_train, m);
  add_out(c_train, m);

  auto* c_dpo = app.add_subcommand("dpo", "Preference-optimize a checkpoint");
  c_dpo->add_option("--recipe", m.recipe);
  c_dpo->add_option("--base", m.checkpoint)->required();
  c_dpo->add_option("--reference", m.reference, "Frozen reference (default: the base)");
  c_dpo->add_option("--preferences", m.preferences)->required();
  add_seed(c_dpo, m);
  add_budget(c_dpo, m);
  add_out(c_dpo, m);

  auto* c_eval = app.add_subcommand("eval", "Pairwise and generative evaluation");
  c_eval->add_option("--recipe", m.recipe);
  c_eval->add_option("--checkpoint", m.checkpoint)->required();
  c_eval->add_option("--pairs", m.pairs, "Pair file(s)");
  c_eval->add_option("--prompts", m.prompts, "Prompt corpus for generative metrics");
  c_eval->add_option("--threads", m.threads);
  add_seed(c_eval, m);
  add_out(c_eval, m);

  auto* c_gen = app.add_subcommand("generate", "Sample continuations");
  c_gen->add_option("--recipe", m.recipe);
  c_gen->add_option("--checkpoint", m.checkpoint)->required();
  c_gen->add_option("--prompts", m.prompts)->required();
  add_seed(c_gen, m);
  add_out(c_gen, m);

  std::vector<double> fractions;
  std::uint64_t budget_steps = 0;
  auto* c_sweep = app.add_subcommand("dpo-sweep", "Split a step budget between pretraining and DPO");
  c_sweep->add_option("--recipe", m.recipe)->required();
  c_sweep->add_option("--data", m.data)->required();
  c_sweep->add_option("--validation", m.validation);
  c_sweep->add_option("--preferences", m.preferences)->required();
  c_sweep->add_option("--pairs", m.pairs);
  c_sweep->add_option("--fractions", fractions, "DPO share of the budget")
      ->required()
      ->delimiter(',');
  c_sweep->add_option("--budget-steps", budget_steps, "Total optimizer steps per run")->required();
  add_seed(c_sweep, m);
  add_out(c_sweep, m);

  slam::cli::FlopsArgs flops;
  auto* c_flops = app.add_subcommand("flops", "6*N*D compute estimate");
  c_flops->add_option("--params", flops.params);
  c_flops->add_option("--recipe", m.recipe, "Count parameters of the recipe's [model]");
  c_flops->add_option("--tokens", flops.tokens)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_synth->parsed()) {
      m.stage = Stage::kSynth;
      slam::cli::cmd_synth(m, synth);
    } else if (c_import->parsed()) {
      m.stage = Stage::kImport;
      m.data = {token_file};
      slam::cli::cmd_import(m, import);
    } else if (c_pack->parsed()) {
      m.stage = Stage::kPack;
      m.data = {corpus};
      slam::cli::cmd_pack(m, pack);
    } else if (c_init->parsed()) {
      m.stage = Stage::kInit;
      slam::cli::cmd_init(m);
    } else if (c_inter->parsed()) {
      m.stage = Stage::kInterleave;
      m.data = {speech, text_corpus};
      slam::cli::cmd_interleave(m);
    } else if (c_train->parsed()) {
      m.stage = Stage::kPretrain;
      slam::cli::cmd_train(m);
    } else if (c_dpo->parsed()) {
      m.stage = Stage::kDpo;
      slam::cli::cmd_dpo(m);
    } else if (c_eval->parsed()) {
      m.stage = Stage::kEval;
      slam::cli::cmd_eval(m);
    } else if (c_gen->parsed()) {
      m.stage = Stage::kGenerate;
      slam::cli::cmd_generate(m);
    } else if (c_sweep->parsed()) {
      m.stage = Stage::kSweep;
      slam::cli::cmd_dpo_sweep(m, fractions, budget_steps);
    } else if (c_flops->parsed()) {
      slam::cli::cmd_flops(m, flops, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "slam: error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 0;
}

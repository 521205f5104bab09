// Copyright 2026 The vqtts-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vqtts/config.h"
#include "vqtts/pipeline.h"

namespace {

// Machine-readable failure record on stderr; commands print nothing else
// there.
int fail(const std::string& message) {
  nlohmann::json j;
  j["error"] = message;
  std::cerr << j.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prosody-labelled VQ token pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  uint64_t seed = 0;
  int beam = 0;
  std::string mode;

  const char* names[] = {"extract",  "train-vq", "label-prosody",
                         "train-lm", "decode",   "evaluate",
                         "export-pitch"};
  const char* descriptions[] = {
      "Extract prosody/mel features into the store",
      "Train the grouped acoustic codebook and tokenize the store",
      "Train the phoneme-level prosody codebook and label the store",
      "Train the sequence models for both decode streams",
      "Decode the configured split (greedy or beam search)",
      "Score a decode run against the stored references",
      "Export per-hypothesis pitch tracks for one utterance"};
  for (int i = 0; i < 7; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descriptions[i]);
    sub->add_option("--config", config_path, "Configuration file")
        ->required();
    sub->add_option("--seed", seed, "Override the configured training seed");
    sub->add_option("--beam", beam, "Override the configured beam width");
    sub->add_option("--mode", mode, "Decoding mode")
        ->check(CLI::IsMember({"greedy", "beam"}));
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();
  std::string cmd = sub->get_name();

  vqtts::pipeline::Options opt;
  if (sub->count("--seed")) opt.seed = seed;
  if (sub->count("--beam")) opt.beam = beam;
  if (sub->count("--mode")) opt.mode = mode;

  try {
    vqtts::config::Config cfg = vqtts::config::Config::parse_file(config_path);
    if (cmd == "extract") {
      auto failures = vqtts::pipeline::cmd_extract(cfg);
      if (!failures.empty()) {
        nlohmann::json j;
        j["error"] = "extract completed with failures";
        nlohmann::json list = nlohmann::json::array();
        for (const auto& f : failures)
          list.push_back({{"id", f.id}, {"error", f.message}});
        j["failures"] = std::move(list);
        std::cerr << j.dump() << "\n";
        return 1;
      }
    } else if (cmd == "train-vq") {
      vqtts::pipeline::cmd_train_vq(cfg, opt);
    } else if (cmd == "label-prosody") {
      vqtts::pipeline::cmd_label_prosody(cfg, opt);
    } else if (cmd == "train-lm") {
      vqtts::pipeline::cmd_train_lm(cfg);
    } else if (cmd == "decode") {
      vqtts::pipeline::cmd_decode(cfg, opt);
    } else if (cmd == "evaluate") {
      vqtts::eval::EvalReport r = vqtts::pipeline::cmd_evaluate(cfg, opt);
      std::printf("token_accuracy %.2f%% (%lld tokens)\n",
                  100.0 * r.token_accuracy,
                  static_cast<long long>(r.n_tokens));
      if (r.n_voiced_frames > 0)
        std::printf("gpe %.2f%% (%lld jointly voiced frames)\n",
                    100.0 * r.gpe, static_cast<long long>(r.n_voiced_frames));
    } else if (cmd == "export-pitch") {
      vqtts::pipeline::cmd_export_pitch(cfg, opt);
    }
  } catch (const std::exception& ex) {
    return fail(ex.what());
  }
  return 0;
}

// Copyright 2026 The lightconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lightconv/checkpoint.h"
#include "lightconv/error.h"
#include "lightconv/experiments.h"
#include "lightconv/interpret.h"
#include "lightconv/metrics.h"
#include "lightconv/model.h"
#include "lightconv/pipeline.h"
#include "lightconv/signal_io.h"
#include "lightconv/synthetic.h"
#include "lightconv/train.h"

namespace lightconv::cli {
namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config;
  std::uint64_t seed = 0;
  std::string out = ".";
};

struct Command {
  CLI::App* app = nullptr;
  CommonOptions common;
  std::function<void(std::ostream&)> run;
  std::function<void()> check;  // post-parse validation
};

void AddCommon(Command& cmd, const std::string& default_out) {
  cmd.common.out = default_out;
  cmd.app->add_option("--config", cmd.common.config,
                      "Flat key = value file; keys are long option names")
      ->check(CLI::ExistingFile);
  cmd.app->add_option("--seed", cmd.common.seed, "Seed for every random stream")
      ->capture_default_str();
  cmd.app->add_option("--out", cmd.common.out, "Output directory")
      ->capture_default_str();
}

void AddModelOptions(CLI::App* app, ModelConfig& m) {
  app->add_option("--kernel", m.kernel, "Convolution kernel size (odd)")
      ->capture_default_str();
  app->add_option("--out-channels", m.out_channels, "Convolution output channels")
      ->capture_default_str();
  app->add_option("--dropout", m.dropout_rate, "Dropout rate")->capture_default_str();
}

void AddTrainOptions(CLI::App* app, TrainConfig& t) {
  app->add_option("--epochs", t.epochs, "Training passes")->capture_default_str();
  app->add_option("--batch-size", t.batch_size, "Mini-batch size")
      ->capture_default_str();
  app->add_option("--lr", t.learning_rate, "Adam learning rate")
      ->capture_default_str();
  app->add_option("--beta1", t.adam_beta1, "Adam beta1")->capture_default_str();
  app->add_option("--beta2", t.adam_beta2, "Adam beta2")->capture_default_str();
  app->add_option("--adam-eps", t.adam_eps, "Adam epsilon")->capture_default_str();
}

// Applies a flat config file to the options of `app` that were not given on
// the command line.
void ApplyConfig(CLI::App* app, const std::string& path) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path);
  } catch (const CLI::Error& e) {
    throw ParseError("config '" + path + "': " + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty()) {
      throw ParseError("config '" + path + "': sections are not supported (key '" +
                       item.fullname() + "')");
    }
    std::string key = item.name;
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config") {
      throw ParseError("config '" + path + "': nested config is not supported");
    }
    CLI::Option* opt = app->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw ParseError("config '" + path + "': unknown key '" + item.name +
                       "' for command '" + app->get_name() + "'");
    }
    if (opt->count() > 0) continue;  // the command line wins
    try {
      if (opt->get_type_size() == 0) {
        const std::string v = item.inputs.empty() ? "true" : item.inputs.front();
        opt->add_result(v);
      } else {
        opt->add_result(item.inputs);
      }
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ParseError("config '" + path + "': key '" + item.name + "': " + e.what());
    }
  }
}

DatasetSplit LoadSplitFile(const std::string& path) {
  return LoadSplit(ReadSplitIndex(path));
}

fs::path EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<Epoch> SelectEpochs(const DatasetSplit& split, const std::string& which) {
  if (which == "all") {
    std::vector<Epoch> all;
    for (Partition p : {Partition::kTrain, Partition::kValidation, Partition::kTest}) {
      const auto& part = split.partition(p);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  return split.partition(ParsePartition(which));
}

const std::vector<std::string> kPartitionChoices{"train", "validation", "test"};

// --- synth ----------------------------------------------------------------

void AddSynth(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  auto spec = std::make_shared<SyntheticSpec>();
  cmd->app = root.add_subcommand("synth", "Write a synthetic two-class dataset");
  AddCommon(*cmd, "synthetic");
  CLI::App* app = cmd->app;
  app->add_option("--subjects", spec->subjects)->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--epochs-per-subject", spec->epochs_per_subject)
      ->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--epoch-seconds", spec->epoch_seconds)->capture_default_str();
  app->add_option("--fs", spec->fs)->capture_default_str();
  app->add_option("--channels", spec->channels)->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--control-freq", spec->control_freq_hz)->capture_default_str();
  app->add_option("--pd-freq", spec->pd_freq_hz)->capture_default_str();
  app->add_option("--amplitude", spec->amplitude)->capture_default_str();
  app->add_option("--snr-db", spec->snr_db)->capture_default_str();
  Command* self = cmd.get();
  cmd->run = [self, spec](std::ostream& out) {
    spec->seed = self->common.seed;
    const fs::path dir = EnsureDir(self->common.out);
    const auto subjects = MakeSyntheticSubjects(*spec);
    Manifest manifest;
    manifest.fs = spec->fs;
    manifest.channel_names = subjects.front().channel_names;
    for (const auto& s : subjects) {
      const std::string file = s.subject_id + ".csv";
      WriteSubjectCsv(dir / file, s);
      manifest.entries.push_back({s.subject_id, file, s.label});
    }
    WriteManifest(dir / "manifest.json", manifest);
    out << "wrote " << subjects.size() << " subjects to "
        << (dir / "manifest.json").string() << "\n";
  };
  cmds.push_back(std::move(cmd));
}

// --- prepare --------------------------------------------------------------

void AddPrepare(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  auto opts = std::make_shared<PrepareOptions>();
  auto manifest = std::make_shared<std::string>();
  cmd->app = root.add_subcommand(
      "prepare", "Filter, epoch and split a manifest's recordings");
  AddCommon(*cmd, "prepared");
  CLI::App* app = cmd->app;
  app->add_option("--manifest", *manifest, "Dataset manifest (JSON)")
      ->required()->check(CLI::ExistingFile);
  app->add_option("--cutoff-hz", opts->cutoff_hz, "High-pass cutoff")
      ->capture_default_str();
  app->add_option("--filter-order", opts->filter_order, "Butterworth order")
      ->capture_default_str();
  app->add_flag("!--no-highpass", opts->highpass, "Skip the high-pass filter");
  app->add_option("--epoch-seconds", opts->epoch_seconds)->capture_default_str();
  app->add_option("--train-ratio", opts->ratios.train)->capture_default_str();
  app->add_option("--val-ratio", opts->ratios.validation)->capture_default_str();
  app->add_option("--test-ratio", opts->ratios.test)->capture_default_str();
  Command* self = cmd.get();
  cmd->run = [self, opts, manifest](std::ostream& out) {
    opts->seed = self->common.seed;
    const Manifest m = LoadManifest(*manifest);
    const DatasetSplit split = PrepareDataset(m, *opts);
    const fs::path dir = EnsureDir(self->common.out);
    const SplitIndex index = MakeSplitIndex(split, *manifest, m, *opts);
    WriteSplitIndex(dir / "split.json", index);
    int counts[3] = {0, 0, 0};
    for (const auto& [id, p] : split.subject_assignment) counts[static_cast<int>(p)]++;
    out << "subjects train=" << counts[0] << " validation=" << counts[1]
        << " test=" << counts[2] << "\n"
        << "epochs train=" << split.train.size()
        << " validation=" << split.validation.size()
        << " test=" << split.test.size() << "\n"
        << "wrote " << (dir / "split.json").string() << "\n";
  };
  cmds.push_back(std::move(cmd));
}

// --- train ----------------------------------------------------------------

void AddTrain(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  auto train = std::make_shared<TrainConfig>();
  auto model = std::make_shared<ModelConfig>();
  auto split_path = std::make_shared<std::string>();
  cmd->app = root.add_subcommand("train", "Train a model on a prepared split");
  AddCommon(*cmd, "run");
  CLI::App* app = cmd->app;
  app->add_option("--split", *split_path, "split.json written by prepare")
      ->required()->check(CLI::ExistingFile);
  AddTrainOptions(app, *train);
  AddModelOptions(app, *model);
  Command* self = cmd.get();
  cmd->check = [train, model] {
    train->Validate();
    model->Validate();
  };
  cmd->run = [self, train, model, split_path](std::ostream& out) {
    train->seed = self->common.seed;
    const DatasetSplit split = LoadSplitFile(*split_path);
    if (!split.train.empty()) {
      model->in_channels = static_cast<int>(split.train.front().data.rows());
    }
    const fs::path dir = EnsureDir(self->common.out);
    const TrainHistory history = Train(split, *train, *model, [&](const EpochRecord& r) {
      out << FormatLogLine(r) << "\n" << std::flush;
    });
    SaveCheckpoint(dir / "checkpoint.bin", history.best_checkpoint, train->seed);
    WriteText(dir / "history.json", HistoryToJson(history, *train, *model));
    out << "best_epoch," << history.best_epoch << "\n";
  };
  cmds.push_back(std::move(cmd));
}

// --- evaluate ---------------------------------------------------------------

void AddEvaluate(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  auto checkpoint = std::make_shared<std::string>();
  auto split_path = std::make_shared<std::string>();
  auto partition = std::make_shared<std::string>("test");
  cmd->app = root.add_subcommand("evaluate", "Score a checkpoint on a partition");
  AddCommon(*cmd, "run");
  CLI::App* app = cmd->app;
  // Existence is checked when the file is opened, so the message names it.
  app->add_option("--checkpoint", *checkpoint, "checkpoint.bin")->required();
  app->add_option("--split", *split_path, "split.json written by prepare")
      ->required()->check(CLI::ExistingFile);
  app->add_option("--partition", *partition)->capture_default_str()
      ->check(CLI::IsMember(kPartitionChoices));
  Command* self = cmd.get();
  cmd->run = [self, checkpoint, split_path, partition](std::ostream& out) {
    const Checkpoint ckpt = LoadCheckpoint(*checkpoint);
    const DatasetSplit split = LoadSplitFile(*split_path);
    const MetricsReport report =
        Evaluate(ckpt.params, split.partition(ParsePartition(*partition)));
    const fs::path dir = EnsureDir(self->common.out);
    WriteText(dir / "metrics.json", MetricsToJson(report));
    const std::string csv = MetricsCsvHeader() + "\n" + MetricsCsvRow(report) + "\n";
    WriteText(dir / "metrics.csv", csv);
    for (const auto& w : report.warnings) out << "warning: " << w << "\n";
    out << csv;
  };
  cmds.push_back(std::move(cmd));
}

// --- probe ----------------------------------------------------------------

void AddProbe(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  auto spec = std::make_shared<ProbeSpec>();
  auto checkpoint = std::make_shared<std::string>();
  auto freqs = std::make_shared<std::vector<double>>();
  cmd->app = root.add_subcommand(
      "probe", "Frequency sensitivity of pooled outputs and conv filter responses");
  AddCommon(*cmd, "probe");
  CLI::App* app = cmd->app;
  app->add_option("--checkpoint", *checkpoint, "checkpoint.bin")->required();
  app->add_option("--freqs", *freqs,
                  "Probe frequencies in Hz (default: 0, 1, ..., fs/2)")
      ->delimiter(',');
  app->add_option("--repeats-sine", spec->repeats_sine)->capture_default_str();
  app->add_option("--repeats-noise", spec->repeats_noise)->capture_default_str();
  app->add_option("--fs", spec->fs)->capture_default_str();
  app->add_option("--epoch-len", spec->epoch_len)->capture_default_str();
  app->add_option("--amplitude", spec->amplitude)->capture_default_str();
  app->add_option("--welch-window", spec->welch_window,
                  "Welch segment length in samples (0: fs)")
      ->capture_default_str();
  app->add_option("--welch-overlap", spec->welch_overlap)->capture_default_str();
  Command* self = cmd.get();
  cmd->check = [spec, freqs] {
    spec->frequencies = freqs->empty() ? IntegerFrequencyGrid(spec->fs) : *freqs;
    spec->Validate();
  };
  cmd->run = [self, spec, checkpoint](std::ostream& out) {
    spec->seed = self->common.seed;
    const Checkpoint ckpt = LoadCheckpoint(*checkpoint);
    spec->channels = ckpt.params.config.in_channels;
    const fs::path dir = EnsureDir(self->common.out);
    const SensitivityMap sens = PoolingSensitivity(ckpt.params, *spec);
    WriteSensitivityCsv(dir / "sensitivity.csv", sens);
    const FilterResponseMap resp = ConvFilterResponse(ckpt.params, *spec);
    WriteFilterResponseCsvs(dir / "filter_response", resp);
    out << "wrote " << (dir / "sensitivity.csv").string() << " ("
        << sens.activation.rows() << " outputs x " << sens.freqs.size()
        << " frequencies) and " << resp.channels.size() << " filter responses\n";
  };
  cmds.push_back(std::move(cmd));
}

// --- sweep ----------------------------------------------------------------

void AddSweep(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  auto config = std::make_shared<SweepConfig>();
  auto split_path = std::make_shared<std::string>();
  auto parameter = std::make_shared<std::string>("kernel_size");
  auto policy = std::make_shared<std::string>("fixed");
  cmd->app = root.add_subcommand(
      "sweep", "Train and evaluate one model per kernel size or channel count");
  AddCommon(*cmd, "sweep");
  CLI::App* app = cmd->app;
  app->add_option("--split", *split_path, "split.json written by prepare")
      ->required()->check(CLI::ExistingFile);
  app->add_option("--parameter", *parameter)->capture_default_str()
      ->check(CLI::IsMember({"kernel_size", "out_channels"}));
  app->add_option("--values", config->values,
                  "Sweep values (default: 11..39 odd, or 20 30 40 50 59)")
      ->delimiter(',');
  app->add_option("--seed-policy", *policy)->capture_default_str()
      ->check(CLI::IsMember({"fixed", "per_value"}));
  AddTrainOptions(app, config->base_train_config);
  AddModelOptions(app, config->base_model_config);
  Command* self = cmd.get();
  cmd->check = [config, parameter, policy] {
    config->parameter = ParseSweepParameter(*parameter);
    config->seed_policy = ParseSeedPolicy(*policy);
    if (config->values.empty()) {
      config->values = config->parameter == SweepParameter::kKernelSize
                           ? DefaultKernelSweep()
                           : DefaultChannelSweep();
    }
    config->Validate();
  };
  cmd->run = [self, config, split_path](std::ostream& out) {
    config->base_train_config.seed = self->common.seed;
    const DatasetSplit split = LoadSplitFile(*split_path);
    if (!split.train.empty()) {
      config->base_model_config.in_channels =
          static_cast<int>(split.train.front().data.rows());
    }
    const AblationReport report = RunSweep(*config, split);
    const fs::path dir = EnsureDir(self->common.out);
    const std::string csv = AblationCsv(report);
    WriteText(dir / "ablation.csv", csv);
    WriteText(dir / "ablation.json", AblationJson(report));
    out << csv;
  };
  cmds.push_back(std::move(cmd));
}

// --- psd ------------------------------------------------------------------

void AddPsd(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  auto split_path = std::make_shared<std::string>();
  auto partition = std::make_shared<std::string>("all");
  auto window = std::make_shared<std::size_t>(0);
  auto overlap = std::make_shared<double>(0.5);
  cmd->app = root.add_subcommand("psd", "Group mean and SEM of epoch PSDs by class");
  AddCommon(*cmd, "psd");
  CLI::App* app = cmd->app;
  app->add_option("--split", *split_path, "split.json written by prepare")
      ->required()->check(CLI::ExistingFile);
  app->add_option("--partition", *partition)->capture_default_str()
      ->check(CLI::IsMember({"all", "train", "validation", "test"}));
  app->add_option("--welch-window", *window,
                  "Welch segment length in samples (0: fs)")
      ->capture_default_str();
  app->add_option("--welch-overlap", *overlap)->capture_default_str();
  Command* self = cmd.get();
  cmd->run = [self, split_path, partition, window, overlap](std::ostream& out) {
    const SplitIndex index = ReadSplitIndex(*split_path);
    const DatasetSplit split = LoadSplit(index);
    const std::vector<Epoch> epochs = SelectEpochs(split, *partition);
    const std::size_t len =
        *window == 0 ? static_cast<std::size_t>(index.fs) : *window;
    const GroupPsdReport report = ComputeGroupPsd(epochs, index.fs, len, *overlap);
    const fs::path dir = EnsureDir(self->common.out);
    WriteGroupPsdCsv(dir / "group_psd.csv", report);
    out << "control epochs=" << report.control.count
        << " pd epochs=" << report.pd.count << "\n"
        << "wrote " << (dir / "group_psd.csv").string() << "\n";
  };
  cmds.push_back(std::move(cmd));
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
      return kExitParse;
    case ErrorKind::kIo:
      return kExitIo;
    case ErrorKind::kNumeric:
      return kExitNumeric;
    case ErrorKind::kInvalidArgument:
      return kExitInvalidArgument;
  }
  return kExitInternal;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App root{"Single-convolution classifier for multichannel EEG epochs"};
  root.name("lightconv");
  root.require_subcommand(1);
  root.fallthrough(false);

  std::vector<std::unique_ptr<Command>> cmds;
  AddSynth(root, cmds);
  AddPrepare(root, cmds);
  AddTrain(root, cmds);
  AddEvaluate(root, cmds);
  AddProbe(root, cmds);
  AddSweep(root, cmds);
  AddPsd(root, cmds);

  Command* selected = nullptr;
  try {
    root.parse(argc, argv);
    for (auto& cmd : cmds) {
      if (cmd->app->parsed()) selected = cmd.get();
    }
    if (!selected->common.config.empty()) {
      ApplyConfig(selected->app, selected->common.config);
    }
    if (selected->check) selected->check();
  } catch (const CLI::ParseError& e) {
    const int code = root.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    selected->run(out);
  } catch (const Error& e) {
    err << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace lightconv::cli

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

#include "lightconv/pipeline.h"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include "lightconv/error.h"
#include "lightconv/parallel.h"
#include "lightconv/preprocess.h"

namespace lightconv {
namespace {

using json = nlohmann::ordered_json;

constexpr int kSplitIndexVersion = 1;

}  // namespace

SubjectRecording FilterRecording(const SubjectRecording& recording,
                                 const PrepareOptions& options) {
  SubjectRecording out = recording;
  if (!options.highpass) return out;
  const FilterCoeffs coeffs =
      DesignHighpass(options.cutoff_hz, options.filter_order, recording.fs);
  out.samples = ApplyZeroPhase(coeffs, recording.samples);
  return out;
}

DatasetSplit PrepareDataset(const Manifest& manifest, const PrepareOptions& options) {
  std::vector<std::vector<Epoch>> per_subject(manifest.entries.size());
  ParallelFor(manifest.entries.size(), [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    const SubjectRecording raw = LoadSubjectCsv(entry.file, entry, manifest);
    per_subject[i] = EpochRecording(FilterRecording(raw, options),
                                    options.epoch_seconds);
  });
  std::vector<Epoch> epochs;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < per_subject.size(); ++i) {
    ids.push_back(manifest.entries[i].subject_id);
    for (auto& e : per_subject[i]) epochs.push_back(std::move(e));
  }
  return SplitEpochs(std::move(epochs), std::move(ids), options.ratios, options.seed);
}

SplitIndex MakeSplitIndex(const DatasetSplit& split,
                          const std::filesystem::path& manifest_path,
                          const Manifest& manifest, const PrepareOptions& options) {
  SplitIndex index;
  index.manifest_path =
      std::filesystem::absolute(manifest_path).lexically_normal().generic_string();
  index.options = options;
  index.fs = manifest.fs;
  std::map<std::string, ClassLabel> labels;
  for (const auto& entry : manifest.entries) labels[entry.subject_id] = entry.label;
  std::map<std::string, int> counts;
  for (Partition p : {Partition::kTrain, Partition::kValidation, Partition::kTest}) {
    for (const Epoch& e : split.partition(p)) {
      index.epochs.push_back({e.subject_id, e.epoch_index, p});
      counts[e.subject_id] += 1;
      index.channels = e.data.rows();
      index.epoch_len = e.data.cols();
    }
  }
  for (const auto& [id, partition] : split.subject_assignment) {
    index.subjects.push_back({id, labels.at(id), partition, counts[id]});
  }
  return index;
}

std::string SplitIndexToJson(const SplitIndex& index) {
  json doc;
  doc["format_version"] = kSplitIndexVersion;
  doc["manifest"] = index.manifest_path;
  doc["seed"] = index.options.seed;
  doc["ratios"] = {index.options.ratios.train, index.options.ratios.validation,
                   index.options.ratios.test};
  doc["filter"] = {{"highpass", index.options.highpass},
                   {"cutoff_hz", index.options.cutoff_hz},
                   {"order", index.options.filter_order},
                   {"zero_phase", true}};
  doc["epoch_seconds"] = index.options.epoch_seconds;
  doc["fs"] = index.fs;
  doc["channels"] = index.channels;
  doc["epoch_len"] = index.epoch_len;
  doc["subjects"] = json::array();
  for (const auto& s : index.subjects) {
    doc["subjects"].push_back({{"id", s.id},
                               {"label", LabelName(s.label)},
                               {"partition", PartitionName(s.partition)},
                               {"epochs", s.epochs}});
  }
  doc["epochs"] = json::array();
  for (const auto& e : index.epochs) {
    doc["epochs"].push_back({{"subject", e.subject_id},
                             {"index", e.epoch_index},
                             {"partition", PartitionName(e.partition)}});
  }
  return doc.dump(1) + "\n";
}

SplitIndex ParseSplitIndex(std::string_view json_text) {
  SplitIndex index;
  try {
    const json doc = json::parse(json_text);
    if (doc.at("format_version").get<int>() != kSplitIndexVersion) {
      throw ParseError("unsupported split index format_version");
    }
    index.manifest_path = doc.at("manifest").get<std::string>();
    index.options.seed = doc.at("seed").get<std::uint64_t>();
    const auto ratios = doc.at("ratios").get<std::vector<double>>();
    if (ratios.size() != 3) throw ParseError("split index ratios must have 3 entries");
    index.options.ratios = {ratios[0], ratios[1], ratios[2]};
    const auto& filter = doc.at("filter");
    index.options.highpass = filter.at("highpass").get<bool>();
    index.options.cutoff_hz = filter.at("cutoff_hz").get<double>();
    index.options.filter_order = filter.at("order").get<int>();
    index.options.epoch_seconds = doc.at("epoch_seconds").get<double>();
    index.fs = doc.at("fs").get<double>();
    index.channels = doc.at("channels").get<std::size_t>();
    index.epoch_len = doc.at("epoch_len").get<std::size_t>();
    for (const auto& s : doc.at("subjects")) {
      index.subjects.push_back({s.at("id").get<std::string>(),
                                ParseLabel(s.at("label").get<std::string>()),
                                ParsePartition(s.at("partition").get<std::string>()),
                                s.at("epochs").get<int>()});
    }
    for (const auto& e : doc.at("epochs")) {
      index.epochs.push_back({e.at("subject").get<std::string>(),
                              e.at("index").get<int>(),
                              ParsePartition(e.at("partition").get<std::string>())});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("split index: ") + e.what());
  }
  return index;
}

void WriteSplitIndex(const std::filesystem::path& path, const SplitIndex& index) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << SplitIndexToJson(index);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

SplitIndex ReadSplitIndex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open split index '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseSplitIndex(buffer.str());
}

DatasetSplit LoadSplit(const SplitIndex& index) {
  const Manifest manifest = LoadManifest(index.manifest_path);
  DatasetSplit split = PrepareDataset(manifest, index.options);
  const SplitIndex rebuilt =
      MakeSplitIndex(split, index.manifest_path, manifest, index.options);
  if (SplitIndexToJson(rebuilt) != SplitIndexToJson(index)) {
    throw ParseError("split index no longer matches manifest '" +
                     index.manifest_path + "'; re-run prepare");
  }
  return split;
}

}  // namespace lightconv

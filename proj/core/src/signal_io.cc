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

#include "lightconv/signal_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>
#include "lightconv/error.h"
#include "lightconv/random.h"

namespace lightconv {
namespace {

using nlohmann::json;

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string Lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

ClassLabel LabelFromIndex(int index) {
  if (index == 0) return ClassLabel::kControl;
  if (index == 1) return ClassLabel::kPd;
  throw InvalidArgumentError("class index out of range: " +
                             std::to_string(index));
}

ClassLabel ParseLabel(std::string_view text) {
  const std::string lower = Lowercase(Trim(text));
  if (lower == "pd" || lower == "1") return ClassLabel::kPd;
  if (lower == "control" || lower == "hc" || lower == "0") {
    return ClassLabel::kControl;
  }
  throw ParseError("unknown class label '" + std::string(text) + "'");
}

const char* LabelName(ClassLabel label) {
  return label == ClassLabel::kPd ? "PD" : "Control";
}

const char* PartitionName(Partition partition) {
  switch (partition) {
    case Partition::kTrain:
      return "train";
    case Partition::kValidation:
      return "validation";
    case Partition::kTest:
      return "test";
  }
  return "?";
}

Partition ParsePartition(std::string_view text) {
  const std::string lower = Lowercase(text);
  if (lower == "train") return Partition::kTrain;
  if (lower == "validation" || lower == "val") return Partition::kValidation;
  if (lower == "test") return Partition::kTest;
  throw ParseError("unknown partition '" + std::string(text) + "'");
}

const std::vector<Epoch>& DatasetSplit::partition(Partition p) const {
  switch (p) {
    case Partition::kTrain:
      return train;
    case Partition::kValidation:
      return validation;
    case Partition::kTest:
      return test;
  }
  return test;
}

Manifest LoadManifest(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  Manifest manifest;
  try {
    const json doc = json::parse(text);
    manifest.fs = doc.at("fs").get<double>();
    manifest.channel_names = doc.at("channels").get<std::vector<std::string>>();
    const auto base = path.parent_path();
    std::set<std::string> seen;
    for (const auto& subject : doc.at("subjects")) {
      ManifestEntry entry;
      entry.subject_id = subject.at("id").get<std::string>();
      std::filesystem::path file = subject.at("file").get<std::string>();
      entry.file = file.is_absolute() ? file : base / file;
      const auto& label = subject.at("label");
      entry.label = label.is_number_integer()
                        ? LabelFromIndex(label.get<int>())
                        : ParseLabel(label.get<std::string>());
      if (!seen.insert(entry.subject_id).second) {
        throw ParseError("duplicate subject id '" + entry.subject_id + "'");
      }
      manifest.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw ParseError("manifest '" + path.string() + "': " + e.what());
  } catch (const Error& e) {
    throw ParseError("manifest '" + path.string() + "': " + e.what());
  }
  if (!(manifest.fs > 0.0) || !std::isfinite(manifest.fs)) {
    throw ParseError("manifest '" + path.string() +
                     "': fs must be a positive number");
  }
  return manifest;
}

void WriteManifest(const std::filesystem::path& path, const Manifest& manifest) {
  json doc;
  doc["fs"] = manifest.fs;
  doc["channels"] = manifest.channel_names;
  doc["subjects"] = json::array();
  for (const auto& entry : manifest.entries) {
    doc["subjects"].push_back({{"id", entry.subject_id},
                               {"file", entry.file.generic_string()},
                               {"label", LabelName(entry.label)}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

SubjectRecording LoadSubjectCsv(const std::filesystem::path& path,
                                const ManifestEntry& entry,
                                const Manifest& manifest) {
  if (!std::filesystem::exists(path)) {
    throw IoError("subject file not found: '" + path.string() + "'");
  }
  const std::string text = ReadFile(path);
  const std::string where = path.string();

  std::vector<std::string_view> lines;
  {
    std::string_view rest = text;
    while (!rest.empty()) {
      std::size_t nl = rest.find('\n');
      lines.push_back(rest.substr(0, nl));
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
  }
  while (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(where + ": empty file");

  SubjectRecording rec;
  rec.subject_id = entry.subject_id;
  rec.label = entry.label;
  rec.fs = manifest.fs;
  for (auto name : SplitFields(lines[0])) rec.channel_names.emplace_back(name);
  const std::size_t channels = rec.channel_names.size();
  if (!manifest.channel_names.empty() &&
      channels != manifest.channel_names.size()) {
    throw ParseError(where + ": row 1 has " + std::to_string(channels) +
                     " channels, manifest lists " +
                     std::to_string(manifest.channel_names.size()));
  }

  const std::size_t samples = lines.size() - 1;
  rec.samples = Array2D(channels, samples);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = SplitFields(lines[r]);
    const std::string row_label = "row " + std::to_string(r + 1);
    if (fields.size() != channels) {
      throw ParseError(where + ": " + row_label + " has " +
                       std::to_string(fields.size()) + " columns, expected " +
                       std::to_string(channels));
    }
    for (std::size_t c = 0; c < channels; ++c) {
      const std::string_view cell = fields[c];
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(value)) {
        throw ParseError(where + ": " + row_label + ", column " +
                         std::to_string(c + 1) + ": not a finite number '" +
                         std::string(cell) + "'");
      }
      rec.samples(c, r - 1) = value;
    }
  }
  return rec;
}

void WriteSubjectCsv(const std::filesystem::path& path,
                     const SubjectRecording& recording) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  const std::size_t channels = recording.channels();
  for (std::size_t c = 0; c < channels; ++c) {
    if (c) out << ',';
    out << (c < recording.channel_names.size() ? recording.channel_names[c]
                                               : "ch" + std::to_string(c + 1));
  }
  out << '\n';
  std::string line;
  char buf[32];
  for (std::size_t t = 0; t < recording.length(); ++t) {
    line.clear();
    for (std::size_t c = 0; c < channels; ++c) {
      if (c) line.push_back(',');
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), recording.samples(c, t));
      line.append(buf, ptr);
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<Epoch> EpochRecording(const SubjectRecording& recording,
                                  double epoch_seconds) {
  const double exact = epoch_seconds * recording.fs;
  const double rounded = std::round(exact);
  if (!(rounded >= 1.0) || std::abs(exact - rounded) > 1e-9 * rounded) {
    throw InvalidArgumentError("epoch length epoch_seconds * fs must be a "
                               "positive integer number of samples");
  }
  const auto epoch_len = static_cast<std::size_t>(rounded);
  const std::size_t count = recording.length() / epoch_len;
  std::vector<Epoch> epochs;
  epochs.reserve(count);
  for (std::size_t e = 0; e < count; ++e) {
    Epoch epoch;
    epoch.data = recording.samples.Columns(e * epoch_len, epoch_len);
    if (!epoch.data.AllFinite()) {
      throw NumericError("subject '" + recording.subject_id + "' epoch " +
                         std::to_string(e) + " contains non-finite samples");
    }
    epoch.label = recording.label;
    epoch.subject_id = recording.subject_id;
    epoch.epoch_index = static_cast<int>(e);
    epochs.push_back(std::move(epoch));
  }
  return epochs;
}

std::map<std::string, Partition> AssignSubjects(
    std::vector<std::string> subject_ids, const SplitRatios& ratios,
    std::uint64_t seed) {
  if (ratios.train <= 0 || ratios.validation <= 0 || ratios.test <= 0) {
    throw InvalidArgumentError("split ratios must all be positive");
  }
  if (std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw InvalidArgumentError("split ratios must sum to 1");
  }
  std::sort(subject_ids.begin(), subject_ids.end());
  if (std::adjacent_find(subject_ids.begin(), subject_ids.end()) !=
      subject_ids.end()) {
    throw InvalidArgumentError("duplicate subject ids");
  }
  const std::size_t n = subject_ids.size();
  if (n < 3) {
    throw InvalidArgumentError("fewer subjects (" + std::to_string(n) +
                               ") than partitions (3)");
  }

  Rng rng(seed);
  rng.Shuffle(std::span<std::string>(subject_ids));

  auto n_train = std::max<long>(1, std::lround(ratios.train * n));
  auto n_val = std::max<long>(1, std::lround(ratios.validation * n));
  while (n_train + n_val > static_cast<long>(n) - 1) {
    if (n_train >= n_val && n_train > 1) {
      --n_train;
    } else {
      --n_val;
    }
  }

  std::map<std::string, Partition> assignment;
  for (std::size_t i = 0; i < n; ++i) {
    Partition p = Partition::kTest;
    if (static_cast<long>(i) < n_train) {
      p = Partition::kTrain;
    } else if (static_cast<long>(i) < n_train + n_val) {
      p = Partition::kValidation;
    }
    assignment.emplace(subject_ids[i], p);
  }
  return assignment;
}

namespace {

DatasetSplit RouteEpochs(std::vector<Epoch> epochs,
                         std::map<std::string, Partition> assignment,
                         std::uint64_t seed) {
  DatasetSplit split;
  split.seed = seed;
  split.subject_assignment = std::move(assignment);
  std::stable_sort(epochs.begin(), epochs.end(),
                   [](const Epoch& a, const Epoch& b) {
                     return std::tie(a.subject_id, a.epoch_index) <
                            std::tie(b.subject_id, b.epoch_index);
                   });
  for (auto& e : epochs) {
    switch (split.subject_assignment.at(e.subject_id)) {
      case Partition::kTrain:
        split.train.push_back(std::move(e));
        break;
      case Partition::kValidation:
        split.validation.push_back(std::move(e));
        break;
      case Partition::kTest:
        split.test.push_back(std::move(e));
        break;
    }
  }
  return split;
}

}  // namespace

DatasetSplit SplitEpochs(std::vector<Epoch> epochs, const SplitRatios& ratios,
                         std::uint64_t seed) {
  std::vector<std::string> ids;
  for (const auto& e : epochs) ids.push_back(e.subject_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto assignment = AssignSubjects(std::move(ids), ratios, seed);
  return RouteEpochs(std::move(epochs), std::move(assignment), seed);
}

DatasetSplit SplitEpochs(std::vector<Epoch> epochs,
                         std::vector<std::string> subject_ids,
                         const SplitRatios& ratios, std::uint64_t seed) {
  auto assignment = AssignSubjects(std::move(subject_ids), ratios, seed);
  for (const auto& e : epochs) {
    if (!assignment.count(e.subject_id)) {
      throw InvalidArgumentError("epoch from unlisted subject '" + e.subject_id + "'");
    }
  }
  return RouteEpochs(std::move(epochs), std::move(assignment), seed);
}

DatasetSplit SplitDataset(const std::vector<SubjectRecording>& subjects,
                          const SplitRatios& ratios, std::uint64_t seed,
                          double epoch_seconds) {
  std::vector<Epoch> epochs;
  std::vector<std::string> ids;
  for (const auto& rec : subjects) {
    ids.push_back(rec.subject_id);
    auto cut = EpochRecording(rec, epoch_seconds);
    std::move(cut.begin(), cut.end(), std::back_inserter(epochs));
  }
  // Subjects too short for a single epoch still take part in the assignment.
  return SplitEpochs(std::move(epochs), std::move(ids), ratios, seed);
}

}  // namespace lightconv

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

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lightconv/error.h"
#include "lightconv/pipeline.h"
#include "lightconv/synthetic.h"
#include "test_util.h"

namespace lightconv {
namespace {

namespace fs = std::filesystem;

// Writes subject CSVs plus a manifest with relative paths; returns the
// manifest path.
fs::path WriteDataset(const fs::path& dir, const SyntheticSpec& spec) {
  Manifest manifest;
  manifest.fs = spec.fs;
  for (const SubjectRecording& r : MakeSyntheticSubjects(spec)) {
    const std::string file = r.subject_id + ".csv";
    WriteSubjectCsv(dir / file, r);
    manifest.channel_names = r.channel_names;
    manifest.entries.push_back({r.subject_id, file, r.label});
  }
  const fs::path path = dir / "manifest.json";
  WriteManifest(path, manifest);
  return path;
}

SyntheticSpec TinySpec(int subjects) {
  SyntheticSpec spec;
  spec.subjects = subjects;
  spec.epochs_per_subject = 2;
  spec.epoch_seconds = 1.0;
  spec.fs = 50.0;
  spec.channels = 2;
  spec.seed = 11;
  return spec;
}

PrepareOptions TinyOptions() {
  PrepareOptions options;
  options.epoch_seconds = 1.0;
  options.seed = 5;
  return options;
}

TEST(PipelineTest, PrepareDatasetFromDisk) {
  testing::TempDir dir;
  const fs::path manifest_path = WriteDataset(dir.path(), TinySpec(6));
  const Manifest manifest = LoadManifest(manifest_path);
  const DatasetSplit split = PrepareDataset(manifest, TinyOptions());
  EXPECT_EQ(split.train.size() + split.validation.size() + split.test.size(), 12u);
  EXPECT_EQ(split.subject_assignment.size(), 6u);
  for (const Epoch& e : split.train) {
    EXPECT_EQ(e.data.rows(), 2u);
    EXPECT_EQ(e.data.cols(), 50u);
  }
}

TEST(PipelineTest, HighPassRemovesOffset) {
  SubjectRecording r;
  r.subject_id = "s";
  r.fs = 100.0;
  r.samples = Array2D(1, 3000);
  const auto sine = testing::Sinusoid(3000, 10.0, 100.0);
  for (std::size_t t = 0; t < 3000; ++t) r.samples(0, t) = 50.0 + sine[t];
  const SubjectRecording filtered = FilterRecording(r, PrepareOptions{});
  double mean = 0.0;
  for (std::size_t t = 500; t < 2500; ++t) mean += filtered.samples(0, t);
  EXPECT_NEAR(mean / 2000.0, 0.0, 1e-2);

  PrepareOptions off;
  off.highpass = false;
  EXPECT_EQ(FilterRecording(r, off).samples, r.samples);
}

TEST(PipelineTest, SplitIndexIsByteIdenticalAcrossRuns) {
  testing::TempDir dir;
  const fs::path manifest_path = WriteDataset(dir.path(), TinySpec(6));
  std::string first;
  for (int run = 0; run < 2; ++run) {
    const Manifest manifest = LoadManifest(manifest_path);
    const DatasetSplit split = PrepareDataset(manifest, TinyOptions());
    WriteSplitIndex(dir / "split.json",
                    MakeSplitIndex(split, manifest_path, manifest, TinyOptions()));
    const std::string text = testing::ReadFile(dir / "split.json");
    if (run == 0) {
      first = text;
    } else {
      EXPECT_EQ(text, first);
    }
  }
  const auto doc = nlohmann::json::parse(first);
  EXPECT_EQ(doc.at("format_version"), 1);
  EXPECT_EQ(doc.at("epochs").size(), 12u);
  EXPECT_TRUE(fs::path(doc.at("manifest").get<std::string>()).is_absolute());
}

TEST(PipelineTest, IndexJsonRoundTrip) {
  testing::TempDir dir;
  const fs::path manifest_path = WriteDataset(dir.path(), TinySpec(5));
  const Manifest manifest = LoadManifest(manifest_path);
  const DatasetSplit split = PrepareDataset(manifest, TinyOptions());
  const SplitIndex index = MakeSplitIndex(split, manifest_path, manifest, TinyOptions());
  const std::string json = SplitIndexToJson(index);
  EXPECT_EQ(SplitIndexToJson(ParseSplitIndex(json)), json);
  EXPECT_EQ(index.epoch_len, 50u);
  EXPECT_EQ(index.channels, 2u);
}

TEST(PipelineTest, LoadSplitReproducesPartitions) {
  testing::TempDir dir;
  const fs::path manifest_path = WriteDataset(dir.path(), TinySpec(6));
  const Manifest manifest = LoadManifest(manifest_path);
  const DatasetSplit split = PrepareDataset(manifest, TinyOptions());
  WriteSplitIndex(dir / "split.json",
                  MakeSplitIndex(split, manifest_path, manifest, TinyOptions()));
  const DatasetSplit loaded = LoadSplit(ReadSplitIndex(dir / "split.json"));
  for (Partition p : {Partition::kTrain, Partition::kValidation, Partition::kTest}) {
    ASSERT_EQ(loaded.partition(p).size(), split.partition(p).size());
    for (std::size_t i = 0; i < split.partition(p).size(); ++i) {
      EXPECT_EQ(loaded.partition(p)[i].subject_id, split.partition(p)[i].subject_id);
      EXPECT_EQ(loaded.partition(p)[i].data, split.partition(p)[i].data);
    }
  }
}

TEST(PipelineTest, StaleIndexIsRejected) {
  testing::TempDir dir;
  const fs::path manifest_path = WriteDataset(dir.path(), TinySpec(6));
  const Manifest manifest = LoadManifest(manifest_path);
  const DatasetSplit split = PrepareDataset(manifest, TinyOptions());
  SplitIndex index = MakeSplitIndex(split, manifest_path, manifest, TinyOptions());
  index.subjects[0].partition = index.subjects[0].partition == Partition::kTest
                                    ? Partition::kTrain
                                    : Partition::kTest;
  try {
    LoadSplit(index);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("re-run prepare"), std::string::npos);
  }
}

TEST(PipelineTest, MalformedIndex) {
  EXPECT_THROW(ParseSplitIndex("{"), ParseError);
  EXPECT_THROW(ParseSplitIndex("{\"format_version\": 9}"), ParseError);
  EXPECT_THROW(ParseSplitIndex("[]"), ParseError);
  EXPECT_THROW(ReadSplitIndex("/nonexistent/split.json"), IoError);
}

TEST(PipelineTest, SingleSubjectCannotBeSplit) {
  testing::TempDir dir;
  const Manifest manifest = LoadManifest(WriteDataset(dir.path(), TinySpec(1)));
  EXPECT_THROW(PrepareDataset(manifest, TinyOptions()), InvalidArgumentError);
}

TEST(PipelineTest, FortySixSubjectsSplitTwentyEightNineNine) {
  testing::TempDir dir;
  SyntheticSpec spec = TinySpec(46);
  spec.epochs_per_subject = 1;
  const Manifest manifest = LoadManifest(WriteDataset(dir.path(), spec));
  const DatasetSplit split = PrepareDataset(manifest, TinyOptions());
  EXPECT_EQ(split.train.size(), 28u);
  EXPECT_EQ(split.validation.size(), 9u);
  EXPECT_EQ(split.test.size(), 9u);
}

}  // namespace
}  // namespace lightconv

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

#include <algorithm>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "lightconv/error.h"
#include "lightconv/signal_io.h"
#include "test_util.h"

namespace lightconv {
namespace {

using testing::TempDir;
using testing::WriteFile;

Manifest ThreeChannelManifest() {
  Manifest m;
  m.fs = 500.0;
  m.channel_names = {"Fp1", "Fp2", "Cz"};
  return m;
}

std::string ThreeByTenCsv() {
  std::string text = "Fp1,Fp2,Cz\n";
  for (int t = 0; t < 10; ++t) {
    text += std::to_string(t) + "," + std::to_string(t * 2) + ".5," +
            std::to_string(-t) + "\n";
  }
  return text;
}

SubjectRecording MakeRecording(const std::string& id, ClassLabel label,
                               std::size_t channels, std::size_t samples,
                               std::uint64_t seed) {
  Rng rng(seed);
  SubjectRecording rec;
  rec.subject_id = id;
  rec.label = label;
  rec.fs = 500.0;
  rec.samples = testing::RandomArray(channels, samples, rng);
  for (std::size_t c = 0; c < channels; ++c) {
    rec.channel_names.push_back("c" + std::to_string(c));
  }
  return rec;
}

std::vector<std::string> Ids(int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("sub" + std::to_string(100 + i));
  return ids;
}

std::map<Partition, int> CountPartitions(const std::map<std::string, Partition>& a) {
  std::map<Partition, int> counts;
  for (const auto& [id, p] : a) counts[p]++;
  return counts;
}

TEST(LabelTest, ParsesNamesAndIndices) {
  EXPECT_EQ(ParseLabel("PD"), ClassLabel::kPd);
  EXPECT_EQ(ParseLabel("control"), ClassLabel::kControl);
  EXPECT_EQ(ParseLabel("1"), ClassLabel::kPd);
  EXPECT_EQ(ParseLabel("0"), ClassLabel::kControl);
  EXPECT_EQ(ToIndex(ClassLabel::kPd), 1);
  EXPECT_THROW(ParseLabel("maybe"), ParseError);
  EXPECT_THROW(LabelFromIndex(2), Error);
}

TEST(LoadSubjectCsvTest, WellFormedThreeByTen) {
  TempDir dir;
  WriteFile(dir / "s.csv", ThreeByTenCsv());
  const ManifestEntry entry{"S1", dir / "s.csv", ClassLabel::kPd};
  const SubjectRecording rec = LoadSubjectCsv(entry.file, entry, ThreeChannelManifest());
  EXPECT_EQ(rec.channels(), 3u);
  EXPECT_EQ(rec.length(), 10u);
  EXPECT_EQ(rec.label, ClassLabel::kPd);
  EXPECT_EQ(rec.subject_id, "S1");
  EXPECT_EQ(rec.channel_names[2], "Cz");
  EXPECT_DOUBLE_EQ(rec.samples(1, 3), 6.5);
  EXPECT_DOUBLE_EQ(rec.samples(2, 9), -9.0);
}

TEST(LoadSubjectCsvTest, NonNumericCellNamesRowAndColumn) {
  TempDir dir;
  WriteFile(dir / "s.csv", "a,b,c\n1,2,3\n4,5,6\n7,oops,9\n10,11,12\n");
  const ManifestEntry entry{"S1", dir / "s.csv", ClassLabel::kControl};
  try {
    LoadSubjectCsv(entry.file, entry, ThreeChannelManifest());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
  }
}

TEST(LoadSubjectCsvTest, RaggedRowIsReported) {
  TempDir dir;
  WriteFile(dir / "s.csv", "a,b,c\n1,2,3\n4,5\n");
  const ManifestEntry entry{"S1", dir / "s.csv", ClassLabel::kControl};
  try {
    LoadSubjectCsv(entry.file, entry, ThreeChannelManifest());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
  }
}

TEST(LoadSubjectCsvTest, ChannelCountMismatchAgainstManifest) {
  TempDir dir;
  WriteFile(dir / "s.csv", "a,b\n1,2\n");
  const ManifestEntry entry{"S1", dir / "s.csv", ClassLabel::kControl};
  EXPECT_THROW(LoadSubjectCsv(entry.file, entry, ThreeChannelManifest()), ParseError);
}

TEST(LoadSubjectCsvTest, MissingFileIsIoError) {
  TempDir dir;
  const ManifestEntry entry{"S1", dir / "absent.csv", ClassLabel::kControl};
  try {
    LoadSubjectCsv(entry.file, entry, ThreeChannelManifest());
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("absent.csv"), std::string::npos);
  }
}

TEST(LoadSubjectCsvTest, SixtySecondsAt500HzIs59By30000) {
  TempDir dir;
  SubjectRecording rec = MakeRecording("S1", ClassLabel::kPd, 59, 30000, 5);
  WriteSubjectCsv(dir / "s.csv", rec);
  Manifest m;
  m.channel_names = rec.channel_names;
  const ManifestEntry entry{"S1", dir / "s.csv", ClassLabel::kPd};
  const SubjectRecording loaded = LoadSubjectCsv(entry.file, entry, m);
  EXPECT_EQ(loaded.channels(), 59u);
  EXPECT_EQ(loaded.length(), 30000u);
}

// Property: write -> load reproduces every value bit for bit.
TEST(LoadSubjectCsvTest, RoundTripIsExact) {
  TempDir dir;
  Rng shape_rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t channels = 1 + shape_rng.Index(6);
    const std::size_t samples = 1 + shape_rng.Index(200);
    SubjectRecording rec = MakeRecording("S", ClassLabel::kControl, channels, samples,
                                         100 + trial);
    // Mix magnitudes so the shortest representation varies in length.
    for (double& v : rec.samples.values()) v *= std::pow(10.0, shape_rng.Uniform(-8, 8));
    WriteSubjectCsv(dir / "r.csv", rec);
    Manifest m;
    m.channel_names = rec.channel_names;
    const ManifestEntry entry{"S", dir / "r.csv", ClassLabel::kControl};
    const SubjectRecording loaded = LoadSubjectCsv(entry.file, entry, m);
    ASSERT_EQ(loaded.samples, rec.samples) << "trial " << trial;
  }
}

TEST(ManifestTest, RoundTripAndRelativePaths) {
  TempDir dir;
  Manifest m = ThreeChannelManifest();
  m.entries.push_back({"A", "a.csv", ClassLabel::kPd});
  m.entries.push_back({"B", "b.csv", ClassLabel::kControl});
  WriteManifest(dir / "manifest.json", m);
  const Manifest loaded = LoadManifest(dir / "manifest.json");
  EXPECT_EQ(loaded.fs, 500.0);
  EXPECT_EQ(loaded.channel_names, m.channel_names);
  ASSERT_EQ(loaded.entries.size(), 2u);
  EXPECT_EQ(loaded.entries[0].file, dir.path() / "a.csv");
  EXPECT_EQ(loaded.entries[1].label, ClassLabel::kControl);
}

TEST(ManifestTest, DuplicateIdsRejected) {
  TempDir dir;
  WriteFile(dir / "m.json",
            R"({"fs":500,"channels":["a"],"subjects":[{"id":"X","file":"x.csv","label":"PD"},)"
            R"({"id":"X","file":"y.csv","label":"Control"}]})");
  EXPECT_THROW(LoadManifest(dir / "m.json"), ParseError);
}

TEST(ManifestTest, MalformedJsonIsParseErrorAndMissingIsIoError) {
  TempDir dir;
  WriteFile(dir / "m.json", "{not json");
  EXPECT_THROW(LoadManifest(dir / "m.json"), ParseError);
  EXPECT_THROW(LoadManifest(dir / "none.json"), IoError);
}

TEST(EpochRecordingTest, ThirtyThousandSamplesGiveTwelveEpochs) {
  const SubjectRecording rec = MakeRecording("S", ClassLabel::kPd, 2, 30000, 1);
  const auto epochs = EpochRecording(rec, 5.0);
  ASSERT_EQ(epochs.size(), 12u);
  for (std::size_t e = 0; e < epochs.size(); ++e) {
    EXPECT_EQ(epochs[e].data.cols(), 2500u);
    EXPECT_EQ(epochs[e].epoch_index, static_cast<int>(e));
    EXPECT_EQ(epochs[e].label, ClassLabel::kPd);
  }
  EXPECT_EQ(epochs[3].data(1, 7), rec.samples(1, 3 * 2500 + 7));
}

TEST(EpochRecordingTest, TrailingRemainderDropped) {
  const SubjectRecording rec = MakeRecording("S", ClassLabel::kPd, 1, 2600, 1);
  const auto epochs = EpochRecording(rec, 5.0);
  ASSERT_EQ(epochs.size(), 1u);
  EXPECT_EQ(epochs[0].data(0, 2499), rec.samples(0, 2499));
}

TEST(EpochRecordingTest, ShortRecordingGivesNoEpochs) {
  const SubjectRecording rec = MakeRecording("S", ClassLabel::kPd, 1, 2499, 1);
  EXPECT_TRUE(EpochRecording(rec, 5.0).empty());
}

TEST(EpochRecordingTest, NonIntegerEpochLengthRejected) {
  const SubjectRecording rec = MakeRecording("S", ClassLabel::kPd, 1, 3000, 1);
  EXPECT_THROW(EpochRecording(rec, 0.0011), InvalidArgumentError);
  EXPECT_THROW(EpochRecording(rec, 0.0), InvalidArgumentError);
}

TEST(AssignSubjectsTest, FortySixSubjectsSplit28_9_9) {
  const auto counts = CountPartitions(AssignSubjects(Ids(46), {}, 7));
  EXPECT_EQ(counts.at(Partition::kTrain), 28);
  EXPECT_EQ(counts.at(Partition::kValidation), 9);
  EXPECT_EQ(counts.at(Partition::kTest), 9);
}

TEST(AssignSubjectsTest, FiveSubjectsSplit3_1_1) {
  const auto counts = CountPartitions(AssignSubjects(Ids(5), {}, 7));
  EXPECT_EQ(counts.at(Partition::kTrain), 3);
  EXPECT_EQ(counts.at(Partition::kValidation), 1);
  EXPECT_EQ(counts.at(Partition::kTest), 1);
}

TEST(AssignSubjectsTest, EveryPartitionNonEmptyForSmallN) {
  for (int n = 3; n <= 12; ++n) {
    const auto counts = CountPartitions(AssignSubjects(Ids(n), {}, 3));
    EXPECT_EQ(counts.size(), 3u) << "n=" << n;
  }
}

TEST(AssignSubjectsTest, Preconditions) {
  EXPECT_THROW(AssignSubjects(Ids(2), {}, 0), InvalidArgumentError);
  EXPECT_THROW(AssignSubjects(Ids(1), {}, 0), InvalidArgumentError);
  EXPECT_THROW(AssignSubjects(Ids(10), {0.8, 0.2, 0.0}, 0), InvalidArgumentError);
  EXPECT_THROW(AssignSubjects(Ids(10), {0.5, 0.2, 0.2}, 0), InvalidArgumentError);
}

// Property: the assignment depends on the set of ids and the seed only.
TEST(AssignSubjectsTest, DeterministicAndOrderIndependent) {
  Rng rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + static_cast<int>(rng.Index(50));
    const std::uint64_t seed = rng.NextU64();
    std::vector<std::string> ids = Ids(n);
    const auto a = AssignSubjects(ids, {}, seed);
    rng.Shuffle(std::span<std::string>(ids));
    const auto b = AssignSubjects(ids, {}, seed);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.size(), static_cast<std::size_t>(n));
  }
}

TEST(AssignSubjectsTest, DifferentSeedsUsuallyDiffer) {
  EXPECT_NE(AssignSubjects(Ids(46), {}, 1), AssignSubjects(Ids(46), {}, 2));
}

// Property: subject exclusivity, epoch conservation and per-epoch routing.
TEST(SplitDatasetTest, ExclusivityAndConservation) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng.Index(10));
    std::vector<SubjectRecording> subjects;
    std::size_t expected_epochs = 0;
    for (int s = 0; s < n; ++s) {
      const std::size_t len = 100 + rng.Index(600);
      subjects.push_back(MakeRecording("s" + std::to_string(s),
                                       s % 2 ? ClassLabel::kPd : ClassLabel::kControl,
                                       2, len, rng.NextU64()));
      expected_epochs += len / 100;
    }
    const DatasetSplit split = SplitDataset(subjects, {}, trial, 0.2);
    EXPECT_EQ(split.train.size() + split.validation.size() + split.test.size(),
              expected_epochs);
    EXPECT_EQ(split.subject_assignment.size(), static_cast<std::size_t>(n));
    for (Partition p : {Partition::kTrain, Partition::kValidation, Partition::kTest}) {
      for (const Epoch& e : split.partition(p)) {
        EXPECT_EQ(split.subject_assignment.at(e.subject_id), p);
      }
    }
    EXPECT_EQ(split.seed, static_cast<std::uint64_t>(trial));
  }
}

TEST(SplitDatasetTest, SameSeedSameSplit) {
  std::vector<SubjectRecording> subjects;
  for (int s = 0; s < 8; ++s) {
    subjects.push_back(MakeRecording("s" + std::to_string(s), ClassLabel::kPd, 1, 300, s));
  }
  const DatasetSplit a = SplitDataset(subjects, {}, 11, 0.2);
  std::reverse(subjects.begin(), subjects.end());
  const DatasetSplit b = SplitDataset(subjects, {}, 11, 0.2);
  EXPECT_EQ(a.subject_assignment, b.subject_assignment);
  ASSERT_EQ(a.train.size(), b.train.size());
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    EXPECT_EQ(a.train[i].subject_id, b.train[i].subject_id);
    EXPECT_EQ(a.train[i].epoch_index, b.train[i].epoch_index);
    EXPECT_EQ(a.train[i].data, b.train[i].data);
  }
}

TEST(SplitEpochsTest, UnlistedSubjectRejected) {
  std::vector<Epoch> epochs;
  epochs.push_back(testing::MakeEpoch(Array2D(1, 4), ClassLabel::kPd, "Z", 0));
  EXPECT_THROW(SplitEpochs(epochs, {"A", "B", "C"}, {}, 0), InvalidArgumentError);
}

}  // namespace
}  // namespace lightconv

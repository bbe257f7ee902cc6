// tests/test_synthgen.cc

// Copyright 2026  spklink authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <map>
#include <set>

#include "spklink/binary_io.h"
#include "spklink/common.h"
#include "spklink/manifest.h"
#include "spklink/metrics.h"
#include "spklink/pipeline.h"
#include "spklink/synthgen.h"

using namespace spklink;
namespace fs = std::filesystem;

namespace {

SynthConfig Small() {
  SynthConfig c;
  c.n_tapes = 100;
  c.speakers_total = 50;
  c.seed = 7;
  c.dim = 16;
  c.tape_duration_mean = 300;
  c.tape_duration_std = 100;
  c.train_speakers = 20;
  return c;
}

std::vector<Segment> ManySpeakers(int tapes, int per_tape, int segments) {
  std::vector<Segment> ref;
  for (int t = 0; t < tapes; ++t)
    for (int k = 0; k < per_tape * segments; ++k)
      ref.push_back({"t" + std::to_string(t), k * 2.0, 2.0,
                     "spk" + std::to_string(t * per_tape + k % per_tape)});
  return ref;
}

}  // namespace

TEST_SUITE("synthgen") {

TEST_CASE("generation is deterministic") {
  const fs::path base = fs::temp_directory_path() / "spklink_synth_det";
  fs::remove_all(base);
  WriteArchive(GenerateArchive(Small()), (base / "a").string());
  WriteArchive(GenerateArchive(Small()), (base / "b").string());
  int files = 0;
  for (const auto &entry : fs::directory_iterator(base / "a")) {
    const std::string name = entry.path().filename().string();
    CHECK(ReadFileBytes(entry.path().string()) ==
          ReadFileBytes((base / "b" / name).string()));
    ++files;
  }
  CHECK(files == 7);
  SynthConfig other = Small();
  other.seed = 8;
  CHECK(GenerateArchive(other).reference != GenerateArchive(Small()).reference);
  fs::remove_all(base);
}

TEST_CASE("archive structure") {
  SynthConfig c = Small();
  SynthArchive a = GenerateArchive(c);
  REQUIRE(a.manifest.entries.size() == 100);
  std::map<std::string, double> duration;
  for (const auto &e : a.manifest.entries) {
    duration[e.tape_id] = e.duration;
    REQUIRE(e.annotated.has_value());
    CHECK(e.annotated->onset >= 0.0);
    CHECK(e.annotated->onset + e.annotated->duration <= e.duration + 1e-9);
  }
  // Reference tiles each tape without overlap.
  std::map<std::string, std::vector<Segment>> by_tape;
  for (const Segment &s : a.reference) by_tape[s.tape_id].push_back(s);
  CHECK(by_tape.size() == 100);
  std::map<std::string, std::set<std::string>> tapes_of;
  for (auto &[tape, segs] : by_tape) {
    int64_t t = 0;
    for (const Segment &s : segs) {
      CHECK(ToMillis(s.onset) == t);
      CHECK(s.duration > 0.0);
      t = ToMillis(s.end());
      tapes_of[s.label].insert(tape);
    }
    CHECK(t == ToMillis(duration[tape]));
  }
  CHECK(tapes_of.size() == 50);
  for (int r = 0; r < c.recurring_speakers; ++r) {
    char name[16];
    std::snprintf(name, sizeof(name), "spk%03d", r);
    CHECK(tapes_of[name].size() >= 2);
  }
  CHECK(a.segment_embeddings.size() == a.hypothesis.size());
  for (const Embedding &e : a.segment_embeddings) {
    double norm = 0.0;
    for (float v : e.vector) norm += double(v) * v;
    CHECK(std::abs(norm - 1.0) < 1e-5);
  }
  REQUIRE(a.known_embeddings.size() == 8);
  CHECK(a.known_embeddings[0].id == "spk000");
  CHECK(a.train_embeddings.size() == 20u * 8u);
  CheckSegmentsAgainstManifest(a.reference, a.manifest);
  CheckSegmentsAgainstManifest(a.hypothesis, a.manifest);
}

TEST_CASE("no stage-1 error means a per-tape relabeling") {
  SynthConfig c = Small();
  c.stage1_split_prob = 0.0;
  c.stage1_label_noise = 0.0;
  SynthArchive a = GenerateArchive(c);
  REQUIRE(a.hypothesis.size() == a.reference.size());
  std::map<std::string, std::string> forward, backward;
  for (std::size_t i = 0; i < a.reference.size(); ++i) {
    const Segment &r = a.reference[i], &h = a.hypothesis[i];
    CHECK(r.tape_id == h.tape_id);
    CHECK(r.onset == h.onset);
    CHECK(r.duration == h.duration);
    auto f = forward.emplace(r.tape_id + "/" + r.label, h.label).first;
    auto b = backward.emplace(h.tape_id + "/" + h.label, r.label).first;
    CHECK(f->second == h.label);
    CHECK(b->second == r.label);
  }
  CHECK(ComputeTapeLevelDer(a.reference, a.hypothesis).der == 0.0);
}

TEST_CASE("split rule") {
  SynthConfig c;
  c.stage1_split_prob = 1.0;
  c.stage1_label_noise = 0.0;
  std::vector<Segment> ref = {{"t", 0, 1, "A"}, {"t", 1, 1, "A"},
                              {"t", 2, 1, "A"}, {"t", 3, 1, "A"}};
  for (uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    std::set<std::string> labels;
    for (const Segment &s : InjectStage1Errors(ref, c, rng)) labels.insert(s.label);
    CHECK(labels.size() == 2);
  }
  // A single segment is cut in two.
  std::mt19937_64 rng(1);
  auto hyp = InjectStage1Errors({{"t", 0, 10, "A"}}, c, rng);
  REQUIRE(hyp.size() == 2);
  CHECK(hyp[0].end() == doctest::Approx(hyp[1].onset));
  CHECK(hyp[0].label != hyp[1].label);
}

TEST_CASE("split probability sets the overclustering ratio") {
  SynthConfig c;
  c.stage1_split_prob = 0.5;
  c.stage1_label_noise = 0.0;
  std::vector<Segment> ref = ManySpeakers(100, 10, 5);
  std::mt19937_64 rng(42);
  auto hyp = InjectStage1Errors(ref, c, rng);
  std::set<std::string> pseudo;
  for (const Segment &s : hyp) pseudo.insert(s.tape_id + "/" + s.label);
  const double ratio = pseudo.size() / 1000.0;
  CHECK(ratio >= 1.45);
  CHECK(ratio <= 1.65);
}

TEST_CASE("stage-1 errors never merge speakers without label noise") {
  SynthConfig c = Small();
  c.stage1_label_noise = 0.0;
  SynthArchive a = GenerateArchive(c);
  std::vector<std::string> truth = TrueSpeakers(a.reference, a.hypothesis);
  std::map<std::string, std::set<std::string>> speakers_of;
  for (std::size_t i = 0; i < a.hypothesis.size(); ++i)
    speakers_of[a.hypothesis[i].tape_id + "/" + a.hypothesis[i].label].insert(
        truth[i]);
  for (const auto &[label, speakers] : speakers_of) CHECK(speakers.size() == 1);
  DerBreakdown d = ComputeTapeLevelDer(a.reference, a.hypothesis);
  CHECK(d.missed == 0.0);
  CHECK(d.false_alarm == 0.0);
}

TEST_CASE("training data recovers the covariance ratio") {
  for (double ratio : {1.0, 2.0}) {
    SynthConfig c = Small();
    c.dim = 32;
    c.train_speakers = 400;
    c.train_per_speaker = 10;
    c.sigma_b_scale = ratio;
    SynthArchive a = GenerateArchive(c);
    TrainedPlda t = TrainPlda(a.train_embeddings);
    const double estimate =
        t.model.between.trace() / t.model.within.trace();
    CHECK(estimate == doctest::Approx(ratio).epsilon(0.15));
  }
}

TEST_CASE("config validation and json") {
  SynthConfig c = Small();
  c.recurring_speakers = 60;
  CHECK_THROWS_AS(GenerateArchive(c), DataError);
  c = Small();
  c.stage1_split_prob = 1.5;
  CHECK_THROWS_AS(GenerateArchive(c), DataError);
  c = Small();
  c.n_tapes = 2;
  c.speakers_total = 500;
  c.segments_max = 40;
  CHECK_THROWS_AS(GenerateArchive(c), DataError);

  c = Small();
  c.stage1_label_noise = 0.125;
  SynthConfig back = SynthConfigFromJson(SynthConfigToJson(c));
  CHECK(SynthConfigToJson(back) == SynthConfigToJson(c));
  CHECK(back.stage1_label_noise == 0.125);
  CHECK(back.seed == 7);
  CHECK(SynthConfigFromJson("{\"seed\": 3}").seed == 3);
  CHECK_THROWS_AS(SynthConfigFromJson("{\"sed\": 3}"), DataError);
  CHECK_THROWS_AS(SynthConfigFromJson("{\"seed\": \"x\"}"), DataError);
  CHECK_THROWS_AS(SynthConfigFromJson("[1]"), DataError);
}

}  // TEST_SUITE

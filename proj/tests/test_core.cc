// tests/test_core.cc

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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>
#include <random>

#include "spklink/common.h"
#include "spklink/evec.h"
#include "spklink/manifest.h"
#include "spklink/merge.h"
#include "spklink/rttm.h"

using namespace spklink;

namespace {

std::string ErrorOf(auto &&fn) {
  try {
    fn();
  } catch (const std::exception &e) {
    return e.what();
  }
  return "";
}

bool Contains(const std::string &s, const std::string &needle) {
  return s.find(needle) != std::string::npos;
}

std::vector<Segment> RandomSegments(std::mt19937_64 &rng, int count) {
  std::uniform_int_distribution<int64_t> ms(0, 4'000'000);
  std::uniform_int_distribution<int64_t> len(1, 60'000);
  std::uniform_int_distribution<int> pick(0, 9);
  std::vector<Segment> out;
  for (int i = 0; i < count; ++i)
    out.push_back({"tape" + std::to_string(pick(rng)), ms(rng) / 1000.0,
                   len(rng) / 1000.0, "S" + std::to_string(pick(rng))});
  return out;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("rttm parses the standard line") {
  auto segs = ParseRttm("SPEAKER t1 1 0.00 5.00 <NA> <NA> S0 <NA> <NA>\n");
  REQUIRE(segs.size() == 1);
  CHECK(segs[0] == Segment{"t1", 0.0, 5.0, "S0"});
}

TEST_CASE("rttm empty input and comments") {
  CHECK(ParseRttm("").empty());
  CHECK(ParseRttm(";; comment\n\n# other\n").empty());
  auto segs = ParseRttm(
      "SPKR-INFO t1 1 <NA> <NA> <NA> unknown S0 <NA> <NA>\n"
      "SPEAKER t1 1 1.5 2.5 <NA> <NA> S0 <NA> <NA>\n");
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].onset == 1.5);
}

TEST_CASE("rttm errors name the line") {
  std::string err = ErrorOf(
      [] { ParseRttm("SPEAKER t1 1 0.0 -1.0 <NA> <NA> S0 <NA> <NA>"); });
  CHECK(Contains(err, "line 1"));
  CHECK(Contains(err, "duration"));
  err = ErrorOf([] {
    ParseRttm("SPEAKER t1 1 0 1 <NA> <NA> S0 <NA> <NA>\nSPEAKER t1 1 0 1\n");
  });
  CHECK(Contains(err, "line 2"));
  err = ErrorOf(
      [] { ParseRttm("SPEAKER t1 1 abc 1.0 <NA> <NA> S0 <NA> <NA>"); });
  CHECK(Contains(err, "line 1"));
  CHECK_THROWS_AS(ParseRttm("SPEAKER t1 1 0 0 <NA> <NA> S0 <NA> <NA>"),
                  DataError);
}

TEST_CASE("rttm emit format and round trip") {
  CHECK(EmitRttm({{"t1", 0.0, 5.0, "S0"}}) ==
        "SPEAKER t1 1 0.000 5.000 <NA> <NA> S0 <NA> <NA>\n");
  CHECK(EmitRttm({}).empty());
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto segs = RandomSegments(rng, 200);
    CHECK(ParseRttm(EmitRttm(segs)) == segs);
  }
}

TEST_CASE("evec round trip is bit exact") {
  std::vector<Embedding> in = {
      {"a", {1.0f, -2.5f, 3.25f, 1e-30f}},
      {"b\xc3\xa9", {0.1f, 0.2f, 0.3f, -0.0f}},
      {"", {7.0f, 8.0f, 9.0f, 10.0f}}};
  auto out = ReadEvec(WriteEvec(in));
  REQUIRE(out.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(out[i].id == in[i].id);
    REQUIRE(out[i].vector.size() == 4);
    CHECK(std::memcmp(out[i].vector.data(), in[i].vector.data(),
                      4 * sizeof(float)) == 0);
  }
  CHECK(ReadEvec(WriteEvec({})).empty());
}

TEST_CASE("evec layout") {
  std::string bytes = WriteEvec({{"ab", {1.0f}}});
  // magic(6) + count(4) + dim(4) + id_len(2) + id(2) + float(4)
  REQUIRE(bytes.size() == 22);
  CHECK(bytes.substr(0, 6) == "EVEC1\n");
  CHECK(bytes[6] == 1);
  CHECK(bytes[10] == 1);
  CHECK(bytes[14] == 2);
  CHECK(bytes.substr(16, 2) == "ab");
  float f;
  std::memcpy(&f, bytes.data() + 18, 4);
  CHECK(f == 1.0f);
}

TEST_CASE("evec errors") {
  CHECK(Contains(ErrorOf([] { ReadEvec("XXXX"); }), "bad magic"));
  std::vector<Embedding> big = {{"x", std::vector<float>(256, 1.0f)}};
  std::string bytes = WriteEvec(big);
  // Claim dim 512 while the record holds 256 floats.
  uint32_t dim = 512;
  std::memcpy(bytes.data() + 10, &dim, 4);
  CHECK(Contains(ErrorOf([&] { ReadEvec(bytes); }), "truncated"));
  CHECK_THROWS_AS(WriteEvec({{"a", {1.0f}}, {"b", {1.0f, 2.0f}}}), DataError);
  CHECK_THROWS_AS(WriteEvec({{"a", {NAN}}}), DataError);
  std::string good = WriteEvec({{"a", {1.0f}}});
  CHECK_THROWS_AS(ReadEvec(good + "x"), DataError);
}

TEST_CASE("manifest round trip and validation") {
  ArchiveManifest m;
  m.entries.push_back({"t1", 100.0, Region{10.0, 20.0}});
  m.entries.push_back({"t2", 50.5, std::nullopt});
  ArchiveManifest back = ParseManifest(EmitManifest(m));
  REQUIRE(back.entries.size() == 2);
  CHECK(back.entries[0].tape_id == "t1");
  CHECK(back.entries[0].annotated->onset == 10.0);
  CHECK(back.entries[0].annotated->duration == 20.0);
  CHECK_FALSE(back.entries[1].annotated.has_value());
  CHECK(back.entries[1].duration == 50.5);

  CHECK_THROWS_AS(ParseManifest("{\"tape_id\":\"a\",\"duration\":1,"
                                "\"annotated\":null}\n"
                                "{\"tape_id\":\"a\",\"duration\":2,"
                                "\"annotated\":null}\n"),
                  DataError);
  CHECK_THROWS_AS(ParseManifest("{\"tape_id\":\"a\",\"duration\":10,"
                                "\"annotated\":[5,6]}\n"),
                  DataError);
  auto regions = AnnotatedRegions(m);
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].tape_id == "t1");

  CHECK_NOTHROW(CheckSegmentsAgainstManifest({{"t1", 90.0, 10.0, "A"}}, m));
  CHECK_THROWS_AS(CheckSegmentsAgainstManifest({{"t1", 95.0, 10.0, "A"}}, m),
                  DataError);
  CHECK_THROWS_AS(CheckSegmentsAgainstManifest({{"t9", 0.0, 1.0, "A"}}, m),
                  DataError);
}

TEST_CASE("merge keeps speakers at the duration floor") {
  std::vector<Segment> segs = {{"t", 0.0, 4.0, "S0"}, {"t", 4.0, 7.0, "S0"}};
  std::unordered_map<std::size_t, Embedding> emb = {
      {0, {"a", {1.0f, 0.0f}}}, {1, {"b", {0.0f, 1.0f}}}};
  MergeResult r = MergePseudoSpeakers(segs, emb, 10.0);
  REQUIRE(r.speakers.size() == 1);
  CHECK(r.speakers[0].id == "t/S0");
  CHECK(r.speakers[0].total_duration == doctest::Approx(11.0));
  // Weighted mean (4, 7)/11, normalized.
  CHECK(r.speakers[0].embedding[0] == doctest::Approx(4.0 / std::sqrt(65.0)));
  CHECK(r.speakers[0].embedding[1] == doctest::Approx(7.0 / std::sqrt(65.0)));
}

TEST_CASE("merge drops speakers below the floor") {
  std::vector<Segment> segs = {{"t1", 0.0, 9.0, "S3"}};
  std::unordered_map<std::size_t, Embedding> emb = {{0, {"a", {1.0f}}}};
  MergeResult r = MergePseudoSpeakers(segs, emb, 10.0);
  CHECK(r.speakers.empty());
  REQUIRE(r.dropped.size() == 1);
  CHECK(r.dropped[0].id == "t1/S3");
  CHECK(r.dropped[0].total_duration == 9.0);
}

TEST_CASE("merge single member is normalized") {
  std::vector<Segment> segs = {{"t", 0.0, 12.0, "S0"}};
  std::unordered_map<std::size_t, Embedding> emb = {{0, {"a", {3.0f, 4.0f}}}};
  MergeResult r = MergePseudoSpeakers(segs, emb, 10.0);
  REQUIRE(r.speakers.size() == 1);
  CHECK(r.speakers[0].embedding[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(r.speakers[0].embedding[1] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("merge errors and properties") {
  std::vector<Segment> segs = {{"t", 0.0, 12.0, "S0"}, {"t", 12.0, 3.0, "S1"}};
  std::unordered_map<std::size_t, Embedding> emb = {{0, {"a", {1.0f}}}};
  std::string err = ErrorOf([&] { MergePseudoSpeakers(segs, emb, 10.0); });
  CHECK(Contains(err, "segment 1"));
  CHECK(Contains(err, "t@12.000"));
  CHECK_THROWS_AS(MergePseudoSpeakers(segs, emb, 0.0), DataError);

  std::mt19937_64 rng(11);
  std::normal_distribution<float> normal;
  std::vector<Segment> many = RandomSegments(rng, 300);
  std::vector<Embedding> vecs;
  for (std::size_t i = 0; i < many.size(); ++i) {
    Embedding e;
    e.id = std::to_string(i);
    for (int k = 0; k < 8; ++k) e.vector.push_back(normal(rng));
    vecs.push_back(e);
  }
  std::unordered_map<std::size_t, Embedding> index;
  for (std::size_t i = 0; i < many.size(); ++i) index[i] = vecs[i];
  MergeResult base = MergePseudoSpeakers(many, index, 10.0);

  std::map<std::string, double> input_per_tape, output_per_tape;
  for (const Segment &s : many) input_per_tape[s.tape_id] += s.duration;
  for (const auto &p : base.speakers) {
    double norm = 0.0;
    for (double v : p.embedding) norm += v * v;
    CHECK(std::abs(std::sqrt(norm) - 1.0) <= 1e-9);
    output_per_tape[p.tape_id] += p.total_duration;
  }
  for (const auto &d : base.dropped) output_per_tape[d.tape_id] += d.total_duration;
  for (const auto &[tape, total] : input_per_tape)
    CHECK(output_per_tape[tape] == doctest::Approx(total).epsilon(1e-12));

  std::vector<std::size_t> perm(many.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Segment> shuffled;
  std::unordered_map<std::size_t, Embedding> shuffled_index;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    shuffled.push_back(many[perm[i]]);
    shuffled_index[i] = vecs[perm[i]];
  }
  MergeResult other = MergePseudoSpeakers(shuffled, shuffled_index, 10.0);
  REQUIRE(other.speakers.size() == base.speakers.size());
  for (std::size_t i = 0; i < base.speakers.size(); ++i) {
    CHECK(other.speakers[i].id == base.speakers[i].id);
    for (std::size_t k = 0; k < 8; ++k)
      CHECK(other.speakers[i].embedding[k] ==
            doctest::Approx(base.speakers[i].embedding[k]).epsilon(1e-12));
  }
}

TEST_CASE("segment embeddings are found by tape and onset") {
  std::vector<Segment> segs = {{"t", 1.5, 12.0, "S0"}};
  auto index = IndexSegmentEmbeddings(segs, {{"t@1.500", {1.0f}}});
  REQUIRE(index.count(0) == 1);
  CHECK(IndexSegmentEmbeddings(segs, {{"t@1.501", {1.0f}}}).empty());
  CHECK_THROWS_AS(
      IndexSegmentEmbeddings(segs, {{"x", {1.0f}}, {"x", {2.0f}}}),
      DataError);
}

TEST_CASE("pseudo-speaker embeddings supplied directly") {
  std::vector<Segment> segs = {{"t", 0.0, 12.0, "S0"}, {"t", 12.0, 3.0, "S1"}};
  MergeResult r = PseudoSpeakersFromEmbeddings(
      segs, {{"t/S0", {0.6f, 0.8f}}}, 10.0);
  REQUIRE(r.speakers.size() == 1);
  CHECK(r.dropped.size() == 1);
  CHECK_THROWS_AS(PseudoSpeakersFromEmbeddings(segs, {}, 10.0), DataError);
  auto known = KnownSpeakers({{"J. de Vries", {1.0f, 0.0f}}});
  CHECK(known[0].kind == SpeakerKind::kKnown);
  CHECK(known[0].id == "J. de Vries");
  CHECK_THROWS_AS(KnownSpeakers({{"a", {1.0f}}, {"a", {1.0f}}}), DataError);
}

}  // TEST_SUITE

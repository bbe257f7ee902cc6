// tests/test_linking.cc

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
#include <filesystem>
#include <fstream>
#include <random>

#include "spklink/clustering.h"
#include "spklink/common.h"
#include "spklink/condensed_matrix.h"
#include "spklink/identities.h"
#include "spklink/similarity.h"
#include "test_util.h"

using namespace spklink;
using testing::AsPartition;

namespace {

std::string TempPath(const std::string &name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

CondensedMatrix ThreeItems() {
  // d(1,2)=1, d(1,3)=5, d(2,3)=4 with items numbered from 1.
  return CondensedMatrix::FromValues(3, {1.0f, 5.0f, 4.0f});
}

std::vector<PseudoSpeaker> RandomItems(std::mt19937_64 &rng, int n, int dim) {
  std::normal_distribution<double> normal;
  std::vector<PseudoSpeaker> items(n);
  for (int i = 0; i < n; ++i) {
    items[i].id = "t" + std::to_string(i) + "/S0";
    items[i].embedding.resize(dim);
    double norm = 0.0;
    for (double &v : items[i].embedding) {
      v = normal(rng);
      norm += v * v;
    }
    for (double &v : items[i].embedding) v /= std::sqrt(norm);
  }
  return items;
}

PseudoSpeaker Item(const std::string &id, SpeakerKind kind) {
  PseudoSpeaker p;
  p.id = id;
  p.kind = kind;
  p.embedding = {1.0};
  return p;
}

}  // namespace

TEST_SUITE("linking") {

TEST_CASE("condensed index is the canonical order") {
  const uint64_t n = 7;
  uint64_t k = 0;
  for (uint64_t i = 0; i < n; ++i)
    for (uint64_t j = i + 1; j < n; ++j)
      CHECK(CondensedMatrix::Index(n, i, j) == k++);
  CHECK(k == CondensedMatrix::NumEntries(n));
  CHECK(CondensedMatrix::NumEntries(811) == 328455);
  CHECK(CondensedMatrix::NumEntries(45288) == 1025478828ull);
}

TEST_CASE("condensed file round trip and disk backing") {
  std::mt19937_64 rng(1);
  CondensedMatrix m = testing::RandomCondensed(rng, 40, false);
  const std::string path = TempPath("spklink_cond_test.cond");
  m.Save(path);
  CHECK(std::filesystem::file_size(path) == 14 + 4 * m.size());
  CondensedMatrix back = ReadCondensedFile(path);
  CHECK(back.ToVector() == m.ToVector());
  CondensedMatrix mapped = CondensedMatrix::OpenFile(path);
  CHECK(mapped.backing() == Backing::kDisk);
  CHECK(mapped.ToVector() == m.ToVector());
  CHECK(mapped.At(5, 3) == m.At(3, 5));

  CondensedMatrix disk =
      m.Clone(Backing::kDisk, TempPath("spklink_clone.cond"), true);
  CHECK(disk.ToVector() == m.ToVector());
  disk.SetPair(2, 1, 42.0f);
  CHECK(disk.At(1, 2) == 42.0f);
  CHECK(m.At(1, 2) != 42.0f);
  std::filesystem::remove(path);

  std::string bad = TempPath("spklink_bad.cond");
  {
    std::ofstream os(bad, std::ios::binary);
    os << "NOPE";
  }
  CHECK_THROWS_AS(CondensedMatrix::OpenFile(bad), DataError);
  std::filesystem::remove(bad);
}

TEST_CASE("similarity of three items") {
  std::mt19937_64 rng(3);
  PldaModel model = testing::RandomPdModel(rng, 6);
  std::vector<PseudoSpeaker> items = RandomItems(rng, 3, 6);
  CondensedMatrix d = BuildSimilarity(PrepareScorer(model), items);
  REQUIRE(d.size() == 3);
  auto vec = [&](int i) {
    return Eigen::Map<const Eigen::VectorXd>(items[i].embedding.data(), 6);
  };
  CHECK(d.At(0, 1) == doctest::Approx(-ScorePair(model, vec(0), vec(1))));
  CHECK(d.At(0, 2) == doctest::Approx(-ScorePair(model, vec(0), vec(2))));
  CHECK(d.At(1, 2) == doctest::Approx(-ScorePair(model, vec(1), vec(2))));
}

TEST_CASE("similarity is independent of block size and threads") {
  std::mt19937_64 rng(5);
  PldaModel model = testing::RandomPdModel(rng, 24);
  FastScorer scorer = PrepareScorer(model);
  std::vector<PseudoSpeaker> items = RandomItems(rng, 200, 24);
  SimilarityOptions small, whole, odd;
  small.block_size = 64;
  whole.block_size = 200;
  odd.block_size = 13;
  std::vector<float> a = BuildSimilarity(scorer, items, small).ToVector();
  std::vector<float> b = BuildSimilarity(scorer, items, whole).ToVector();
  std::vector<float> c = BuildSimilarity(scorer, items, odd).ToVector();
  std::vector<float> ref =
      BuildSimilarityReference(scorer, StackEmbeddings(items)).ToVector();
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a == ref);
}

TEST_CASE("similarity backing choices") {
  std::mt19937_64 rng(6);
  PldaModel model = testing::RandomPdModel(rng, 4);
  FastScorer scorer = PrepareScorer(model);
  std::vector<PseudoSpeaker> items = RandomItems(rng, 811, 4);
  SimilarityOptions opts;
  CondensedMatrix mem = BuildSimilarity(scorer, items, opts);
  CHECK(mem.size() == 328455);
  CHECK(mem.backing() == Backing::kMemory);

  opts.memory_budget_bytes = 1000;
  opts.disk_path = TempPath("spklink_sim_disk.cond");
  opts.remove_disk_file_on_close = true;
  uint64_t last = 0, total = 0;
  opts.progress = [&](uint64_t done, uint64_t all) {
    CHECK(done > last);
    last = done;
    total = all;
  };
  {
    CondensedMatrix disk = BuildSimilarity(scorer, items, opts);
    CHECK(disk.backing() == Backing::kDisk);
    CHECK(disk.ToVector() == mem.ToVector());
    CHECK(std::filesystem::exists(opts.disk_path));
  }
  CHECK_FALSE(std::filesystem::exists(opts.disk_path));
  CHECK(last == 328455);
  CHECK(total == 328455);

  opts.backing = BackingChoice::kMemory;
  opts.progress = nullptr;
  CHECK_THROWS_AS(BuildSimilarity(scorer, items, opts), DataError);
  std::vector<PseudoSpeaker> one(items.begin(), items.begin() + 1);
  CHECK_THROWS_AS(BuildSimilarity(scorer, one), DataError);

  std::vector<PseudoSpeaker> bad = RandomItems(rng, 3, 4);
  bad[1].embedding[2] = std::nan("");
  CHECK_THROWS(BuildSimilarity(scorer, bad));
}

TEST_CASE("complete linkage hand cases") {
  CondensedMatrix d = ThreeItems();
  CHECK(AsPartition(CompleteLinkageCluster(d, 2.0)) ==
        std::set<std::set<int>>{{0, 1}, {2}});
  CHECK(AsPartition(CompleteLinkageCluster(d, 5.0)) ==
        std::set<std::set<int>>{{0, 1, 2}});
  CHECK(AsPartition(CompleteLinkageCluster(d, 4.9)) ==
        std::set<std::set<int>>{{0, 1}, {2}});
  CHECK(CompleteLinkageCluster(d, 0.5) == std::vector<int>{0, 1, 2});
  Dendrogram den = CompleteLinkage(d);
  REQUIRE(den.merges.size() == 2);
  CHECK(den.merges[0].height == 1.0);
  CHECK(den.merges[1].height == 5.0);

  CondensedMatrix two = CondensedMatrix::FromValues(2, {3.0f});
  CHECK(CompleteLinkageCluster(two, 2.9) == std::vector<int>{0, 1});
  CHECK(CompleteLinkageCluster(two, 3.0) == std::vector<int>{0, 0});
  CHECK(BruteForceCluster(two, 2.9) == std::vector<int>{0, 1});
  CHECK(BruteForceCluster(two, 3.0) == std::vector<int>{0, 0});

  CondensedMatrix flat = CondensedMatrix::FromValues(5, std::vector<float>(10, 2.5f));
  CHECK(AsPartition(BruteForceCluster(flat, 2.5)).size() == 1);
  CHECK(AsPartition(CompleteLinkageCluster(flat, 2.5)).size() == 1);
  CHECK_THROWS_AS(CompleteLinkageCluster(CondensedMatrix(), 1.0), DataError);
  CHECK(CompleteLinkageCluster(CondensedMatrix::InMemory(1), 1.0) ==
        std::vector<int>{0});
}

TEST_CASE("complete linkage equals the brute-force oracle") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(2, 64);
  std::uniform_real_distribution<double> tau(-1.0, 11.0);
  for (int trial = 0; trial < 120; ++trial) {
    const bool ties = trial % 2 == 1;
    CondensedMatrix d = testing::RandomCondensed(rng, size(rng), ties);
    Dendrogram den = CompleteLinkage(d);
    std::vector<double> taus;
    for (int t = 0; t < 20; ++t)
      taus.push_back(ties ? std::floor(tau(rng)) : tau(rng));
    std::sort(taus.begin(), taus.end());
    std::vector<int> previous;
    for (double t : taus) {
      std::vector<int> fast = CutDendrogram(den, t);
      std::vector<int> slow = BruteForceCluster(d, t);
      CHECK(AsPartition(fast) == AsPartition(slow));
      if (!previous.empty()) CHECK(testing::Refines(previous, fast));
      previous = fast;
    }
    const std::vector<float> values = d.ToVector();
    const float lo = *std::min_element(values.begin(), values.end());
    CHECK(AsPartition(CutDendrogram(den, lo - 1.0)).size() == d.n());
    CHECK(AsPartition(CutDendrogram(den, den.merges.back().height)).size() == 1);
  }
}

TEST_CASE("linkage does not modify its input and works disk-backed") {
  std::mt19937_64 rng(7);
  CondensedMatrix d = testing::RandomCondensed(rng, 50, true);
  std::vector<float> before = d.ToVector();
  Dendrogram mem = CompleteLinkage(d);
  CHECK(d.ToVector() == before);
  LinkageOptions opts;
  opts.scratch_backing = Backing::kDisk;
  opts.scratch_path = TempPath("spklink_linkage_scratch.cond");
  Dendrogram disk = CompleteLinkage(d, opts);
  REQUIRE(disk.merges.size() == mem.merges.size());
  for (std::size_t i = 0; i < mem.merges.size(); ++i) {
    CHECK(disk.merges[i].a == mem.merges[i].a);
    CHECK(disk.merges[i].b == mem.merges[i].b);
    CHECK(disk.merges[i].height == mem.merges[i].height);
  }
  CHECK_FALSE(std::filesystem::exists(opts.scratch_path));
  CHECK_THROWS_AS(BruteForceCluster(CondensedMatrix::InMemory(2001), 0.0),
                  DataError);
}

TEST_CASE("canonical partition numbering") {
  CHECK(CanonicalPartition({5, 3, 5, 9, 3}) == std::vector<int>{0, 1, 0, 2, 1});
}

TEST_CASE("identity resolution") {
  // Pseudo A with known "J. de Vries".
  std::vector<PseudoSpeaker> items = {Item("t1/S0", SpeakerKind::kPseudo),
                                      Item("J. de Vries", SpeakerKind::kKnown)};
  CondensedMatrix d = CondensedMatrix::FromValues(2, {0.1f});
  LinkingResult r = ResolveIdentities({0, 0}, items, d, 1.0);
  CHECK(r.assignment.at("t1/S0") == "J. de Vries");
  CHECK(r.identified.at("J. de Vries") == "J. de Vries");
  CHECK(r.conflicts.empty());

  r = ResolveIdentities({0, 1}, items, d);
  CHECK(r.assignment.at("t1/S0") == "L0");

  // Pseudo A with K1 and K2: mean d(A,K1) = 0.3 < d(A,K2) = 0.9.
  items = {Item("A", SpeakerKind::kPseudo), Item("K1", SpeakerKind::kKnown),
           Item("K2", SpeakerKind::kKnown)};
  d = CondensedMatrix::FromValues(3, {0.3f, 0.9f, 0.5f});
  r = ResolveIdentities({0, 0, 0}, items, d);
  CHECK(r.assignment.at("A") == "K1");
  CHECK(r.assignment.at("K2") == "K1");
  REQUIRE(r.conflicts.size() == 1);
  CHECK(r.conflicts[0].label == "K1");
  CHECK(r.conflicts[0].known == std::vector<std::string>{"K1", "K2"});
  d = CondensedMatrix::FromValues(3, {0.9f, 0.3f, 0.5f});
  CHECK(ResolveIdentities({0, 0, 0}, items, d).assignment.at("A") == "K2");

  std::mt19937_64 rng(4);
  std::vector<PseudoSpeaker> many = RandomItems(rng, 30, 3);
  for (int i = 0; i < 30; i += 7) many[i].kind = SpeakerKind::kKnown;
  CondensedMatrix dm = testing::RandomCondensed(rng, 30, false);
  r = ResolveIdentities(CompleteLinkageCluster(dm, 5.0), many, dm);
  CHECK(r.assignment.size() == 30);
  for (const auto &p : many) CHECK(r.assignment.count(p.id) == 1);
  for (const auto &[label, name] : r.identified) {
    bool used = false;
    for (const auto &[id, l] : r.assignment) used |= l == label;
    CHECK(used);
  }
}

TEST_CASE("apply linking") {
  LinkingResult r;
  r.assignment = {{"t1/S0", "L0"}, {"t2/S0", "L0"}, {"t2/S1", "Jan"}};
  r.identified = {{"Jan", "Jan"}};
  std::vector<Segment> segs = {{"t1", 0, 1, "S0"},
                               {"t2", 0, 1, "S0"},
                               {"t2", 1, 1, "S1"},
                               {"t1", 1, 9, "S3"}};
  auto out = ApplyLinking(r, segs);
  CHECK(out[0].label == "L0");
  CHECK(out[1].label == "L0");
  CHECK(out[2].label == "Jan");
  CHECK(out[3].label == "unlinked:t1/S3");
  CHECK(out[3].onset == 1.0);
  CHECK(QualifyLabels(segs)[2].label == "t2/S1");
}

TEST_CASE("linking json round trip") {
  LinkingResult r;
  r.assignment = {{"t1/S0", "L0"}, {"t2/S1", "Jan"}, {"Jan", "Jan"}};
  r.identified = {{"Jan", "Jan"}};
  const std::string text = EmitLinkingJson(r);
  CHECK(text.find("{\"pseudo\":\"t1/S0\",\"label\":\"L0\",\"known\":null}") !=
        std::string::npos);
  LinkingResult back = ParseLinkingJson(text);
  CHECK(back.assignment == r.assignment);
  CHECK(back.identified == r.identified);
  CHECK_THROWS_AS(ParseLinkingJson("{\"pseudo\": 1}\n"), DataError);
}

}  // TEST_SUITE

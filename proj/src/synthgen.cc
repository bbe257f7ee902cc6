// src/synthgen.cc

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

#include "spklink/synthgen.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numeric>

#include <json.hpp>

#include "spklink/common.h"
#include "spklink/evec.h"
#include "spklink/manifest.h"
#include "spklink/merge.h"
#include "spklink/rttm.h"

namespace spklink {

namespace {

std::string SpeakerName(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "spk%03d", index);
  return buf;
}

std::vector<double> DrawIdentity(std::mt19937_64 &rng, int dim, double scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(scale);
  std::vector<double> y(dim);
  for (double &v : y) v = sd * normal(rng);
  return y;
}

// One observation y + e, e ~ N(0, scale I), scaled to unit length.
std::vector<double> DrawObservation(std::mt19937_64 &rng,
                                    const std::vector<double> &identity,
                                    double scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(scale);
  std::vector<double> x(identity.size());
  double norm2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = identity[k] + sd * normal(rng);
    norm2 += x[k] * x[k];
  }
  const double norm = std::sqrt(norm2);
  for (double &v : x) v /= norm;
  return x;
}

Embedding ToEmbedding(std::string id, const std::vector<double> &x) {
  Embedding e;
  e.id = std::move(id);
  e.vector.assign(x.begin(), x.end());
  return e;
}

// Log-normal with the given mean and standard deviation.
double DrawLogNormal(std::mt19937_64 &rng, double mean, double sd) {
  const double sigma2 = std::log(1.0 + (sd * sd) / (mean * mean));
  std::lognormal_distribution<double> dist(std::log(mean) - 0.5 * sigma2,
                                           std::sqrt(sigma2));
  return dist(rng);
}

std::vector<int> SampleDistinct(std::mt19937_64 &rng, int population, int k) {
  std::vector<int> pool(population);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, population - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

Segment MakeSegment(const std::string &tape, int64_t on_ms, int64_t off_ms,
                    std::string label) {
  return Segment{tape, on_ms / 1000.0, (off_ms - on_ms) / 1000.0,
                 std::move(label)};
}

}  // namespace

void ValidateSynthConfig(const SynthConfig &c) {
  auto require = [](bool ok, const std::string &what) {
    if (!ok) throw DataError("synth config: " + what);
  };
  require(c.dim > 0, "dim must be positive");
  require(c.n_tapes > 0, "n_tapes must be positive");
  require(c.speakers_total > 0, "speakers_total must be positive");
  require(c.recurring_speakers >= 0 &&
              c.recurring_speakers <= c.speakers_total,
          "recurring_speakers must be in [0, speakers_total]");
  require(c.recurring_speakers == 0 || c.n_tapes >= 2,
          "recurring speakers need at least 2 tapes");
  require(c.recurring_speakers > 0 ||
              c.speakers_total - c.recurring_speakers >= c.n_tapes,
          "not enough speakers to put one on every tape");
  require(c.recurring_mean_tapes >= 2.0, "recurring_mean_tapes must be >= 2");
  require(c.known_speakers >= 0 && c.known_speakers <= c.speakers_total,
          "known_speakers must be in [0, speakers_total]");
  require(c.enrollment_per_known > 0, "enrollment_per_known must be positive");
  require(c.tape_duration_mean > 0.0 && c.tape_duration_std >= 0.0,
          "tape duration parameters must be positive");
  require(c.segments_min > 0 && c.segments_max >= c.segments_min,
          "segments range must be positive and ordered");
  require(c.sigma_b_scale > 0.0 && c.sigma_w_scale > 0.0,
          "covariance scales must be positive");
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  require(prob(c.stage1_split_prob), "stage1_split_prob must be in [0, 1]");
  require(prob(c.stage1_label_noise), "stage1_label_noise must be in [0, 1]");
  require(prob(c.annotated_fraction), "annotated_fraction must be in [0, 1]");
  require(c.stage1_split_share_min > 0.0 &&
              c.stage1_split_share_max >= c.stage1_split_share_min &&
              c.stage1_split_share_max <= 0.5,
          "split share range must lie in (0, 0.5]");
  require(c.train_speakers >= 0 && c.train_per_speaker > 0,
          "training set sizes must be non-negative");
  // Each tape hosts at most segments_max speakers.
  require(static_cast<double>(c.speakers_total - c.recurring_speakers) +
                  c.recurring_speakers * 2.0 <=
              static_cast<double>(c.n_tapes) * c.segments_max,
          "more speakers than the tapes can host");
}

std::vector<Segment> InjectStage1Errors(const std::vector<Segment> &reference,
                                        const SynthConfig &config,
                                        std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::map<std::string, std::vector<std::size_t>> by_tape;
  for (std::size_t i = 0; i < reference.size(); ++i)
    by_tape[reference[i].tape_id].push_back(i);

  std::vector<Segment> hypothesis;
  for (auto &[tape, indices] : by_tape) {
    std::sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
      return reference[a].onset < reference[b].onset;
    });
    // Speakers in order of first appearance on the tape.
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::size_t>> segs_of;
    for (std::size_t i : indices) {
      auto &list = segs_of[reference[i].label];
      if (list.empty()) order.push_back(reference[i].label);
      list.push_back(i);
    }
    int next_label = 0;
    auto fresh = [&]() { return "S" + std::to_string(next_label++); };
    std::vector<Segment> tape_hyp;
    for (const std::string &speaker : order) {
      const auto &segs = segs_of[speaker];
      const std::string major = fresh();
      if (unit(rng) >= config.stage1_split_prob) {
        for (std::size_t i : segs) {
          Segment s = reference[i];
          s.label = major;
          tape_hyp.push_back(std::move(s));
        }
        continue;
      }
      const std::string minor = fresh();
      std::uniform_real_distribution<double> share_dist(
          config.stage1_split_share_min, config.stage1_split_share_max);
      const double share = share_dist(rng);
      if (segs.size() == 1) {
        // Cut the single segment in two at the share point.
        const Segment &r = reference[segs[0]];
        const int64_t on = std::llround(r.onset * 1000.0);
        const int64_t off = std::llround(r.end() * 1000.0);
        int64_t cut = off - std::llround((off - on) * share);
        cut = std::clamp<int64_t>(cut, on + 1, off - 1);
        if (off - on < 2) {
          tape_hyp.push_back(MakeSegment(tape, on, off, major));
          continue;
        }
        tape_hyp.push_back(MakeSegment(tape, on, cut, major));
        tape_hyp.push_back(MakeSegment(tape, cut, off, minor));
        continue;
      }
      std::vector<bool> to_minor(segs.size());
      std::size_t num_minor = 0;
      for (std::size_t k = 0; k < segs.size(); ++k) {
        to_minor[k] = unit(rng) < share;
        num_minor += to_minor[k];
      }
      std::uniform_int_distribution<std::size_t> pick(0, segs.size() - 1);
      if (num_minor == 0) to_minor[pick(rng)] = true;
      if (num_minor == segs.size()) to_minor[pick(rng)] = false;
      for (std::size_t k = 0; k < segs.size(); ++k) {
        Segment s = reference[segs[k]];
        s.label = to_minor[k] ? minor : major;
        tape_hyp.push_back(std::move(s));
      }
    }
    if (next_label > 1 && config.stage1_label_noise > 0.0) {
      std::uniform_int_distribution<int> other(0, next_label - 2);
      for (Segment &s : tape_hyp) {
        if (unit(rng) >= config.stage1_label_noise) continue;
        const int current = std::stoi(s.label.substr(1));
        int replacement = other(rng);
        if (replacement >= current) ++replacement;
        s.label = "S" + std::to_string(replacement);
      }
    }
    std::sort(tape_hyp.begin(), tape_hyp.end(),
              [](const Segment &a, const Segment &b) {
                return a.onset < b.onset;
              });
    for (Segment &s : tape_hyp) hypothesis.push_back(std::move(s));
  }
  return hypothesis;
}

std::vector<std::string> TrueSpeakers(const std::vector<Segment> &reference,
                                      const std::vector<Segment> &hypothesis) {
  std::map<std::string, std::vector<const Segment *>> by_tape;
  for (const Segment &s : reference) by_tape[s.tape_id].push_back(&s);
  for (auto &[tape, segs] : by_tape)
    std::sort(segs.begin(), segs.end(),
              [](const Segment *a, const Segment *b) {
                return a->onset < b->onset;
              });
  std::vector<std::string> out;
  out.reserve(hypothesis.size());
  for (const Segment &h : hypothesis) {
    auto it = by_tape.find(h.tape_id);
    if (it == by_tape.end())
      throw DataError("hypothesis tape '" + h.tape_id + "' has no reference");
    const auto &segs = it->second;
    const int64_t on = std::llround(h.onset * 1000.0);
    auto pos = std::upper_bound(segs.begin(), segs.end(), on,
                                [](int64_t t, const Segment *s) {
                                  return t < std::llround(s->onset * 1000.0);
                                });
    if (pos == segs.begin())
      throw DataError("hypothesis segment at " + std::to_string(h.onset) +
                      " on '" + h.tape_id + "' precedes all reference speech");
    out.push_back((*std::prev(pos))->label);
  }
  return out;
}

SynthArchive GenerateArchive(const SynthConfig &c) {
  ValidateSynthConfig(c);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);

  std::vector<std::vector<double>> identities;
  identities.reserve(c.speakers_total);
  for (int s = 0; s < c.speakers_total; ++s)
    identities.push_back(DrawIdentity(rng, c.dim, c.sigma_b_scale));

  SynthArchive archive;
  std::vector<std::string> tape_ids(c.n_tapes);
  std::vector<int64_t> tape_ms(c.n_tapes);
  for (int t = 0; t < c.n_tapes; ++t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "tape%04d", t);
    tape_ids[t] = buf;
    double seconds =
        c.tape_duration_std > 0.0
            ? DrawLogNormal(rng, c.tape_duration_mean, c.tape_duration_std)
            : c.tape_duration_mean;
    seconds = std::max(seconds, 2.0 * c.segments_max);
    tape_ms[t] = std::llround(seconds * 1000.0);
  }

  // Speakers per tape: recurring speakers on a heavy-tailed number of tapes,
  // the rest once each, spread evenly.
  std::vector<std::vector<int>> on_tape(c.n_tapes);
  for (int r = 0; r < c.recurring_speakers; ++r) {
    double draw = DrawLogNormal(rng, c.recurring_mean_tapes,
                                c.recurring_mean_tapes);
    int k = std::clamp(static_cast<int>(std::lround(draw)), 2, c.n_tapes);
    for (int t : SampleDistinct(rng, c.n_tapes, k)) on_tape[t].push_back(r);
  }
  std::vector<int> tape_order = SampleDistinct(rng, c.n_tapes, c.n_tapes);
  std::shuffle(tape_order.begin(), tape_order.end(), rng);
  for (int s = c.recurring_speakers; s < c.speakers_total; ++s)
    on_tape[tape_order[(s - c.recurring_speakers) % c.n_tapes]].push_back(s);
  for (int t = 0; t < c.n_tapes; ++t) {
    if (!on_tape[t].empty()) continue;
    std::uniform_int_distribution<int> pick(0, c.recurring_speakers - 1);
    on_tape[t].push_back(pick(rng));
  }

  for (int t = 0; t < c.n_tapes; ++t) {
    const std::vector<int> &speakers = on_tape[t];
    std::uniform_int_distribution<int> count_dist(c.segments_min,
                                                  c.segments_max);
    const int num_segments =
        std::max<int>(count_dist(rng), static_cast<int>(speakers.size()));
    std::vector<double> weights(num_segments);
    double total = 0.0;
    for (double &w : weights) total += (w = 0.3 + expo(rng));
    std::vector<int64_t> bounds(num_segments + 1, 0);
    double cum = 0.0;
    for (int k = 0; k < num_segments; ++k) {
      cum += weights[k];
      bounds[k + 1] = std::llround(cum / total * tape_ms[t]);
    }
    bounds[num_segments] = tape_ms[t];

    std::vector<double> dominance(speakers.size());
    for (double &d : dominance) d = 0.5 + unit(rng);
    std::discrete_distribution<int> pick_speaker(dominance.begin(),
                                                 dominance.end());
    std::vector<int> owner(num_segments, -1);
    std::vector<int> positions = SampleDistinct(rng, num_segments, num_segments);
    std::shuffle(positions.begin(), positions.end(), rng);
    for (std::size_t k = 0; k < speakers.size(); ++k)
      owner[positions[k]] = speakers[k];
    for (int k = 0; k < num_segments; ++k)
      if (owner[k] < 0) owner[k] = speakers[pick_speaker(rng)];
    for (int k = 0; k < num_segments; ++k)
      archive.reference.push_back(MakeSegment(tape_ids[t], bounds[k],
                                              bounds[k + 1],
                                              SpeakerName(owner[k])));

    ManifestEntry entry;
    entry.tape_id = tape_ids[t];
    entry.duration = tape_ms[t] / 1000.0;
    if (c.annotated_fraction > 0.0) {
      const int64_t length =
          std::llround(c.annotated_fraction * static_cast<double>(tape_ms[t]));
      std::uniform_int_distribution<int64_t> start(0, tape_ms[t] - length);
      const int64_t on = start(rng);
      entry.annotated = Region{on / 1000.0, length / 1000.0};
    }
    archive.manifest.entries.push_back(std::move(entry));
  }

  archive.hypothesis = InjectStage1Errors(archive.reference, c, rng);

  std::map<std::string, int> speaker_index;
  for (int s = 0; s < c.speakers_total; ++s) speaker_index[SpeakerName(s)] = s;
  const std::vector<std::string> truth =
      TrueSpeakers(archive.reference, archive.hypothesis);
  archive.segment_embeddings.reserve(archive.hypothesis.size());
  for (std::size_t i = 0; i < archive.hypothesis.size(); ++i) {
    const auto &identity = identities[speaker_index.at(truth[i])];
    archive.segment_embeddings.push_back(
        ToEmbedding(SegmentEmbeddingId(archive.hypothesis[i]),
                    DrawObservation(rng, identity, c.sigma_w_scale)));
  }

  // Known speakers: enrollment from held-out draws of the same identity.
  for (int s = 0; s < c.known_speakers; ++s) {
    std::vector<double> mean(c.dim, 0.0);
    for (int k = 0; k < c.enrollment_per_known; ++k) {
      std::vector<double> x = DrawObservation(rng, identities[s],
                                              c.sigma_w_scale);
      for (int d = 0; d < c.dim; ++d) mean[d] += x[d];
    }
    double norm = 0.0;
    for (double v : mean) norm += v * v;
    norm = std::sqrt(norm);
    for (double &v : mean) v /= norm;
    archive.known_embeddings.push_back(ToEmbedding(SpeakerName(s), mean));
  }

  for (int s = 0; s < c.train_speakers; ++s) {
    std::vector<double> identity = DrawIdentity(rng, c.dim, c.sigma_b_scale);
    char name[32];
    std::snprintf(name, sizeof(name), "train%04d", s);
    for (int k = 0; k < c.train_per_speaker; ++k)
      archive.train_embeddings.push_back(
          ToEmbedding(std::string(name) + "/" + std::to_string(k),
                      DrawObservation(rng, identity, c.sigma_w_scale)));
  }

  archive.truth.mu = Eigen::VectorXd::Zero(c.dim);
  archive.truth.between =
      c.sigma_b_scale * Eigen::MatrixXd::Identity(c.dim, c.dim);
  archive.truth.within =
      c.sigma_w_scale * Eigen::MatrixXd::Identity(c.dim, c.dim);
  return archive;
}

void WriteArchive(const SynthArchive &archive, const std::string &dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  WriteManifestFile((base / "manifest.jsonl").string(), archive.manifest);
  WriteRttmFile((base / "reference.rttm").string(), archive.reference);
  WriteRttmFile((base / "hypothesis.rttm").string(), archive.hypothesis);
  WriteEvecFile((base / "segments.evec").string(), archive.segment_embeddings);
  WriteEvecFile((base / "known.evec").string(), archive.known_embeddings);
  WriteEvecFile((base / "train.evec").string(), archive.train_embeddings);
  PreprocessParams none;
  none.mean = Eigen::VectorXd::Zero(archive.truth.Dim());
  WritePldaFile((base / "truth.plda").string(), archive.truth, none);
}

#define SPKLINK_SYNTH_FIELDS(X)                                            \
  X(seed) X(dim) X(n_tapes) X(speakers_total) X(recurring_speakers)        \
  X(recurring_mean_tapes) X(known_speakers) X(enrollment_per_known)        \
  X(tape_duration_mean) X(tape_duration_std) X(segments_min)               \
  X(segments_max) X(sigma_b_scale) X(sigma_w_scale) X(stage1_split_prob)   \
  X(stage1_split_share_min) X(stage1_split_share_max)                      \
  X(stage1_label_noise) X(annotated_fraction) X(train_speakers)            \
  X(train_per_speaker)

SynthConfig SynthConfigFromJson(const std::string &json_text) {
  SynthConfig config;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("synth config: ") + e.what());
  }
  if (!j.is_object()) throw DataError("synth config: expected a JSON object");
  for (const auto &[key, value] : j.items()) {
    bool known = false;
#define X(name)                                                      \
    if (key == #name) {                                              \
      try {                                                          \
        config.name = value.get<decltype(config.name)>();            \
      } catch (const nlohmann::json::exception &e) {                 \
        throw DataError("synth config: field '" #name "': " +        \
                        std::string(e.what()));                      \
      }                                                              \
      known = true;                                                  \
    }
    SPKLINK_SYNTH_FIELDS(X)
#undef X
    if (!known) throw DataError("synth config: unknown field '" + key + "'");
  }
  return config;
}

std::string SynthConfigToJson(const SynthConfig &config) {
  nlohmann::ordered_json j;
#define X(name) j[#name] = config.name;
  SPKLINK_SYNTH_FIELDS(X)
#undef X
  return j.dump(2) + "\n";
}

}  // namespace spklink

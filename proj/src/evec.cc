// src/evec.cc

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

#include "spklink/evec.h"

#include <cmath>
#include <cstring>
#include <limits>

#include "spklink/binary_io.h"
#include "spklink/common.h"

namespace spklink {

namespace {
constexpr std::string_view kEvecMagic = "EVEC1\n";
}

std::size_t CheckEmbeddings(const std::vector<Embedding> &embeddings) {
  if (embeddings.empty()) return 0;
  std::size_t dim = embeddings.front().dim();
  for (const Embedding &e : embeddings) {
    if (e.dim() != dim)
      throw DataError("embedding '" + e.id + "' has dimension " +
                      std::to_string(e.dim()) + ", expected " +
                      std::to_string(dim));
    for (float v : e.vector)
      if (!std::isfinite(v))
        throw DataError("embedding '" + e.id + "' has a non-finite value");
  }
  return dim;
}

std::string WriteEvec(const std::vector<Embedding> &embeddings) {
  std::size_t dim = CheckEmbeddings(embeddings);
  if (embeddings.size() > std::numeric_limits<uint32_t>::max())
    throw DataError("too many embeddings for EVEC1");
  std::string out(kEvecMagic);
  AppendLE<uint32_t>(&out, static_cast<uint32_t>(embeddings.size()));
  AppendLE<uint32_t>(&out, static_cast<uint32_t>(dim));
  out.reserve(out.size() + embeddings.size() * (dim * 4 + 16));
  for (const Embedding &e : embeddings) {
    if (e.id.size() > std::numeric_limits<uint16_t>::max())
      throw DataError("embedding id too long: " + e.id.substr(0, 32) + "...");
    AppendLE<uint16_t>(&out, static_cast<uint16_t>(e.id.size()));
    out += e.id;
    for (float v : e.vector) AppendLE<float>(&out, v);
  }
  return out;
}

std::vector<Embedding> ReadEvec(std::string_view bytes) {
  if (bytes.substr(0, kEvecMagic.size()) != kEvecMagic)
    throw DataError("EVEC1: bad magic");
  ByteReader reader(bytes.substr(kEvecMagic.size()), "EVEC1");
  uint32_t count = reader.Read<uint32_t>();
  uint32_t dim = reader.Read<uint32_t>();
  std::vector<Embedding> out;
  out.reserve(std::min<std::size_t>(count, reader.remaining() / 2 + 1));
  for (uint32_t r = 0; r < count; ++r) {
    Embedding e;
    uint16_t id_len = reader.Read<uint16_t>();
    e.id = std::string(reader.ReadBytes(id_len));
    std::string_view payload = reader.ReadBytes(std::size_t(dim) * 4);
    e.vector.resize(dim);
    std::memcpy(e.vector.data(), payload.data(), payload.size());
    for (float v : e.vector)
      if (!std::isfinite(v))
        throw DataError("EVEC1 record " + std::to_string(r) + " ('" + e.id +
                        "'): non-finite value");
    out.push_back(std::move(e));
  }
  if (reader.remaining() != 0)
    throw DataError("EVEC1: " + std::to_string(reader.remaining()) +
                    " trailing bytes after " + std::to_string(count) +
                    " records (dimension mismatch?)");
  return out;
}

std::vector<Embedding> ReadEvecFile(const std::string &path) {
  std::string bytes = ReadFileBytes(path);
  try {
    return ReadEvec(bytes);
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what());
  }
}

void WriteEvecFile(const std::string &path,
                   const std::vector<Embedding> &embeddings) {
  WriteFileBytes(path, WriteEvec(embeddings));
}

}  // namespace spklink

// include/spklink/condensed_matrix.h

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

#ifndef SPKLINK_CONDENSED_MATRIX_H_
#define SPKLINK_CONDENSED_MATRIX_H_

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace spklink {

enum class Backing { kMemory, kDisk };

// Upper triangle (i < j) of a symmetric n x n distance matrix in the
// canonical condensed order, stored as 32-bit floats either in memory or in
// a memory-mapped COND1 file:
//   "COND1\n" | u64 n | n(n-1)/2 x f32, little-endian.
// Element access goes through memcpy because the float payload in a COND1
// file starts at byte 14 and is not 4-byte aligned.
class CondensedMatrix {
 public:
  CondensedMatrix() = default;
  ~CondensedMatrix();
  CondensedMatrix(CondensedMatrix &&other) noexcept;
  CondensedMatrix &operator=(CondensedMatrix &&other) noexcept;
  CondensedMatrix(const CondensedMatrix &) = delete;
  CondensedMatrix &operator=(const CondensedMatrix &) = delete;

  static CondensedMatrix InMemory(uint64_t n);
  static CondensedMatrix FromValues(uint64_t n, const std::vector<float> &v);
  // Creates (truncating) a COND1 file of the right size and maps it
  // read-write. If `remove_on_close`, the file is unlinked on destruction.
  static CondensedMatrix CreateFile(const std::string &path, uint64_t n,
                                    bool remove_on_close = false);
  // Maps an existing COND1 file.
  static CondensedMatrix OpenFile(const std::string &path,
                                  bool writable = false);

  static uint64_t NumEntries(uint64_t n) { return n * (n - 1) / 2; }
  static uint64_t Index(uint64_t n, uint64_t i, uint64_t j) {
    return n * i - i * (i + 1) / 2 + (j - i - 1);
  }

  uint64_t n() const { return n_; }
  uint64_t size() const { return NumEntries(n_); }
  Backing backing() const { return backing_; }
  const std::string &path() const { return path_; }

  float operator[](uint64_t k) const {
    float v;
    std::memcpy(&v, data_ + k * sizeof(float), sizeof(float));
    return v;
  }
  void Set(uint64_t k, float v) {
    std::memcpy(data_ + k * sizeof(float), &v, sizeof(float));
  }
  // Distance between items i != j in either order.
  float At(uint64_t i, uint64_t j) const {
    return i < j ? (*this)[Index(n_, i, j)] : (*this)[Index(n_, j, i)];
  }
  void SetPair(uint64_t i, uint64_t j, float v) {
    Set(i < j ? Index(n_, i, j) : Index(n_, j, i), v);
  }
  void WriteRun(uint64_t k, const float *src, uint64_t count) {
    std::memcpy(data_ + k * sizeof(float), src, count * sizeof(float));
  }
  void ReadRun(uint64_t k, float *dst, uint64_t count) const {
    std::memcpy(dst, data_ + k * sizeof(float), count * sizeof(float));
  }

  std::vector<float> ToVector() const;
  // Writes a COND1 file; for a disk-backed matrix at the same path this
  // just flushes the mapping.
  void Save(const std::string &path) const;
  void Flush() const;
  // Deep copy, in memory or into a scratch COND1 file at `scratch_path`.
  CondensedMatrix Clone(Backing backing, const std::string &scratch_path = {},
                        bool remove_on_close = true) const;

 private:
  void Release();

  uint64_t n_ = 0;
  Backing backing_ = Backing::kMemory;
  std::vector<float> memory_;
  unsigned char *data_ = nullptr;
  unsigned char *map_base_ = nullptr;
  std::size_t map_length_ = 0;
  int fd_ = -1;
  std::string path_;
  bool remove_on_close_ = false;
};

CondensedMatrix ReadCondensedFile(const std::string &path);

}  // namespace spklink

#endif  // SPKLINK_CONDENSED_MATRIX_H_

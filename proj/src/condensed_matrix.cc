// src/condensed_matrix.cc

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

#include "spklink/condensed_matrix.h"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <fstream>
#include <string_view>
#include <utility>

#include "spklink/binary_io.h"
#include "spklink/common.h"

namespace spklink {

namespace {

constexpr std::string_view kCondMagic = "COND1\n";
constexpr std::size_t kHeaderBytes = 6 + sizeof(uint64_t);

std::string Errno(const std::string &what, const std::string &path) {
  return what + " " + path + ": " + std::strerror(errno);
}

}  // namespace

CondensedMatrix::~CondensedMatrix() { Release(); }

CondensedMatrix::CondensedMatrix(CondensedMatrix &&other) noexcept {
  *this = std::move(other);
}

CondensedMatrix &CondensedMatrix::operator=(CondensedMatrix &&other) noexcept {
  if (this == &other) return *this;
  Release();
  n_ = std::exchange(other.n_, 0);
  backing_ = other.backing_;
  memory_ = std::move(other.memory_);
  map_base_ = std::exchange(other.map_base_, nullptr);
  map_length_ = std::exchange(other.map_length_, 0);
  fd_ = std::exchange(other.fd_, -1);
  path_ = std::move(other.path_);
  remove_on_close_ = std::exchange(other.remove_on_close_, false);
  data_ = backing_ == Backing::kMemory
              ? reinterpret_cast<unsigned char *>(memory_.data())
              : map_base_ + kHeaderBytes;
  other.data_ = nullptr;
  return *this;
}

void CondensedMatrix::Release() {
  if (map_base_) munmap(map_base_, map_length_);
  if (fd_ >= 0) close(fd_);
  if (remove_on_close_ && !path_.empty()) unlink(path_.c_str());
  map_base_ = nullptr;
  map_length_ = 0;
  fd_ = -1;
  data_ = nullptr;
  remove_on_close_ = false;
  memory_.clear();
  memory_.shrink_to_fit();
}

CondensedMatrix CondensedMatrix::InMemory(uint64_t n) {
  CondensedMatrix m;
  m.n_ = n;
  m.backing_ = Backing::kMemory;
  m.memory_.assign(NumEntries(n), 0.0f);
  m.data_ = reinterpret_cast<unsigned char *>(m.memory_.data());
  return m;
}

CondensedMatrix CondensedMatrix::FromValues(uint64_t n,
                                            const std::vector<float> &v) {
  if (v.size() != NumEntries(n))
    throw DataError("condensed matrix: expected " +
                    std::to_string(NumEntries(n)) + " values, got " +
                    std::to_string(v.size()));
  CondensedMatrix m = InMemory(n);
  m.memory_ = v;
  m.data_ = reinterpret_cast<unsigned char *>(m.memory_.data());
  return m;
}

CondensedMatrix CondensedMatrix::CreateFile(const std::string &path,
                                            uint64_t n, bool remove_on_close) {
  CondensedMatrix m;
  m.n_ = n;
  m.backing_ = Backing::kDisk;
  m.path_ = path;
  m.map_length_ = kHeaderBytes + NumEntries(n) * sizeof(float);
  m.fd_ = open(path.c_str(), O_RDWR | O_CREAT | O_TRUNC, 0644);
  if (m.fd_ < 0) throw DataError(Errno("cannot create", path));
  m.remove_on_close_ = remove_on_close;
  if (ftruncate(m.fd_, static_cast<off_t>(m.map_length_)) != 0)
    throw DataError(Errno("cannot size", path));
  void *base = mmap(nullptr, m.map_length_, PROT_READ | PROT_WRITE,
                    MAP_SHARED, m.fd_, 0);
  if (base == MAP_FAILED) throw DataError(Errno("cannot map", path));
  m.map_base_ = static_cast<unsigned char *>(base);
  std::memcpy(m.map_base_, kCondMagic.data(), kCondMagic.size());
  std::memcpy(m.map_base_ + kCondMagic.size(), &n, sizeof(uint64_t));
  m.data_ = m.map_base_ + kHeaderBytes;
  return m;
}

CondensedMatrix CondensedMatrix::OpenFile(const std::string &path,
                                          bool writable) {
  CondensedMatrix m;
  m.backing_ = Backing::kDisk;
  m.path_ = path;
  m.fd_ = open(path.c_str(), writable ? O_RDWR : O_RDONLY);
  if (m.fd_ < 0) throw DataError(Errno("cannot open", path));
  struct stat st;
  if (fstat(m.fd_, &st) != 0) throw DataError(Errno("cannot stat", path));
  const std::size_t file_size = static_cast<std::size_t>(st.st_size);
  if (file_size < kHeaderBytes)
    throw DataError(path + ": COND1: truncated header");
  char header[kHeaderBytes];
  if (pread(m.fd_, header, kHeaderBytes, 0) !=
      static_cast<ssize_t>(kHeaderBytes))
    throw DataError(Errno("cannot read", path));
  if (std::string_view(header, kCondMagic.size()) != kCondMagic)
    throw DataError(path + ": COND1: bad magic");
  std::memcpy(&m.n_, header + kCondMagic.size(), sizeof(uint64_t));
  m.map_length_ = kHeaderBytes + NumEntries(m.n_) * sizeof(float);
  if (m.n_ < 2 || file_size != m.map_length_)
    throw DataError(path + ": COND1: size " + std::to_string(file_size) +
                    " does not match n = " + std::to_string(m.n_));
  void *base = mmap(nullptr, m.map_length_,
                    writable ? PROT_READ | PROT_WRITE : PROT_READ, MAP_SHARED,
                    m.fd_, 0);
  if (base == MAP_FAILED) throw DataError(Errno("cannot map", path));
  m.map_base_ = static_cast<unsigned char *>(base);
  m.data_ = m.map_base_ + kHeaderBytes;
  return m;
}

std::vector<float> CondensedMatrix::ToVector() const {
  std::vector<float> out(size());
  if (!out.empty()) ReadRun(0, out.data(), out.size());
  return out;
}

void CondensedMatrix::Flush() const {
  if (map_base_ && msync(map_base_, map_length_, MS_SYNC) != 0)
    throw DataError(Errno("cannot flush", path_));
}

void CondensedMatrix::Save(const std::string &path) const {
  if (backing_ == Backing::kDisk && path == path_) {
    Flush();
    return;
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot open " + path + " for writing");
  os.write(kCondMagic.data(), kCondMagic.size());
  os.write(reinterpret_cast<const char *>(&n_), sizeof(uint64_t));
  // Stream in chunks so a disk-backed source is not pulled in whole.
  constexpr uint64_t kChunk = 1 << 20;
  for (uint64_t k = 0; k < size(); k += kChunk) {
    uint64_t count = std::min(kChunk, size() - k);
    os.write(reinterpret_cast<const char *>(data_ + k * sizeof(float)),
             static_cast<std::streamsize>(count * sizeof(float)));
  }
  if (!os) throw DataError("write failed on " + path);
}

CondensedMatrix CondensedMatrix::Clone(Backing backing,
                                       const std::string &scratch_path,
                                       bool remove_on_close) const {
  CondensedMatrix copy =
      backing == Backing::kMemory
          ? InMemory(n_)
          : CreateFile(scratch_path, n_, remove_on_close);
  if (size() > 0) std::memcpy(copy.data_, data_, size() * sizeof(float));
  return copy;
}

CondensedMatrix ReadCondensedFile(const std::string &path) {
  CondensedMatrix mapped = CondensedMatrix::OpenFile(path, false);
  return mapped.Clone(Backing::kMemory);
}

}  // namespace spklink

// include/spklink/binary_io.h

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

#ifndef SPKLINK_BINARY_IO_H_
#define SPKLINK_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "spklink/common.h"

// Little-endian encode/decode helpers shared by the binary file formats
// (EVEC1, PLDA1, COND1).

namespace spklink {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

template <typename T>
void AppendLE(std::string *out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out->append(buf, sizeof(T));
}

// Sequential reader over a byte buffer; throws DataError on overrun.
class ByteReader {
 public:
  ByteReader(std::string_view bytes, std::string what)
      : bytes_(bytes), what_(std::move(what)) {}

  template <typename T>
  T Read() {
    Require(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string_view ReadBytes(std::size_t n) {
    Require(n);
    std::string_view out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void Require(std::size_t n) const {
    if (bytes_.size() - pos_ < n)
      throw DataError(what_ + ": truncated payload at byte offset " +
                      std::to_string(pos_));
  }

  std::string_view bytes_;
  std::string what_;
  std::size_t pos_ = 0;
};

std::string ReadFileBytes(const std::string &path);
void WriteFileBytes(const std::string &path, std::string_view bytes);

}  // namespace spklink

#endif  // SPKLINK_BINARY_IO_H_

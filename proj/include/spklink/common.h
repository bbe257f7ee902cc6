// include/spklink/common.h

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

#ifndef SPKLINK_COMMON_H_
#define SPKLINK_COMMON_H_

#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace spklink {

// Malformed input: a file, record or value that violates a format or an
// invariant. The CLI maps this to exit status 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure inside an estimator (e.g. a covariance that stops being
// positive definite).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LogLevel { kInfo, kWarning };

// Minimal stderr logger in the style of "LOG (Function) message".
class LogMessage {
 public:
  LogMessage(LogLevel level, const char *func) {
    stream_ << (level == LogLevel::kWarning ? "WARNING (" : "LOG (") << func
            << ") ";
  }
  ~LogMessage() { std::cerr << stream_.str() << '\n'; }
  std::ostream &stream() { return stream_; }

 private:
  std::ostringstream stream_;
};

}  // namespace spklink

#define SPKLINK_LOG \
  ::spklink::LogMessage(::spklink::LogLevel::kInfo, __func__).stream()
#define SPKLINK_WARN \
  ::spklink::LogMessage(::spklink::LogLevel::kWarning, __func__).stream()

#endif  // SPKLINK_COMMON_H_

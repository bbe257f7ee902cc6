// include/spklink/evec.h

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

#ifndef SPKLINK_EVEC_H_
#define SPKLINK_EVEC_H_

#include <string>
#include <string_view>
#include <vector>

#include "spklink/types.h"

namespace spklink {

// EVEC1 layout:
//   "EVEC1\n" | u32 count | u32 dim | count x (u16 id_len | id | dim x f32)
// All integers and floats little-endian.
std::string WriteEvec(const std::vector<Embedding> &embeddings);
std::vector<Embedding> ReadEvec(std::string_view bytes);

std::vector<Embedding> ReadEvecFile(const std::string &path);
void WriteEvecFile(const std::string &path,
                   const std::vector<Embedding> &embeddings);

// Throws DataError if any embedding has a non-finite entry or the
// dimensions differ. Returns the common dimension (0 for an empty list).
std::size_t CheckEmbeddings(const std::vector<Embedding> &embeddings);

}  // namespace spklink

#endif  // SPKLINK_EVEC_H_

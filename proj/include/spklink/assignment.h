// include/spklink/assignment.h

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

#ifndef SPKLINK_ASSIGNMENT_H_
#define SPKLINK_ASSIGNMENT_H_

#include <cstdint>
#include <vector>

namespace spklink {

// Maximum-weight one-to-one assignment on a rows x cols weight matrix
// (row-major, weights >= 0) by the Hungarian method with potentials.
// Returns, for each row, the assigned column or -1. Exact for integer
// weights.
std::vector<int> MaxWeightAssignment(const std::vector<int64_t> &weights,
                                     int rows, int cols);

}  // namespace spklink

#endif  // SPKLINK_ASSIGNMENT_H_

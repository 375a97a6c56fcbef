// Copyright 2026 The MOO Ranking Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MOO_SRC_SOBOL_TABLE_H_
#define MOO_SRC_SOBOL_TABLE_H_

#include <cstdint>

namespace moo::internal {

inline constexpr int kSobolTableSize = 1111;
inline constexpr int kSobolMaxDegree = 13;

struct SobolEntry {
  std::uint32_t polynomial;
  int degree;
  std::uint32_t initial[kSobolMaxDegree];
};

extern const SobolEntry kSobolTable[kSobolTableSize];

}  // namespace moo::internal

#endif  // MOO_SRC_SOBOL_TABLE_H_

// Copyright 2026 The lightconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LIGHTCONV_SRC_FORMAT_H_
#define LIGHTCONV_SRC_FORMAT_H_

#include <charconv>
#include <string>

namespace lightconv::internal {

// Shortest decimal text that parses back to exactly `v`.
inline std::string ShortestRepr(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace lightconv::internal

#endif  // LIGHTCONV_SRC_FORMAT_H_

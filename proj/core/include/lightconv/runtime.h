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

#ifndef LIGHTCONV_RUNTIME_H_
#define LIGHTCONV_RUNTIME_H_

namespace lightconv {

// Keeps freed multi-megabyte buffers in the heap rather than handing them
// back to the OS, which otherwise costs a page fault per 4 KiB on every
// forward and backward pass. Opt-in and process-wide; call once from main()
// before training or probing. No effect outside glibc.
void TuneProcessAllocator();

}  // namespace lightconv

#endif  // LIGHTCONV_RUNTIME_H_

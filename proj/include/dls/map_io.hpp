// Copyright 2026 The DLS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Textual map files.
//
//   width=<n> kind=<perm|affine|xorfam>
//   perm:   2^n lines "<in_hex> <out_hex>"
//   affine: n lines of matrix rows in hex (row i bit j = A[i][j]),
//           then one line with the offset in hex
//   xorfam: "mask0=<hex> mask1=<hex> flip=<0|1>"
//
// Blank lines and lines starting with '#' are ignored.

#ifndef DLS_MAP_IO_HPP_
#define DLS_MAP_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "dls/bitcore.hpp"

namespace dls {

std::string format_map(const InvertibleMap& map);
// Throws ParseError (with line number) or NotABijection.
InvertibleMap parse_map(std::string_view text);

InvertibleMap load_map(const std::filesystem::path& path);
void save_map(const InvertibleMap& map, const std::filesystem::path& path);

}  // namespace dls

#endif  // DLS_MAP_IO_HPP_

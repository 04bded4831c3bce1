// Copyright 2026 The fhec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Bit layouts for typed values. One fixed packing rule everywhere: scalars
// are LSB-first two's complement, array element 0 comes first, struct fields
// follow declaration order, no padding. The frontend derives circuit input
// groups and the codec derives encodings from the same Layout, so the two
// always agree on bit positions.

#ifndef FHEC_LAYOUT_HPP_
#define FHEC_LAYOUT_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace fhec {

struct Layout {
  enum class Kind { kScalar, kArray, kStruct };

  Kind kind = Kind::kScalar;
  // Scalar.
  uint32_t width = 1;
  bool is_signed = false;
  bool is_bool = false;
  // Array: element.front() repeated `length` times.
  std::vector<Layout> element;
  uint32_t length = 0;
  // Struct.
  std::vector<std::pair<std::string, Layout>> fields;
  std::string struct_name;

  uint32_t total_bits() const;

  static Layout Bool();
  static Layout Scalar(uint32_t width, bool is_signed);
  static Layout Array(Layout elem, uint32_t length);
  static Layout Struct(std::string name,
                       std::vector<std::pair<std::string, Layout>> fields);

  bool operator==(const Layout&) const = default;
};

struct LayoutLeaf {
  std::string path;  // "" for a root scalar, else "[2]", ".x", "[1].y", ...
  uint32_t offset = 0;
  uint32_t width = 1;
  bool is_signed = false;
  bool is_bool = false;
};

// Scalar leaves in bit order (offset ascending).
std::vector<LayoutLeaf> LayoutLeaves(const Layout& layout);

// One line per leaf: "<path>: offset=<o> width=<w> <u|i|bool>".
std::string DumpLayout(const Layout& layout);

// Scalar type spelling: "u8", "i4", "bool"; aggregates "u8[4]", "Point".
std::string LayoutTypeName(const Layout& layout);

}  // namespace fhec

#endif  // FHEC_LAYOUT_HPP_

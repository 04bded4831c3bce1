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

#include "fhec/layout.hpp"

#include <sstream>

namespace fhec {
namespace {

void CollectLeaves(const Layout& layout, const std::string& path,
                   uint32_t offset, std::vector<LayoutLeaf>* out) {
  switch (layout.kind) {
    case Layout::Kind::kScalar:
      out->push_back(LayoutLeaf{path, offset, layout.width, layout.is_signed,
                                layout.is_bool});
      break;
    case Layout::Kind::kArray: {
      const Layout& elem = layout.element.front();
      const uint32_t stride = elem.total_bits();
      for (uint32_t i = 0; i < layout.length; ++i) {
        CollectLeaves(elem, path + "[" + std::to_string(i) + "]",
                      offset + i * stride, out);
      }
      break;
    }
    case Layout::Kind::kStruct:
      for (const auto& [name, field] : layout.fields) {
        CollectLeaves(field, path + "." + name, offset, out);
        offset += field.total_bits();
      }
      break;
  }
}

}  // namespace

uint32_t Layout::total_bits() const {
  switch (kind) {
    case Kind::kScalar:
      return width;
    case Kind::kArray:
      return element.front().total_bits() * length;
    case Kind::kStruct: {
      uint32_t sum = 0;
      for (const auto& [name, field] : fields) sum += field.total_bits();
      return sum;
    }
  }
  return 0;
}

Layout Layout::Bool() {
  Layout l;
  l.kind = Kind::kScalar;
  l.width = 1;
  l.is_signed = false;
  l.is_bool = true;
  return l;
}

Layout Layout::Scalar(uint32_t width, bool is_signed) {
  Layout l;
  l.kind = Kind::kScalar;
  l.width = width;
  l.is_signed = is_signed;
  return l;
}

Layout Layout::Array(Layout elem, uint32_t length) {
  Layout l;
  l.kind = Kind::kArray;
  l.element.push_back(std::move(elem));
  l.length = length;
  return l;
}

Layout Layout::Struct(std::string name,
                      std::vector<std::pair<std::string, Layout>> fields) {
  Layout l;
  l.kind = Kind::kStruct;
  l.struct_name = std::move(name);
  l.fields = std::move(fields);
  return l;
}

std::vector<LayoutLeaf> LayoutLeaves(const Layout& layout) {
  std::vector<LayoutLeaf> leaves;
  CollectLeaves(layout, "", 0, &leaves);
  return leaves;
}

std::string DumpLayout(const Layout& layout) {
  std::ostringstream os;
  for (const LayoutLeaf& leaf : LayoutLeaves(layout)) {
    os << (leaf.path.empty() ? "." : leaf.path) << ": offset=" << leaf.offset
       << " width=" << leaf.width << " "
       << (leaf.is_bool ? "bool" : (leaf.is_signed ? "i" : "u")) << "\n";
  }
  return os.str();
}

std::string LayoutTypeName(const Layout& layout) {
  switch (layout.kind) {
    case Layout::Kind::kScalar:
      if (layout.is_bool) return "bool";
      return (layout.is_signed ? "i" : "u") + std::to_string(layout.width);
    case Layout::Kind::kArray:
      return LayoutTypeName(layout.element.front()) + "[" +
             std::to_string(layout.length) + "]";
    case Layout::Kind::kStruct:
      return layout.struct_name.empty() ? "struct" : layout.struct_name;
  }
  return "?";
}

}  // namespace fhec

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

#include "fhec/ast.hpp"

#include <stdexcept>

#include "fhec/ir.hpp"

namespace fhec {

Type Type::Bool() {
  Type t;
  t.kind = Kind::kBool;
  t.width = 1;
  return t;
}

Type Type::UInt(uint32_t width) {
  Type t;
  t.kind = Kind::kUInt;
  t.width = width;
  return t;
}

Type Type::Int(uint32_t width) {
  Type t;
  t.kind = Kind::kInt;
  t.width = width;
  return t;
}

Type Type::Array(Type elem, uint32_t length) {
  Type t;
  t.kind = Kind::kArray;
  t.elem = std::make_shared<const Type>(std::move(elem));
  t.length = length;
  return t;
}

Type Type::Struct(std::string name) {
  Type t;
  t.kind = Kind::kStruct;
  t.struct_name = std::move(name);
  return t;
}

bool operator==(const Type& a, const Type& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Type::Kind::kBool:
      return true;
    case Type::Kind::kUInt:
    case Type::Kind::kInt:
      return a.width == b.width;
    case Type::Kind::kArray:
      return a.length == b.length && *a.elem == *b.elem;
    case Type::Kind::kStruct:
      return a.struct_name == b.struct_name;
  }
  return false;
}

std::string TypeName(const Type& type) {
  switch (type.kind) {
    case Type::Kind::kBool:
      return "bool";
    case Type::Kind::kUInt:
      return "u" + std::to_string(type.width);
    case Type::Kind::kInt:
      return "i" + std::to_string(type.width);
    case Type::Kind::kArray:
      return TypeName(*type.elem) + "[" + std::to_string(type.length) + "]";
    case Type::Kind::kStruct:
      return type.struct_name;
  }
  return "?";
}

std::string_view BinOpName(BinOp op) {
  switch (op) {
    case BinOp::kAdd: return "+";
    case BinOp::kSub: return "-";
    case BinOp::kMul: return "*";
    case BinOp::kDiv: return "/";
    case BinOp::kMod: return "%";
    case BinOp::kBitAnd: return "&";
    case BinOp::kBitOr: return "|";
    case BinOp::kBitXor: return "^";
    case BinOp::kShl: return "<<";
    case BinOp::kShr: return ">>";
    case BinOp::kEq: return "==";
    case BinOp::kNe: return "!=";
    case BinOp::kLt: return "<";
    case BinOp::kLe: return "<=";
    case BinOp::kGt: return ">";
    case BinOp::kGe: return ">=";
    case BinOp::kLogAnd: return "&&";
    case BinOp::kLogOr: return "||";
  }
  return "?";
}

std::string_view UnOpName(UnOp op) {
  switch (op) {
    case UnOp::kNeg: return "-";
    case UnOp::kBitNot: return "~";
    case UnOp::kLogNot: return "!";
  }
  return "?";
}

const StructDecl* Program::FindStruct(std::string_view name) const {
  for (const StructDecl& s : structs) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const FuncDecl* Program::FindFunction(std::string_view name) const {
  for (const FuncDecl& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

Layout DeriveLayout(const Program& program, const Type& type) {
  switch (type.kind) {
    case Type::Kind::kBool:
      return Layout::Bool();
    case Type::Kind::kUInt:
      return Layout::Scalar(type.width, /*is_signed=*/false);
    case Type::Kind::kInt:
      return Layout::Scalar(type.width, /*is_signed=*/true);
    case Type::Kind::kArray:
      return Layout::Array(DeriveLayout(program, *type.elem), type.length);
    case Type::Kind::kStruct: {
      const StructDecl* decl = program.FindStruct(type.struct_name);
      if (decl == nullptr) {
        throw std::invalid_argument("unknown struct type: " + type.struct_name);
      }
      std::vector<std::pair<std::string, Layout>> fields;
      fields.reserve(decl->fields.size());
      for (const auto& [name, field_type] : decl->fields) {
        fields.emplace_back(name, DeriveLayout(program, field_type));
      }
      return Layout::Struct(decl->name, std::move(fields));
    }
  }
  throw std::invalid_argument("unresolved type");
}

std::optional<uint64_t> ConstEval(const Expr& expr) {
  struct Visitor {
    std::optional<uint64_t> operator()(const IntLit& e) const {
      return e.value;
    }
    std::optional<uint64_t> operator()(const BoolLit& e) const {
      return e.value ? 1u : 0u;
    }
    std::optional<uint64_t> operator()(const UnaryExpr& e) const {
      auto v = ConstEval(*e.operand);
      if (!v) return std::nullopt;
      switch (e.op) {
        case UnOp::kNeg: return ~*v + 1;
        case UnOp::kBitNot: return ~*v;
        case UnOp::kLogNot: return *v == 0 ? 1u : 0u;
      }
      return std::nullopt;
    }
    std::optional<uint64_t> operator()(const BinaryExpr& e) const {
      auto a = ConstEval(*e.lhs);
      auto b = ConstEval(*e.rhs);
      if (!a || !b) return std::nullopt;
      switch (e.op) {
        case BinOp::kAdd: return *a + *b;
        case BinOp::kSub: return *a - *b;
        case BinOp::kMul: return *a * *b;
        case BinOp::kDiv: return *b == 0 ? ~uint64_t{0} : *a / *b;
        case BinOp::kMod: return *b == 0 ? *a : *a % *b;
        case BinOp::kBitAnd: return *a & *b;
        case BinOp::kBitOr: return *a | *b;
        case BinOp::kBitXor: return *a ^ *b;
        case BinOp::kShl: return *b >= 64 ? 0 : *a << *b;
        case BinOp::kShr: return *b >= 64 ? 0 : *a >> *b;
        case BinOp::kEq: return *a == *b ? 1u : 0u;
        case BinOp::kNe: return *a != *b ? 1u : 0u;
        case BinOp::kLt: return *a < *b ? 1u : 0u;
        case BinOp::kLe: return *a <= *b ? 1u : 0u;
        case BinOp::kGt: return *a > *b ? 1u : 0u;
        case BinOp::kGe: return *a >= *b ? 1u : 0u;
        case BinOp::kLogAnd: return (*a != 0 && *b != 0) ? 1u : 0u;
        case BinOp::kLogOr: return (*a != 0 || *b != 0) ? 1u : 0u;
      }
      return std::nullopt;
    }
    std::optional<uint64_t> operator()(const TernaryExpr& e) const {
      auto c = ConstEval(*e.cond);
      if (!c) return std::nullopt;
      return *c != 0 ? ConstEval(*e.then_expr) : ConstEval(*e.else_expr);
    }
    std::optional<uint64_t> operator()(const CastExpr& e) const {
      auto v = ConstEval(*e.operand);
      if (!v || !e.target.is_scalar()) return std::nullopt;
      uint64_t masked = *v & WidthMask(e.target.scalar_width());
      // Signed casts keep the sign-extended 64-bit pattern so that nested
      // constant arithmetic behaves like the lowered circuit would.
      if (e.target.is_signed()) {
        uint32_t w = e.target.scalar_width();
        if (w < 64 && (masked >> (w - 1)) & 1) masked |= ~WidthMask(w);
      }
      return masked;
    }
    std::optional<uint64_t> operator()(const VarRef&) const {
      return std::nullopt;
    }
    std::optional<uint64_t> operator()(const IndexExpr&) const {
      return std::nullopt;
    }
    std::optional<uint64_t> operator()(const FieldExpr&) const {
      return std::nullopt;
    }
    std::optional<uint64_t> operator()(const CallExpr&) const {
      return std::nullopt;
    }
  };
  return std::visit(Visitor{}, expr.node);
}

}  // namespace fhec

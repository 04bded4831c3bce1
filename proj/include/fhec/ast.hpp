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
// Abstract syntax tree for the input language: a C-like expression language
// over bool, uN/iN scalars (N in 1..64), fixed-size arrays and plain structs.
// The parser produces a fully typed tree; every Expr carries its resolved
// Type so later stages never re-infer.

#ifndef FHEC_AST_HPP_
#define FHEC_AST_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fhec/diagnostics.hpp"
#include "fhec/layout.hpp"

namespace fhec {

struct Type {
  enum class Kind { kBool, kUInt, kInt, kArray, kStruct };

  Kind kind = Kind::kUInt;
  uint32_t width = 1;                      // uN / iN (bool is width 1)
  std::shared_ptr<const Type> elem;        // array element type
  uint32_t length = 0;                     // array length
  std::string struct_name;                 // struct reference, by name

  bool is_scalar() const {
    return kind == Kind::kBool || kind == Kind::kUInt || kind == Kind::kInt;
  }
  bool is_signed() const { return kind == Kind::kInt; }
  uint32_t scalar_width() const { return kind == Kind::kBool ? 1 : width; }

  static Type Bool();
  static Type UInt(uint32_t width);
  static Type Int(uint32_t width);
  static Type Array(Type elem, uint32_t length);
  static Type Struct(std::string name);
};

bool operator==(const Type& a, const Type& b);
inline bool operator!=(const Type& a, const Type& b) { return !(a == b); }

// Source spelling: "bool", "u8", "i4", "u8[4]", "Point".
std::string TypeName(const Type& type);

enum class BinOp {
  kAdd, kSub, kMul, kDiv, kMod,
  kBitAnd, kBitOr, kBitXor, kShl, kShr,
  kEq, kNe, kLt, kLe, kGt, kGe,
  kLogAnd, kLogOr,
};

enum class UnOp { kNeg, kBitNot, kLogNot };

std::string_view BinOpName(BinOp op);
std::string_view UnOpName(UnOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct IntLit { uint64_t value = 0; };
struct BoolLit { bool value = false; };
struct VarRef { std::string name; };
struct UnaryExpr { UnOp op; ExprPtr operand; };
struct BinaryExpr { BinOp op; ExprPtr lhs, rhs; };
struct TernaryExpr { ExprPtr cond, then_expr, else_expr; };
struct CastExpr { Type target; ExprPtr operand; };
struct IndexExpr { ExprPtr base, index; };
struct FieldExpr { ExprPtr base; std::string field; };
struct CallExpr { std::string callee; std::vector<ExprPtr> args; };

struct Expr {
  SourceSpan span;
  Type type;  // resolved by the type checker
  std::variant<IntLit, BoolLit, VarRef, UnaryExpr, BinaryExpr, TernaryExpr,
               CastExpr, IndexExpr, FieldExpr, CallExpr>
      node;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct BlockStmt { std::vector<StmtPtr> stmts; };
struct DeclStmt {
  Type type;
  std::string name;
  ExprPtr init;  // may be null (zero-initialized)
};
struct AssignStmt {
  ExprPtr target;                // lvalue: VarRef/IndexExpr/FieldExpr chain
  std::optional<BinOp> op;       // compound "op=" (x += e, i++ desugars here)
  ExprPtr value;
};
struct IfStmt {
  ExprPtr cond;
  StmtPtr then_stmt;
  StmtPtr else_stmt;  // may be null
};
struct ForStmt {
  StmtPtr init;  // DeclStmt or AssignStmt
  ExprPtr cond;
  StmtPtr step;  // AssignStmt
  StmtPtr body;
};
struct ReturnStmt { ExprPtr value; };

struct Stmt {
  SourceSpan span;
  std::variant<BlockStmt, DeclStmt, AssignStmt, IfStmt, ForStmt, ReturnStmt>
      node;
};

struct StructDecl {
  std::string name;
  std::vector<std::pair<std::string, Type>> fields;
  SourceSpan span;
};

struct Param {
  Type type;
  std::string name;
  SourceSpan span;
};

struct FuncDecl {
  std::string name;
  Type return_type;
  std::vector<Param> params;
  StmtPtr body;  // always a BlockStmt
  SourceSpan span;
};

struct Program {
  std::vector<StructDecl> structs;
  std::vector<FuncDecl> functions;

  const StructDecl* FindStruct(std::string_view name) const;
  const FuncDecl* FindFunction(std::string_view name) const;
};

// Packing of a (resolved) type; struct fields come from `program`.
Layout DeriveLayout(const Program& program, const Type& type);

// Evaluates a compile-time constant expression over uint64 arithmetic
// (literals, unary/binary operators, casts). Values wrap modulo 2^64;
// anything touching a variable, index, field or call is not constant.
std::optional<uint64_t> ConstEval(const Expr& expr);

}  // namespace fhec

#endif  // FHEC_AST_HPP_

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
// Recursive-descent parser and type checker. Parsing aborts on the first
// syntax error; the type checker keeps going and reports every error it can.
// Integer literals are untyped until the checker gives them the type of
// their context (declaration, assignment target, sibling operand, ...).

#include <memory>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "fhec/frontend.hpp"
#include "fhec/ir.hpp"
#include "frontend_internal.hpp"
#include "lexer.hpp"

namespace fhec {
namespace {

constexpr uint32_t kMaxArrayLength = 1u << 16;

struct SyntaxAbort {};

bool IsScalarTypeName(std::string_view s, Type* out, bool* bad_width) {
  if (s == "bool") {
    if (out) *out = Type::Bool();
    return true;
  }
  if (s.size() < 2 || (s[0] != 'u' && s[0] != 'i')) return false;
  uint64_t width = 0;
  for (size_t i = 1; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    width = width * 10 + (s[i] - '0');
    if (width > 1000) break;
  }
  if (width < 1 || width > 64) {
    if (bad_width) *bad_width = true;
    return false;
  }
  if (out) {
    *out = s[0] == 'u' ? Type::UInt(static_cast<uint32_t>(width))
                       : Type::Int(static_cast<uint32_t>(width));
  }
  return true;
}

class Parser {
 public:
  Parser(std::string_view source, std::vector<Diagnostic>* diags)
      : tokens_(Lex(source)), diags_(diags) {}

  std::optional<Program> Run() {
    try {
      while (!At(TokKind::kEnd)) {
        if (AtKeyword("struct")) {
          ParseStructDecl();
        } else {
          ParseFuncDecl();
        }
      }
    } catch (const SyntaxAbort&) {
      return std::nullopt;
    }
    if (HasErrors(*diags_)) return std::nullopt;
    return std::move(program_);
  }

 private:
  const Token& Peek(size_t k = 0) const {
    size_t i = pos_ + k;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  bool At(TokKind kind) const { return Peek().kind == kind; }
  bool AtPunct(std::string_view p, size_t k = 0) const {
    return Peek(k).kind == TokKind::kPunct && Peek(k).text == p;
  }
  bool AtKeyword(std::string_view kw) const {
    return Peek().kind == TokKind::kKeyword && Peek().text == kw;
  }
  const Token& Take() {
    const Token& t = Peek();
    if (t.kind != TokKind::kEnd) ++pos_;
    return t;
  }
  bool Eat(std::string_view p) {
    if (AtPunct(p)) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool EatKeyword(std::string_view kw) {
    if (AtKeyword(kw)) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void Fail(const SourceSpan& span, std::string message,
                         std::string_view code = diag::kSyntax) {
    diags_->push_back(
        {Severity::kError, span, std::string(code), std::move(message)});
    throw SyntaxAbort{};
  }
  void Error(const SourceSpan& span, std::string message,
             std::string_view code = diag::kType) {
    diags_->push_back(
        {Severity::kError, span, std::string(code), std::move(message)});
  }

  void Expect(std::string_view p, std::string_view what) {
    if (!Eat(p)) {
      const Token& t = Peek();
      if (t.kind == TokKind::kError) Fail(t.span, t.text);
      Fail(t.span, "expected '" + std::string(p) + "' " + std::string(what) +
                       ", got " + Describe(t));
    }
  }
  std::string ExpectIdent(std::string_view what) {
    const Token& t = Peek();
    if (t.kind != TokKind::kIdent) {
      if (t.kind == TokKind::kError) Fail(t.span, t.text);
      Fail(t.span,
           "expected " + std::string(what) + ", got " + Describe(t));
    }
    bool bad_width = false;
    if (IsScalarTypeName(t.text, nullptr, &bad_width) || bad_width) {
      Fail(t.span, "'" + t.text + "' is a type name and cannot be used as " +
                       std::string(what));
    }
    ++pos_;
    return t.text;
  }
  static std::string Describe(const Token& t) {
    switch (t.kind) {
      case TokKind::kEnd:
        return "end of input";
      case TokKind::kIntLit:
        return "integer literal " + t.text;
      default:
        return "'" + t.text + "'";
    }
  }

  // --- Types -------------------------------------------------------------

  bool AtTypeStart() const {
    const Token& t = Peek();
    if (t.kind != TokKind::kIdent) return false;
    if (IsScalarTypeName(t.text, nullptr, nullptr)) return true;
    // "Ident ident" can only start a declaration with a struct type.
    return Peek(1).kind == TokKind::kIdent;
  }

  // Base type, plus optional inline array suffix ("u8[4]"); outer suffixes
  // written C-style after the declared name wrap around this.
  Type ParseType() {
    const Token& t = Peek();
    if (t.kind == TokKind::kError) Fail(t.span, t.text);
    if (t.kind != TokKind::kIdent) {
      Fail(t.span, "expected a type, got " + Describe(t));
    }
    Type type;
    bool bad_width = false;
    if (IsScalarTypeName(t.text, &type, &bad_width)) {
      ++pos_;
    } else if (bad_width) {
      Fail(t.span, "unsupported scalar width in '" + t.text +
                       "' (supported widths are 1..64)",
           diag::kType);
    } else {
      type = Type::Struct(t.text);
      ++pos_;
    }
    RejectPointer();
    std::vector<uint32_t> lens;
    while (AtPunct("[")) lens.push_back(ParseArrayLen());
    for (size_t i = lens.size(); i > 0; --i) {
      type = Type::Array(std::move(type), lens[i - 1]);
    }
    return type;
  }

  void RejectPointer() {
    if (AtPunct("*") && Peek(1).kind == TokKind::kIdent) {
      Fail(Peek().span, "pointer types are not supported", diag::kPointer);
    }
    if (AtPunct("&") && Peek(1).kind == TokKind::kIdent) {
      Fail(Peek().span, "reference types are not supported", diag::kPointer);
    }
  }

  uint32_t ParseArrayLen() {
    Expect("[", "to open array length");
    SourceSpan span = Peek().span;
    ExprPtr len_expr = ParseExpr();
    Expect("]", "after array length");
    auto v = ConstEval(*len_expr);
    if (!v) {
      Error(span, "array length must be a compile-time constant",
            diag::kVariableLengthArray);
      return 1;
    }
    if (*v == 0) {
      Error(span, "array length must be at least 1");
      return 1;
    }
    if (*v > kMaxArrayLength) {
      Error(span, "array length " + std::to_string(*v) + " exceeds limit " +
                      std::to_string(kMaxArrayLength));
      return 1;
    }
    return static_cast<uint32_t>(*v);
  }

  // Declared type for "<base> <name> <suffixes>" positions (params, locals,
  // struct fields).
  std::pair<Type, std::string> ParseTypedName(std::string_view what) {
    Type base = ParseType();
    RejectPointer();
    std::string name = ExpectIdent(what);
    std::vector<uint32_t> lens;
    while (AtPunct("[")) lens.push_back(ParseArrayLen());
    for (size_t i = lens.size(); i > 0; --i) {
      base = Type::Array(std::move(base), lens[i - 1]);
    }
    return {std::move(base), std::move(name)};
  }

  // --- Declarations ------------------------------------------------------

  void ParseStructDecl() {
    SourceSpan span = Peek().span;
    EatKeyword("struct");
    StructDecl decl;
    decl.span = span;
    decl.name = ExpectIdent("struct name");
    Expect("{", "to open struct body");
    while (!Eat("}")) {
      if (At(TokKind::kEnd)) Fail(Peek().span, "unterminated struct body");
      auto [type, name] = ParseTypedName("field name");
      Expect(";", "after struct field");
      decl.fields.emplace_back(std::move(name), std::move(type));
    }
    Eat(";");
    program_.structs.push_back(std::move(decl));
  }

  void ParseFuncDecl() {
    FuncDecl fn;
    fn.span = Peek().span;
    fn.return_type = ParseType();
    RejectPointer();
    fn.name = ExpectIdent("function name");
    Expect("(", "after function name");
    if (!AtPunct(")")) {
      do {
        Param p;
        p.span = Peek().span;
        auto [type, name] = ParseTypedName("parameter name");
        p.type = std::move(type);
        p.name = std::move(name);
        fn.params.push_back(std::move(p));
      } while (Eat(","));
    }
    Expect(")", "after parameter list");
    fn.body = ParseBlock();
    program_.functions.push_back(std::move(fn));
  }

  // --- Statements ----------------------------------------------------------

  StmtPtr MakeStmt(SourceSpan span,
                   std::variant<BlockStmt, DeclStmt, AssignStmt, IfStmt,
                                ForStmt, ReturnStmt>
                       node) {
    auto s = std::make_unique<Stmt>();
    s->span = span;
    s->node = std::move(node);
    return s;
  }

  StmtPtr ParseBlock() {
    SourceSpan span = Peek().span;
    Expect("{", "to open block");
    BlockStmt block;
    while (!Eat("}")) {
      if (At(TokKind::kEnd)) Fail(Peek().span, "unterminated block");
      block.stmts.push_back(ParseStmt());
    }
    return MakeStmt(span, std::move(block));
  }

  StmtPtr ParseStmt() {
    if (AtPunct("{")) return ParseBlock();
    if (AtKeyword("if")) return ParseIf();
    if (AtKeyword("for")) return ParseFor();
    if (AtKeyword("return")) return ParseReturn();
    if (AtTypeStart()) return ParseDecl(/*consume_semi=*/true);
    return ParseAssign(/*consume_semi=*/true);
  }

  // If/else/for bodies: like C, a declaration is not a valid body on its
  // own (it would silently leak into the enclosing scope).
  StmtPtr ParseBodyStmt() {
    if (AtTypeStart()) {
      Fail(Peek().span, "a declaration must be inside a block here");
    }
    return ParseStmt();
  }

  StmtPtr ParseDecl(bool consume_semi) {
    SourceSpan span = Peek().span;
    DeclStmt decl;
    auto [type, name] = ParseTypedName("variable name");
    decl.type = std::move(type);
    decl.name = std::move(name);
    if (Eat("=")) decl.init = ParseExpr();
    if (consume_semi) Expect(";", "after declaration");
    return MakeStmt(span, std::move(decl));
  }

  StmtPtr ParseAssign(bool consume_semi) {
    SourceSpan span = Peek().span;
    ExprPtr target = ParsePostfix();
    AssignStmt assign;
    const Token& t = Peek();
    if (t.kind != TokKind::kPunct) {
      Fail(t.span, "expected assignment operator, got " + Describe(t));
    }
    if (t.text == "=") {
      ++pos_;
      assign.value = ParseExpr();
    } else if (t.text == "++" || t.text == "--") {
      ++pos_;
      assign.op = t.text == "++" ? BinOp::kAdd : BinOp::kSub;
      auto one = std::make_unique<Expr>();
      one->span = t.span;
      one->node = IntLit{1};
      assign.value = std::move(one);
    } else if (t.text.size() >= 2 && t.text.back() == '=') {
      std::string_view op = std::string_view(t.text).substr(0, t.text.size() - 1);
      ++pos_;
      if (op == "+") assign.op = BinOp::kAdd;
      else if (op == "-") assign.op = BinOp::kSub;
      else if (op == "*") assign.op = BinOp::kMul;
      else if (op == "/") assign.op = BinOp::kDiv;
      else if (op == "%") assign.op = BinOp::kMod;
      else if (op == "&") assign.op = BinOp::kBitAnd;
      else if (op == "|") assign.op = BinOp::kBitOr;
      else if (op == "^") assign.op = BinOp::kBitXor;
      else if (op == "<<") assign.op = BinOp::kShl;
      else if (op == ">>") assign.op = BinOp::kShr;
      else Fail(t.span, "expected assignment operator, got " + Describe(t));
      assign.value = ParseExpr();
    } else {
      Fail(t.span, "expected assignment operator, got " + Describe(t));
    }
    assign.target = std::move(target);
    if (consume_semi) Expect(";", "after assignment");
    return MakeStmt(span, std::move(assign));
  }

  StmtPtr ParseIf() {
    SourceSpan span = Peek().span;
    EatKeyword("if");
    IfStmt s;
    Expect("(", "after 'if'");
    s.cond = ParseExpr();
    Expect(")", "after if condition");
    s.then_stmt = ParseBodyStmt();
    if (EatKeyword("else")) s.else_stmt = ParseBodyStmt();
    return MakeStmt(span, std::move(s));
  }

  StmtPtr ParseFor() {
    SourceSpan span = Peek().span;
    EatKeyword("for");
    ForStmt s;
    Expect("(", "after 'for'");
    if (AtTypeStart()) {
      s.init = ParseDecl(/*consume_semi=*/false);
    } else if (!AtPunct(";")) {
      s.init = ParseAssign(/*consume_semi=*/false);
    }
    Expect(";", "after for initializer");
    if (AtPunct(";")) Fail(Peek().span, "for loop requires a condition");
    s.cond = ParseExpr();
    Expect(";", "after for condition");
    if (!AtPunct(")")) s.step = ParseAssign(/*consume_semi=*/false);
    Expect(")", "after for step");
    s.body = ParseBodyStmt();
    return MakeStmt(span, std::move(s));
  }

  StmtPtr ParseReturn() {
    SourceSpan span = Peek().span;
    EatKeyword("return");
    ReturnStmt s;
    s.value = ParseExpr();
    Expect(";", "after return value");
    return MakeStmt(span, std::move(s));
  }

  // --- Expressions -----------------------------------------------------

  ExprPtr MakeExpr(SourceSpan span,
                   std::variant<IntLit, BoolLit, VarRef, UnaryExpr, BinaryExpr,
                                TernaryExpr, CastExpr, IndexExpr, FieldExpr,
                                CallExpr>
                       node) {
    auto e = std::make_unique<Expr>();
    e->span = span;
    e->node = std::move(node);
    return e;
  }

  ExprPtr ParseExpr() { return ParseTernary(); }

  ExprPtr ParseTernary() {
    ExprPtr cond = ParseBinary(0);
    if (!Eat("?")) return cond;
    SourceSpan span = cond->span;
    TernaryExpr t;
    t.cond = std::move(cond);
    t.then_expr = ParseExpr();
    Expect(":", "in ternary expression");
    t.else_expr = ParseTernary();
    return MakeExpr(span, std::move(t));
  }

  // Precedence table, loosest first.
  struct OpLevel {
    std::string_view text;
    BinOp op;
    int level;
  };
  static constexpr OpLevel kOps[] = {
      {"||", BinOp::kLogOr, 0},  {"&&", BinOp::kLogAnd, 1},
      {"|", BinOp::kBitOr, 2},   {"^", BinOp::kBitXor, 3},
      {"&", BinOp::kBitAnd, 4},  {"==", BinOp::kEq, 5},
      {"!=", BinOp::kNe, 5},     {"<", BinOp::kLt, 6},
      {"<=", BinOp::kLe, 6},     {">", BinOp::kGt, 6},
      {">=", BinOp::kGe, 6},     {"<<", BinOp::kShl, 7},
      {">>", BinOp::kShr, 7},    {"+", BinOp::kAdd, 8},
      {"-", BinOp::kSub, 8},     {"*", BinOp::kMul, 9},
      {"/", BinOp::kDiv, 9},     {"%", BinOp::kMod, 9},
  };
  static constexpr int kMaxLevel = 9;

  ExprPtr ParseBinary(int level) {
    if (level > kMaxLevel) return ParseUnary();
    ExprPtr lhs = ParseBinary(level + 1);
    for (;;) {
      const Token& t = Peek();
      if (t.kind != TokKind::kPunct) return lhs;
      const OpLevel* match = nullptr;
      for (const OpLevel& o : kOps) {
        if (o.level == level && o.text == t.text) {
          match = &o;
          break;
        }
      }
      if (match == nullptr) return lhs;
      ++pos_;
      BinaryExpr bin;
      bin.op = match->op;
      SourceSpan span = t.span;
      bin.lhs = std::move(lhs);
      bin.rhs = ParseBinary(level + 1);
      lhs = MakeExpr(span, std::move(bin));
    }
  }

  ExprPtr ParseUnary() {
    const Token& t = Peek();
    if (t.kind == TokKind::kPunct &&
        (t.text == "-" || t.text == "~" || t.text == "!")) {
      ++pos_;
      UnaryExpr u;
      u.op = t.text == "-" ? UnOp::kNeg
                           : (t.text == "~" ? UnOp::kBitNot : UnOp::kLogNot);
      u.operand = ParseUnary();
      return MakeExpr(t.span, std::move(u));
    }
    if (t.kind == TokKind::kPunct && (t.text == "*" || t.text == "&")) {
      Fail(t.span, "pointers are not supported (unary '" + t.text + "')",
           diag::kPointer);
    }
    return ParsePostfix();
  }

  ExprPtr ParsePostfix() {
    ExprPtr e = ParsePrimary();
    for (;;) {
      const Token& t = Peek();
      if (AtPunct("[")) {
        ++pos_;
        IndexExpr idx;
        idx.base = std::move(e);
        idx.index = ParseExpr();
        Expect("]", "after array index");
        e = MakeExpr(t.span, std::move(idx));
      } else if (AtPunct(".")) {
        ++pos_;
        FieldExpr fld;
        fld.base = std::move(e);
        fld.field = ExpectIdent("field name");
        e = MakeExpr(t.span, std::move(fld));
      } else {
        return e;
      }
    }
  }

  bool AtCast() const {
    if (!AtPunct("(")) return false;
    const Token& t = Peek(1);
    if (t.kind != TokKind::kIdent) return false;
    bool bad_width = false;
    if (!IsScalarTypeName(t.text, nullptr, &bad_width) && !bad_width) {
      return false;
    }
    return AtPunct(")", 2) || AtPunct("*", 2);
  }

  ExprPtr ParsePrimary() {
    const Token& t = Peek();
    switch (t.kind) {
      case TokKind::kIntLit: {
        ++pos_;
        if (t.overflow) {
          Error(t.span, "integer literal " + t.text + " does not fit in 64 bits");
        }
        return MakeExpr(t.span, IntLit{t.int_value});
      }
      case TokKind::kKeyword:
        if (t.text == "true" || t.text == "false") {
          ++pos_;
          return MakeExpr(t.span, BoolLit{t.text == "true"});
        }
        Fail(t.span, "unexpected keyword '" + t.text + "' in expression");
      case TokKind::kIdent: {
        ++pos_;
        if (Eat("(")) {
          CallExpr call;
          call.callee = t.text;
          if (!AtPunct(")")) {
            do {
              call.args.push_back(ParseExpr());
            } while (Eat(","));
          }
          Expect(")", "after call arguments");
          return MakeExpr(t.span, std::move(call));
        }
        return MakeExpr(t.span, VarRef{t.text});
      }
      case TokKind::kPunct: {
        if (AtCast()) {
          ++pos_;  // (
          const Token& ty = Take();
          Type target;
          bool bad_width = false;
          if (!IsScalarTypeName(ty.text, &target, &bad_width)) {
            Fail(ty.span, "unsupported scalar width in '" + ty.text +
                              "' (supported widths are 1..64)",
                 diag::kType);
          }
          if (AtPunct("*")) {
            Fail(Peek().span, "pointer types are not supported",
                 diag::kPointer);
          }
          Expect(")", "after cast type");
          CastExpr cast;
          cast.target = std::move(target);
          cast.operand = ParseUnary();
          return MakeExpr(t.span, std::move(cast));
        }
        if (Eat("(")) {
          ExprPtr e = ParseExpr();
          Expect(")", "after parenthesized expression");
          return e;
        }
        Fail(t.span, "unexpected " + Describe(t) + " in expression");
      }
      case TokKind::kError:
        Fail(t.span, t.text);
      case TokKind::kEnd:
        Fail(t.span, "unexpected end of input in expression");
    }
    Fail(t.span, "unexpected token");
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  Program program_;
  std::vector<Diagnostic>* diags_;
};

// ---------------------------------------------------------------------------
// Type checker.

class Checker {
 public:
  Checker(Program* program, std::vector<Diagnostic>* diags)
      : program_(program), diags_(diags) {}

  void Run() {
    CheckStructs();
    CheckSignatures();
    for (FuncDecl& fn : program_->functions) CheckFunction(fn);
  }

 private:
  void Error(const SourceSpan& span, std::string message,
             std::string_view code = diag::kType) {
    diags_->push_back(
        {Severity::kError, span, std::string(code), std::move(message)});
  }
  void Warn(const SourceSpan& span, std::string message,
            std::string_view code) {
    diags_->push_back(
        {Severity::kWarning, span, std::string(code), std::move(message)});
  }

  // Struct fields may only reference structs declared strictly earlier,
  // which also rules out recursive (infinite-size) types.
  void CheckStructs() {
    std::unordered_set<std::string> seen;
    for (const StructDecl& s : program_->structs) {
      if (seen.count(s.name) > 0) {
        Error(s.span, "duplicate struct name '" + s.name + "'",
              diag::kDuplicateSymbol);
        continue;
      }
      std::unordered_set<std::string> field_names;
      for (const auto& [fname, ftype] : s.fields) {
        if (!field_names.insert(fname).second) {
          Error(s.span, "duplicate field '" + fname + "' in struct '" +
                            s.name + "'",
                diag::kDuplicateSymbol);
        }
        ValidateType(ftype, s.span, &seen);
      }
      seen.insert(s.name);
    }
    struct_names_ = std::move(seen);
  }

  // Validates struct references inside `type`. When `visible` is given only
  // those struct names are legal (declaration-before-use); otherwise any
  // declared struct is.
  void ValidateType(const Type& type, const SourceSpan& span,
                    const std::unordered_set<std::string>* visible = nullptr) {
    switch (type.kind) {
      case Type::Kind::kArray:
        ValidateType(*type.elem, span, visible);
        return;
      case Type::Kind::kStruct: {
        bool known = visible != nullptr
                         ? visible->count(type.struct_name) > 0
                         : struct_names_.count(type.struct_name) > 0;
        if (!known) {
          Error(span, "unknown type '" + type.struct_name + "'",
                diag::kUnknownSymbol);
        }
        return;
      }
      default:
        return;
    }
  }

  void CheckSignatures() {
    std::unordered_set<std::string> seen;
    for (const FuncDecl& fn : program_->functions) {
      if (!seen.insert(fn.name).second) {
        Error(fn.span, "duplicate function name '" + fn.name + "'",
              diag::kDuplicateSymbol);
      }
      ValidateType(fn.return_type, fn.span);
      for (const Param& p : fn.params) ValidateType(p.type, p.span);
    }
  }

  void CheckFunction(FuncDecl& fn) {
    scopes_.clear();
    scopes_.emplace_back();
    ret_type_ = &fn.return_type;
    std::unordered_set<std::string> param_names;
    for (const Param& p : fn.params) {
      if (!param_names.insert(p.name).second) {
        Error(p.span, "duplicate parameter name '" + p.name + "'",
              diag::kDuplicateSymbol);
        continue;
      }
      Declare(p.name, p.type, p.span);
    }
    CheckStmt(*fn.body);
    scopes_.clear();
    if (!DefinitelyReturns(*fn.body)) {
      Error(fn.span,
            "function '" + fn.name + "' does not return a value on every path",
            diag::kMissingReturn);
    }
  }

  // --- Scopes ----------------------------------------------------------

  const Type* Lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return &found->second;
    }
    return nullptr;
  }

  // Shadowing is rejected outright: it would make the loop-variable and
  // merge analyses subtly wrong, and costs little to forbid.
  void Declare(const std::string& name, const Type& type,
               const SourceSpan& span) {
    if (Lookup(name) != nullptr) {
      Error(span, "'" + name + "' is already declared in an enclosing scope",
            diag::kDuplicateSymbol);
      return;
    }
    scopes_.back().emplace(name, type);
  }

  // --- Statements --------------------------------------------------------

  void CheckStmt(Stmt& stmt) {
    struct Visitor {
      Checker* c;
      Stmt& stmt;
      void operator()(BlockStmt& s) {
        c->scopes_.emplace_back();
        for (StmtPtr& p : s.stmts) c->CheckStmt(*p);
        c->scopes_.pop_back();
      }
      void operator()(DeclStmt& s) {
        c->ValidateType(s.type, stmt.span);
        if (s.init != nullptr) c->CheckExpr(*s.init, &s.type);
        c->Declare(s.name, s.type, stmt.span);
      }
      void operator()(AssignStmt& s) { c->CheckAssign(s, stmt.span); }
      void operator()(IfStmt& s) {
        Type b = Type::Bool();
        c->CheckExpr(*s.cond, &b);
        c->CheckStmt(*s.then_stmt);
        if (s.else_stmt) c->CheckStmt(*s.else_stmt);
      }
      void operator()(ForStmt& s) {
        c->scopes_.emplace_back();
        if (s.init) c->CheckStmt(*s.init);
        Type b = Type::Bool();
        c->CheckExpr(*s.cond, &b);
        if (s.step) c->CheckStmt(*s.step);
        c->CheckStmt(*s.body);
        c->scopes_.pop_back();
      }
      void operator()(ReturnStmt& s) { c->CheckExpr(*s.value, c->ret_type_); }
    };
    std::visit(Visitor{this, stmt}, stmt.node);
  }

  bool IsLValue(const Expr& e) const {
    if (std::holds_alternative<VarRef>(e.node)) return true;
    if (const auto* idx = std::get_if<IndexExpr>(&e.node)) {
      return IsLValue(*idx->base);
    }
    if (const auto* fld = std::get_if<FieldExpr>(&e.node)) {
      return IsLValue(*fld->base);
    }
    return false;
  }

  void CheckAssign(AssignStmt& s, const SourceSpan& span) {
    if (!IsLValue(*s.target)) {
      Error(s.target->span, "expression is not assignable");
      return;
    }
    Type target_type = CheckExpr(*s.target, nullptr);
    if (s.op.has_value()) {
      if (!target_type.is_scalar()) {
        Error(span, "compound assignment requires a scalar target, got " +
                        TypeName(target_type));
        return;
      }
      // Checked exactly like the desugared `target = target op value`.
      CheckBinaryParts(*s.op, *s.target, *s.value, &target_type, span);
    } else {
      CheckExpr(*s.value, &target_type);
    }
  }

  // --- Expressions -------------------------------------------------------

  static bool IsUntypedLiteral(const Expr& e) {
    if (std::holds_alternative<IntLit>(e.node)) return true;
    if (const auto* u = std::get_if<UnaryExpr>(&e.node)) {
      return IsUntypedLiteral(*u->operand);
    }
    return false;
  }

  // Gives literal-only constant subtrees (shift amounts, constant indexes)
  // types without a width context; u64 keeps ConstEval agreeing with the
  // checked tree.
  void AnnotateConst(Expr& e) {
    struct Visitor {
      Checker* c;
      Expr& e;
      void operator()(IntLit&) { e.type = Type::UInt(64); }
      void operator()(BoolLit&) { e.type = Type::Bool(); }
      void operator()(UnaryExpr& u) {
        c->AnnotateConst(*u.operand);
        e.type = u.op == UnOp::kLogNot ? Type::Bool() : u.operand->type;
      }
      void operator()(BinaryExpr& b) {
        c->AnnotateConst(*b.lhs);
        c->AnnotateConst(*b.rhs);
        e.type = b.lhs->type;
      }
      void operator()(TernaryExpr& t) {
        c->AnnotateConst(*t.cond);
        c->AnnotateConst(*t.then_expr);
        c->AnnotateConst(*t.else_expr);
        e.type = t.then_expr->type;
      }
      void operator()(CastExpr& cc) {
        c->AnnotateConst(*cc.operand);
        e.type = cc.target;
      }
      void operator()(VarRef&) {}
      void operator()(IndexExpr&) {}
      void operator()(FieldExpr&) {}
      void operator()(CallExpr&) {}
    };
    std::visit(Visitor{this, e}, e.node);
  }

  Type Mismatch(const SourceSpan& span, const Type& expected,
                const Type& got) {
    Error(span, "expected " + TypeName(expected) + ", got " + TypeName(got));
    return expected;
  }

  // Checks `e` and resolves its type. If `expected` is set the result must
  // match it exactly; untyped integer literals adopt it.
  Type CheckExpr(Expr& e, const Type* expected) {
    Type t = CheckExprInner(e, expected);
    if (expected != nullptr && !(t == *expected)) {
      t = Mismatch(e.span, *expected, t);
    }
    e.type = t;
    return t;
  }

  Type CheckExprInner(Expr& e, const Type* expected) {
    struct Visitor {
      Checker* c;
      Expr& e;
      const Type* expected;
      Type operator()(IntLit& lit) {
        if (expected == nullptr || !expected->is_scalar()) {
          c->Error(e.span,
                   "cannot infer a type for this integer literal; add a cast "
                   "or a typed operand");
          return Type::UInt(64);
        }
        if (expected->kind == Type::Kind::kBool) {
          c->Error(e.span,
                   "integer literal used where bool is expected; use "
                   "true/false");
          return Type::Bool();
        }
        c->CheckLiteralRange(e.span, lit.value, *expected, /*negated=*/false);
        return *expected;
      }
      Type operator()(BoolLit&) { return Type::Bool(); }
      Type operator()(VarRef& v) {
        const Type* t = c->Lookup(v.name);
        if (t == nullptr) {
          c->Error(e.span, "undeclared identifier '" + v.name + "'",
                   diag::kUnknownSymbol);
          return expected != nullptr ? *expected : Type::UInt(64);
        }
        return *t;
      }
      Type operator()(UnaryExpr& u) { return c->CheckUnary(e, u, expected); }
      Type operator()(BinaryExpr& b) {
        return c->CheckBinaryParts(b.op, *b.lhs, *b.rhs, expected, e.span);
      }
      Type operator()(TernaryExpr& t) {
        Type b = Type::Bool();
        c->CheckExpr(*t.cond, &b);
        if (expected != nullptr) {
          c->CheckExpr(*t.then_expr, expected);
          c->CheckExpr(*t.else_expr, expected);
          return *expected;
        }
        if (IsUntypedLiteral(*t.then_expr) && !IsUntypedLiteral(*t.else_expr)) {
          Type et = c->CheckExpr(*t.else_expr, nullptr);
          c->CheckExpr(*t.then_expr, &et);
          return et;
        }
        Type tt = c->CheckExpr(*t.then_expr, nullptr);
        c->CheckExpr(*t.else_expr, &tt);
        return tt;
      }
      Type operator()(CastExpr& cast) {
        if (IsUntypedLiteral(*cast.operand) ||
            ConstEval(*cast.operand).has_value()) {
          c->AnnotateConst(*cast.operand);
        } else {
          Type ot = c->CheckExpr(*cast.operand, nullptr);
          if (!ot.is_scalar()) {
            c->Error(e.span, "cannot cast " + TypeName(ot) +
                                 "; casts work on scalars only");
          }
        }
        return cast.target;
      }
      Type operator()(IndexExpr& idx) { return c->CheckIndex(e, idx); }
      Type operator()(FieldExpr& fld) {
        Type bt = c->CheckExpr(*fld.base, nullptr);
        if (bt.kind != Type::Kind::kStruct) {
          c->Error(e.span, "member access on non-struct type " + TypeName(bt));
          return expected != nullptr ? *expected : Type::UInt(64);
        }
        const StructDecl* decl = c->program_->FindStruct(bt.struct_name);
        if (decl != nullptr) {
          for (const auto& [fname, ftype] : decl->fields) {
            if (fname == fld.field) return ftype;
          }
        }
        c->Error(e.span, "no field '" + fld.field + "' in struct '" +
                             bt.struct_name + "'",
                 diag::kUnknownSymbol);
        return expected != nullptr ? *expected : Type::UInt(64);
      }
      Type operator()(CallExpr& call) {
        const FuncDecl* callee = c->program_->FindFunction(call.callee);
        if (callee == nullptr) {
          c->Error(e.span, "unknown function '" + call.callee + "'",
                   diag::kUnknownSymbol);
          for (ExprPtr& arg : call.args) {
            if (!IsUntypedLiteral(*arg)) c->CheckExpr(*arg, nullptr);
          }
          return expected != nullptr ? *expected : Type::UInt(64);
        }
        if (call.args.size() != callee->params.size()) {
          c->Error(e.span, "function '" + call.callee + "' takes " +
                               std::to_string(callee->params.size()) +
                               " argument(s), got " +
                               std::to_string(call.args.size()));
        }
        for (size_t i = 0; i < call.args.size(); ++i) {
          if (i < callee->params.size()) {
            c->CheckExpr(*call.args[i], &callee->params[i].type);
          } else {
            c->CheckExpr(*call.args[i], nullptr);
          }
        }
        return callee->return_type;
      }
    };
    return std::visit(Visitor{this, e, expected}, e.node);
  }

  void CheckLiteralRange(const SourceSpan& span, uint64_t value,
                         const Type& type, bool negated) {
    uint32_t w = type.scalar_width();
    bool fits;
    if (type.is_signed()) {
      uint64_t limit = uint64_t{1} << (w - 1);  // |min| = 2^(w-1), max = 2^(w-1)-1
      fits = negated ? value <= limit : value < limit;
    } else {
      fits = !negated && value <= WidthMask(w);
    }
    if (!fits) {
      Error(span, "literal " + std::string(negated ? "-" : "") +
                      std::to_string(value) + " does not fit in " +
                      TypeName(type));
    }
  }

  Type CheckUnary(Expr& e, UnaryExpr& u, const Type* expected) {
    switch (u.op) {
      case UnOp::kNeg: {
        if (auto* lit = std::get_if<IntLit>(&u.operand->node)) {
          if (expected == nullptr || !expected->is_scalar() ||
              expected->kind == Type::Kind::kBool) {
            Error(e.span,
                  "cannot infer a type for this integer literal; add a cast "
                  "or a typed operand");
            return Type::UInt(64);
          }
          CheckLiteralRange(e.span, lit->value, *expected, /*negated=*/true);
          u.operand->type = *expected;
          return *expected;
        }
        Type t = CheckExpr(*u.operand, expected);
        if (!t.is_scalar() || t.kind == Type::Kind::kBool) {
          Error(e.span, "operator '-' requires an integer operand, got " +
                            TypeName(t));
        }
        return t;
      }
      case UnOp::kBitNot: {
        Type t = CheckExpr(*u.operand, expected);
        if (!t.is_scalar()) {
          Error(e.span, "operator '~' requires a scalar operand, got " +
                            TypeName(t));
          return expected != nullptr ? *expected : Type::UInt(64);
        }
        return t;
      }
      case UnOp::kLogNot: {
        Type b = Type::Bool();
        CheckExpr(*u.operand, &b);
        return b;
      }
    }
    return Type::UInt(64);
  }

  Type CheckIndex(Expr& e, IndexExpr& idx) {
    Type base = CheckExpr(*idx.base, nullptr);
    if (base.kind != Type::Kind::kArray) {
      Error(e.span, "indexing non-array type " + TypeName(base));
      if (!IsUntypedLiteral(*idx.index)) CheckExpr(*idx.index, nullptr);
      return base;
    }
    auto const_index = ConstEval(*idx.index);
    if (const_index.has_value()) {
      AnnotateConst(*idx.index);
      if (*const_index >= base.length) {
        Error(idx.index->span, "index " + std::to_string(*const_index) +
                                   " is out of bounds for " + TypeName(base));
      }
    } else {
      Type it = CheckExpr(*idx.index, nullptr);
      if (it.kind != Type::Kind::kUInt) {
        Error(idx.index->span,
              "dynamic array index must be unsigned, got " + TypeName(it));
      } else {
        Warn(idx.index->span,
             "dynamic array index is lowered to a multiplexer chain over "
             "all " + std::to_string(base.length) + " elements",
             diag::kDynamicIndex);
      }
    }
    return *base.elem;
  }

  Type CheckBinaryParts(BinOp op, Expr& lhs, Expr& rhs, const Type* expected,
                        const SourceSpan& span) {
    switch (op) {
      case BinOp::kAdd:
      case BinOp::kSub:
      case BinOp::kMul:
      case BinOp::kDiv:
      case BinOp::kMod:
      case BinOp::kBitAnd:
      case BinOp::kBitOr:
      case BinOp::kBitXor: {
        bool bitwise = op == BinOp::kBitAnd || op == BinOp::kBitOr ||
                       op == BinOp::kBitXor;
        Type t = CheckOperandPair(lhs, rhs, expected);
        if (!t.is_scalar() || (!bitwise && t.kind == Type::Kind::kBool)) {
          Error(span, "operator '" + std::string(BinOpName(op)) +
                          "' is not defined for " + TypeName(t));
        }
        return t;
      }
      case BinOp::kShl:
      case BinOp::kShr: {
        Type t = CheckExpr(lhs, expected);
        if (!t.is_scalar() || t.kind == Type::Kind::kBool) {
          Error(span, "operator '" + std::string(BinOpName(op)) +
                          "' is not defined for " + TypeName(t));
        }
        auto amount = ConstEval(rhs);
        if (!amount.has_value()) {
          Error(rhs.span, "shift amount must be a compile-time constant",
                diag::kNonConstantShift);
          if (!IsUntypedLiteral(rhs)) CheckExpr(rhs, nullptr);
        } else {
          AnnotateConst(rhs);
        }
        return t;
      }
      case BinOp::kEq:
      case BinOp::kNe:
      case BinOp::kLt:
      case BinOp::kLe:
      case BinOp::kGt:
      case BinOp::kGe: {
        Type t = CheckOperandPair(lhs, rhs, nullptr);
        if (!t.is_scalar()) {
          Error(span, "comparison requires scalar operands, got " +
                          TypeName(t));
        } else if (t.kind == Type::Kind::kBool && op != BinOp::kEq &&
                   op != BinOp::kNe) {
          Error(span, "ordered comparison is not defined for bool");
        }
        return Type::Bool();
      }
      case BinOp::kLogAnd:
      case BinOp::kLogOr: {
        Type b = Type::Bool();
        CheckExpr(lhs, &b);
        CheckExpr(rhs, &b);
        return b;
      }
    }
    return Type::UInt(64);
  }

  // Types two operands that must agree, letting an untyped literal side
  // adopt from the other.
  Type CheckOperandPair(Expr& lhs, Expr& rhs, const Type* expected) {
    if (expected != nullptr) {
      CheckExpr(lhs, expected);
      CheckExpr(rhs, expected);
      return *expected;
    }
    if (IsUntypedLiteral(lhs) && !IsUntypedLiteral(rhs)) {
      Type t = CheckExpr(rhs, nullptr);
      CheckExpr(lhs, &t);
      return t;
    }
    Type t = CheckExpr(lhs, nullptr);
    CheckExpr(rhs, &t);
    return t;
  }

  Program* program_;
  std::vector<Diagnostic>* diags_;
  std::vector<std::unordered_map<std::string, Type>> scopes_;
  const Type* ret_type_ = nullptr;
  std::unordered_set<std::string> struct_names_;
};

}  // namespace

ParseResult Parse(std::string_view source) {
  ParseResult result;
  Parser parser(source, &result.diagnostics);
  std::optional<Program> program = parser.Run();
  if (!program.has_value()) return result;
  Checker checker(&*program, &result.diagnostics);
  checker.Run();
  if (HasErrors(result.diagnostics)) return result;
  result.program = std::move(program);
  return result;
}

}  // namespace fhec

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

#include "fhec/ir.hpp"

#include <array>
#include <sstream>

namespace fhec {
namespace {

struct KindInfo {
  IrKind kind;
  std::string_view name;
  int arity;  // -1 = variadic
};

constexpr std::array<KindInfo, 26> kKinds = {{
    {IrKind::kLiteral, "LITERAL", 0},
    {IrKind::kAdd, "ADD", 2},
    {IrKind::kSub, "SUB", 2},
    {IrKind::kMul, "MUL", 2},
    {IrKind::kUDiv, "UDIV", 2},
    {IrKind::kUMod, "UMOD", 2},
    {IrKind::kSDiv, "SDIV", 2},
    {IrKind::kSMod, "SMOD", 2},
    {IrKind::kAnd, "AND", 2},
    {IrKind::kOr, "OR", 2},
    {IrKind::kXor, "XOR", 2},
    {IrKind::kNot, "NOT", 1},
    {IrKind::kShlConst, "SHL_CONST", 1},
    {IrKind::kShrConst, "SHR_CONST", 1},
    {IrKind::kEq, "EQ", 2},
    {IrKind::kNe, "NE", 2},
    {IrKind::kULt, "ULT", 2},
    {IrKind::kULe, "ULE", 2},
    {IrKind::kSLt, "SLT", 2},
    {IrKind::kSLe, "SLE", 2},
    {IrKind::kNeg, "NEG", 1},
    {IrKind::kSelect, "SELECT", 3},
    {IrKind::kConcat, "CONCAT", -1},
    {IrKind::kSlice, "SLICE", 1},
    {IrKind::kZext, "ZEXT", 1},
    {IrKind::kSext, "SEXT", 1},
}};

const KindInfo& Info(IrKind kind) {
  return kKinds[static_cast<size_t>(kind)];
}

// Sign-extends the low `width` bits of `v` into a signed 64-bit value.
int64_t AsSigned(uint64_t v, uint32_t width) {
  if (width == 64) return static_cast<int64_t>(v);
  uint64_t sign = uint64_t{1} << (width - 1);
  return static_cast<int64_t>((v ^ sign) - sign);
}

uint64_t Magnitude(int64_t v) {
  // Two's-complement safe |v| (works for INT64_MIN).
  return v < 0 ? ~static_cast<uint64_t>(v) + 1 : static_cast<uint64_t>(v);
}

}  // namespace

std::string_view IrKindName(IrKind kind) { return Info(kind).name; }

std::optional<IrKind> IrKindFromName(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

int IrKindArity(IrKind kind) { return Info(kind).arity; }

std::vector<IrViolation> Validate(const IrFunction& f) {
  std::vector<IrViolation> out;
  auto bad = [&out](NodeId id, std::string msg) {
    out.push_back({id, std::move(msg)});
  };

  const NodeId first_node_id = static_cast<NodeId>(f.inputs.size());
  for (NodeId i = 0; i < f.inputs.size(); ++i) {
    if (f.inputs[i].width < 1 || f.inputs[i].width > 64) {
      bad(i, "input width out of range 1..64");
    }
  }

  for (size_t i = 0; i < f.nodes.size(); ++i) {
    const IrNode& n = f.nodes[i];
    const NodeId expect_id = first_node_id + static_cast<NodeId>(i);
    if (n.id != expect_id) {
      bad(n.id, "node id not dense/topological (expected %" +
                    std::to_string(expect_id) + ")");
      return out;  // id space is broken, later checks would mislead
    }
    if (n.width < 1 || n.width > 64) {
      bad(n.id, "width out of range 1..64");
      continue;
    }
    int arity = IrKindArity(n.kind);
    if (arity >= 0 && n.operands.size() != static_cast<size_t>(arity)) {
      bad(n.id, std::string(IrKindName(n.kind)) + " expects " +
                    std::to_string(arity) + " operands, got " +
                    std::to_string(n.operands.size()));
      continue;
    }
    if (n.kind == IrKind::kConcat && n.operands.empty()) {
      bad(n.id, "CONCAT needs at least one operand");
      continue;
    }
    bool dangling = false;
    for (NodeId op : n.operands) {
      if (op >= f.num_ids()) {
        bad(n.id, "dangling operand %" + std::to_string(op));
        dangling = true;
      } else if (op >= n.id) {
        bad(n.id, "use before definition of %" + std::to_string(op));
        dangling = true;
      }
    }
    if (dangling) continue;

    auto opw = [&](size_t k) { return f.width_of(n.operands[k]); };
    switch (n.kind) {
      case IrKind::kLiteral:
        if ((n.literal & ~WidthMask(n.width)) != 0) {
          bad(n.id, "literal does not fit width");
        }
        break;
      case IrKind::kAdd:
      case IrKind::kSub:
      case IrKind::kMul:
      case IrKind::kUDiv:
      case IrKind::kUMod:
      case IrKind::kSDiv:
      case IrKind::kSMod:
      case IrKind::kAnd:
      case IrKind::kOr:
      case IrKind::kXor:
        if (opw(0) != n.width || opw(1) != n.width) {
          bad(n.id, "width mismatch at node %" + std::to_string(n.id));
        }
        break;
      case IrKind::kNot:
      case IrKind::kNeg:
      case IrKind::kShlConst:
      case IrKind::kShrConst:
        if (opw(0) != n.width) {
          bad(n.id, "width mismatch at node %" + std::to_string(n.id));
        }
        break;
      case IrKind::kEq:
      case IrKind::kNe:
      case IrKind::kULt:
      case IrKind::kULe:
      case IrKind::kSLt:
      case IrKind::kSLe:
        if (n.width != 1) {
          bad(n.id, "comparison result width must be 1");
        } else if (opw(0) != opw(1)) {
          bad(n.id, "width mismatch at node %" + std::to_string(n.id));
        }
        break;
      case IrKind::kSelect:
        if (opw(0) != 1) {
          bad(n.id, "SELECT condition width must be 1");
        } else if (opw(1) != n.width || opw(2) != n.width) {
          bad(n.id, "width mismatch at node %" + std::to_string(n.id));
        }
        break;
      case IrKind::kConcat: {
        uint64_t sum = 0;
        for (size_t k = 0; k < n.operands.size(); ++k) sum += opw(k);
        if (sum != n.width) {
          bad(n.id, "CONCAT operand widths sum to " + std::to_string(sum) +
                        ", node width is " + std::to_string(n.width));
        }
        break;
      }
      case IrKind::kSlice:
        if (uint64_t{n.imm} + n.width > opw(0)) {
          bad(n.id, "SLICE bounds exceed operand width");
        }
        break;
      case IrKind::kZext:
      case IrKind::kSext:
        if (n.width < opw(0)) {
          bad(n.id, "extension must not narrow");
        }
        break;
    }
  }

  for (const IrOutput& o : f.outputs) {
    if (o.id >= f.num_ids()) {
      bad(o.id, "output references missing id %" + std::to_string(o.id));
    } else if (f.width_of(o.id) != o.width) {
      bad(o.id, "output width disagrees with node width");
    }
  }
  return out;
}

bool IsValid(const IrFunction& f) { return Validate(f).empty(); }

uint64_t EvalNode(IrKind kind, uint32_t width,
                  std::span<const uint32_t> operand_widths,
                  std::span<const uint64_t> operands, uint64_t literal,
                  uint32_t imm) {
  const uint64_t mask = WidthMask(width);
  auto a = [&] { return operands[0]; };
  auto b = [&] { return operands[1]; };
  auto sa = [&] { return AsSigned(operands[0], operand_widths[0]); };
  auto sb = [&] { return AsSigned(operands[1], operand_widths[1]); };

  switch (kind) {
    case IrKind::kLiteral:
      return literal & mask;
    case IrKind::kAdd:
      return (a() + b()) & mask;
    case IrKind::kSub:
      return (a() - b()) & mask;
    case IrKind::kMul:
      return (a() * b()) & mask;
    case IrKind::kUDiv:
      // Total-division convention: x / 0 = all ones.
      return b() == 0 ? mask : (a() / b()) & mask;
    case IrKind::kUMod:
      // Total-division convention: x % 0 = x.
      return b() == 0 ? a() : (a() % b()) & mask;
    case IrKind::kSDiv: {
      if (b() == 0) return mask;
      // Truncating signed division over magnitudes; wraps mod 2^width
      // (INT_MIN / -1 stays INT_MIN).
      uint64_t q = Magnitude(sa()) / Magnitude(sb());
      bool neg = (sa() < 0) != (sb() < 0);
      return (neg ? ~q + 1 : q) & mask;
    }
    case IrKind::kSMod: {
      if (b() == 0) return a();
      // Remainder takes the dividend's sign (C semantics).
      uint64_t r = Magnitude(sa()) % Magnitude(sb());
      return (sa() < 0 ? ~r + 1 : r) & mask;
    }
    case IrKind::kAnd:
      return a() & b();
    case IrKind::kOr:
      return a() | b();
    case IrKind::kXor:
      return a() ^ b();
    case IrKind::kNot:
      return ~a() & mask;
    case IrKind::kShlConst:
      return imm >= width ? 0 : (a() << imm) & mask;
    case IrKind::kShrConst:
      return imm >= width ? 0 : a() >> imm;  // logical shift
    case IrKind::kEq:
      return a() == b() ? 1 : 0;
    case IrKind::kNe:
      return a() != b() ? 1 : 0;
    case IrKind::kULt:
      return a() < b() ? 1 : 0;
    case IrKind::kULe:
      return a() <= b() ? 1 : 0;
    case IrKind::kSLt:
      return sa() < sb() ? 1 : 0;
    case IrKind::kSLe:
      return sa() <= sb() ? 1 : 0;
    case IrKind::kNeg:
      return (~a() + 1) & mask;
    case IrKind::kSelect:
      return operands[0] != 0 ? operands[1] : operands[2];
    case IrKind::kConcat: {
      uint64_t v = 0;
      uint32_t shift = 0;  // first operand is least significant
      for (size_t k = 0; k < operands.size(); ++k) {
        v |= operands[k] << shift;
        shift += operand_widths[k];
      }
      return v & mask;
    }
    case IrKind::kSlice:
      return (a() >> imm) & mask;
    case IrKind::kZext:
      return a();
    case IrKind::kSext: {
      return static_cast<uint64_t>(AsSigned(a(), operand_widths[0])) & mask;
    }
  }
  return 0;  // unreachable
}

std::vector<uint64_t> Evaluate(const IrFunction& f,
                               const std::map<std::string, uint64_t>& inputs) {
  std::vector<uint64_t> values(f.num_ids(), 0);
  for (size_t i = 0; i < f.inputs.size(); ++i) {
    auto it = inputs.find(f.inputs[i].name);
    if (it == inputs.end()) {
      throw std::invalid_argument("missing input: " + f.inputs[i].name);
    }
    if ((it->second & ~WidthMask(f.inputs[i].width)) != 0) {
      throw std::invalid_argument("input value out of range: " +
                                  f.inputs[i].name);
    }
    values[i] = it->second;
  }

  std::vector<uint64_t> ops;
  std::vector<uint32_t> ws;
  for (const IrNode& n : f.nodes) {
    ops.clear();
    ws.clear();
    for (NodeId op : n.operands) {
      ops.push_back(values[op]);
      ws.push_back(f.width_of(op));
    }
    values[n.id] = EvalNode(n.kind, n.width, ws, ops, n.literal, n.imm);
  }

  std::vector<uint64_t> out;
  out.reserve(f.outputs.size());
  for (const IrOutput& o : f.outputs) out.push_back(values[o.id]);
  return out;
}

std::string Serialize(const IrFunction& f) {
  std::ostringstream os;
  os << "fn " << f.name << '\n';
  for (const IrInput& in : f.inputs) {
    os << "input " << in.name << ':' << in.width << '\n';
  }
  for (const IrNode& n : f.nodes) {
    os << '%' << n.id << ':' << n.width << " = " << IrKindName(n.kind) << '(';
    bool first = true;
    auto sep = [&] {
      if (!first) os << ", ";
      first = false;
    };
    for (NodeId op : n.operands) {
      sep();
      os << '%' << op;
    }
    if (n.kind == IrKind::kLiteral) {
      sep();
      os << "value=" << n.literal;
    } else if (n.kind == IrKind::kSlice) {
      sep();
      os << "start=" << n.imm;
    } else if (n.kind == IrKind::kShlConst || n.kind == IrKind::kShrConst) {
      sep();
      os << "amount=" << n.imm;
    }
    os << ")\n";
  }
  for (const IrOutput& o : f.outputs) {
    os << "output %" << o.id << ':' << o.width << '\n';
  }
  return os.str();
}

IrParseError::IrParseError(int line, int col, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                         ": " + message),
      line_(line),
      col_(col) {}

namespace {

// Minimal cursor over one line of the .ir format.
class LineCursor {
 public:
  LineCursor(std::string_view s, int line) : s_(s), line_(line) {}

  void SkipWs() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool AtEnd() {
    SkipWs();
    return pos_ >= s_.size();
  }
  bool Peek(char c) {
    SkipWs();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool Eat(char c) {
    if (!Peek(c)) return false;
    ++pos_;
    return true;
  }
  void Expect(char c) {
    if (!Eat(c)) Fail(std::string("expected '") + c + "'");
  }
  std::string Word() {
    SkipWs();
    size_t start = pos_;
    while (pos_ < s_.size() && (isalnum(s_[pos_]) || s_[pos_] == '_' ||
                                s_[pos_] == '.' || s_[pos_] == '[' ||
                                s_[pos_] == ']')) {
      ++pos_;
    }
    if (pos_ == start) Fail("expected identifier");
    return std::string(s_.substr(start, pos_ - start));
  }
  uint64_t Number() {
    SkipWs();
    size_t start = pos_;
    while (pos_ < s_.size() && isdigit(s_[pos_])) ++pos_;
    if (pos_ == start) Fail("expected number");
    return std::stoull(std::string(s_.substr(start, pos_ - start)));
  }
  [[noreturn]] void Fail(const std::string& msg) {
    throw IrParseError(line_, static_cast<int>(pos_) + 1, msg);
  }

 private:
  std::string_view s_;
  size_t pos_ = 0;
  int line_;
};

}  // namespace

IrFunction ParseIr(std::string_view text) {
  IrFunction f;
  bool saw_fn = false;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    LineCursor c(line, line_no);
    if (c.AtEnd() || c.Peek('#')) continue;

    if (c.Peek('%')) {
      c.Expect('%');
      IrNode n;
      n.id = static_cast<NodeId>(c.Number());
      c.Expect(':');
      n.width = static_cast<uint32_t>(c.Number());
      c.Expect('=');
      std::string kind_name = c.Word();
      auto kind = IrKindFromName(kind_name);
      if (!kind) c.Fail("unknown node kind " + kind_name);
      n.kind = *kind;
      c.Expect('(');
      bool first = true;
      while (!c.Eat(')')) {
        if (!first) c.Expect(',');
        first = false;
        if (c.Eat('%')) {
          n.operands.push_back(static_cast<NodeId>(c.Number()));
        } else {
          std::string attr = c.Word();
          c.Expect('=');
          uint64_t v = c.Number();
          if (attr == "value") {
            n.literal = v;
          } else if (attr == "start" || attr == "amount") {
            n.imm = static_cast<uint32_t>(v);
          } else {
            c.Fail("unknown attribute " + attr);
          }
        }
      }
      if (!c.AtEnd()) c.Fail("trailing characters");
      if (n.id != f.num_ids()) c.Fail("node id out of order");
      f.nodes.push_back(std::move(n));
      continue;
    }

    std::string word = c.Word();
    if (word == "fn") {
      if (saw_fn) c.Fail("duplicate fn header");
      saw_fn = true;
      f.name = c.Word();
    } else if (word == "input") {
      if (!f.nodes.empty() || !f.outputs.empty()) {
        c.Fail("input after nodes/outputs");
      }
      IrInput in;
      in.name = c.Word();
      c.Expect(':');
      in.width = static_cast<uint32_t>(c.Number());
      f.inputs.push_back(std::move(in));
    } else if (word == "output") {
      c.Expect('%');
      IrOutput o;
      o.id = static_cast<NodeId>(c.Number());
      c.Expect(':');
      o.width = static_cast<uint32_t>(c.Number());
      f.outputs.push_back(o);
    } else {
      c.Fail("unknown directive " + word);
    }
    if (!c.AtEnd()) c.Fail("trailing characters");
  }
  if (!saw_fn) throw IrParseError(1, 1, "missing fn header");
  return f;
}

}  // namespace fhec

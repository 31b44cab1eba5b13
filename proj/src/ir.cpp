#include "slmini/ir.hpp"

#include <charconv>
#include <sstream>

namespace slmini {

std::string to_string(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Int: return (v.explicit_placement ? "@" : "") + std::to_string(v.i);
    case Value::Kind::Array: return "&" + std::to_string(v.i);
    case Value::Kind::Float: {
      char buf[64];
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v.f);
      std::string s(buf, end);
      if (s.find_first_of(".eni") == std::string::npos) s += ".0";
      return s;
    }
  }
  return "?";
}

const char* to_string(Opcode op) {
  switch (op) {
    case Opcode::Allocate: return "ALLOCATE";
    case Opcode::Configure: return "CONFIGURE";
    case Opcode::Create: return "CREATE";
    case Opcode::Sync: return "SYNC";
    case Opcode::Release: return "RELEASE";
    case Opcode::Put: return "PUT";
    case Opcode::Get: return "GET";
    case Opcode::Read: return "READ";
    case Opcode::Write: return "WRITE";
    case Opcode::Const: return "CONST";
    case Opcode::Move: return "MOVE";
    case Opcode::ToInt: return "TOINT";
    case Opcode::ToFloat: return "TOFLOAT";
    case Opcode::Unary: return "UNARY";
    case Opcode::Binary: return "BINARY";
    case Opcode::NewArray: return "NEWARRAY";
    case Opcode::Load: return "LOAD";
    case Opcode::Store: return "STORE";
    case Opcode::Jump: return "JUMP";
    case Opcode::JumpIfZero: return "JZ";
    case Opcode::Call: return "CALL";
    case Opcode::Return: return "RET";
    case Opcode::Index: return "INDEX";
    case Opcode::PrintInt: return "PRINT_INT";
    case Opcode::PrintFloat: return "PRINT_FLOAT";
    case Opcode::PrintStr: return "PRINT_STR";
    case Opcode::PlaceDefault: return "PLACE_DEFAULT";
    case Opcode::PlaceSize: return "PLACE_SIZE";
    case Opcode::PlaceFirst: return "PLACE_FIRST";
    case Opcode::PlaceLocal: return "PLACE_LOCAL";
    case Opcode::PlaceMake: return "PLACE_MAKE";
  }
  return "?";
}

const char* to_string(ContextKind k) { return k == ContextKind::Regular ? "regular" : "exclusive"; }

const char* to_string(FailureMode m) {
  switch (m) {
    case FailureMode::Serialize: return "serialize";
    case FailureMode::Wait: return "wait";
    case FailureMode::ForceSeq: return "forceseq";
  }
  return "?";
}

const IrFunction* IrProgram::function(const std::string& name) const {
  auto it = functions.find(name);
  return it == functions.end() ? nullptr : &it->second;
}

namespace {

std::string operand(const Operand& o) { return o.immediate ? to_string(o.value) : "%" + std::to_string(o.slot); }

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string render(const IrOp& op, const IrProgram& prog) {
  std::ostringstream o;
  o << to_string(op.op);
  auto a = [&](std::size_t i) { return operand(op.args.at(i)); };
  auto dst = [&] { return "%" + std::to_string(op.dst); };
  switch (op.op) {
    case Opcode::Allocate:
      o << " " << dst() << " place=" << a(0) << " kind=" << to_string(op.kind) << " mode=" << to_string(op.mode);
      break;
    case Opcode::Configure:
      o << " range=(" << a(1) << "," << a(2) << "," << a(3) << ") ws=" << a(4) << " ctx=" << a(0)
        << " sig=" << to_string(op.signature);
      break;
    case Opcode::Create: o << " " << a(0) << " fn=" << op.name; break;
    case Opcode::Sync: o << " " << a(0); break;
    case Opcode::Release:
      o << " " << a(0);
      if (op.flag) o << " deferred";
      break;
    case Opcode::Put: o << " " << a(0) << " ch=" << op.channel << " " << a(1); break;
    case Opcode::Get: o << " " << dst() << " <- " << a(0) << " ch=" << op.channel; break;
    case Opcode::Read: o << " " << dst() << " <- ch=" << op.channel; break;
    case Opcode::Write: o << " ch=" << op.channel << " " << a(0); break;
    case Opcode::Unary: o << " " << dst() << " = " << op.name << " " << a(0); break;
    case Opcode::Binary: o << " " << dst() << " = " << a(0) << " " << op.name << " " << a(1); break;
    case Opcode::NewArray: o << " " << dst() << " " << (op.flag ? "float" : "int") << "[" << a(0) << "]"; break;
    case Opcode::Load: o << " " << dst() << " = " << a(0) << "[" << a(1) << "]"; break;
    case Opcode::Store: o << " " << a(0) << "[" << a(1) << "] = " << a(2); break;
    case Opcode::Jump: o << " " << op.target; break;
    case Opcode::JumpIfZero: o << " " << a(0) << " " << op.target; break;
    case Opcode::Call:
      if (op.dst >= 0) o << " " << dst() << " =";
      o << " " << op.name << "(";
      for (std::size_t i = 0; i < op.args.size(); ++i) o << (i ? ", " : "") << a(i);
      o << ")";
      break;
    case Opcode::PrintStr: o << " " << quoted(prog.strings.at(static_cast<std::size_t>(op.channel))); break;
    default:
      if (op.dst >= 0) o << " " << dst();
      for (std::size_t i = 0; i < op.args.size(); ++i) o << (i || op.dst >= 0 ? ", " : " ") << a(i);
  }
  return o.str();
}

}  // namespace

std::string ir_dump(const IrProgram& program) {
  std::ostringstream o;
  o << "entry " << program.entry << "\n";
  for (const auto& [name, fn] : program.functions) {
    o << "\n";
    if (fn.is_thread) {
      o << "thread " << name << " sig=" << to_string(fn.signature);
    } else {
      o << "function " << name << "(";
      for (std::size_t i = 0; i < fn.params.size(); ++i) o << (i ? ", " : "") << to_string(fn.params[i]);
      o << ") -> " << to_string(fn.result);
    }
    o << " slots=" << fn.num_slots << "\n";
    for (std::size_t i = 0; i < fn.code.size(); ++i) {
      char idx[16];
      std::snprintf(idx, sizeof idx, "%4zu", i);
      o << idx << "  " << render(fn.code[i], program) << "\n";
    }
  }
  return o.str();
}

}  // namespace slmini

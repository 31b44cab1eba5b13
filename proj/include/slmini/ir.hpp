#pragma once

#include <map>
#include <string>
#include <vector>

#include "slmini/ast.hpp"
#include "slmini/value.hpp"

namespace slmini {

enum class Opcode {
  // SVP control events
  Allocate,   // dst=ctx, a0=placement, kind, mode
  Configure,  // a0=ctx, a1..a4 = start, limit, step, ws
  Create,     // a0=ctx, name=thread function
  Sync,       // a0=ctx
  Release,    // a0=ctx, deferred for detached families
  Put,        // a0=ctx, channel, a1=value
  Get,        // dst, a0=ctx, channel
  Read,       // dst, channel
  Write,      // channel, a0=value
  // plumbing
  Const,      // dst, a0
  Move,       // dst, a0
  ToInt,      // dst, a0
  ToFloat,    // dst, a0
  Unary,      // dst, name=op, a0
  Binary,     // dst, name=op, a0, a1
  NewArray,   // dst, a0=size, elem=float?
  Load,       // dst, a0=array, a1=index
  Store,      // a0=array, a1=index, a2=value
  Jump,       // target
  JumpIfZero, // a0, target
  Call,       // dst (or -1), name, args
  Return,     // optional a0
  Index,      // dst <- logical index
  PrintInt,
  PrintFloat,
  PrintStr,   // channel = string pool index
  PlaceDefault,
  PlaceSize,
  PlaceFirst,
  PlaceLocal,
  PlaceMake,
};

const char* to_string(Opcode op);

enum class ContextKind { Regular, Exclusive };
enum class FailureMode { Serialize, Wait, ForceSeq };
const char* to_string(ContextKind k);
const char* to_string(FailureMode m);

/// A frame slot or an immediate value.
struct Operand {
  bool immediate = false;
  int slot = -1;
  Value value;

  static Operand of_slot(int s) { return Operand{false, s, {}}; }
  static Operand of_value(Value v) { return Operand{true, -1, v}; }
};

struct IrOp {
  Opcode op = Opcode::Const;
  int dst = -1;
  std::vector<Operand> args;
  std::string name;       // callee, thread function or operator
  int channel = -1;       // channel index, string id
  int target = -1;        // jump target
  ContextKind kind = ContextKind::Regular;
  FailureMode mode = FailureMode::Serialize;
  bool flag = false;      // Release: deferred; NewArray: float elements
  ChannelSignature signature;  // Configure
  SourceSpan span;
};

struct IrFunction {
  std::string name;
  bool is_thread = false;
  ChannelSignature signature;  // thread functions
  std::vector<CType> params;   // C functions; occupy slots 0..n-1
  CType result;
  int num_slots = 0;
  std::vector<IrOp> code;
};

struct IrProgram {
  std::map<std::string, IrFunction> functions;
  std::string entry = "main";
  std::vector<std::string> strings;

  const IrFunction* function(const std::string& name) const;
};

/// Line-oriented text form; byte-identical for identical programs.
std::string ir_dump(const IrProgram& program);

}  // namespace slmini

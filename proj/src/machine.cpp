#include "slmini/machine.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "slmini/channels.hpp"

namespace slmini {

void MachineConfig::validate() const {
  if (num_cores < 1) throw std::invalid_argument("cores must be positive");
  if (num_cores > 65535) throw std::invalid_argument("cores must be below 65536");
  if (hw_threads_per_core < 1) throw std::invalid_argument("hw-threads must be positive");
  if (family_entries_per_core < 1) throw std::invalid_argument("family-entries must be positive");
  if (max_steps < 1) throw std::invalid_argument("max-steps must be positive");
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::DataflowError: return "dataflow-error";
    case RunStatus::Deadlock: return "deadlock";
    case RunStatus::StepLimit: return "step-limit";
  }
  return "?";
}

int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return 0;
    case RunStatus::DataflowError: return 2;
    case RunStatus::Deadlock: return 3;
    case RunStatus::StepLimit: return 4;
  }
  return 2;
}

std::int64_t IndexRange::count() const {
  if (step <= 0) throw std::invalid_argument("step must be positive");
  if (limit <= start) return 0;
  __int128 span = static_cast<__int128>(limit) - start;
  return static_cast<std::int64_t>((span + step - 1) / step);
}

std::vector<CoreShare> distribute(std::int64_t n, int placement_size, bool has_shared, int first_core) {
  std::vector<CoreShare> out;
  if (n <= 0) return out;
  if (has_shared || placement_size <= 1) {
    out.push_back({first_core, 0, n});
    return out;
  }
  std::int64_t p = placement_size;
  std::int64_t base = n / p, extra = n % p, next = 0;
  for (std::int64_t k = 0; k < p; ++k) {
    std::int64_t c = base + (k < extra ? 1 : 0);
    if (c == 0) break;
    out.push_back({first_core + static_cast<int>(k), next, c});
    next += c;
  }
  return out;
}

namespace {

struct Trap {
  std::string code;
  std::string message;
};

enum class FamState { Allocated, Configured, Running, Done, Released };

struct Share {
  CoreShare share;
  std::int64_t next = 0;  // threads of this share already started
  int active = 0;
};

struct Family {
  std::int64_t id = 0;
  const IrFunction* fn = nullptr;
  bool serialized = false;
  ContextKind kind = ContextKind::Regular;
  FailureMode mode = FailureMode::Serialize;
  ResolvedPlacement place;
  bool holds_context = false;
  IndexRange range;
  std::int64_t n = 0;
  std::int64_t window = 0;
  ChannelSignature sig;
  FamilyChannels channels;
  FamState state = FamState::Allocated;
  bool detached = false;
  std::vector<Share> shares;
  std::int64_t pending = 0;  // not yet started
  std::int64_t live = 0;
  std::int64_t serial_next = 0;
};

struct Frame {
  const IrFunction* fn = nullptr;
  std::size_t pc = 0;
  std::vector<Value> slots;
  int ret_dst = -1;
  std::int64_t family = 0;
  std::int64_t ordinal = 0;
  std::int64_t index = 0;
  bool root = false;
};

struct Request {
  ResolvedPlacement place;
  ContextKind kind = ContextKind::Regular;
  FailureMode mode = FailureMode::Serialize;
  int dst = -1;
};

struct Thread {
  std::int64_t id = 0;
  int core = 0;
  std::size_t share = 0;
  std::vector<Frame> frames;
  std::uint64_t priority = 0;
  bool waiting = false;
  Request pending;
};

struct Core {
  int entries_used = 0;
  bool exclusive_busy = false;
  int pool_used = 0;  // hardware slots beyond each family's first thread
  std::deque<std::int64_t> regular_queue;
  std::deque<std::int64_t> exclusive_queue;
};

struct Array {
  bool is_float = false;
  std::vector<Value> elems;
};

constexpr std::size_t kMaxFrames = 4096;
constexpr std::int64_t kMaxArray = 1 << 24;

std::string fmt_float(double v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

class Machine {
 public:
  Machine(const IrProgram& prog, const MachineConfig& cfg, const RunOptions& opts)
      : prog_(prog), cfg_(cfg), opts_(opts), rng_(cfg.seed), cores_(static_cast<std::size_t>(cfg.num_cores)) {
    tracing_ = opts.collect_trace || static_cast<bool>(opts.sink);
    noise_ = static_cast<unsigned>(rng_() % 4);
  }

  RunResult run() {
    cfg_.validate();
    const IrFunction* entry = prog_.function(prog_.entry);
    if (!entry || entry->is_thread || !entry->params.empty())
      throw std::invalid_argument("program has no entry function '" + prog_.entry + "'");

    Family& boot = families_[0];
    boot.id = 0;
    boot.fn = entry;
    boot.place = ResolvedPlacement{0, cfg_.num_cores, false};
    boot.state = FamState::Running;
    boot.n = 1;
    boot.live = 1;
    Thread t;
    t.id = 0;
    t.core = 0;
    t.priority = rng_();
    t.frames.push_back(root_frame(entry, 0, 0, 0));
    threads_.push_back(std::move(t));
    live_.push_back(0);
    emit("thread-start", 0, 0, 0, "fn=" + entry->name);

    try {
      while (!live_.empty()) {
        if (step_ >= cfg_.max_steps) {
          result_.status = RunStatus::StepLimit;
          result_.message = "step limit of " + std::to_string(cfg_.max_steps) + " reached";
          break;
        }
        Thread* next = pick();
        if (!next) {
          deadlock();
          break;
        }
        ++step_;
        execute(*next);
      }
    } catch (const Trap& trap) {
      result_.status = RunStatus::DataflowError;
      result_.error_code = trap.code;
      result_.message = trap.message;
    }
    result_.steps = step_;
    return std::move(result_);
  }

 private:
  // ---- plumbing ----
  void emit(const char* event, int core, std::int64_t family, std::optional<std::int64_t> thread,
            std::string detail) {
    if (!tracing_) return;
    TraceEvent e{step_, event, core, family, thread, std::move(detail)};
    if (opts_.sink) opts_.sink(e);
    if (opts_.collect_trace) result_.trace.push_back(std::move(e));
  }

  Frame root_frame(const IrFunction* fn, std::int64_t family, std::int64_t ordinal, std::int64_t index) {
    Frame f;
    f.fn = fn;
    f.slots.resize(static_cast<std::size_t>(fn->num_slots));
    f.family = family;
    f.ordinal = ordinal;
    f.index = index;
    f.root = true;
    return f;
  }

  static Value val(const Frame& f, const Operand& o) { return o.immediate ? o.value : f.slots[o.slot]; }

  Family& family(std::int64_t id) { return families_.at(id); }

  Family& ctx_family(const Frame& f, const Operand& o) { return family(val(f, o).i); }

  [[noreturn]] void trap(const Thread& t, const std::string& code, const std::string& msg) {
    const Frame& f = t.frames.back();
    const IrOp& op = f.fn->code[f.pc];
    std::string where = op.span.file + ":" + std::to_string(op.span.line) + ":" + std::to_string(op.span.column);
    throw Trap{code, where + ": " + msg + " (in " + f.fn->name + ", family " + std::to_string(f.family) +
                         ", index " + std::to_string(f.index) + ")"};
  }

  std::string fam_name(const Family& fam) const {
    return "family " + std::to_string(fam.id) + (fam.fn ? " (" + fam.fn->name + ")" : "");
  }

  // ---- scheduling ----
  bool can_run(const Thread& t) {
    if (t.waiting) return false;
    const Frame& f = t.frames.back();
    const IrOp& op = f.fn->code[f.pc];
    switch (op.op) {
      case Opcode::Read: {
        const Family& fam = family(f.family);
        if (fam.serialized) return true;
        Value v;
        return fam.channels.read(static_cast<std::size_t>(op.channel), static_cast<std::size_t>(f.ordinal), v) !=
               ChannelStatus::Blocked;
      }
      case Opcode::Sync: {
        const Family& fam = family(val(f, op.args[0]).i);
        return fam.state >= FamState::Done;
      }
      case Opcode::Return: {
        if (!f.root || !opts_.forward_unwritten || f.family == 0) return true;
        const Family& fam = family(f.family);
        if (fam.serialized) return true;
        Value v;
        for (auto ch : fam.channels.unwritten(static_cast<std::size_t>(f.ordinal)))
          if (fam.channels.read(ch, static_cast<std::size_t>(f.ordinal), v) == ChannelStatus::Blocked) return false;
        return true;
      }
      default: return true;
    }
  }

  Thread* pick() {
    std::vector<Thread*> runnable;
    for (auto id : live_)
      if (can_run(threads_[id])) runnable.push_back(&threads_[id]);
    if (runnable.empty()) return nullptr;
    // strict priority, with a per-run chance (0 to 3/8) of a uniform pick
    if (rng_() % 8 >= noise_) {
      Thread* best = runnable.front();
      for (Thread* t : runnable)
        if (t->priority > best->priority) best = t;
      return best;
    }
    return runnable[rng_() % runnable.size()];
  }

  std::string blocked_reason(const Thread& t) {
    if (t.waiting) {
      const Request& r = t.pending;
      return std::string("blocked on allocate of ") +
             (r.kind == ContextKind::Exclusive ? "the exclusive context" : "a family entry") + " on core " +
             std::to_string(r.place.first_core) +
             (r.kind == ContextKind::Exclusive ? " (sl__exclusive)" : " (sl__forcewait)");
    }
    const Frame& f = t.frames.back();
    const IrOp& op = f.fn->code[f.pc];
    switch (op.op) {
      case Opcode::Read:
        return "blocked on read of channel " + std::to_string(op.channel) + " of " + fam_name(family(f.family));
      case Opcode::Sync: return "blocked on sync of " + fam_name(family(val(f, op.args[0]).i));
      case Opcode::Return: return "blocked forwarding an unwritten shared channel";
      default: return "blocked";
    }
  }

  void deadlock() {
    result_.status = RunStatus::Deadlock;
    std::string report = "deadlock: " + std::to_string(live_.size()) + " thread(s) blocked";
    for (auto id : live_) {
      const Thread& t = threads_[id];
      const Frame& root = t.frames.front();
      const Frame& top = t.frames.back();
      std::string reason = blocked_reason(t);
      std::string line = "thread " + std::to_string(id) + " [" + fam_name(family(root.family)) + ", index " +
                         std::to_string(root.index) + ", core " + std::to_string(t.core) + ", in " + top.fn->name +
                         "] " + reason;
      report += "\n  " + line;
      emit("deadlock", t.core, top.family, top.index, reason);
    }
    result_.message = report;
  }

  // ---- families and contexts ----
  Family& new_family(const Request& req, bool serialized) {
    std::int64_t id = next_family_++;
    Family& fam = families_[id];
    fam.id = id;
    fam.place = req.place;
    fam.kind = req.kind;
    fam.mode = req.mode;
    fam.serialized = serialized;
    return fam;
  }

  std::string request_text(const Request& r) const {
    return std::string("kind=") + to_string(r.kind) + " mode=" + to_string(r.mode) + " place=" + to_string(r.place);
  }

  void grant(Thread& t, const Request& req) {
    Core& c = cores_[static_cast<std::size_t>(req.place.first_core)];
    if (req.kind == ContextKind::Exclusive)
      c.exclusive_busy = true;
    else
      ++c.entries_used;
    Family& fam = new_family(req, false);
    fam.holds_context = true;
    Frame& f = t.frames.back();
    f.slots[static_cast<std::size_t>(req.dst)] = Value::of_int(fam.id);
    ++f.pc;
    t.waiting = false;
    emit("allocate", t.core, fam.id, std::nullopt, request_text(req) + " outcome=context");
  }

  void serialize(Thread& t, const Request& req, const std::string& reason) {
    Family& fam = new_family(req, true);
    Frame& f = t.frames.back();
    f.slots[static_cast<std::size_t>(req.dst)] = Value::of_int(fam.id);
    ++f.pc;
    emit("allocate", t.core, fam.id, std::nullopt, request_text(req) + " outcome=serialized");
    emit("serialize-fallback", t.core, fam.id, std::nullopt, "reason=" + reason);
  }

  void allocate(Thread& t, const IrOp& op) {
    Frame& f = t.frames.back();
    Value v = val(f, op.args[0]);
    if (v.kind != Value::Kind::Int) trap(t, "E_BAD_PLACEMENT", "placement is not an integer");
    Request req;
    try {
      req.place = resolve_placement(PlacementAddress{v.i, v.explicit_placement}, family(f.family).place, t.core,
                                    cfg_.num_cores);
    } catch (const PlacementError& e) {
      trap(t, "E_BAD_PLACEMENT", e.what());
    }
    req.kind = op.kind;
    req.mode = op.mode;
    req.dst = op.dst;
    if (req.kind == ContextKind::Exclusive) req.place.size = 1;
    if (opts_.serialize_all) return serialize(t, req, "--serialize");
    if (req.mode == FailureMode::ForceSeq) return serialize(t, req, "sl__forceseq");
    Core& c = cores_[static_cast<std::size_t>(req.place.first_core)];
    bool entry_free = c.entries_used < cfg_.family_entries_per_core;
    if (req.kind == ContextKind::Exclusive) {
      if (!c.exclusive_busy && c.exclusive_queue.empty()) return grant(t, req);
      c.exclusive_queue.push_back(t.id);
    } else if (req.mode == FailureMode::Wait) {
      if (entry_free && c.regular_queue.empty()) return grant(t, req);
      c.regular_queue.push_back(t.id);
    } else {
      if (entry_free) return grant(t, req);
      return serialize(t, req, "no free family entry on core " + std::to_string(req.place.first_core));
    }
    t.waiting = true;
    t.pending = req;
    emit("allocate", t.core, family(f.family).id, f.index, request_text(req) + " outcome=blocked");
  }

  void release(Family& fam, bool automatic, int core) {
    if (fam.state == FamState::Released) return;
    fam.state = FamState::Released;
    if (!fam.holds_context) return;
    fam.holds_context = false;
    Core& c = cores_[static_cast<std::size_t>(fam.place.first_core)];
    emit("release", core, fam.id, std::nullopt, automatic ? "automatic" : "");
    std::deque<std::int64_t>& q = fam.kind == ContextKind::Exclusive ? c.exclusive_queue : c.regular_queue;
    if (fam.kind == ContextKind::Exclusive)
      c.exclusive_busy = false;
    else
      --c.entries_used;
    if (!q.empty()) {
      Thread& waiter = threads_[q.front()];
      q.pop_front();
      grant(waiter, waiter.pending);
    }
  }

  void family_done(Family& fam, int core) {
    fam.state = FamState::Done;
    if (fam.detached) release(fam, true, core);
  }

  void configure(Thread& t, const IrOp& op) {
    Frame& f = t.frames.back();
    Family& fam = ctx_family(f, op.args[0]);
    if (fam.state != FamState::Allocated) trap(t, "E_INTERNAL", "context configured twice");
    fam.range = IndexRange{val(f, op.args[1]).as_int(), val(f, op.args[2]).as_int(), val(f, op.args[3]).as_int()};
    fam.window = val(f, op.args[4]).as_int();
    if (fam.range.step <= 0) trap(t, "E_BAD_STEP", "step must be positive, got " + std::to_string(fam.range.step));
    if (fam.window < 0) trap(t, "E_BAD_STEP", "window size must not be negative");
    fam.n = fam.range.count();
    fam.sig = op.signature;
    fam.channels = FamilyChannels(fam.sig, static_cast<std::size_t>(fam.n));
    fam.state = FamState::Configured;
    ++f.pc;
    if (tracing_)
      emit("configure", t.core, fam.id, std::nullopt,
           "range=(" + std::to_string(fam.range.start) + "," + std::to_string(fam.range.limit) + "," +
               std::to_string(fam.range.step) + ") ws=" + std::to_string(fam.window) + " sig=" + to_string(fam.sig) +
               " threads=" + std::to_string(fam.n));
  }

  void create(Thread& t, const IrOp& op) {
    Frame& f = t.frames.back();
    Family& fam = ctx_family(f, op.args[0]);
    if (fam.state != FamState::Configured) trap(t, "E_INTERNAL", "create on an unconfigured context");
    fam.fn = prog_.function(op.name);
    if (!fam.fn) trap(t, "E_INTERNAL", "unknown thread function " + op.name);
    fam.state = FamState::Running;
    bool dependent = has_shared(fam.sig);
    FamilySummary sum;
    sum.id = fam.id;
    sum.function = op.name;
    sum.kind = fam.serialized ? "serialized" : to_string(fam.kind);
    sum.placement = fam.place;
    sum.range = fam.range;
    sum.window = fam.window;
    sum.dependent = dependent;
    ++f.pc;
    if (fam.serialized) {
      if (fam.n > 0) sum.shares.push_back({t.core, 0, fam.n});
      result_.families.push_back(sum);
      emit("create", t.core, fam.id, std::nullopt, "fn=" + op.name + " serialized on core " + std::to_string(t.core));
      if (fam.n == 0) return family_done(fam, t.core);
      start_serial(t, fam, 0);
      return;
    }
    for (const auto& s : distribute(fam.n, fam.place.size, dependent, fam.place.first_core))
      fam.shares.push_back(Share{s, 0, 0});
    for (const auto& s : fam.shares) sum.shares.push_back(s.share);
    result_.families.push_back(sum);
    fam.pending = fam.n;
    if (tracing_) {
      std::string d = "fn=" + op.name;
      for (const auto& s : fam.shares)
        d += " core" + std::to_string(s.share.core) + ":" + std::to_string(s.share.count);
      emit("create", t.core, fam.id, std::nullopt, d);
    }
    if (fam.n == 0) return family_done(fam, t.core);
    pending_families_.insert(fam.id);
    fill_slots();
  }

  void start_serial(Thread& t, Family& fam, std::int64_t ordinal) {
    fam.serial_next = ordinal;
    std::int64_t index = fam.range.at(ordinal);
    t.frames.push_back(root_frame(fam.fn, fam.id, ordinal, index));
    emit("thread-start", t.core, fam.id, index, "fn=" + fam.fn->name + " serialized");
  }

  bool allowed(const Share& s, const Family& fam) const {
    std::int64_t hw = cfg_.hw_threads_per_core;
    std::int64_t cap = fam.window > 0 ? std::min(fam.window, hw) : hw;
    if (s.active >= cap) return false;
    return s.active == 0 || cores_[static_cast<std::size_t>(s.share.core)].pool_used < hw;
  }

  void fill_slots() {
    for (auto it = pending_families_.begin(); it != pending_families_.end();) {
      Family& fam = family(*it);
      for (std::size_t k = 0; k < fam.shares.size(); ++k) {
        Share& s = fam.shares[k];
        while (s.next < s.share.count && allowed(s, fam)) spawn(fam, k);
      }
      it = fam.pending == 0 ? pending_families_.erase(it) : std::next(it);
    }
  }

  void spawn(Family& fam, std::size_t share) {
    Share& s = fam.shares[share];
    std::int64_t ordinal = s.share.first + s.next;
    ++s.next;
    --fam.pending;
    ++fam.live;
    if (s.active > 0) ++cores_[static_cast<std::size_t>(s.share.core)].pool_used;
    ++s.active;
    Thread t;
    t.id = static_cast<std::int64_t>(threads_.size());
    t.core = s.share.core;
    t.share = share;
    t.priority = rng_();
    std::int64_t index = fam.range.at(ordinal);
    t.frames.push_back(root_frame(fam.fn, fam.id, ordinal, index));
    threads_.push_back(std::move(t));
    live_.push_back(threads_.back().id);
    emit("thread-start", s.share.core, fam.id, index, "fn=" + fam.fn->name);
  }

  // End of one logical thread: shared outputs must have been written.
  void close_channels(Thread& t, Family& fam, const Frame& f) {
    auto ordinal = static_cast<std::size_t>(f.ordinal);
    for (auto ch : fam.channels.unwritten(ordinal)) {
      if (!opts_.forward_unwritten)
        trap(t, "E_UNWRITTEN_SHARED",
             "thread ended without writing shared channel " + std::to_string(ch) + " of " + fam_name(fam));
      Value v;
      if (fam.channels.read(ch, ordinal, v) == ChannelStatus::Blocked)
        trap(t, "E_SERIAL_BLOCK", "cannot forward shared channel " + std::to_string(ch) + ": no incoming value");
      fam.channels.write(ch, ordinal, v);
      if (tracing_)
        emit("write", t.core, fam.id, f.index, "ch=" + std::to_string(ch) + " value=" + to_string(v) + " forwarded");
    }
  }

  void do_return(Thread& t, const IrOp& op) {
    Frame& f = t.frames.back();
    Value rv = op.args.empty() ? Value{} : val(f, op.args[0]);
    if (!f.root) {
      int dst = f.ret_dst;
      t.frames.pop_back();
      Frame& caller = t.frames.back();
      if (dst >= 0) caller.slots[static_cast<std::size_t>(dst)] = rv;
      return;
    }
    Family& fam = family(f.family);
    if (fam.id != 0) close_channels(t, fam, f);
    std::int64_t index = f.index;
    emit("thread-end", t.core, fam.id, index, "fn=" + f.fn->name + (fam.serialized ? " serialized" : ""));
    t.frames.pop_back();
    if (fam.serialized) {
      std::int64_t next = fam.serial_next + 1;
      if (next < fam.n) return start_serial(t, fam, next);
      return family_done(fam, t.core);
    }
    live_.erase(std::find(live_.begin(), live_.end(), t.id));
    --fam.live;
    if (fam.id == 0) return family_done(fam, t.core);
    Share& s = fam.shares[t.share];
    if (s.active > 1) --cores_[static_cast<std::size_t>(s.share.core)].pool_used;
    --s.active;
    if (fam.live == 0 && fam.pending == 0) family_done(fam, t.core);
    fill_slots();
  }

  // ---- arrays and arithmetic ----
  Array& array(const Thread& t, const Value& v) {
    if (v.kind != Value::Kind::Array || v.i < 0 || static_cast<std::size_t>(v.i) >= arrays_.size())
      trap(t, "E_BAD_ARRAY", "indexing a value that is not an array");
    return arrays_[static_cast<std::size_t>(v.i)];
  }

  std::size_t bounds(const Thread& t, const Array& a, const Value& idx) {
    std::int64_t i = idx.as_int();
    if (i < 0 || static_cast<std::size_t>(i) >= a.elems.size())
      trap(t, "E_BOUNDS", "index " + std::to_string(i) + " out of bounds for array of " +
                               std::to_string(a.elems.size()) + " elements");
    return static_cast<std::size_t>(i);
  }

  Value binary(const Thread& t, const std::string& op, const Value& a, const Value& b) {
    if (op == "==" || op == "!=") {
      bool eq;
      if (a.kind == Value::Kind::Array || b.kind == Value::Kind::Array)
        eq = a.kind == b.kind && a.i == b.i;
      else if (a.is_float() || b.is_float())
        eq = a.as_float() == b.as_float();
      else
        eq = a.i == b.i;
      return Value::of_int(op == "==" ? eq : !eq);
    }
    if (a.is_float() || b.is_float()) {
      double x = a.as_float(), y = b.as_float();
      if (op == "+") return Value::of_float(x + y);
      if (op == "-") return Value::of_float(x - y);
      if (op == "*") return Value::of_float(x * y);
      if (op == "/") return Value::of_float(x / y);
      if (op == "<") return Value::of_int(x < y);
      if (op == "<=") return Value::of_int(x <= y);
      if (op == ">") return Value::of_int(x > y);
      if (op == ">=") return Value::of_int(x >= y);
      trap(t, "E_INTERNAL", "bad float operator " + op);
    }
    std::int64_t x = a.i, y = b.i;
    auto ux = static_cast<std::uint64_t>(x), uy = static_cast<std::uint64_t>(y);
    if (op == "+") return Value::of_int(static_cast<std::int64_t>(ux + uy));
    if (op == "-") return Value::of_int(static_cast<std::int64_t>(ux - uy));
    if (op == "*") return Value::of_int(static_cast<std::int64_t>(ux * uy));
    if (op == "/" || op == "%") {
      if (y == 0) trap(t, "E_DIV_ZERO", "integer division by zero");
      if (x == std::numeric_limits<std::int64_t>::min() && y == -1) return Value::of_int(op == "/" ? x : 0);
      return Value::of_int(op == "/" ? x / y : x % y);
    }
    if (op == "<") return Value::of_int(x < y);
    if (op == "<=") return Value::of_int(x <= y);
    if (op == ">") return Value::of_int(x > y);
    if (op == ">=") return Value::of_int(x >= y);
    trap(t, "E_INTERNAL", "bad operator " + op);
  }

  void print(Thread& t, const std::string& text) {
    result_.output += text;
    const Frame& f = t.frames.back();
    emit("print", t.core, f.family, f.index, text);
  }

  // ---- interpreter ----
  void execute(Thread& t) {
    Frame& f = t.frames.back();
    const IrOp& op = f.fn->code[f.pc];
    auto set = [&](Value v) {
      f.slots[static_cast<std::size_t>(op.dst)] = v;
      ++f.pc;
    };
    auto a = [&](std::size_t i) { return val(f, op.args[i]); };
    switch (op.op) {
      case Opcode::Const:
      case Opcode::Move: return set(a(0));
      case Opcode::ToInt: return set(Value::of_int(a(0).as_int()));
      case Opcode::ToFloat: return set(Value::of_float(a(0).as_float()));
      case Opcode::Unary: {
        Value v = a(0);
        if (op.name == "!") return set(Value::of_int(!v.truthy()));
        if (v.is_float()) return set(Value::of_float(-v.f));
        return set(Value::of_int(static_cast<std::int64_t>(0 - static_cast<std::uint64_t>(v.i))));
      }
      case Opcode::Binary: return set(binary(t, op.name, a(0), a(1)));
      case Opcode::NewArray: {
        std::int64_t n = a(0).as_int();
        if (n < 0 || n > kMaxArray) trap(t, "E_BOUNDS", "invalid array size " + std::to_string(n));
        Array arr;
        arr.is_float = op.flag;
        arr.elems.assign(static_cast<std::size_t>(n), op.flag ? Value::of_float(0) : Value::of_int(0));
        arrays_.push_back(std::move(arr));
        return set(Value::of_array(static_cast<std::int64_t>(arrays_.size() - 1)));
      }
      case Opcode::Load: {
        Array& arr = array(t, a(0));
        return set(arr.elems[bounds(t, arr, a(1))]);
      }
      case Opcode::Store: {
        Array& arr = array(t, a(0));
        std::size_t i = bounds(t, arr, a(1));
        Value v = a(2);
        if (arr.is_float)
          v = Value::of_float(v.as_float());
        else if (v.is_float())
          v = Value::of_int(v.as_int());
        arr.elems[i] = v;
        ++f.pc;
        return;
      }
      case Opcode::Jump: f.pc = static_cast<std::size_t>(op.target); return;
      case Opcode::JumpIfZero: f.pc = a(0).truthy() ? f.pc + 1 : static_cast<std::size_t>(op.target); return;
      case Opcode::Call: {
        const IrFunction* callee = prog_.function(op.name);
        if (!callee) trap(t, "E_INTERNAL", "unknown function " + op.name);
        if (t.frames.size() >= kMaxFrames) trap(t, "E_STACK", "call depth limit exceeded");
        Frame nf;
        nf.fn = callee;
        nf.slots.resize(static_cast<std::size_t>(callee->num_slots));
        for (std::size_t i = 0; i < op.args.size(); ++i) nf.slots[i] = a(i);
        nf.ret_dst = op.dst;
        nf.family = f.family;
        nf.ordinal = f.ordinal;
        nf.index = f.index;
        ++f.pc;
        t.frames.push_back(std::move(nf));
        return;
      }
      case Opcode::Return: return do_return(t, op);
      case Opcode::Index: return set(Value::of_int(f.index));
      case Opcode::PrintInt:
        ++f.pc;
        return print(t, std::to_string(a(0).as_int()));
      case Opcode::PrintFloat:
        ++f.pc;
        return print(t, fmt_float(a(0).as_float()));
      case Opcode::PrintStr:
        ++f.pc;
        return print(t, prog_.strings.at(static_cast<std::size_t>(op.channel)));
      case Opcode::PlaceDefault: {
        PlacementAddress p = builtin_default_placement(family(f.family).place);
        return set(Value::of_placement(p.raw));
      }
      case Opcode::PlaceLocal: return set(Value::of_int(t.core));
      case Opcode::PlaceSize:
      case Opcode::PlaceFirst: {
        Value v = a(0);
        PlacementAddress p{v.as_int(), v.explicit_placement};
        try {
          const ResolvedPlacement& own = family(f.family).place;
          return set(Value::of_int(op.op == Opcode::PlaceSize ? builtin_placement_size(p, own, t.core)
                                                              : builtin_first_processor(p, own, t.core)));
        } catch (const PlacementError& e) {
          trap(t, "E_BAD_PLACEMENT", e.what());
        }
      }
      case Opcode::PlaceMake: {
        try {
          return set(Value::of_placement(builtin_make_placement(a(0).as_int(), a(1).as_int()).raw));
        } catch (const PlacementError& e) {
          trap(t, "E_BAD_PLACEMENT", e.what());
        }
      }
      case Opcode::Allocate: return allocate(t, op);
      case Opcode::Configure: return configure(t, op);
      case Opcode::Create: return create(t, op);
      case Opcode::Put: {
        Family& fam = ctx_family(f, op.args[0]);
        Value v = a(1);
        ChannelStatus s = fam.channels.put(static_cast<std::size_t>(op.channel), v);
        if (s == ChannelStatus::DoubleWrite)
          trap(t, "E_DOUBLE_WRITE", "channel " + std::to_string(op.channel) + " of " + fam_name(fam) +
                                        " already received its source value");
        if (s != ChannelStatus::Ok) trap(t, "E_CHANNEL_CLASS", to_string(s));
        ++f.pc;
        if (tracing_)
          emit("put", t.core, fam.id, std::nullopt, "ch=" + std::to_string(op.channel) + " value=" + to_string(v));
        return;
      }
      case Opcode::Sync: {
        Family& fam = ctx_family(f, op.args[0]);
        ++f.pc;
        emit("sync", t.core, fam.id, std::nullopt, "");
        return;
      }
      case Opcode::Get: {
        Family& fam = ctx_family(f, op.args[0]);
        if (fam.state != FamState::Done) trap(t, "E_INTERNAL", "get before sync");
        auto v = fam.channels.get(static_cast<std::size_t>(op.channel));
        if (!v) trap(t, "E_UNFED_CHANNEL", "channel " + std::to_string(op.channel) + " never received a value");
        if (tracing_)
          emit("get", t.core, fam.id, std::nullopt, "ch=" + std::to_string(op.channel) + " value=" + to_string(*v));
        return set(*v);
      }
      case Opcode::Release: {
        Family& fam = ctx_family(f, op.args[0]);
        ++f.pc;
        if (!op.flag) return release(fam, false, t.core);
        fam.detached = true;
        if (fam.state == FamState::Done) release(fam, true, t.core);
        return;
      }
      case Opcode::Read: {
        Family& fam = family(f.family);
        Value v;
        auto s = fam.channels.read(static_cast<std::size_t>(op.channel), static_cast<std::size_t>(f.ordinal), v);
        if (s == ChannelStatus::Blocked) {
          if (fam.serialized)
            trap(t, "E_SERIAL_BLOCK", "read of channel " + std::to_string(op.channel) +
                                          " can never complete in serial order");
          return;  // not runnable; picked only through a stale check
        }
        if (tracing_)
          emit("read", t.core, fam.id, f.index, "ch=" + std::to_string(op.channel) + " value=" + to_string(v));
        return set(v);
      }
      case Opcode::Write: {
        Family& fam = family(f.family);
        Value v = a(0);
        auto s = fam.channels.write(static_cast<std::size_t>(op.channel), static_cast<std::size_t>(f.ordinal), v);
        if (s == ChannelStatus::DoubleWrite)
          trap(t, "E_DOUBLE_WRITE", "shared channel " + std::to_string(op.channel) + " written twice");
        if (s == ChannelStatus::NotShared)
          trap(t, "E_SETP_GLOBAL", "write to global channel " + std::to_string(op.channel));
        if (s != ChannelStatus::Ok) trap(t, "E_CHANNEL_CLASS", to_string(s));
        ++f.pc;
        if (tracing_)
          emit("write", t.core, fam.id, f.index, "ch=" + std::to_string(op.channel) + " value=" + to_string(v));
        return;
      }
    }
  }

  const IrProgram& prog_;
  MachineConfig cfg_;
  const RunOptions& opts_;
  bool tracing_ = false;
  std::mt19937_64 rng_;
  unsigned noise_ = 0;
  std::uint64_t step_ = 0;
  std::vector<Core> cores_;
  std::map<std::int64_t, Family> families_;
  std::int64_t next_family_ = 1;
  std::set<std::int64_t> pending_families_;
  std::deque<Thread> threads_;  // stable references while spawning
  std::vector<std::int64_t> live_;
  std::vector<Array> arrays_;
  RunResult result_;
};

}  // namespace

RunResult run_program(const IrProgram& program, const MachineConfig& config, const RunOptions& options) {
  return Machine(program, config, options).run();
}

}  // namespace slmini

#include <algorithm>
#include <regex>

#include "doctest.h"
#include "slmini/lower.hpp"
#include "slmini/parser.hpp"
#include "slmini/sema.hpp"
#include "support.hpp"

using namespace slmini;
using testing::codes_of;

namespace {

const std::string kInnerprod =
    "sl_def(innerprod, , sl_glparm(int*, a), sl_glparm(int*, b), sl_shparm(int, s))\n"
    "{ sl_index(i); int *a = sl_getp(a), *b = sl_getp(b); sl_setp(s, sl_getp(s) + a[i] * b[i]); }\n"
    "sl_enddef\n";

const std::string kFoo = "sl_def(foo, , sl_glparm(int, x)) { print_int(sl_getp(x)); } sl_enddef\n";

bool has(const std::vector<std::string>& codes, const std::string& code) {
  return std::find(codes.begin(), codes.end(), code) != codes.end();
}

std::string main_with(const std::string& prelude, const std::string& body) {
  return prelude + "int main(void) {\n" + body + "\nreturn 0;\n}\n";
}

std::string dump(const std::string& src) { return ir_dump(*testing::compile_ok(src)); }

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("resolve: innerprod target resolves with the three-channel signature") {
  auto prog = parse_source(testing::corpus_source("innerprod.sl"));
  auto r = resolve(prog);
  CHECK(r.diagnostics.empty());
  auto* sym = r.symbols.thread("innerprod");
  REQUIRE(sym);
  REQUIRE(sym->signature.size() == 3);
  CHECK(sym->signature[0].direction == Direction::Global);
  CHECK(sym->signature[0].value_class == ValueClass::ArrayHandle);
  CHECK(sym->signature[2].direction == Direction::Shared);
  CHECK(sym->signature[2].value_class == ValueClass::IntegerScalar);
}

TEST_CASE("resolve: undefined, duplicate and non-thread targets") {
  CHECK(codes_of(main_with("", "sl_create(,,,,,, nosuch); sl_sync();")) == std::vector<std::string>{"E_UNDEF"});
  CHECK(has(codes_of(main_with("sl_def(foo) { } sl_enddef\nsl_def(foo) { } sl_enddef\n", "")), "E_DUP"));
  CHECK(codes_of(main_with("int helper(int x) { return x; }\n", "sl_create(,,,,,, helper); sl_sync();")) ==
        std::vector<std::string>{"E_NOT_THREAD_FN"});
  CHECK(has(codes_of("int f(void) { return 1; }"), "E_UNDEF"));  // no main
  // a declaration with a matching definition is fine, a mismatching one is not
  CHECK(codes_of(main_with("sl_decl(foo, , sl_glarg(int, x));\n" + kFoo, "")).empty());
  CHECK(has(codes_of(main_with("sl_decl(foo, , sl_shparm(int, x));\n" + kFoo, "")), "E_SIG_MISMATCH"));
  // declared but never defined, and created
  CHECK(has(codes_of(main_with("sl_decl(bar);\n", "sl_create(,,,,,, bar); sl_sync();")), "E_UNDEF"));
}

TEST_CASE("check_channels: invalid endpoints give exactly two diagnostics") {
  auto diags = compile_source(testing::corpus_source("invalid_endpoints.sl"), "l14").diagnostics;
  REQUIRE(diags.size() == 2);
  CHECK(diags[0].code == "E_SETA_OUTSIDE");
  CHECK(diags[0].span.line == 5);
  CHECK(diags[1].code == "E_GETA_BEFORE_SYNC");
  CHECK(diags[1].span.line == 7);
}

TEST_CASE("check_channels: every valid corpus program is clean") {
  for (auto name : {"hello.sl", "ten_threads.sl", "hello_thread.sl",
                    "create_in_block.sl", "sscal.sl", "sscal_anonymous.sl",
                    "innerprod.sl", "detach_progress.sl", "inherit_placement.sl", "two_stage_reduction.sl",
                    "exclusive_progress.sl"}) {
    CAPTURE(name);
    auto r = compile_source(testing::corpus_source(name), name);
    CHECK(r.ok());
    CHECK_FALSE(has_errors(r.diagnostics));
  }
}

TEST_CASE("check_channels: signature mismatches") {
  // innerprod with its shared channel missing
  CHECK(codes_of(main_with(kInnerprod,
                           "int v1[5], v2[5];\n"
                           "sl_create(,,, 5,,,, innerprod, sl_glarg(int*, , v1), sl_glarg(int*, , v2)); sl_sync();")) ==
        std::vector<std::string>{"E_SIG_MISMATCH"});
  // direction
  CHECK(has(codes_of(main_with(kFoo, "sl_create(,,,,,, foo, sl_sharg(int, , 1)); sl_sync();")), "E_SIG_MISMATCH"));
  // value class: float keyword for an int channel
  CHECK(has(codes_of(main_with(kFoo, "sl_create(,,,,,, foo, sl_glfarg(float, , 1.0)); sl_sync();")),
            "E_SIG_MISMATCH"));
  // declared type text
  CHECK(has(codes_of(main_with(kFoo, "sl_create(,,,,,, foo, sl_glarg(long, , 1)); sl_sync();")), "E_SIG_MISMATCH"));
  // whitespace inside the type text does not matter
  CHECK(codes_of(main_with(kInnerprod,
                           "int v1[5], v2[5];\n"
                           "sl_create(,,, 5,,,, innerprod, sl_glarg(int *, , v1), sl_glarg(int*, , v2),"
                           " sl_sharg(int, s, 0)); sl_sync();"))
            .empty());
}

TEST_CASE("check_channels: setp and getp rules") {
  CHECK(codes_of(main_with("sl_def(f, , sl_glparm(int, x)) { sl_setp(x, 1); } sl_enddef\n", "")) ==
        std::vector<std::string>{"E_SETP_GLOBAL"});
  CHECK(codes_of(main_with("sl_def(f, , sl_glparm(int, x)) { print_int(sl_getp(y)); } sl_enddef\n", "")) ==
        std::vector<std::string>{"E_NOT_PARAM"});
  CHECK(has(codes_of(main_with("", "print_int(sl_getp(x));")), "E_NOT_PARAM"));
  CHECK(has(codes_of(main_with("sl_def(f, , sl_shparm(int, x)) { sl_setp(x, 1); sl_setp(x, 2); } sl_enddef\n", "")),
            "E_DOUBLE_WRITE"));
  CHECK(has(codes_of(main_with("sl_def(f, , sl_glfparm(int, x)) { } sl_enddef\n", "")), "E_CHANNEL_CLASS"));
  CHECK(has(codes_of(main_with("sl_def(f, , sl_glparm(float, x)) { } sl_enddef\n", "")), "E_CHANNEL_CLASS"));
}

TEST_CASE("check_channels: seta and geta placement") {
  // seta after the terminator
  CHECK(has(codes_of(main_with(kFoo, "{ sl_create(,,,,,, foo, sl_glarg(int, x)); sl_seta(x, 1); sl_sync(); }\n"
                                     "sl_seta(x, 2);")),
            "E_SETA_OUTSIDE"));
  // geta after detach
  CHECK(has(codes_of(main_with("sl_def(g, , sl_shparm(int, s)) { sl_setp(s, sl_getp(s)); } sl_enddef\n",
                               "sl_create(,,,,,, g, sl_sharg(int, s, 0)); sl_detach(); print_int(sl_geta(s));")),
            "E_GETA_AFTER_DETACH"));
  // geta on a global after sync is allowed and gives the source value
  auto prog = testing::compile_ok(main_with(kFoo, "sl_create(,,,,,, foo, sl_glarg(int, x, 5)); sl_sync();"
                                                  "print_int(sl_geta(x));"));
  CHECK(testing::run(*prog).output == "55");
  // seta in a nested create names the innermost construct only
  CHECK(has(codes_of(main_with(kFoo, "sl_create(,,,,,, foo, sl_glarg(int, x));\n"
                                     "  sl_create(,,,,,, foo, sl_glarg(int, y, 1)); sl_seta(x, 1); sl_sync();\n"
                                     "sl_seta(x, 2); sl_sync();")),
            "E_SETA_OUTSIDE"));
}

TEST_CASE("check_channels: unfed channels") {
  CHECK(codes_of(main_with(kFoo, "sl_create(,,,,,, foo, sl_glarg(int, x)); sl_sync();")) ==
        std::vector<std::string>{"E_UNFED_CHANNEL"});
  CHECK(codes_of(main_with(kFoo, "sl_create(,,,,,, foo, sl_glarg(int, )); sl_sync();")) ==
        std::vector<std::string>{"E_UNFED_CHANNEL"});
  CHECK(has(codes_of(main_with(kFoo, "sl_create(,,,,,, foo, sl_glarg(int, x, 1)); sl_seta(x, 2); sl_sync();")),
            "E_DOUBLE_WRITE"));
  // fed inside a branch: accepted statically, left to the runtime
  CHECK(codes_of(main_with(kFoo, "int c = 1; sl_create(,,,,,, foo, sl_glarg(int, x)); if (c) sl_seta(x, 2); "
                                 "sl_sync();"))
            .empty());
}

TEST_CASE("check_types: host subset typing") {
  CHECK(has(codes_of(main_with("", "int a[3]; a = 1;")), "E_TYPE"));
  CHECK(has(codes_of(main_with("", "int x = y;")), "E_UNDEF"));
  CHECK(has(codes_of(main_with("", "int x; int x;")), "E_DUP"));
  CHECK(has(codes_of(main_with("", "break;")), "E_SYNTAX"));
  CHECK(has(codes_of(main_with("", "print_int(1, 2);")), "E_TYPE"));
  CHECK(has(codes_of(main_with("", "float f = 1.5; int k = f % 2;")), "E_TYPE"));
  CHECK(codes_of(main_with("", "float f = 1; int k = 2.5; print_float(f + k);")).empty());
  CHECK(has(codes_of(main_with("sl_def(f) { sl_index(i); sl_index(j); } sl_enddef\n", "")), "E_INDEX_DUP"));
  CHECK(has(codes_of(main_with("", "sl_index(i);")), "E_INDEX_OUTSIDE"));
}

TEST_CASE("lower: default slots give range (0,1,1) ws 0 and inherit placement") {
  std::string ir = dump(testing::corpus_source("hello_thread.sl"));
  CHECK(ir.find("CONFIGURE range=(0,1,1) ws=0") != std::string::npos);
  CHECK(ir.find("ALLOCATE %0 place=0 kind=regular mode=serialize") != std::string::npos);
}

TEST_CASE("lower: ten_threads quadruple, one PUT of 0, one GET after SYNC") {
  std::string ir = dump(testing::corpus_source("ten_threads.sl"));
  CHECK(ir.find("CONFIGURE range=(0,10,1) ws=0") != std::string::npos);
  CHECK(count(ir, "PUT ") == 1);
  CHECK(ir.find("PUT %0 ch=0 0\n") != std::string::npos);
  CHECK(count(ir, "GET ") == 1);
  auto sync = ir.find("SYNC");
  auto get = ir.find("GET ");
  auto release = ir.find("RELEASE");
  CHECK(ir.find("ALLOCATE") < ir.find("CONFIGURE"));
  CHECK(ir.find("CONFIGURE") < ir.find("CREATE"));
  CHECK(ir.find("CREATE") < sync);
  CHECK(sync < get);
  CHECK(get < release);
  // thread body: getp/setp become READ/WRITE on channel 0
  CHECK(ir.find("READ %0 <- ch=0") != std::string::npos);
  CHECK(ir.find("WRITE ch=0") != std::string::npos);
}

TEST_CASE("lower: exclusive_progress creates are exclusive, waiting and never synced") {
  std::string ir = dump(testing::corpus_source("exclusive_progress.sl"));
  CHECK(count(ir, "kind=exclusive mode=wait") == 2);
  CHECK(count(ir, "SYNC") == 0);
  CHECK(count(ir, "RELEASE %0 deferred") == 1);
  CHECK(count(ir, " deferred") == 2);
}

TEST_CASE("lower: specifiers map to failure modes") {
  std::string pre = "sl_def(f) { } sl_enddef\n";
  CHECK(dump(main_with(pre, "sl_create(,,,,,, sl__forcewait, f); sl_sync();")).find("kind=regular mode=wait") !=
        std::string::npos);
  CHECK(dump(main_with(pre, "sl_create(,,,,,, sl__forceseq, f); sl_sync();")).find("kind=regular mode=forceseq") !=
        std::string::npos);
}

TEST_CASE("lower: event pairing and channel index stability over the corpus") {
  std::regex create_re(R"(CREATE %(\d+) fn=(\w+))");
  for (auto name : {"ten_threads.sl", "sscal.sl", "innerprod.sl", "detach_progress.sl",
                    "two_stage_reduction.sl", "exclusive_progress.sl", "nested_three.sl", "window.sl"}) {
    CAPTURE(name);
    auto ir = testing::compile_ok(testing::corpus_source(name));
    for (const auto& [fname, fn] : ir->functions) {
      std::map<int, std::vector<Opcode>> per_ctx;
      std::map<int, std::string> target;
      for (const auto& op : fn.code) {
        switch (op.op) {
          case Opcode::Allocate: per_ctx[op.dst].push_back(op.op); break;
          case Opcode::Configure:
          case Opcode::Sync:
          case Opcode::Release: per_ctx[op.args[0].slot].push_back(op.op); break;
          case Opcode::Create:
            per_ctx[op.args[0].slot].push_back(op.op);
            target[op.args[0].slot] = op.name;
            break;
          default: break;
        }
      }
      for (const auto& [ctx, ops] : per_ctx) {
        REQUIRE(ops.size() >= 4);
        CHECK(ops[0] == Opcode::Allocate);
        CHECK(ops[1] == Opcode::Configure);
        CHECK(ops[2] == Opcode::Create);
        CHECK(ops.back() == Opcode::Release);
      }
      // every channel index used against a context lies within its target's signature
      for (const auto& op : fn.code) {
        if (op.op != Opcode::Put && op.op != Opcode::Get) continue;
        const auto* callee = ir->function(target[op.args[0].slot]);
        REQUIRE(callee);
        CHECK(op.channel >= 0);
        CHECK(static_cast<std::size_t>(op.channel) < callee->signature.size());
      }
      if (fn.is_thread)
        for (const auto& op : fn.code)
          if (op.op == Opcode::Read || op.op == Opcode::Write)
            CHECK(static_cast<std::size_t>(op.channel) < fn.signature.size());
    }
  }
}

TEST_CASE("ir_dump is deterministic and minimal for an empty main") {
  std::string src = testing::corpus_source("two_stage_reduction.sl");
  CHECK(dump(src) == dump(src));
  std::string empty = dump("int main(void) { }");
  CHECK(empty.rfind("entry main\n", 0) == 0);
  CHECK(empty.find("ALLOCATE") == std::string::npos);
}

TEST_CASE("lower: sl_index reads the logical index register") {
  std::string ir = dump(testing::corpus_source("innerprod.sl"));
  CHECK(ir.find("INDEX %") != std::string::npos);
}

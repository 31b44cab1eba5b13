#include "generator.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <vector>

namespace testing {
namespace {

struct Leaf {
  std::string name;
  int globals = 1;     // int globals g0..
  bool shared = false;
  bool array = false;  // int* out
  bool fp = false;     // float* fo plus float gf
  bool branchy = false;
};

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  GeneratedProgram run() {
    out_ << "int mix(int a, int b) { return (a * 31 + b) % 1009; }\n\n";
    int leaves = 1 + pick(3);
    for (int k = 0; k < leaves; ++k) leaf(k);
    bool has_mid = coin(2);
    if (has_mid) mid();
    out_ << "int main(void) {\n";
    out_ << "  int out[40];\n  float fout[40];\n  int junk[40];\n  int acc = 0;\n  int k = 0;\n";
    int creates = 1 + pick(3);
    int family = 0;
    for (int c = 0; c < creates; ++c) {
      if (has_mid && coin(3))
        main_mid(family++);
      else
        main_leaf(family++, leaves_[static_cast<std::size_t>(pick(static_cast<int>(leaves_.size())))]);
    }
    if (coin(3)) detached();
    out_ << "  return 0;\n}\n";
    GeneratedProgram g;
    g.source = out_.str();
    g.creates = creates_;
    g.uses_window = window_;
    return g;
  }

 private:
  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
  bool coin(int one_in) { return pick(one_in) == 0; }

  std::string term(const Leaf& l) {
    switch (pick(4)) {
      case 0: return "i";
      case 1: return "sl_getp(g" + std::to_string(pick(l.globals)) + ")";
      case 2: return std::to_string(1 + pick(9));
      default: return "mix(i, sl_getp(g" + std::to_string(pick(l.globals)) + "))";
    }
  }

  std::string expr(const Leaf& l, int depth = 0) {
    if (depth >= 2 || coin(3)) return term(l);
    static const char* ops[] = {"+", "-", "*", "%"};
    std::string op = ops[pick(4)];
    if (op == "%") return "(" + expr(l, depth + 1) + " % " + std::to_string(2 + pick(7)) + ")";
    return "(" + expr(l, depth + 1) + " " + op + " " + expr(l, depth + 1) + ")";
  }

  void leaf(int k) {
    Leaf l;
    l.name = "leaf" + std::to_string(k);
    l.globals = 1 + pick(2);
    l.shared = coin(2);
    l.array = !l.shared || coin(2);
    l.fp = coin(4);
    l.branchy = l.shared && coin(3);
    out_ << "sl_def(" << l.name << ", ";
    if (l.array) out_ << ", sl_glparm(int*, out)";
    for (int g = 0; g < l.globals; ++g) out_ << ", sl_glparm(int, g" << g << ")";
    if (l.fp) out_ << ", sl_glparm(float*, fo), sl_glfparm(float, gf)";
    if (l.shared) out_ << ", sl_shparm(int, s)";
    out_ << ")\n{\n  sl_index(i);\n";
    out_ << "  int v = " << expr(l) << ";\n";
    if (l.array) out_ << "  int *o = sl_getp(out);\n  o[i] = v;\n";
    if (l.fp) out_ << "  float *f = sl_getp(fo);\n  f[i] = i * sl_getp(gf) + 0.5;\n";
    if (l.shared) {
      if (l.branchy)
        out_ << "  if (i % 2 == 0) sl_setp(s, (sl_getp(s) * 7 + v) % 100003);\n"
                "  else sl_setp(s, (sl_getp(s) * 3 + 1) % 100003);\n";
      else
        out_ << "  sl_setp(s, (sl_getp(s) * 7 + v) % 100003);\n";
    }
    out_ << "}\nsl_enddef\n\n";
    leaves_.push_back(l);
  }

  // start, limit, step, ws with every index inside [0, 40)
  struct Range {
    int start, limit, step, ws;
    bool has_start, has_step, has_ws;
  };
  Range range(int max_count) {
    Range r{};
    r.has_start = coin(2);
    r.start = r.has_start ? pick(6) : 0;
    r.has_step = coin(3);
    r.step = r.has_step ? 1 + pick(3) : 1;
    int count = std::min(pick(max_count + 1), (39 - r.start) / r.step + 1);
    r.limit = r.start + count * r.step - (r.step > 1 ? pick(r.step) : 0);
    if (r.limit < r.start) r.limit = r.start;
    r.has_ws = coin(2);
    r.ws = r.has_ws ? pick(3) : 0;
    if (r.ws > 0) window_ = true;
    return r;
  }

  std::string placement(bool top) {
    switch (pick(6)) {
      case 0: return "0";
      case 1: return "1";
      case 2: return "sl_placement(0, 2)";
      case 3: return "sl_placement(sl_local_processor_address(), 1)";
      case 4: return top ? "sl_default_placement()" : "";
      default: return "";
    }
  }

  std::string specifier(bool top, bool detach) {
    int r = pick(10);
    if (r == 0) return "sl__forceseq";
    if (top && r == 1) return "sl__forcewait";
    if (top && !detach && r == 2) return "sl__exclusive";
    return "";
  }

  std::string slots(const Range& r, const std::string& place, const std::string& spec) {
    std::ostringstream s;
    s << "sl_create(, " << place << ", " << (r.has_start ? std::to_string(r.start) : "") << ", " << r.limit << ", "
      << (r.has_step ? std::to_string(r.step) : "") << ", " << (r.has_ws ? std::to_string(r.ws) : "") << ", " << spec;
    ++creates_;
    return s.str();
  }

  // args for a leaf; fed either inline or with seta, values from `value`
  struct Args {
    std::string list;
    std::vector<std::string> feeds;
  };
  Args leaf_args(const Leaf& l, const std::string& arr, const std::string& farr, const std::string& seed_expr,
                 const std::string& shared_name) {
    Args a;
    auto one = [&](const std::string& kw, const std::string& type, const std::string& name, const std::string& v) {
      if (coin(2)) {
        a.list += ", " + kw + "(" + type + ", , " + v + ")";
      } else {
        a.list += ", " + kw + "(" + type + ", " + name + ")";
        a.feeds.push_back("sl_seta(" + name + ", " + v + ");");
      }
    };
    int n = 0;
    if (l.array) one("sl_glarg", "int*", "a" + std::to_string(n++), arr);
    for (int g = 0; g < l.globals; ++g) one("sl_glarg", "int", "a" + std::to_string(n++), seed_expr + " + " + std::to_string(g));
    if (l.fp) {
      one("sl_glarg", "float*", "a" + std::to_string(n++), farr);
      one("sl_glfarg", "float", "a" + std::to_string(n++), "1.25");
    }
    if (l.shared) {
      if (coin(2)) {
        a.list += ", sl_sharg(int, " + shared_name + ", 1)";
      } else {
        a.list += ", sl_sharg(int, " + shared_name + ")";
        a.feeds.push_back("sl_seta(" + shared_name + ", 1);");
      }
    }
    return a;
  }

  void main_leaf(int id, const Leaf& l) {
    Range r = range(l.shared ? 12 : 30);
    std::string place = placement(true);
    std::string spec = specifier(true, false);
    if (l.array) out_ << "  k = 0; while (k < 40) { out[k] = 0; k = k + 1; }\n";
    if (l.fp) out_ << "  k = 0; while (k < 40) { fout[k] = 0; k = k + 1; }\n";
    Args a = leaf_args(l, "out", "fout", std::to_string(id + 2), "r" + std::to_string(id));
    out_ << "  {\n    " << slots(r, place, spec) << ", " << l.name << a.list << ");\n";
    for (const auto& f : a.feeds) out_ << "    " << f << "\n";
    out_ << "    sl_sync();\n";
    if (l.shared) out_ << "    print_int(sl_geta(r" << id << ")); print_str(\"\\n\");\n";
    out_ << "  }\n";
    if (l.array)
      out_ << "  acc = 0; k = 0; while (k < 40) { acc = (acc * 31 + out[k]) % 1000003; k = k + 1; }\n"
              "  print_int(acc); print_str(\"\\n\");\n";
    if (l.fp)
      out_ << "  k = 0; while (k < 40) { print_float(fout[k]); k = k + 7; }\n  print_str(\"\\n\");\n";
  }

  // mid creates a nested family of a shared leaf and folds its result
  void mid() {
    Leaf inner;
    inner.name = "inner";
    inner.globals = 1;
    inner.shared = true;
    out_ << "sl_def(inner, , sl_glparm(int, g0), sl_shparm(int, s))\n{\n  sl_index(i);\n"
            "  sl_setp(s, (sl_getp(s) * 5 + mix(i, sl_getp(g0))) % 100003);\n}\nsl_enddef\n\n";
    Range r = range(6);
    std::string place = placement(false);
    out_ << "sl_def(mid, , sl_glparm(int, g0), sl_shparm(int, s))\n{\n  sl_index(j);\n  int t = 0;\n";
    Args a = leaf_args(inner, "", "", "sl_getp(g0) + j", "sr");
    out_ << "  " << slots(r, place, specifier(false, false)) << ", inner" << a.list << ");\n";
    for (const auto& f : a.feeds) out_ << "  " << f << "\n";
    out_ << "  sl_sync();\n  t = sl_geta(sr);\n";
    out_ << "  sl_setp(s, (sl_getp(s) * 11 + t) % 100003);\n}\nsl_enddef\n\n";
  }

  void main_mid(int id) {
    Range r = range(5);
    std::string spec = specifier(true, false);
    std::string name = "m" + std::to_string(id);
    out_ << "  {\n    " << slots(r, placement(true), spec) << ", mid, sl_glarg(int, , " << id + 3
         << "), sl_sharg(int, " << name << ", 2));\n    sl_sync();\n";
    out_ << "    print_int(sl_geta(" << name << ")); print_str(\"\\n\");\n  }\n";
  }

  void detached() {
    const Leaf* target = nullptr;
    for (const auto& l : leaves_)
      if (l.array && !l.shared && !l.fp) target = &l;
    if (!target) return;
    Range r = range(30);
    std::string spec = specifier(true, true);
    Args a = leaf_args(*target, "junk", "", "9", "unused");
    out_ << "  {\n    " << slots(r, placement(true), spec) << ", " << target->name << a.list << ");\n";
    for (const auto& f : a.feeds) out_ << "    " << f << "\n";
    out_ << "    sl_detach();\n  }\n";
  }

  std::mt19937_64 rng_;
  std::ostringstream out_;
  std::vector<Leaf> leaves_;
  int creates_ = 0;
  bool window_ = false;
};

}  // namespace

GeneratedProgram generate_program(std::uint64_t seed) { return Gen(seed).run(); }

}  // namespace testing

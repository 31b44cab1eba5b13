#include "slmini/driver.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "slmini/lower.hpp"
#include "slmini/parser.hpp"
#include "slmini/sema.hpp"

namespace slmini {

std::string CompileResult::format_diagnostics() const {
  std::string out;
  for (const auto& d : diagnostics) out += d.format() + "\n";
  return out;
}

CompileResult compile_source(const std::string& source, const std::string& file) {
  CompileResult r;
  std::vector<Diagnostic> warnings;
  AstProgram ast;
  try {
    ast = parse_source(source, file, &warnings);
  } catch (const CompileError& e) {
    r.diagnostics = std::move(warnings);
    r.diagnostics.push_back(e.diagnostic());
    return r;
  }
  ResolveResult res = resolve(ast);
  std::vector<Diagnostic> errors = check_program(ast);
  r.diagnostics = warnings;
  r.diagnostics.insert(r.diagnostics.end(), errors.begin(), errors.end());
  std::stable_sort(r.diagnostics.begin(), r.diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.span.line, a.span.column) < std::tie(b.span.line, b.span.column);
  });
  if (has_errors(r.diagnostics)) return r;
  r.ir = std::make_shared<IrProgram>(lower(ast, res.symbols));
  return r;
}

std::optional<std::string> format_distribution(const RunResult& result, const std::string& function) {
  struct Row {
    int core;
    std::int64_t lo, hi, step;
  };
  std::vector<Row> rows;
  bool matched = false;
  for (const auto& fam : result.families) {
    if (!function.empty() && fam.function != function) continue;
    matched = true;
    for (const auto& s : fam.shares) {
      std::int64_t lo = fam.range.at(s.first);
      rows.push_back({s.core, lo, lo + s.count * fam.range.step, fam.range.step});
    }
  }
  if (!matched) return std::nullopt;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return std::tie(a.core, a.lo) < std::tie(b.core, b.lo); });
  std::string out;
  for (const auto& r : rows) {
    out += "core " + std::to_string(r.core) + ": [" + std::to_string(r.lo) + "," + std::to_string(r.hi) + ")";
    if (r.step != 1) out += " step " + std::to_string(r.step);
    out += "\n";
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error reading '" + path + "'");
  return ss.str();
}

}  // namespace slmini

// Invariants over generated programs.
#include <cstdlib>
#include <set>

#include "doctest.h"
#include "generator.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace slmini;

namespace {

int program_count() {
  if (const char* env = std::getenv("SLMINI_PROPERTY_PROGRAMS")) return std::max(1, std::atoi(env));
  return 1000;
}

}  // namespace

TEST_CASE("generated programs: serial oracle and trace invariants") {
  const int n = program_count();
  auto result = testing::run_property_suite(n);
  for (const auto& f : result.failures) FAIL_CHECK(f);
  CHECK(result.programs == n);
  CHECK(result.windowed > n / 10);
}

TEST_CASE("generated programs compile and differ") {
  std::set<std::string> texts;
  for (std::uint64_t k = 0; k < 50; ++k) {
    auto g = testing::generate_program(k);
    CHECK(g.creates >= 1);
    texts.insert(g.source);
    CHECK(testing::generate_program(k).source == g.source);
  }
  CHECK(texts.size() == 50);
}

TEST_CASE("the invariant checkers reject broken traces") {
  using E = TraceEvent;
  std::vector<E> leak{{1, "allocate", 0, 1, std::nullopt, "outcome=context"}};
  CHECK_FALSE(testing::check_context_conservation(leak).empty());
  leak.push_back({2, "release", 0, 1, std::nullopt, ""});
  CHECK(testing::check_context_conservation(leak).empty());
  leak.push_back({3, "release", 0, 1, std::nullopt, ""});
  CHECK_FALSE(testing::check_context_conservation(leak).empty());

  std::vector<E> wide{{1, "configure", 0, 1, std::nullopt, "range=(0,3,1) ws=1"},
                      {2, "thread-start", 0, 1, 0, ""},
                      {3, "thread-start", 0, 1, 1, ""}};
  CHECK_FALSE(testing::check_window_bound(wide).empty());
  CHECK_FALSE(testing::check_index_coverage(wide).empty());

  std::vector<E> twice{{1, "write", 0, 1, 0, "ch=0 value=1"}, {2, "write", 0, 1, 0, "ch=0 value=2"}};
  CHECK_FALSE(testing::check_single_assignment(twice).empty());

  std::vector<E> early{{1, "thread-start", 0, 1, 0, ""},
                       {2, "thread-start", 0, 1, 1, ""},
                       {3, "read", 0, 1, 1, "ch=0 value=0"},
                       {4, "write", 0, 1, 0, "ch=0 value=1"}};
  CHECK_FALSE(testing::check_chain_causality(early).empty());
}

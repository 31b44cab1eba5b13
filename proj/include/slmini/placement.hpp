#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace slmini {

/// Placement addresses: core * 65536 + size for explicit addresses.
/// The raw values 0 (inherit) and 1 (local core, size 1) are special
/// unless the value came from a placement builtin.
inline constexpr std::int64_t kPlaceInherit = 0;
inline constexpr std::int64_t kPlaceLocal = 1;
inline constexpr std::int64_t kPlaceSizeLimit = 65536;

struct PlacementAddress {
  std::int64_t raw = 0;
  bool explicit_tag = false;  // produced by sl_placement / sl_default_placement

  bool is_inherit() const { return !explicit_tag && raw == kPlaceInherit; }
  bool is_local() const { return !explicit_tag && raw == kPlaceLocal; }
};

struct ResolvedPlacement {
  int first_core = 0;
  int size = 1;
  bool local_restricted = false;

  friend bool operator==(const ResolvedPlacement&, const ResolvedPlacement&) = default;
};

struct DecodedPlacement {
  std::int64_t core = 0;
  std::int64_t size = 0;

  friend bool operator==(const DecodedPlacement&, const DecodedPlacement&) = default;
};

/// Runtime placement failure (E_BAD_PLACEMENT).
class PlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::int64_t encode_placement(std::int64_t core, std::int64_t size);
DecodedPlacement decode_placement(std::int64_t addr);

/// Resolves an address against the creating thread's family and core.
ResolvedPlacement resolve_placement(PlacementAddress addr, const ResolvedPlacement& creator, int creator_core,
                                    int num_cores);

// Builtin API. Special values are first resolved against the caller.
PlacementAddress builtin_default_placement(const ResolvedPlacement& family);
std::int64_t builtin_placement_size(PlacementAddress addr, const ResolvedPlacement& family, int core);
std::int64_t builtin_first_processor(PlacementAddress addr, const ResolvedPlacement& family, int core);
PlacementAddress builtin_make_placement(std::int64_t core, std::int64_t size);

std::string to_string(const ResolvedPlacement& p);

}  // namespace slmini

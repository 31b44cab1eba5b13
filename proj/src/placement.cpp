#include "slmini/placement.hpp"

#include <algorithm>

namespace slmini {

std::int64_t encode_placement(std::int64_t core, std::int64_t size) {
  if (core < 0 || size < 1 || size >= kPlaceSizeLimit || core > (INT64_MAX / kPlaceSizeLimit) - 1)
    throw PlacementError("cannot encode placement (" + std::to_string(core) + ", " + std::to_string(size) + ")");
  return core * kPlaceSizeLimit + size;
}

DecodedPlacement decode_placement(std::int64_t addr) {
  if (addr < 0) throw PlacementError("malformed placement address " + std::to_string(addr));
  return DecodedPlacement{addr / kPlaceSizeLimit, addr % kPlaceSizeLimit};
}

ResolvedPlacement resolve_placement(PlacementAddress addr, const ResolvedPlacement& creator, int creator_core,
                                    int num_cores) {
  if (addr.is_inherit()) return creator;
  if (addr.is_local()) return ResolvedPlacement{creator_core, 1, true};
  DecodedPlacement d = decode_placement(addr.raw);
  if (d.size == 0) throw PlacementError("placement address " + std::to_string(addr.raw) + " has size 0");
  if (d.core >= num_cores)
    throw PlacementError("placement core " + std::to_string(d.core) + " does not exist (" +
                         std::to_string(num_cores) + " cores)");
  auto size = std::min<std::int64_t>(d.size, num_cores - d.core);
  return ResolvedPlacement{static_cast<int>(d.core), static_cast<int>(size), false};
}

PlacementAddress builtin_default_placement(const ResolvedPlacement& family) {
  return PlacementAddress{encode_placement(family.first_core, family.size), true};
}

namespace {

DecodedPlacement explicit_fields(PlacementAddress addr, const ResolvedPlacement& family, int core) {
  if (addr.is_inherit()) return {family.first_core, family.size};
  if (addr.is_local()) return {core, 1};
  DecodedPlacement d = decode_placement(addr.raw);
  if (d.size == 0) throw PlacementError("placement address " + std::to_string(addr.raw) + " has size 0");
  return d;
}

}  // namespace

std::int64_t builtin_placement_size(PlacementAddress addr, const ResolvedPlacement& family, int core) {
  return explicit_fields(addr, family, core).size;
}

std::int64_t builtin_first_processor(PlacementAddress addr, const ResolvedPlacement& family, int core) {
  return explicit_fields(addr, family, core).core;
}

PlacementAddress builtin_make_placement(std::int64_t core, std::int64_t size) {
  return PlacementAddress{encode_placement(core, size), true};
}

std::string to_string(const ResolvedPlacement& p) {
  return "(" + std::to_string(p.first_core) + "," + std::to_string(p.size) + (p.local_restricted ? ",local" : "") +
         ")";
}

}  // namespace slmini

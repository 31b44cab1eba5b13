#pragma once

#include "slmini/ir.hpp"
#include "slmini/sema.hpp"

namespace slmini {

/// Lowers a checked program. Each create construct becomes
/// ALLOCATE, CONFIGURE, PUT*, CREATE, then SYNC/GET*/RELEASE or a
/// deferred RELEASE for detached families.
IrProgram lower(const AstProgram& program, const SymbolTable& symbols);

}  // namespace slmini

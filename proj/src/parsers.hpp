#pragma once

#include "smellwatt/source_model.hpp"

namespace smellwatt::detail {

// Both fill the entity lists of a unit whose tokens are already set.
// Failures throw BadInput carrying the reason.
void parse_java(SourceUnit& unit);
void parse_python(SourceUnit& unit);

}  // namespace smellwatt::detail

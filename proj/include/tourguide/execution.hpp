#pragma once

namespace tourguide {

// Selects the OpenMP kernel or its serial reference. Both produce identical
// results; the serial path exists for testing and for timing comparisons.
enum class Execution { Serial, Parallel };

}  // namespace tourguide

#pragma once

#include <cstddef>
#include <functional>

namespace openmhd {

/// Worker count used by per-node loops. Results do not depend on it: each
/// iteration writes only its own output slot.
void set_num_threads(int n);
int num_threads();

/// Runs body(begin, end) over a static partition of [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace openmhd

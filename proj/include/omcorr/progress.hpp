#pragma once

#include <cstddef>
#include <functional>

namespace omcorr {

/// Optional completion callback: (finished items, total items). Calls are
/// serialized but may come from any worker thread.
using Progress = std::function<void(std::size_t done, std::size_t total)>;

}  // namespace omcorr

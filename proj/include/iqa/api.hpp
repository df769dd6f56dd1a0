#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "iqa/build.hpp"

namespace iqa::api {

/// Batch entry points for scripting bindings. Arrays are H x W x 3,
/// row-major, values in [0,1].

/// Throws ImageError on a size mismatch or out-of-range value and
/// std::invalid_argument for an unknown sub-category key.
std::vector<double> apply_distortion(std::span<const double> hwc, int height, int width, std::string_view sub,
                                     int level, std::uint64_t seed);

/// Same code path as the `build` command. Returns the JSONL path.
std::filesystem::path build_dataset(const Json& config);

}  // namespace iqa::api

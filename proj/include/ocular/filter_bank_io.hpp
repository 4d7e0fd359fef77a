#pragma once

#include <filesystem>

#include "ocular/eye_state.hpp"

namespace ocular {

// A bank is stored as a JSON descriptor plus a raw coefficient blob next to
// it (same stem, ".bin"). The blob holds 64-bit little-endian floats; per
// class, in order: h and mean as interleaved (re, im) pairs, then var, each
// row-major rows x cols. Offsets in the JSON count doubles from the blob
// start.

void save_filter_bank(const FilterBank& bank, const std::filesystem::path& json_path);
FilterBank load_filter_bank(const std::filesystem::path& json_path);

}  // namespace ocular

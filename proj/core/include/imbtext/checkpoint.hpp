#pragma once

#include <filesystem>

#include "imbtext/model.hpp"

namespace imbtext {

// Binary checkpoint format, little-endian, 64-bit float parameter arrays.
// save -> load -> save is byte-identical.
void save_checkpoint(const std::filesystem::path& path, const ModelCheckpoint& ckpt);
ModelCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace imbtext

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ocular/errors.hpp"
#include "ocular/image.hpp"

namespace ocular {

class PgmError : public InputError {
public:
    enum class Kind { Open, Header, Truncated, Maxval };
    PgmError(Kind kind, const std::string& what) : InputError(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

GrayImage load_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(const std::string& bytes);

/// Pixels are rounded and clamped to [0, 255]. Binary (P5) unless ascii is set.
void save_pgm(const GrayImage& img, const std::filesystem::path& path, bool ascii = false);
std::string encode_pgm(const GrayImage& img, bool ascii = false);

/// `frame_000001.pgm` style name for a 1-based frame index.
std::string frame_name(int index);

/// All *.pgm files in a directory, sorted by name.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

}  // namespace ocular

#include "ocular/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ocular {
namespace {

class HeaderReader {
public:
    explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

    // Reads the next whitespace-delimited token, skipping '#' comments.
    std::string token() {
        skip_space();
        std::string tok;
        while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])) &&
               bytes_[pos_] != '#')
            tok.push_back(bytes_[pos_++]);
        return tok;
    }

    long number(const char* what) {
        const std::string tok = token();
        if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw PgmError(PgmError::Kind::Header, std::string("PGM header: bad ") + what);
        if (tok.size() > 9) throw PgmError(PgmError::Kind::Header, std::string("PGM header: ") + what + " too large");
        return std::stol(tok);
    }

    // Exactly one whitespace byte separates maxval from binary data.
    void consume_single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
            throw PgmError(PgmError::Kind::Header, "PGM header: missing separator before raster");
        ++pos_;
    }

    std::size_t pos() const { return pos_; }

private:
    void skip_space() {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

GrayImage parse_pgm(const std::string& bytes) {
    HeaderReader reader(bytes);
    const std::string magic = reader.token();
    if (magic != "P2" && magic != "P5") throw PgmError(PgmError::Kind::Header, "PGM header: bad magic '" + magic + "'");
    const long width = reader.number("width");
    const long height = reader.number("height");
    const long maxval = reader.number("maxval");
    if (width <= 0 || height <= 0) throw PgmError(PgmError::Kind::Header, "PGM header: zero dimension");
    if (maxval <= 0) throw PgmError(PgmError::Kind::Header, "PGM header: maxval must be positive");
    if (maxval > 255) throw PgmError(PgmError::Kind::Maxval, "PGM maxval " + std::to_string(maxval) + " exceeds 255");

    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<double> pixels(count);
    if (magic == "P5") {
        reader.consume_single_space();
        const std::size_t start = reader.pos();
        if (bytes.size() < start + count) throw PgmError(PgmError::Kind::Truncated, "PGM raster truncated");
        for (std::size_t i = 0; i < count; ++i) pixels[i] = static_cast<unsigned char>(bytes[start + i]);
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const std::string tok = reader.token();
            if (tok.empty()) throw PgmError(PgmError::Kind::Truncated, "PGM raster truncated");
            if (!std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
                throw PgmError(PgmError::Kind::Header, "PGM raster: non-numeric sample '" + tok + "'");
            const long v = std::stol(tok);
            if (v > maxval) throw PgmError(PgmError::Kind::Maxval, "PGM sample exceeds maxval");
            pixels[i] = static_cast<double>(v);
        }
    }
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PgmError(PgmError::Kind::Open, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_pgm(buffer.str());
}

std::string encode_pgm(const GrayImage& img, bool ascii) {
    std::ostringstream out;
    out << (ascii ? "P2" : "P5") << '\n' << img.width() << ' ' << img.height() << "\n255\n";
    for (std::size_t i = 0; i < img.size(); ++i) {
        const auto v = static_cast<int>(std::lround(std::clamp(img.pixels()[i], 0.0, 255.0)));
        if (ascii) {
            out << v << ((i + 1) % static_cast<std::size_t>(std::max(img.width(), 1)) == 0 ? '\n' : ' ');
        } else {
            out.put(static_cast<char>(static_cast<unsigned char>(v)));
        }
    }
    return out.str();
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path, bool ascii) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << encode_pgm(img, ascii);
    if (!out) throw InputError("write failed for " + path.string());
}

std::string frame_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06d.pgm", index);
    return buf;
}

std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw InputError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> frames;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".pgm") frames.push_back(entry.path());
    std::sort(frames.begin(), frames.end());
    return frames;
}

}  // namespace ocular

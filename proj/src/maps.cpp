#include "textsnake/maps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace textsnake {

namespace {

constexpr char kMagic[8] = {'T', 'S', 'M', 'A', 'P', 'S', '0', '1'};
constexpr std::uint32_t kChannelCount = 5;
constexpr std::int64_t kMaxPixels = std::int64_t{1} << 31;

void put_u32le(std::ostream& out, std::uint32_t v) {
    const unsigned char bytes[4] = {
        static_cast<unsigned char>(v & 0xff),
        static_cast<unsigned char>((v >> 8) & 0xff),
        static_cast<unsigned char>((v >> 16) & 0xff),
        static_cast<unsigned char>((v >> 24) & 0xff),
    };
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32le(std::istream& in, std::size_t& offset) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    if (in.gcount() != 4)
        throw IoError("truncated TSM1 file at byte offset " + std::to_string(offset));
    offset += 4;
    return std::uint32_t{bytes[0]} | (std::uint32_t{bytes[1]} << 8) |
           (std::uint32_t{bytes[2]} << 16) | (std::uint32_t{bytes[3]} << 24);
}

void write_plane(std::ostream& out, const std::vector<float>& plane) {
    std::vector<unsigned char> buf(plane.size() * 4);
    for (std::size_t i = 0; i < plane.size(); ++i) {
        const std::uint32_t v = std::bit_cast<std::uint32_t>(plane[i]);
        buf[4 * i + 0] = static_cast<unsigned char>(v & 0xff);
        buf[4 * i + 1] = static_cast<unsigned char>((v >> 8) & 0xff);
        buf[4 * i + 2] = static_cast<unsigned char>((v >> 16) & 0xff);
        buf[4 * i + 3] = static_cast<unsigned char>((v >> 24) & 0xff);
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

void read_plane(std::istream& in, std::vector<float>& plane, std::size_t n, std::size_t& offset) {
    std::vector<unsigned char> buf(n * 4);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size()))
        throw IoError("truncated TSM1 file at byte offset " +
                      std::to_string(offset + static_cast<std::size_t>(std::max<std::streamsize>(in.gcount(), 0))));
    offset += buf.size();
    plane.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t v = std::uint32_t{buf[4 * i + 0]} | (std::uint32_t{buf[4 * i + 1]} << 8) |
                                (std::uint32_t{buf[4 * i + 2]} << 16) | (std::uint32_t{buf[4 * i + 3]} << 24);
        plane[i] = std::bit_cast<float>(v);
    }
}

}  // namespace

GeometryMaps::GeometryMaps(int height, int width) : height_(height), width_(width) {
    if (height <= 0 || width <= 0)
        throw DimensionMismatch("maps dimensions must be positive");
    if (static_cast<std::int64_t>(height) * width > kMaxPixels)
        throw DimensionOverflow("maps exceed 2^31 pixels");
    const std::size_t n = pixel_count();
    tr.assign(n, 0.0f);
    tcl.assign(n, 0.0f);
    r.assign(n, 0.0f);
    cos_t.assign(n, 0.0f);
    sin_t.assign(n, 0.0f);
}

std::size_t GeometryMaps::clamped_index(double x, double y) const {
    int col = static_cast<int>(std::floor(x));
    int row = static_cast<int>(std::floor(y));
    col = std::clamp(col, 0, width_ - 1);
    row = std::clamp(row, 0, height_ - 1);
    return index(row, col);
}

void GeometryMaps::direction_at(double x, double y, double& cos_out, double& sin_out) const {
    const std::size_t i = clamped_index(x, y);
    const double c = cos_t[i];
    const double s = sin_t[i];
    const double norm = std::hypot(c, s);
    if (norm < 1e-6) {
        cos_out = 1.0;
        sin_out = 0.0;
    } else {
        cos_out = c / norm;
        sin_out = s / norm;
    }
}

BinarizedMaps binarize(const GeometryMaps& maps, double t_tr, double t_tcl) {
    if (!(t_tr > 0.0 && t_tr < 1.0 && t_tcl > 0.0 && t_tcl < 1.0))
        throw ThresholdOutOfRange("thresholds must lie in (0, 1)");

    BinarizedMaps out{PixelMask(maps.height(), maps.width()),
                      PixelMask(maps.height(), maps.width())};
    for (int row = 0; row < maps.height(); ++row) {
        for (int col = 0; col < maps.width(); ++col) {
            const std::size_t i = maps.index(row, col);
            const bool in_tr = maps.tr[i] >= t_tr;
            if (in_tr) out.tr_mask.set(row, col);
            if (in_tr && maps.tcl[i] >= t_tcl) out.tcl_mask.set(row, col);
        }
    }
    return out;
}

void save_maps(const GeometryMaps& maps, std::ostream& out) {
    if (static_cast<std::int64_t>(maps.height()) * maps.width() > kMaxPixels)
        throw DimensionOverflow("maps exceed 2^31 pixels");
    out.write(kMagic, sizeof(kMagic));
    put_u32le(out, static_cast<std::uint32_t>(maps.height()));
    put_u32le(out, static_cast<std::uint32_t>(maps.width()));
    put_u32le(out, kChannelCount);
    write_plane(out, maps.tr);
    write_plane(out, maps.tcl);
    write_plane(out, maps.r);
    write_plane(out, maps.cos_t);
    write_plane(out, maps.sin_t);
    if (!out) throw IoError("failed writing TSM1 stream");
}

void save_maps(const GeometryMaps& maps, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    save_maps(maps, f);
}

GeometryMaps load_maps(std::istream& in) {
    std::size_t offset = 0;
    char magic[8];
    in.read(magic, sizeof(magic));
    if (in.gcount() != sizeof(magic))
        throw IoError("truncated TSM1 file at byte offset 0");
    offset += 8;
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw BadMagic("not a TSM1 file");

    const std::uint32_t h = get_u32le(in, offset);
    const std::uint32_t w = get_u32le(in, offset);
    const std::uint32_t channels = get_u32le(in, offset);
    if (channels != kChannelCount)
        throw BadMagic("unexpected TSM1 channel count: " + std::to_string(channels));
    if (h == 0 || w == 0) throw IoError("TSM1 header has zero dimension");
    if (static_cast<std::int64_t>(h) * w > kMaxPixels)
        throw DimensionOverflow("TSM1 dimensions exceed 2^31 pixels");

    GeometryMaps maps(static_cast<int>(h), static_cast<int>(w));
    const std::size_t n = maps.pixel_count();
    read_plane(in, maps.tr, n, offset);
    read_plane(in, maps.tcl, n, offset);
    read_plane(in, maps.r, n, offset);
    read_plane(in, maps.cos_t, n, offset);
    read_plane(in, maps.sin_t, n, offset);
    return maps;
}

GeometryMaps load_maps(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    return load_maps(f);
}

}  // namespace textsnake

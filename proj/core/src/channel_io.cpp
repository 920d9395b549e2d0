#include "fxpf/channel_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "fxpf/errors.hpp"

namespace fxpf {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put_le(std::vector<unsigned char>& buf, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    buf.insert(buf.end(), bytes, bytes + sizeof(T));
}

template <class T>
T get_le(const unsigned char* p) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

std::string magic_str(const FileMagic& m) { return std::string(m.begin(), m.end()); }

}  // namespace

void write_frame(std::ostream& os, const ChannelFrame& frame, const FileMagic& magic) {
    if (frame.num_elements() > UINT32_MAX || frame.num_samples() > UINT32_MAX)
        throw ValidationError("write_frame: dimensions exceed u32");

    std::vector<unsigned char> buf;
    buf.reserve(kHeaderBytes + frame.samples.size() * 4);
    buf.insert(buf.end(), magic.begin(), magic.end());
    put_le<std::uint32_t>(buf, kFormatVersion);
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(frame.num_elements()));
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(frame.num_samples()));
    put_le<double>(buf, frame.geometry.sampling_frequency);
    put_le<double>(buf, frame.geometry.center_frequency);
    put_le<double>(buf, frame.geometry.sound_speed);
    put_le<double>(buf, frame.geometry.pitch);
    put_le<double>(buf, frame.start_time);
    for (double v : frame.samples.values()) {
        const auto f = static_cast<float>(v);
        if (!std::isfinite(f)) throw ValidationError("write_frame: sample not representable as f32");
        put_le<float>(buf, f);
    }
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!os) throw IoError("write_frame: stream write failed");
}

ChannelFrame read_frame(std::istream& is, const FileMagic& magic) {
    unsigned char header[kHeaderBytes];
    if (!is.read(reinterpret_cast<char*>(header), kHeaderBytes))
        throw IoError("read_frame: truncated header");
    if (std::memcmp(header, magic.data(), 4) != 0)
        throw IoError("read_frame: bad magic, expected " + magic_str(magic));
    const unsigned char* p = header + 4;
    const auto version = get_le<std::uint32_t>(p);
    if (version != kFormatVersion)
        throw IoError("read_frame: unsupported format version " + std::to_string(version));
    const auto elements = get_le<std::uint32_t>(p + 4);
    const auto samples = get_le<std::uint32_t>(p + 8);

    ChannelFrame frame;
    frame.geometry.num_elements = elements;
    frame.geometry.sampling_frequency = get_le<double>(p + 12);
    frame.geometry.center_frequency = get_le<double>(p + 20);
    frame.geometry.sound_speed = get_le<double>(p + 28);
    frame.geometry.pitch = get_le<double>(p + 36);
    frame.start_time = get_le<double>(p + 44);

    const std::size_t count = static_cast<std::size_t>(elements) * samples;
    std::vector<unsigned char> payload(count * 4);
    if (!is.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size())))
        throw IoError("read_frame: truncated sample payload");

    frame.samples = Array2D<double>(elements, samples);
    auto values = frame.samples.values();
    for (std::size_t i = 0; i < count; ++i) values[i] = get_le<float>(payload.data() + 4 * i);
    try {
        frame.validate();
    } catch (const ValidationError& e) {
        throw IoError(std::string("read_frame: invalid contents: ") + e.what());
    }
    return frame;
}

void save_frame(const std::filesystem::path& path, const ChannelFrame& frame, const FileMagic& magic) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    write_frame(os, frame, magic);
}

ChannelFrame load_frame(const std::filesystem::path& path, const FileMagic& magic) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for reading: " + path.string());
    return read_frame(is, magic);
}

}  // namespace fxpf

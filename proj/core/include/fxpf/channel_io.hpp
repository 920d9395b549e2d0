#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "fxpf/geometry.hpp"

namespace fxpf {

// Little-endian container: magic[4], version u32, num_elements u32,
// num_samples u32, fs f64, fc f64, c f64, pitch f64, start_time f64, then
// num_elements * num_samples f32 samples, element-major.
using FileMagic = std::array<char, 4>;
inline constexpr FileMagic kChannelMagic{'F', 'X', 'P', 'F'};
inline constexpr FileMagic kEnvelopeMagic{'F', 'E', 'N', 'V'};
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 4 + 3 * 4 + 5 * 8;

void write_frame(std::ostream& os, const ChannelFrame& frame, const FileMagic& magic = kChannelMagic);
ChannelFrame read_frame(std::istream& is, const FileMagic& magic = kChannelMagic);

void save_frame(const std::filesystem::path& path, const ChannelFrame& frame,
                const FileMagic& magic = kChannelMagic);
ChannelFrame load_frame(const std::filesystem::path& path, const FileMagic& magic = kChannelMagic);

}  // namespace fxpf

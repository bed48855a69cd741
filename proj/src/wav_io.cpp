#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "foleylab/audio.hpp"

namespace foleylab {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;
// FL | FR | FC | LFE | BL | BR
constexpr std::uint32_t kMask51 = 0x0000003F;

struct FmtChunk {
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
    std::uint16_t sub_format = 0; // extensible only
};

void write_u16(std::ofstream& f, std::uint16_t v) {
    f.put(static_cast<char>(v & 0xFF));
    f.put(static_cast<char>((v >> 8) & 0xFF));
}
void write_u32(std::ofstream& f, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) f.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

} // namespace

AudioClip load_wav(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::io_error, "cannot open " + path.string());

    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw Error(ErrorCode::format_error, "not a RIFF/WAVE file: " + path.string());

    FmtChunk fmt;
    const unsigned char* data = nullptr;
    std::size_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t len = read_u32(bytes.data() + pos + 4);
        const std::size_t body = pos + 8;
        if (body + len > bytes.size())
            throw Error(ErrorCode::format_error, "truncated chunk in " + path.string());
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (len < 16) throw Error(ErrorCode::format_error, "short fmt chunk");
            fmt.format = read_u16(bytes.data() + body);
            fmt.channels = read_u16(bytes.data() + body + 2);
            fmt.sample_rate = read_u32(bytes.data() + body + 4);
            fmt.bits = read_u16(bytes.data() + body + 14);
            if (fmt.format == kFormatExtensible) {
                if (len < 40) throw Error(ErrorCode::format_error, "short extensible fmt chunk");
                fmt.sub_format = read_u16(bytes.data() + body + 24);
            }
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = bytes.data() + body;
            data_len = len;
        }
        pos = body + len + (len & 1); // chunks are word-aligned
    }

    if (fmt.channels == 0 || data == nullptr)
        throw Error(ErrorCode::format_error, "missing fmt or data chunk: " + path.string());
    if (fmt.channels != 1 && fmt.channels != 2 && fmt.channels != 6)
        throw_invalid("load_wav: unsupported channel count " + std::to_string(fmt.channels));

    const std::uint16_t eff_format = fmt.format == kFormatExtensible ? fmt.sub_format : fmt.format;
    const bool is_float = eff_format == kFormatFloat && fmt.bits == 32;
    const bool is_pcm16 = eff_format == kFormatPcm && fmt.bits == 16;
    const bool is_pcm24 = eff_format == kFormatPcm && fmt.bits == 24;
    if (!is_float && !is_pcm16 && !is_pcm24)
        throw Error(ErrorCode::unsupported,
                    "unsupported WAV encoding (format " + std::to_string(eff_format) + ", " +
                        std::to_string(fmt.bits) + " bits)");

    const std::size_t bytes_per_sample = fmt.bits / 8u;
    const std::size_t count = data_len / bytes_per_sample;

    AudioClip clip;
    clip.sample_rate = static_cast<int>(fmt.sample_rate);
    clip.channels = fmt.channels;
    clip.samples.resize(count - count % fmt.channels);

    for (std::size_t i = 0; i < clip.samples.size(); ++i) {
        const unsigned char* s = data + i * bytes_per_sample;
        if (is_float) {
            float v;
            std::memcpy(&v, s, 4);
            clip.samples[i] = v;
        } else if (is_pcm16) {
            const auto v = static_cast<std::int16_t>(s[0] | (s[1] << 8));
            clip.samples[i] = static_cast<float>(v / 32768.0);
        } else {
            std::int32_t v = s[0] | (s[1] << 8) | (s[2] << 16);
            if (v & 0x800000) v |= ~0xFFFFFF; // sign-extend
            clip.samples[i] = static_cast<float>(v / 8388608.0);
        }
    }
    clip.validate();
    return clip;
}

void save_wav(const AudioClip& clip, const std::filesystem::path& path, WavEncoding encoding,
              Diagnostics* diag) {
    clip.validate();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::io_error, "cannot write " + path.string());

    const bool is_float = encoding == WavEncoding::float32;
    const std::uint16_t bits = is_float ? 32 : 16;
    const auto nch = static_cast<std::uint16_t>(clip.channels);
    const std::uint32_t byte_rate = clip.sample_rate * nch * (bits / 8u);
    const std::uint16_t block_align = nch * (bits / 8u);
    const auto data_len = static_cast<std::uint32_t>(clip.samples.size() * (bits / 8u));

    // 6-channel files need the extensible header to carry the speaker mask.
    const bool extensible = clip.channels == 6;
    const std::uint32_t fmt_len = extensible ? 40 : 16;
    const std::uint32_t riff_len = 4 + (8 + fmt_len) + (8 + data_len);

    f.write("RIFF", 4);
    write_u32(f, riff_len);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    write_u32(f, fmt_len);
    write_u16(f, extensible ? kFormatExtensible : (is_float ? kFormatFloat : kFormatPcm));
    write_u16(f, nch);
    write_u32(f, static_cast<std::uint32_t>(clip.sample_rate));
    write_u32(f, byte_rate);
    write_u16(f, block_align);
    write_u16(f, bits);
    if (extensible) {
        write_u16(f, 22); // cbSize
        write_u16(f, bits);
        write_u32(f, kMask51);
        // Subformat GUID: PCM or IEEE float
        write_u16(f, is_float ? kFormatFloat : kFormatPcm);
        const std::array<unsigned char, 14> guid_tail = {0x00, 0x00, 0x00, 0x00, 0x10, 0x00, 0x80,
                                                         0x00, 0x00, 0xAA, 0x00, 0x38, 0x9B, 0x71};
        f.write(reinterpret_cast<const char*>(guid_tail.data()), guid_tail.size());
    }
    f.write("data", 4);
    write_u32(f, data_len);

    std::int64_t clipped = 0;
    if (is_float) {
        f.write(reinterpret_cast<const char*>(clip.samples.data()),
                static_cast<std::streamsize>(clip.samples.size() * 4));
    } else {
        for (float s : clip.samples) {
            double v = s;
            if (v > 1.0) {
                v = 1.0;
                ++clipped;
            } else if (v < -1.0) {
                v = -1.0;
                ++clipped;
            }
            auto q = static_cast<std::int32_t>(std::lround(v * 32768.0));
            q = std::min<std::int32_t>(32767, std::max<std::int32_t>(-32768, q));
            const auto u = static_cast<std::uint16_t>(static_cast<std::int16_t>(q));
            write_u16(f, u);
        }
    }
    if (!f) throw Error(ErrorCode::io_error, "write failed: " + path.string());
    if (clipped > 0)
        diag_add(diag, "save_wav", Diagnostic::Severity::warning,
                 "samples clipped during pcm16 conversion", clipped);
}

} // namespace foleylab

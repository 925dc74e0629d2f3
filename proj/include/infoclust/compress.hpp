#pragma once
// Built-in dictionary compressor and external-compressor handles.
//
// BUILTIN wire format ("ILZ1"), fixed so byte lengths reproduce exactly:
//   header   4 bytes magic "ILZ1" + 8 bytes little-endian raw size (12 total)
//   body     groups of up to 8 items after a control byte; control bit i
//            (LSB first) selects item i: 0 = literal (1 byte),
//            1 = match (3 bytes)
//   match    bytes 0..1: little-endian (offset - 1), offset in [1, 32768];
//            byte 2: (length - 4), length in [4, 259]; matches may overlap
//            the cursor and are copied byte by byte
// Encoding is greedy longest-match over a 32 KiB window. Candidates come
// from hash chains on 4-byte keys, scanned newest (nearest) first, at most
// 256 links; only strictly longer matches displace the current best, so the
// nearest of equal-length candidates wins. Every position of an emitted
// token is inserted into the chains. Level settings do not exist for
// BUILTIN; the algorithm above is the whole story.
//
// EXTERNAL runs a user command template with {in} and {out} placeholders
// substituted by temporary file paths. The command is executed twice per
// call and the outputs compared; any disagreement is reported as
// nondeterminism.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <unistd.h>

#include "infoclust/core.hpp"

namespace infoclust {

constexpr std::size_t kCompressHeaderSize = 12;
constexpr std::size_t kCompressWindow = 32768;
constexpr std::size_t kMinMatch = 4;
constexpr std::size_t kMaxMatch = 259;
constexpr int kMaxChainLinks = 256;

inline std::vector<std::uint8_t> compress_builtin(std::span<const std::uint8_t> data) {
    std::vector<std::uint8_t> out;
    out.reserve(kCompressHeaderSize + data.size() + data.size() / 8 + 2);
    for (char c : {'I', 'L', 'Z', '1'})
        out.push_back(static_cast<std::uint8_t>(c));
    for (int b = 0; b < 8; ++b)
        out.push_back(static_cast<std::uint8_t>((static_cast<std::uint64_t>(data.size()) >> (8 * b)) & 0xff));

    constexpr std::size_t kHashBits = 15;
    std::vector<std::int64_t> head(std::size_t{1} << kHashBits, -1);
    std::vector<std::int64_t> prev(data.size(), -1);
    auto hash4 = [&](std::size_t i) {
        std::uint32_t x = static_cast<std::uint32_t>(data[i]) |
                          static_cast<std::uint32_t>(data[i + 1]) << 8 |
                          static_cast<std::uint32_t>(data[i + 2]) << 16 |
                          static_cast<std::uint32_t>(data[i + 3]) << 24;
        return (x * 2654435761u) >> (32 - kHashBits);
    };
    auto insert = [&](std::size_t i) {
        if (i + kMinMatch > data.size())
            return;
        std::uint32_t h = hash4(i);
        prev[i] = head[h];
        head[h] = static_cast<std::int64_t>(i);
    };

    std::size_t ctrl_pos = 0;
    int items_in_group = 8;  // force a fresh control byte first
    auto begin_item = [&](bool is_match) {
        if (items_in_group == 8) {
            ctrl_pos = out.size();
            out.push_back(0);
            items_in_group = 0;
        }
        if (is_match)
            out[ctrl_pos] |= static_cast<std::uint8_t>(1u << items_in_group);
        ++items_in_group;
    };

    std::size_t i = 0;
    while (i < data.size()) {
        std::size_t best_len = 0, best_off = 0;
        if (i + kMinMatch <= data.size()) {
            const std::size_t cap = std::min(kMaxMatch, data.size() - i);
            std::int64_t cand = head[hash4(i)];
            int links = 0;
            while (cand >= 0 && links < kMaxChainLinks) {
                std::size_t c = static_cast<std::size_t>(cand);
                if (i - c > kCompressWindow)
                    break;  // chains are position-ordered; older is farther
                std::size_t len = 0;
                while (len < cap && data[c + len] == data[i + len])
                    ++len;
                if (len > best_len && len >= kMinMatch) {
                    best_len = len;
                    best_off = i - c;
                    if (best_len == cap)
                        break;
                }
                cand = prev[c];
                ++links;
            }
        }
        if (best_len >= kMinMatch) {
            begin_item(true);
            std::uint16_t off = static_cast<std::uint16_t>(best_off - 1);
            out.push_back(static_cast<std::uint8_t>(off & 0xff));
            out.push_back(static_cast<std::uint8_t>(off >> 8));
            out.push_back(static_cast<std::uint8_t>(best_len - kMinMatch));
            for (std::size_t k = 0; k < best_len; ++k)
                insert(i + k);
            i += best_len;
        } else {
            begin_item(false);
            out.push_back(data[i]);
            insert(i);
            ++i;
        }
    }
    return out;
}

inline std::vector<std::uint8_t> decompress_builtin(std::span<const std::uint8_t> payload) {
    if (payload.size() < kCompressHeaderSize || payload[0] != 'I' || payload[1] != 'L' ||
        payload[2] != 'Z' || payload[3] != '1')
        throw format_error("bad compressed header");
    std::uint64_t raw_size = 0;
    for (int b = 0; b < 8; ++b)
        raw_size |= static_cast<std::uint64_t>(payload[4 + b]) << (8 * b);

    std::vector<std::uint8_t> out;
    out.reserve(raw_size);
    std::size_t pos = kCompressHeaderSize;
    while (out.size() < raw_size) {
        if (pos >= payload.size())
            throw format_error("compressed stream truncated");
        std::uint8_t ctrl = payload[pos++];
        for (int item = 0; item < 8 && out.size() < raw_size; ++item) {
            if (ctrl & (1u << item)) {
                if (pos + 3 > payload.size())
                    throw format_error("compressed stream truncated");
                std::size_t off = (static_cast<std::size_t>(payload[pos]) |
                                   static_cast<std::size_t>(payload[pos + 1]) << 8) + 1;
                std::size_t len = static_cast<std::size_t>(payload[pos + 2]) + kMinMatch;
                pos += 3;
                if (off > out.size())
                    throw format_error("match offset before stream start");
                if (out.size() + len > raw_size)
                    throw format_error("match overruns the declared size");
                for (std::size_t k = 0; k < len; ++k)
                    out.push_back(out[out.size() - off]);
            } else {
                if (pos >= payload.size())
                    throw format_error("compressed stream truncated");
                out.push_back(payload[pos++]);
            }
        }
    }
    if (pos != payload.size())
        throw format_error("trailing bytes after compressed stream");
    return out;
}

class CompressorHandle {
public:
    enum class Kind { builtin, external };

    static CompressorHandle builtin() { return CompressorHandle(Kind::builtin, "", 0); }
    /// `command` must contain {in} and {out}; it is run through the shell.
    static CompressorHandle external(std::string command, int level = 0) {
        if (command.find("{in}") == std::string::npos ||
            command.find("{out}") == std::string::npos)
            throw format_error("external compressor template needs {in} and {out}");
        return CompressorHandle(Kind::external, std::move(command), level);
    }

    Kind kind() const { return kind_; }
    int level() const { return level_; }
    const std::string& command() const { return command_; }

private:
    CompressorHandle(Kind k, std::string cmd, int level)
        : kind_(k), command_(std::move(cmd)), level_(level) {}
    Kind kind_;
    std::string command_;
    int level_;
};

struct Compressed {
    std::size_t length = 0;  // |payload| in bytes
    std::vector<std::uint8_t> payload;
};

namespace detail {

inline std::string substitute(std::string tmpl, const std::string& key, const std::string& value) {
    for (std::size_t at = tmpl.find(key); at != std::string::npos; at = tmpl.find(key))
        tmpl.replace(at, key.size(), value);
    return tmpl;
}

inline std::vector<std::uint8_t> run_external_once(const CompressorHandle& c,
                                                   std::span<const std::uint8_t> data) {
    static std::atomic<std::uint64_t> counter{0};
    auto tag = std::to_string(static_cast<std::uint64_t>(::getpid())) + "_" +
               std::to_string(counter.fetch_add(1));
    auto dir = std::filesystem::temp_directory_path();
    auto in_path = dir / ("infoclust_in_" + tag);
    auto out_path = dir / ("infoclust_out_" + tag);
    struct Cleanup {
        std::filesystem::path a, b;
        ~Cleanup() {
            std::error_code ec;
            std::filesystem::remove(a, ec);
            std::filesystem::remove(b, ec);
        }
    } cleanup{in_path, out_path};

    {
        std::ofstream f(in_path, std::ios::binary);
        if (!f)
            throw format_error("cannot stage external compressor input");
        f.write(reinterpret_cast<const char*>(data.data()),
                static_cast<std::streamsize>(data.size()));
    }
    std::string cmd = substitute(substitute(c.command(), "{in}", in_path.string()), "{out}",
                                 out_path.string());
    int rc = std::system(cmd.c_str());
    if (rc != 0)
        throw format_error("external compressor failed with status " + std::to_string(rc));
    std::ifstream f(out_path, std::ios::binary);
    if (!f)
        throw format_error("external compressor produced no output");
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(f),
                                     std::istreambuf_iterator<char>());
}

}  // namespace detail

inline Compressed compress(std::span<const std::uint8_t> data, const CompressorHandle& c) {
    if (c.kind() == CompressorHandle::Kind::builtin) {
        Compressed out;
        out.payload = compress_builtin(data);
        out.length = out.payload.size();
        return out;
    }
    auto first = detail::run_external_once(c, data);
    auto second = detail::run_external_once(c, data);
    if (first != second)
        throw format_error("external compressor is nondeterministic on this input");
    return Compressed{first.size(), std::move(first)};
}

inline std::vector<std::uint8_t> decompress(std::span<const std::uint8_t> payload,
                                            const CompressorHandle& c) {
    if (c.kind() != CompressorHandle::Kind::builtin)
        throw model_error("only the builtin compressor declares an inverse");
    return decompress_builtin(payload);
}

}  // namespace infoclust

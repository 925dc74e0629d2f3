#pragma once
// Compressor-backed distance proxies over raw bytes. The conditional proxy
// approximates the bits needed to produce x from y as the growth of the
// compressed stream when x is appended after y; the normalized variant
// divides out the scale. Operands are concatenated smaller-first
// (lexicographically) so the normalized distance is symmetric by
// construction, not approximately.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "infoclust/compress.hpp"
#include "infoclust/core.hpp"
#include "infoclust/matrix.hpp"

namespace infoclust {

struct ProxyDistance {
    enum class Units { bits, ncd };
    double value = 0.0;
    Units units = Units::bits;
};

inline std::size_t compressed_length(std::span<const std::uint8_t> data,
                                     const CompressorHandle& c) {
    return compress(data, c).length;
}

namespace detail {

inline std::vector<std::uint8_t> concat(std::span<const std::uint8_t> a,
                                        std::span<const std::uint8_t> b) {
    std::vector<std::uint8_t> out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace detail

/// Bits-scale proxy for C(x|y): 8 * max(Z(y·x) - Z(y), 0).
inline ProxyDistance cond_proxy(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y,
                                const CompressorHandle& c) {
    std::size_t zyx = compressed_length(detail::concat(y, x), c);
    std::size_t zy = compressed_length(y, c);
    double bytes = zyx > zy ? static_cast<double>(zyx - zy) : 0.0;
    return ProxyDistance{8.0 * bytes, ProxyDistance::Units::bits};
}

/// Normalized compression distance (Z(xy) - min(Z(x), Z(y))) / max(...),
/// with xy ordered lexicographically smaller operand first.
inline ProxyDistance ncd(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y,
                         const CompressorHandle& c) {
    if (x.empty() && y.empty())
        throw model_error("ncd needs at least one nonempty operand");
    bool x_first = std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
    std::size_t zx = compressed_length(x, c);
    std::size_t zy = compressed_length(y, c);
    std::size_t zxy =
        compressed_length(x_first ? detail::concat(x, y) : detail::concat(y, x), c);
    double lo = static_cast<double>(std::min(zx, zy));
    double hi = static_cast<double>(std::max(zx, zy));
    return ProxyDistance{(static_cast<double>(zxy) - lo) / hi, ProxyDistance::Units::ncd};
}

struct CorpusItem {
    std::string id;  // path relative to the corpus root
    std::vector<std::uint8_t> bytes;
};

/// Every regular file under `dir`, id = relative path, sorted by id.
inline std::vector<CorpusItem> load_corpus(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw format_error("corpus directory not readable: " + dir.string());
    std::vector<CorpusItem> items;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file())
            continue;
        std::ifstream f(entry.path(), std::ios::binary);
        if (!f)
            throw format_error("cannot read corpus file: " + entry.path().string());
        CorpusItem item;
        item.id = std::filesystem::relative(entry.path(), dir).generic_string();
        item.bytes.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
        items.push_back(std::move(item));
    }
    if (items.empty())
        throw format_error("corpus directory has no regular files: " + dir.string());
    std::sort(items.begin(), items.end(),
              [](const CorpusItem& a, const CorpusItem& b) { return a.id < b.id; });
    return items;
}

/// Pairwise NCD matrix. bit_scale is set to the mean compressed item length
/// in bits, the default factor for mapping NCD units onto bit thresholds.
inline DistanceMatrix ncd_matrix(const std::vector<CorpusItem>& items,
                                 const CompressorHandle& c) {
    if (items.empty())
        throw model_error("cannot build a distance matrix over zero items");
    if (items.size() > 4096)
        throw model_error("distance matrix capped at 4096 items");
    std::vector<std::string> ids;
    std::vector<std::size_t> z;
    double zsum = 0;
    for (const CorpusItem& it : items) {
        ids.push_back(it.id);
        z.push_back(compressed_length(it.bytes, c));
        zsum += static_cast<double>(z.back());
    }
    DistanceMatrix mat(std::move(ids), DistanceUnits::ncd);
    mat.set_bit_scale(8.0 * zsum / static_cast<double>(items.size()));
    for (std::size_t i = 0; i < items.size(); ++i) {
        mat.set(i, i, 0.0);
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            const auto& a = items[i].bytes;
            const auto& b = items[j].bytes;
            bool a_first = std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
            std::size_t zab = compressed_length(
                a_first ? detail::concat(a, b) : detail::concat(b, a), c);
            double lo = static_cast<double>(std::min(z[i], z[j]));
            double hi = static_cast<double>(std::max(z[i], z[j]));
            mat.set(i, j, (static_cast<double>(zab) - lo) / hi);
        }
    }
    return mat;
}

}  // namespace infoclust

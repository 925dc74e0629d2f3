#pragma once
// Symmetric distance matrices over indexed item families, built as
// max(C(i|j), C(j|i)) under a chosen backend. Entries are doubles; an
// unreachable direction in the table model yields +infinity, which is kept
// (and flagged), never silently dropped. CSV round trip uses shortest
// round-trip float formatting so re-reading is lossless.

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "infoclust/core.hpp"
#include "infoclust/set_model.hpp"

namespace infoclust {

enum class DistanceUnits { bits, ncd };

class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::vector<std::string> ids, DistanceUnits units)
        : ids_(std::move(ids)), units_(units), entries_(ids_.size() * ids_.size(), 0.0) {}

    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }
    DistanceUnits units() const { return units_; }

    double at(std::size_t i, std::size_t j) const { return entries_[i * size() + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        entries_[i * size() + j] = v;
        entries_[j * size() + i] = v;
    }
    bool finite(std::size_t i, std::size_t j) const { return std::isfinite(at(i, j)); }
    bool has_infinite() const {
        for (double v : entries_)
            if (!std::isfinite(v))
                return true;
        return false;
    }

    std::size_t index_of(const std::string& id) const {
        for (std::size_t i = 0; i < ids_.size(); ++i)
            if (ids_[i] == id)
                return i;
        throw model_error("unknown item id: " + id);
    }

    /// Multiplier taking matrix units to bits. Identity for bit-valued
    /// matrices; NCD builders set it to the mean compressed length in bits.
    double bit_scale() const { return bit_scale_; }
    void set_bit_scale(double s) { bit_scale_ = s; }

private:
    std::vector<std::string> ids_;
    DistanceUnits units_ = DistanceUnits::bits;
    std::vector<double> entries_;
    double bit_scale_ = 1.0;
};

/// dist(i,j) = max(C(i|j), C(j|i)) over any indexed model.
template <typename Model>
DistanceMatrix distance_matrix(const Model& model) {
    const std::size_t n = model.size();
    if (n == 0)
        throw model_error("cannot build a distance matrix over zero items");
    if (n > 4096)
        throw model_error("distance matrix capped at 4096 items");
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        ids.push_back(model.label(i));
    DistanceMatrix m(std::move(ids), DistanceUnits::bits);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            ComplexityValue d = std::max(model.cond(i, j), model.cond(j, i));
            m.set(i, j, d.is_infinite() ? std::numeric_limits<double>::infinity()
                                        : static_cast<double>(d.bits()));
        }
    return m;
}

/// Set-backend matrix over an explicit list of subsets (ids are the masks).
inline DistanceMatrix distance_matrix_sets(Universe u, const std::vector<std::uint64_t>& masks) {
    struct ItemView {
        Universe u;
        const std::vector<std::uint64_t>* masks;
        std::size_t size() const { return masks->size(); }
        ComplexityValue cond(std::size_t i, std::size_t j) const {
            return ComplexityValue::finite(std::popcount((*masks)[i] & ~(*masks)[j]));
        }
        std::string label(std::size_t i) const { return std::to_string((*masks)[i]); }
    };
    for (std::uint64_t m : masks)
        if (m & ~u.full_mask())
            throw model_error("item outside the universe");
    return distance_matrix(ItemView{u, &masks});
}

namespace detail {

inline std::string format_value(double v) {
    if (std::isinf(v))
        return "inf";
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_value(const std::string& s) {
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    double v{};
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw format_error("bad matrix value: \"" + s + "\"");
    return v;
}

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

// matrix.csv: first row/column carry the item ids, the body is symmetric.
inline void write_matrix_csv(const DistanceMatrix& m, std::ostream& out) {
    for (const std::string& id : m.ids()) {
        if (id.find(',') != std::string::npos || id.find('\n') != std::string::npos)
            throw format_error("item id not representable in CSV: " + id);
        out << ',' << id;
    }
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << m.ids()[i];
        for (std::size_t j = 0; j < m.size(); ++j)
            out << ',' << detail::format_value(m.at(i, j));
        out << '\n';
    }
}

inline void save_matrix_csv(const DistanceMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw format_error("cannot write matrix file: " + path);
    write_matrix_csv(m, out);
}

inline DistanceMatrix load_matrix_csv(const std::string& path,
                                      DistanceUnits units = DistanceUnits::bits) {
    std::ifstream in(path);
    if (!in)
        throw format_error("cannot open matrix file: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw format_error("empty matrix file: " + path);
    auto header = detail::split_csv_row(line);
    if (header.size() < 2 || !header[0].empty())
        throw format_error("matrix header must start with an empty cell");
    std::vector<std::string> ids(header.begin() + 1, header.end());

    DistanceMatrix m(ids, units);
    if (units == DistanceUnits::ncd)
        m.set_bit_scale(0.0);  // the CSV does not carry a scale
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!std::getline(in, line))
            throw format_error("matrix body truncated");
        auto row = detail::split_csv_row(line);
        if (row.size() != ids.size() + 1 || row[0] != ids[i])
            throw format_error("matrix row " + std::to_string(i) + " malformed");
        for (std::size_t j = 0; j < ids.size(); ++j) {
            double v = detail::parse_value(row[j + 1]);
            if (v < 0)
                throw format_error("negative distance in matrix");
            if (j < i && v != m.at(i, j))
                throw format_error("matrix not symmetric at (" + std::to_string(i) + "," +
                                   std::to_string(j) + ")");
            m.set(i, j, v);
        }
    }
    return m;
}

}  // namespace infoclust

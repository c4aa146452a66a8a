#pragma once

// U-type designs, their unit-cube images, and the CSV/JSON design formats.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sequd/detail/rng.hpp"
#include "sequd/matrix.hpp"

namespace sequd {

/// Real-valued design, one point per row. Entries lie in [0,1].
using UnitDesign = Matrix<double>;

/// n x s matrix of integer levels in 1..q. No balance requirement; this is the
/// shape of fixed blocks and augmentation results, which are only balanced
/// jointly with their partner block.
class LevelDesign {
public:
    LevelDesign() = default;
    LevelDesign(std::size_t runs, std::size_t factors, int levels)
        : levels_(levels), table_(runs, factors, 1) {
        if (levels < 1) throw std::invalid_argument("level count q must be >= 1");
    }
    LevelDesign(Matrix<int> table, int levels) : levels_(levels), table_(std::move(table)) {
        if (levels < 1) throw std::invalid_argument("level count q must be >= 1");
        for (int v : table_.data()) {
            if (v < 1 || v > levels_) {
                throw std::invalid_argument("level " + std::to_string(v) + " outside 1.." +
                                            std::to_string(levels_));
            }
        }
    }

    [[nodiscard]] std::size_t runs() const noexcept { return table_.rows(); }
    [[nodiscard]] std::size_t factors() const noexcept { return table_.cols(); }
    [[nodiscard]] int levels() const noexcept { return levels_; }
    [[nodiscard]] bool empty() const noexcept { return table_.rows() == 0; }

    int& operator()(std::size_t r, std::size_t c) noexcept { return table_(r, c); }
    int operator()(std::size_t r, std::size_t c) const noexcept { return table_(r, c); }
    [[nodiscard]] const Matrix<int>& table() const noexcept { return table_; }

    /// Per-level occurrence counts in column `col`; index 0 is level 1.
    [[nodiscard]] std::vector<std::size_t> column_counts(std::size_t col) const {
        std::vector<std::size_t> counts(static_cast<std::size_t>(levels_), 0);
        for (std::size_t r = 0; r < runs(); ++r) ++counts[static_cast<std::size_t>(table_(r, col) - 1)];
        return counts;
    }

    /// True when n is divisible by q and every column holds each level n/q times.
    [[nodiscard]] bool balanced() const {
        if (runs() == 0 || runs() % static_cast<std::size_t>(levels_) != 0) return false;
        const std::size_t per_level = runs() / static_cast<std::size_t>(levels_);
        for (std::size_t c = 0; c < factors(); ++c) {
            for (std::size_t count : column_counts(c)) {
                if (count != per_level) return false;
            }
        }
        return true;
    }

    [[nodiscard]] LevelDesign vstack(const LevelDesign& below) const {
        if (empty()) return below;
        if (below.empty()) return *this;
        if (below.levels_ != levels_) throw std::invalid_argument("vstack: level count mismatch");
        return LevelDesign(table_.vstack(below.table_), levels_);
    }

    friend bool operator==(const LevelDesign&, const LevelDesign&) = default;

private:
    int levels_ = 1;
    Matrix<int> table_;
};

/// A balanced U-type design. Construction validates the balance invariant.
class UTypeDesign {
public:
    explicit UTypeDesign(LevelDesign design) : design_(std::move(design)) {
        if (!design_.balanced()) throw std::invalid_argument("design is not a balanced U-type design");
    }

    [[nodiscard]] const LevelDesign& design() const noexcept { return design_; }
    operator const LevelDesign&() const noexcept { return design_; }  // NOLINT(google-explicit-constructor)

    [[nodiscard]] std::size_t runs() const noexcept { return design_.runs(); }
    [[nodiscard]] std::size_t factors() const noexcept { return design_.factors(); }
    [[nodiscard]] int levels() const noexcept { return design_.levels(); }
    int operator()(std::size_t r, std::size_t c) const noexcept { return design_(r, c); }

    friend bool operator==(const UTypeDesign&, const UTypeDesign&) = default;

private:
    LevelDesign design_;
};

inline void check_shape(std::size_t n, std::size_t s, int q) {
    if (n < 1 || s < 1 || q < 1) throw std::invalid_argument("runs, factors and levels must all be >= 1");
    if (n % static_cast<std::size_t>(q) != 0) {
        throw std::invalid_argument("run count " + std::to_string(n) + " is not divisible by level count " +
                                    std::to_string(q));
    }
}

/// Each column is an independent uniform shuffle of {1 x n/q, ..., q x n/q}.
inline UTypeDesign random_balanced(std::size_t n, std::size_t s, int q, std::uint64_t seed) {
    check_shape(n, s, q);
    Rng rng(seed);
    const std::size_t per_level = n / static_cast<std::size_t>(q);
    LevelDesign d(n, s, q);
    std::vector<int> column(n);
    for (std::size_t c = 0; c < s; ++c) {
        for (std::size_t r = 0; r < n; ++r) column[r] = static_cast<int>(r / per_level) + 1;
        std::shuffle(column.begin(), column.end(), rng);
        for (std::size_t r = 0; r < n; ++r) d(r, c) = column[r];
    }
    return UTypeDesign(std::move(d));
}

/// Cell-midpoint of level u among q: (2u - 1) / (2q).
constexpr double level_to_unit(int level, int q) noexcept {
    return (2.0 * level - 1.0) / (2.0 * q);
}

/// Inverse of level_to_unit; exact for mapped points.
inline int unit_to_level(double x, int q) noexcept {
    return static_cast<int>(std::lround((2.0 * q * x + 1.0) / 2.0));
}

inline UnitDesign to_unit(const LevelDesign& d) {
    UnitDesign x(d.runs(), d.factors());
    for (std::size_t r = 0; r < d.runs(); ++r) {
        for (std::size_t c = 0; c < d.factors(); ++c) x(r, c) = level_to_unit(d(r, c), d.levels());
    }
    return x;
}

// ---------------------------------------------------------------------------
// Serialization

inline void write_csv(std::ostream& out, const LevelDesign& d) {
    for (std::size_t r = 0; r < d.runs(); ++r) {
        for (std::size_t c = 0; c < d.factors(); ++c) {
            if (c) out << ',';
            out << d(r, c);
        }
        out << '\n';
    }
}

/// Reads integer level rows. q <= 0 means "infer as the largest level present".
inline LevelDesign read_csv(std::istream& in, int q = 0) {
    Matrix<int> table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
        std::vector<int> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || cell.find_first_not_of(" \t", used) != std::string::npos) {
                throw std::invalid_argument("line " + std::to_string(line_no) + ": '" + cell +
                                            "' is not an integer level");
            }
            row.push_back(v);
        }
        if (table.rows() > 0 && row.size() != table.cols()) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(table.cols()) + " columns, got " +
                                        std::to_string(row.size()));
        }
        table.append_row(row);
    }
    if (q <= 0) {
        q = table.data().empty() ? 1 : *std::max_element(table.data().begin(), table.data().end());
    }
    return LevelDesign(std::move(table), q);
}

inline nlohmann::json to_json(const LevelDesign& d) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < d.runs(); ++r) {
        rows.push_back(std::vector<int>(d.table().row(r).begin(), d.table().row(r).end()));
    }
    return {{"n", d.runs()}, {"s", d.factors()}, {"q", d.levels()}, {"levels", rows}};
}

inline LevelDesign level_design_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("design JSON must be an object");
    for (const char* key : {"n", "s", "q", "levels"}) {
        if (!j.contains(key)) throw std::invalid_argument(std::string("design JSON missing key '") + key + "'");
    }
    const auto n = j.at("n").get<std::size_t>();
    const auto s = j.at("s").get<std::size_t>();
    const auto q = j.at("q").get<int>();
    const auto& rows = j.at("levels");
    if (!rows.is_array() || rows.size() != n) throw std::invalid_argument("design JSON: 'levels' must have n rows");
    Matrix<int> table(n, s);
    for (std::size_t r = 0; r < n; ++r) {
        if (!rows[r].is_array() || rows[r].size() != s) {
            throw std::invalid_argument("design JSON: levels[" + std::to_string(r) + "] must have s entries");
        }
        for (std::size_t c = 0; c < s; ++c) table(r, c) = rows[r][c].get<int>();
    }
    return LevelDesign(std::move(table), q);
}

}  // namespace sequd

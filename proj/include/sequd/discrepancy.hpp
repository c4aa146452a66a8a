#pragma once

// Centered L2 discrepancy (CD2) of point sets in [0,1]^s.
//
//   CD2^2 = (13/12)^s
//           - 2/n   sum_k prod_j (1 + |x_kj - 1/2|/2 - |x_kj - 1/2|^2/2)
//           + 1/n^2 sum_k sum_l prod_j (1 + |x_kj - 1/2|/2 + |x_lj - 1/2|/2 - |x_kj - x_lj|/2)
//
// Optimization works on the squared value; the root is what gets reported.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sequd/design.hpp"

namespace sequd {

namespace detail {

inline double row_term(double x) noexcept {
    const double z = std::abs(x - 0.5);
    return 1.0 + 0.5 * z - 0.5 * z * z;
}

inline double kernel_term(double u, double v) noexcept {
    return 1.0 + 0.5 * std::abs(u - 0.5) + 0.5 * std::abs(v - 0.5) - 0.5 * std::abs(u - v);
}

inline void check_unit_design(const UnitDesign& x) {
    if (x.rows() == 0) throw std::invalid_argument("discrepancy of an empty design is undefined");
    for (double v : x.data()) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("design entry " + std::to_string(v) + " outside [0,1]");
        }
    }
}

}  // namespace detail

/// Squared CD2, evaluated directly in O(n^2 s).
inline double cd2_squared(const UnitDesign& x) {
    detail::check_unit_design(x);
    const std::size_t n = x.rows();
    const std::size_t s = x.cols();
    double second = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double prod = 1.0;
        for (std::size_t j = 0; j < s; ++j) prod *= detail::row_term(x(k, j));
        second += prod;
    }
    double third = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            double prod = 1.0;
            for (std::size_t j = 0; j < s; ++j) prod *= detail::kernel_term(x(k, j), x(l, j));
            third += prod;
        }
    }
    const double nn = static_cast<double>(n);
    return std::pow(13.0 / 12.0, static_cast<double>(s)) - 2.0 / nn * second + third / (nn * nn);
}

inline double cd2(const UnitDesign& x) { return std::sqrt(std::max(0.0, cd2_squared(x))); }

/// CD2 of the row-stacked design [fixed; free]. Either block may be empty.
inline double cd2_combined(const UnitDesign& fixed, const UnitDesign& free) {
    if (!fixed.empty() && !free.empty() && fixed.cols() != free.cols()) {
        throw std::invalid_argument("cd2_combined: blocks have " + std::to_string(fixed.cols()) + " and " +
                                    std::to_string(free.cols()) + " factors");
    }
    return cd2(fixed.vstack(free));
}

/// Incremental CD2^2 bookkeeping for within-column element exchanges.
///
/// Holds the per-row products of the second sum and the full symmetric kernel
/// matrix of the third sum. A swap touches one column of two rows, so a delta
/// costs O(n) and a commit recomputes two kernel rows in O(n s).
/// Single writer; not thread-safe.
class Cd2Cache {
public:
    explicit Cd2Cache(UnitDesign points) : x_(std::move(points)) {
        detail::check_unit_design(x_);
        const std::size_t n = x_.rows();
        row_prod_.assign(n, 0.0);
        kernel_ = Matrix<double>(n, n);
        kernel_row_sum_.assign(n, 0.0);
        constant_ = std::pow(13.0 / 12.0, static_cast<double>(x_.cols()));
        refresh();
    }

    [[nodiscard]] std::size_t runs() const noexcept { return x_.rows(); }
    [[nodiscard]] const UnitDesign& points() const noexcept { return x_; }
    [[nodiscard]] double squared() const noexcept { return squared_; }
    [[nodiscard]] double value() const noexcept { return std::sqrt(std::max(0.0, squared_)); }

    /// Change in CD2^2 if (row_a, col) and (row_b, col) were swapped. Does not mutate.
    [[nodiscard]] double exchange_delta(std::size_t col, std::size_t row_a, std::size_t row_b) const {
        check_indices(col, row_a, row_b);
        const double xa = x_(row_a, col);
        const double xb = x_(row_b, col);
        if (xa == xb) return 0.0;

        const std::size_t n = x_.rows();
        const double fa = detail::row_term(xa);
        const double fb = detail::row_term(xb);
        const double d_second = row_prod_[row_a] * (fb / fa - 1.0) + row_prod_[row_b] * (fa / fb - 1.0);

        const double da = 1.0 + std::abs(xa - 0.5);
        const double db = 1.0 + std::abs(xb - 0.5);
        double d_third = kernel_(row_a, row_a) * (db / da - 1.0) + kernel_(row_b, row_b) * (da / db - 1.0);
        double off = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
            if (l == row_a || l == row_b) continue;
            const double xl = x_(l, col);
            const double ga = detail::kernel_term(xa, xl);
            const double gb = detail::kernel_term(xb, xl);
            off += kernel_(row_a, l) * (gb / ga - 1.0) + kernel_(row_b, l) * (ga / gb - 1.0);
        }
        d_third += 2.0 * off;
        const double nn = static_cast<double>(n);
        return -2.0 / nn * d_second + d_third / (nn * nn);
    }

    /// Applies the swap and updates the cached terms.
    void commit_exchange(std::size_t col, std::size_t row_a, std::size_t row_b) {
        check_indices(col, row_a, row_b);
        if (x_(row_a, col) == x_(row_b, col)) return;
        std::swap(x_(row_a, col), x_(row_b, col));

        const std::size_t n = x_.rows();
        for (std::size_t r : {row_a, row_b}) {
            row_prod_[r] = row_product(r);
            for (std::size_t l = 0; l < n; ++l) {
                const double updated = kernel_entry(r, l);
                if (l != row_a && l != row_b) kernel_row_sum_[l] += updated - kernel_(l, r);
                kernel_(r, l) = updated;
                kernel_(l, r) = updated;
            }
        }
        for (std::size_t r : {row_a, row_b}) {
            double sum = 0.0;
            for (std::size_t l = 0; l < n; ++l) sum += kernel_(r, l);
            kernel_row_sum_[r] = sum;
        }
        resum();
    }

    /// Recomputes every cached term from the current points.
    void refresh() {
        const std::size_t n = x_.rows();
        for (std::size_t k = 0; k < n; ++k) {
            row_prod_[k] = row_product(k);
            for (std::size_t l = k; l < n; ++l) {
                const double v = kernel_entry(k, l);
                kernel_(k, l) = v;
                kernel_(l, k) = v;
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            double sum = 0.0;
            for (std::size_t l = 0; l < n; ++l) sum += kernel_(k, l);
            kernel_row_sum_[k] = sum;
        }
        resum();
    }

private:
    void check_indices(std::size_t col, std::size_t a, std::size_t b) const {
        if (col >= x_.cols() || a >= x_.rows() || b >= x_.rows()) {
            throw std::out_of_range("exchange index out of range");
        }
    }

    [[nodiscard]] double row_product(std::size_t k) const {
        double prod = 1.0;
        for (std::size_t j = 0; j < x_.cols(); ++j) prod *= detail::row_term(x_(k, j));
        return prod;
    }

    [[nodiscard]] double kernel_entry(std::size_t k, std::size_t l) const {
        double prod = 1.0;
        for (std::size_t j = 0; j < x_.cols(); ++j) prod *= detail::kernel_term(x_(k, j), x_(l, j));
        return prod;
    }

    void resum() {
        double second = 0.0;
        double third = 0.0;
        for (std::size_t k = 0; k < x_.rows(); ++k) {
            second += row_prod_[k];
            third += kernel_row_sum_[k];
        }
        const double nn = static_cast<double>(x_.rows());
        squared_ = constant_ - 2.0 / nn * second + third / (nn * nn);
    }

    UnitDesign x_;
    std::vector<double> row_prod_;
    Matrix<double> kernel_;
    std::vector<double> kernel_row_sum_;
    double constant_ = 1.0;
    double squared_ = 0.0;
};

}  // namespace sequd

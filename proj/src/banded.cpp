#include "fsl/banded.hpp"

#include <algorithm>
#include <cmath>

#include "fsl/core.hpp"

namespace fsl {

namespace {

void dense_lu(std::vector<double>& a, std::vector<std::size_t>& piv, std::size_t r) {
    piv.resize(r);
    for (std::size_t k = 0; k < r; ++k) {
        std::size_t best = k;
        for (std::size_t i = k + 1; i < r; ++i) {
            if (std::abs(a[i * r + k]) > std::abs(a[best * r + k])) best = i;
        }
        piv[k] = best;
        if (a[best * r + k] == 0.0) {
            throw NumericalError("singular capacitance matrix in cyclic solve");
        }
        if (best != k) {
            for (std::size_t j = 0; j < r; ++j) std::swap(a[k * r + j], a[best * r + j]);
        }
        for (std::size_t i = k + 1; i < r; ++i) {
            const double l = a[i * r + k] / a[k * r + k];
            a[i * r + k] = l;
            for (std::size_t j = k + 1; j < r; ++j) a[i * r + j] -= l * a[k * r + j];
        }
    }
}

void dense_solve(const std::vector<double>& a, const std::vector<std::size_t>& piv,
                 std::size_t r, std::span<double> x) {
    for (std::size_t k = 0; k < r; ++k) std::swap(x[k], x[piv[k]]);
    for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t i = k + 1; i < r; ++i) x[i] -= a[i * r + k] * x[k];
    }
    for (std::size_t k = r; k-- > 0;) {
        for (std::size_t j = k + 1; j < r; ++j) x[k] -= a[k * r + j] * x[j];
        x[k] /= a[k * r + k];
    }
}

}  // namespace

void CyclicBandedSystem::Band::factorize() {
    piv.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t last_row = std::min(n - 1, k + p);
        std::size_t best = k;
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            if (std::abs(at(i, k)) > std::abs(at(best, k))) best = i;
        }
        piv[k] = best;
        if (at(best, k) == 0.0) {
            throw NumericalError("singular banded system");
        }
        const std::size_t last_col = std::min(n - 1, k + 2 * p);
        if (best != k) {
            for (std::size_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(best, j));
        }
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            const double l = at(i, k) / at(k, k);
            at(i, k) = l;
            for (std::size_t j = k + 1; j <= last_col; ++j) at(i, j) -= l * at(k, j);
        }
    }
}

void CyclicBandedSystem::Band::solve(std::span<double> x) const {
    for (std::size_t k = 0; k < n; ++k) {
        std::swap(x[k], x[piv[k]]);
        const std::size_t last_row = std::min(n - 1, k + p);
        for (std::size_t i = k + 1; i <= last_row; ++i) x[i] -= at(i, k) * x[k];
    }
    for (std::size_t k = n; k-- > 0;) {
        const std::size_t last_col = std::min(n - 1, k + 2 * p);
        for (std::size_t j = k + 1; j <= last_col; ++j) x[k] -= at(k, j) * x[j];
        x[k] /= at(k, k);
    }
}

CyclicBandedSystem::CyclicBandedSystem(std::size_t n, std::size_t bandwidth)
    : n_(n), p_(bandwidth) {
    if (n < 2 * bandwidth + 1) {
        throw DimensionError("cyclic banded system too small for its bandwidth");
    }
    band_.n = n;
    band_.p = p_;
    band_.width = 3 * p_ + 1;
    band_.a.assign(n * band_.width, 0.0);
    for (std::size_t i = 0; i < p_; ++i) corner_rows_.push_back(i);
    for (std::size_t i = n - p_; i < n; ++i) corner_rows_.push_back(i);
    corner_entries_.resize(corner_rows_.size());
}

void CyclicBandedSystem::add(std::size_t row, long offset, double value) {
    if (static_cast<std::size_t>(std::abs(offset)) > p_ || row >= n_) {
        throw DimensionError("entry outside the cyclic band");
    }
    const long n = static_cast<long>(n_);
    const long raw = static_cast<long>(row) + offset;
    const std::size_t col = static_cast<std::size_t>(((raw % n) + n) % n);
    if (raw >= 0 && raw < n) {
        band_.at(row, col) += value;
        factored_ = false;
        return;
    }
    const std::size_t slot = row < p_ ? row : p_ + (row - (n_ - p_));
    auto& entries = corner_entries_[slot];
    auto it = std::find_if(entries.begin(), entries.end(),
                           [col](const auto& e) { return e.first == col; });
    if (it == entries.end()) {
        entries.emplace_back(col, value);
    } else {
        it->second += value;
    }
    factored_ = false;
}

void CyclicBandedSystem::factorize() {
    band_.factorize();
    const std::size_t r = corner_rows_.size();
    z_.assign(n_ * r, 0.0);
    for (std::size_t c = 0; c < r; ++c) {
        std::span<double> col(z_.data() + c * n_, n_);
        col[corner_rows_[c]] = 1.0;
        band_.solve(col);
    }
    cap_.assign(r * r, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        cap_[i * r + i] = 1.0;
        for (const auto& [col, v] : corner_entries_[i]) {
            for (std::size_t c = 0; c < r; ++c) cap_[i * r + c] += v * z_[c * n_ + col];
        }
    }
    dense_lu(cap_, cap_piv_, r);
    factored_ = true;
}

void CyclicBandedSystem::solve(std::span<double> rhs) const {
    if (!factored_) {
        throw NumericalError("cyclic banded system solved before factorization");
    }
    if (rhs.size() != n_) {
        throw DimensionError("right-hand side length does not match system");
    }
    band_.solve(rhs);
    const std::size_t r = corner_rows_.size();
    std::vector<double> y(r, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        for (const auto& [col, v] : corner_entries_[i]) y[i] += v * rhs[col];
    }
    dense_solve(cap_, cap_piv_, r, y);
    for (std::size_t c = 0; c < r; ++c) {
        for (std::size_t k = 0; k < n_; ++k) rhs[k] -= z_[c * n_ + k] * y[c];
    }
}

}  // namespace fsl

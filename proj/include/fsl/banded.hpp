#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fsl {

/// Linear system whose matrix is banded modulo n: row i couples only to columns
/// (i + k) mod n for |k| <= bandwidth. Solved by banded LU with partial pivoting on
/// the non-wrapping part and a Sherman-Morrison-Woodbury correction for the corners.
class CyclicBandedSystem {
public:
    CyclicBandedSystem(std::size_t n, std::size_t bandwidth);

    std::size_t size() const { return n_; }

    // Accumulates into entry (row, (row + offset) mod n).
    void add(std::size_t row, long offset, double value);

    /// Factorizes once. Throws NumericalError on a singular system.
    void factorize();

    /// Solves in place. factorize() must have been called.
    void solve(std::span<double> rhs) const;

private:
    // Banded matrix B with partial-pivot LU; rows stored over columns [i - p, i + 2p].
    struct Band {
        std::size_t n = 0, p = 0, width = 0;
        std::vector<double> a;
        std::vector<std::size_t> piv;
        double& at(std::size_t i, std::size_t j) { return a[i * width + (j + p - i)]; }
        double at(std::size_t i, std::size_t j) const { return a[i * width + (j + p - i)]; }
        void factorize();
        void solve(std::span<double> x) const;
    };

    std::size_t n_, p_;
    Band band_;
    // Corner rows (top p, bottom p) and their entries outside the band.
    std::vector<std::size_t> corner_rows_;
    std::vector<std::vector<std::pair<std::size_t, double>>> corner_entries_;
    // B^{-1} U, column-major n x r, and LU of the r x r capacitance matrix I + V^T B^{-1} U.
    std::vector<double> z_;
    std::vector<double> cap_;
    std::vector<std::size_t> cap_piv_;
    bool factored_ = false;
};

}  // namespace fsl

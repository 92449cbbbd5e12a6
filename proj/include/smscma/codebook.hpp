#pragma once
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "smscma/indicator.hpp"

namespace smscma {

using cplx = std::complex<double>;

// One R x M complex codebook per user. Entry (r,m) of user u's book is the
// r-th element of codeword m; it is exactly zero wherever the indicator
// matrix is zero. Average codeword energy per user is 1.
struct CodebookSet {
    std::uint32_t users = 0;
    std::uint32_t ores = 0;
    std::uint32_t codewords = 0;
    // books[u] is row-major R x M.
    std::vector<std::vector<cplx>> books;

    cplx entry(std::uint32_t u, std::uint32_t r, std::uint32_t m) const {
        return books[u][r * codewords + m];
    }

    // Sparsity matches f, no all-zero codewords, finite entries,
    // unit average codeword energy to 1e-9. Throws ConfigError.
    void validate(const IndicatorMatrix& f) const;
};

// Built-in codebooks: codeword m places the m-th point of a 4-point base
// constellation on each of the user's d_v non-zero rows, rotated by a
// distinct per-(user, row-slot) phase and scaled to unit codeword energy.
// M must be 2 or 4.
CodebookSet make_default_codebooks(const IndicatorMatrix& f, std::uint32_t codewords);

struct CodebookLoad {
    CodebookSet books;
    IndicatorMatrix indicator;
    std::vector<std::string> warnings; // e.g. energy re-normalization notices
};

// Codebook file: JSON object {U, R, M, F, books} with books[u][r][m] = [re, im].
// Off-unit average energies are re-normalized with a warning; structural
// violations throw ConfigError.
CodebookLoad load_codebook_file(const std::string& path);
CodebookLoad parse_codebook_json(const std::string& text);
std::string codebook_to_json(const CodebookSet& books, const IndicatorMatrix& f);

} // namespace smscma

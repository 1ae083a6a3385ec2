#pragma once

#include <iosfwd>

#include "cechlab/linalg.hpp"

namespace cechlab {

/// Writes a `# rows cols` header, then one zero-based `row col value` line per
/// nonzero entry with 17 significant digits.
void write_triplets(std::ostream& os, const Matrix& m);

/// Inverse of write_triplets; lines starting with '#' other than the header are ignored.
Matrix read_triplets(std::istream& is);

}  // namespace cechlab

#include "cechlab/triplets.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cechlab/errors.hpp"

namespace cechlab {

void write_triplets(std::ostream& os, const Matrix& m) {
  os << "# " << m.rows() << ' ' << m.cols() << '\n';
  char buf[64];
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      os << i << ' ' << j << ' ' << buf << '\n';
    }
  }
}

Matrix read_triplets(std::istream& is) {
  std::string line;
  Matrix m;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      if (have_header) continue;
      char hash;
      Index rows, cols;
      if (ls >> hash >> rows >> cols) {
        m = Matrix::Zero(rows, cols);
        have_header = true;
      }
      continue;
    }
    if (!have_header) throw ConstructionError("triplet stream has no '# rows cols' header");
    Index i, j;
    double v;
    if (!(ls >> i >> j >> v) || i < 0 || j < 0 || i >= m.rows() || j >= m.cols()) {
      throw ConstructionError("malformed triplet line: " + line);
    }
    m(i, j) = v;
  }
  if (!have_header) throw ConstructionError("triplet stream has no '# rows cols' header");
  return m;
}

}  // namespace cechlab

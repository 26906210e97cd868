#include "mfgp/field.hpp"

#include "mfgp/error.hpp"

namespace mfgp {

PotentialField::PotentialField(const GridSpec& grid, Array2 phi)
    : grid_(grid), phi_(std::move(phi)), dt_(grid.n_t, grid.n_x), dx_(grid.n_t, grid.n_x) {
  if (phi_.rows() != grid.ext_t() || phi_.cols() != grid.ext_x()) {
    throw ParameterError("potential values do not match the extended grid shape");
  }
  for (std::size_t k = 0; k < grid.n_t; ++k) {
    for (std::size_t i = 0; i < grid.n_x; ++i) {
      dt_(k, i) = (phi_(k + 1, i) - phi_(k, i)) / grid.h_t;
      dx_(k, i) = (phi_(k, i + 1) - phi_(k, i)) / grid.h_x;
    }
  }
}

}  // namespace mfgp

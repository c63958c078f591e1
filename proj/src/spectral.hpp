// Exact eigenbases of the 1D second-difference matrices used by the
// Laplacians. Columns are orthonormal eigenvectors; eigenvalue(k) is the
// eigenvalue of the unscaled stencil (f_{-1} - 2 f_0 + f_1).
#pragma once

#include <Eigen/Core>

namespace mvsim::spectral {

enum class Basis {
  cell_even,   ///< cell nodes, mirror ghosts (cosines, k = 0..n-1)
  cell_odd,    ///< cell nodes, odd ghosts (sines, k = 1..n)
  node_dirichlet,  ///< interior nodes 1..n-1 with zero end values (DST-I)
};

struct Eigenbasis {
  Eigen::MatrixXd q;       ///< q(node, mode)
  Eigen::VectorXd lambda;  ///< <= 0
};

/// Cached per thread; n is the number of cells along the axis.
const Eigenbasis& basis(Basis kind, int n);

}  // namespace mvsim::spectral

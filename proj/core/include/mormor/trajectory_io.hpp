#pragma once

#include <iosfwd>

#include "mormor/spacetime.hpp"

namespace mormor {

// CSV: header row with the node times t_0..t_J, then one row per
// coefficient, one column per time node. Numbers use 17 significant digits.
// A single-node grid (J = 0) has no recoverable T and reads back with T = 1.
void write_trajectory_csv(std::ostream& out, const Trajectory& u);
Trajectory read_trajectory_csv(std::istream& in);

// Binary container, little-endian:
//   8 bytes magic "MORTRAJ1", uint64 dim, uint64 J, float64 T,
//   dim*(J+1) float64 values in column-major order.
void write_trajectory_binary(std::ostream& out, const Trajectory& u);
Trajectory read_trajectory_binary(std::istream& in);

}  // namespace mormor

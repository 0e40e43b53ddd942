#include "nodalab/distance_transform.hpp"

namespace nodalab {

template void squared_distance_1d<double>(std::span<const double>, std::span<double>, double, bool);
template void squared_distance_transform<double>(std::span<double>, const LatticeIndexer&,
                                                 const std::array<double, 3>&,
                                                 const std::array<bool, 3>&);

}  // namespace nodalab

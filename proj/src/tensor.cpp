#include "netpart/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netpart/error.hpp"

namespace netpart {

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (element_count(shape_) != data_.size())
    throw Error(ErrorKind::ShapeMismatch, "shape holds " + std::to_string(element_count(shape_)) +
                                              " elements but data has " +
                                              std::to_string(data_.size()));
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace netpart

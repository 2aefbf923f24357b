#pragma once

#include <complex>

namespace ncp {

using Complex = std::complex<double>;

}  // namespace ncp

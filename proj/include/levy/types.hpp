#pragma once

#include <complex>

namespace levy {

using cplx = std::complex<double>;

} // namespace levy

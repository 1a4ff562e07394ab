#pragma once

#include "shadowlab/builtins.hpp"
#include "shadowlab/complex_matrix.hpp"
#include "shadowlab/dynamics.hpp"
#include "shadowlab/hermitian_eig.hpp"
#include "shadowlab/histogram.hpp"
#include "shadowlab/matrix_io.hpp"
#include "shadowlab/normalize.hpp"
#include "shadowlab/randshadow.hpp"
#include "shadowlab/range.hpp"
#include "shadowlab/rng.hpp"
#include "shadowlab/sampling.hpp"
#include "shadowlab/shadow.hpp"

namespace shadowlab {
inline constexpr const char* version = "0.1.0";
}

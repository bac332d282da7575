#pragma once

#include "quasibell/bell.hpp"
#include "quasibell/errors.hpp"
#include "quasibell/geometry.hpp"
#include "quasibell/io.hpp"
#include "quasibell/joint.hpp"
#include "quasibell/optimize.hpp"
#include "quasibell/pauli.hpp"
#include "quasibell/symmetrize.hpp"
#include "quasibell/werner.hpp"

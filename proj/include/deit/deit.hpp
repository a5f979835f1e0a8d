#pragma once

#include "bloch_maxwell.hpp"
#include "ddi_kernel.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "medium.hpp"
#include "normal_modes.hpp"
#include "params.hpp"
#include "peaks.hpp"
#include "presets.hpp"
#include "quadrature.hpp"
#include "run_config.hpp"
#include "spectral.hpp"

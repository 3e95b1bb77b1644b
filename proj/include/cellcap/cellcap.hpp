// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cellcap/capacity.hpp"
#include "cellcap/channel.hpp"
#include "cellcap/curve.hpp"
#include "cellcap/errors.hpp"
#include "cellcap/interference.hpp"
#include "cellcap/montecarlo.hpp"
#include "cellcap/parallel.hpp"
#include "cellcap/quadrature.hpp"
#include "cellcap/rng.hpp"
#include "cellcap/specfun.hpp"

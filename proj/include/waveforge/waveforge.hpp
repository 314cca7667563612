#pragma once
// Umbrella header.

#include "waveforge/config.hpp"
#include "waveforge/driver.hpp"
#include "waveforge/errors.hpp"
#include "waveforge/expr.hpp"
#include "waveforge/heat_solver.hpp"
#include "waveforge/ibvp.hpp"
#include "waveforge/kernels.hpp"
#include "waveforge/opcalc.hpp"
#include "waveforge/oracle.hpp"
#include "waveforge/problem.hpp"
#include "waveforge/quadrature.hpp"
#include "waveforge/verify.hpp"
#include "waveforge/wave_solver.hpp"

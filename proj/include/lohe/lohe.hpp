#pragma once

#include "lohe/geometry.hpp"
#include "lohe/network.hpp"
#include "lohe/dynamics.hpp"
#include "lohe/eigensolver.hpp"
#include "lohe/hull.hpp"
#include "lohe/spectral.hpp"
#include "lohe/simulate.hpp"
#include "lohe/stability.hpp"
#include "lohe/io.hpp"

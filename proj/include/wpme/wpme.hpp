#pragma once

#include "wpme/error.hpp"
#include "wpme/density.hpp"
#include "wpme/barrier.hpp"
#include "wpme/feasibility.hpp"
#include "wpme/residual.hpp"
#include "wpme/mesh.hpp"
#include "wpme/solver.hpp"
#include "wpme/experiments.hpp"

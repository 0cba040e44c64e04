#pragma once

#include "ntgv/errors.hpp"
#include "ntgv/types.hpp"
#include "ntgv/jet.hpp"
#include "ntgv/kernels.hpp"
#include "ntgv/mesh.hpp"
#include "ntgv/sphere.hpp"
#include "ntgv/trt.hpp"
#include "ntgv/regularizers.hpp"
#include "ntgv/admm/config.hpp"
#include "ntgv/admm/state.hpp"
#include "ntgv/admm/shrink.hpp"
#include "ntgv/admm/transport.hpp"
#include "ntgv/admm/lagrangian.hpp"
#include "ntgv/admm/subproblems.hpp"
#include "ntgv/admm/newton.hpp"
#include "ntgv/admm/solver.hpp"
#include "ntgv/io/mesh_io.hpp"
#include "ntgv/io/generators.hpp"
#include "ntgv/io/noise.hpp"
#include "ntgv/io/metrics.hpp"

#pragma once

// Umbrella header: planar target tracking with a coordinated-turn EKF,
// online curvature estimation, and horizon prediction.

#include "arctrack/csv.hpp"
#include "arctrack/ekf.hpp"
#include "arctrack/errors.hpp"
#include "arctrack/evolution.hpp"
#include "arctrack/geometry.hpp"
#include "arctrack/metrics.hpp"
#include "arctrack/model.hpp"
#include "arctrack/pipeline.hpp"
#include "arctrack/predictor.hpp"
#include "arctrack/rng.hpp"
#include "arctrack/simulator.hpp"

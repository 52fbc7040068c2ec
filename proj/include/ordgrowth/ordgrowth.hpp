#pragma once

// Umbrella header.

#include "circle.hpp"
#include "common.hpp"
#include "config.hpp"
#include "contact_torus.hpp"
#include "errors.hpp"
#include "order_core.hpp"
#include "report.hpp"
#include "stable_norm.hpp"
#include "torus_metric.hpp"
#include "verification.hpp"
